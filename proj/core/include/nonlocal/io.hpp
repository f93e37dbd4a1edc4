#pragma once

#include "nonlocal/geometry.hpp"
#include "nonlocal/levy.hpp"
#include "nonlocal/operator.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nonlocal {

using Json = nlohmann::json;

/// {"kind": "interval", "params": {"a": -1, "b": 1}}; kinds halfline, interval,
/// square (side) and disk (radius). Missing params take the unit defaults.
Domain domain_from_json(const Json& j);
Json domain_to_json(const Domain& d);

/// Either a preset
///   {"preset": "raw" | "fractional_laplacian", "alpha": a, "dim": d}
///   {"preset": "axis_atoms", "alpha": a, "dim": d, "weights": [...]}
/// or explicit atoms
///   {"alpha": a, "dim": d, "atoms": [{"dir": [...], "w": w}], "density": {"kind": "uniform", "mass": m}}.
/// `alpha` overrides (or supplies) the stability index.
SpectralMeasure measure_from_json(const Json& j, std::optional<double> alpha = std::nullopt);
Json measure_to_json(const SpectralMeasure& m);

/// Fields of QuadratureControls by name; unknown keys are rejected.
QuadratureControls controls_from_json(const Json& j, QuadratureControls base = {});

/// Reads a JSON document, reporting the file name and position on parse errors.
Json read_json_file(const std::string& path);

/// Fixed 17-significant-digit formatting used by every CSV writer.
std::string format_number(double v);

/// Minimal CSV writer: a "#<version>" line, a header, then rows. Fields with
/// commas, quotes or newlines are quoted.
class CsvWriter {
public:
    CsvWriter(std::ostream& os, std::vector<std::string> header, const std::string& version);
    void row(const std::vector<std::string>& fields);
    std::size_t columns() const { return columns_; }

private:
    std::ostream& os_;
    std::size_t columns_;
};

/// Parsed CSV table. Throws InvalidArgument on a missing or different version
/// line and on ragged rows.
struct CsvTable {
    std::string version;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;
};

CsvTable read_csv(std::istream& is, const std::string& expected_version);

std::string csv_escape(const std::string& field);

}  // namespace nonlocal
