#pragma once

#include "nonlocal/geometry.hpp"
#include "nonlocal/io.hpp"
#include "nonlocal/operator.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nonlocal {

enum class CampaignKind {
    Kernels,
    Symbol,
    Barrier,
    Hardy,
    Elliptic,
    Parabolic,
    McCompare,
    ThetaSweep,
    NormEquivalence,
};

std::string to_string(CampaignKind k);
CampaignKind campaign_from_string(const std::string& s);
std::vector<std::string> campaign_names();

/// One experiment. Campaign parameters stay as JSON and are parsed (and
/// range-checked) by validate() before anything is computed.
struct ExperimentConfig {
    std::string name;
    CampaignKind kind = CampaignKind::Kernels;
    std::vector<Domain> domains;
    Json measure;                   ///< measure template; campaigns may override alpha
    QuadratureControls quadrature{};
    Json grid = Json::object();
    Json params = Json::object();
    std::string output_dir = "nlab-out";
    std::uint64_t seed = 20240601;
    unsigned jobs = 1;

    /// Throws InvalidArgument / DomainError naming the offending field.
    void validate() const;

    static ExperimentConfig from_json(const Json& j);
    static ExperimentConfig load(const std::string& path);
    /// Default config of a campaign (what `verify <campaign>` runs).
    static ExperimentConfig preset(CampaignKind kind);
};

/// One line of a report.
struct CheckRow {
    std::string check;     ///< what was measured
    std::string anchor;    ///< property identifier the row verifies
    std::string params;    ///< "alpha=0.8 beta=0.1 ..."
    double value = 0.0;
    std::string relation;  ///< "<=", ">=", "==", "in" or "" for informational rows
    double threshold = 0.0;
    bool pass = true;
    bool asserted = true;
    std::string note;
};

/// Plot-ready samples: one (series, x, y) triple per line.
struct SeriesPoint {
    std::string series;
    double x = 0.0;
    double y = 0.0;
};

struct CampaignOutput {
    std::vector<CheckRow> rows;
    std::vector<SeriesPoint> series;
    std::vector<std::string> warnings;
};

/// Runtime limit checked outside the byte-stable CSV.
struct Budget {
    double seconds = 0.0;
    double limit = 0.0;  ///< 0 means none
    bool pass() const { return limit <= 0.0 || seconds <= limit; }
};

struct RunResult {
    int exit_code = 0;  ///< 0 iff every asserted row passed and the budget held
    CampaignOutput output;
    Budget budget;
    std::filesystem::path csv_path;
    std::filesystem::path series_path;
    std::filesystem::path summary_path;
    std::size_t asserted = 0;
    std::size_t failed = 0;
};

/// Runs the campaign and writes <dir>/<name>.csv, <name>.series.csv and
/// <name>.summary.json. On a module error the artifacts written so far are
/// marked partial and the error is rethrown with the campaign name prepended.
RunResult run(const ExperimentConfig& config);

/// Computes without writing anything.
CampaignOutput run_campaign(const ExperimentConfig& config);

/// Runtime budget of a campaign kind (0 when none).
double campaign_budget(CampaignKind kind);

/// Prints one table per artifact (a .csv report or a .summary.json) and
/// returns the number of failing asserted rows. Throws InvalidArgument for
/// unreadable or corrupt artifacts. An empty list prints an empty table.
std::size_t report(const std::vector<std::filesystem::path>& artifacts, std::ostream& os);

/// Runs `count` independent tasks on up to `jobs` threads; results keep task order.
void run_indexed(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& task);

/// Version string embedded in summaries.
const char* build_id();

}  // namespace nonlocal
