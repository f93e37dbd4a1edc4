#include "nonlocal/io.hpp"

#include "nonlocal/error.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <type_traits>

namespace nonlocal {

namespace {

double number(const Json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw InvalidArgument(std::string("'") + key + "' must be a number");
    return j.at(key).get<double>();
}

void reject_unknown(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [k, v] : j.items()) {
        if (!allowed.count(k)) throw InvalidArgument("unknown key '" + k + "' in " + where);
    }
}

Point point_from(const Json& j) {
    if (!j.is_array() || j.empty() || j.size() > static_cast<std::size_t>(kMaxDim))
        throw InvalidArgument("a direction must be an array of 1 to 3 numbers");
    Point p{};
    for (std::size_t i = 0; i < j.size(); ++i) p[i] = j[i].get<double>();
    return p;
}

}  // namespace

Domain domain_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("kind")) throw InvalidArgument("domain needs a 'kind'");
    reject_unknown(j, {"kind", "params"}, "domain");
    const std::string kind = j.at("kind").get<std::string>();
    const Json params = j.value("params", Json::object());
    if (kind == "halfline") return Domain(HalfLine{});
    if (kind == "interval") {
        reject_unknown(params, {"a", "b"}, "interval params");
        double a = number(params, "a", 0.0), b = number(params, "b", 1.0);
        if (!(a < b)) throw InvalidArgument("interval needs a < b");
        return Domain(Interval{a, b});
    }
    if (kind == "square") {
        reject_unknown(params, {"side"}, "square params");
        double s = number(params, "side", 1.0);
        if (!(s > 0.0)) throw InvalidArgument("square side must be positive");
        return Domain(Square{s});
    }
    if (kind == "disk") {
        reject_unknown(params, {"radius"}, "disk params");
        double r = number(params, "radius", 1.0);
        if (!(r > 0.0)) throw InvalidArgument("disk radius must be positive");
        return Domain(Disk{r});
    }
    throw InvalidArgument("unknown domain kind '" + kind + "'");
}

Json domain_to_json(const Domain& d) {
    return std::visit(
        [](const auto& s) -> Json {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, HalfLine>) return {{"kind", "halfline"}, {"params", Json::object()}};
            if constexpr (std::is_same_v<S, Interval>) return {{"kind", "interval"}, {"params", {{"a", s.a}, {"b", s.b}}}};
            if constexpr (std::is_same_v<S, Square>) return {{"kind", "square"}, {"params", {{"side", s.side}}}};
            if constexpr (std::is_same_v<S, Disk>) return {{"kind", "disk"}, {"params", {{"radius", s.radius}}}};
        },
        d.shape());
}

SpectralMeasure measure_from_json(const Json& j, std::optional<double> alpha_override) {
    if (!j.is_object()) throw InvalidArgument("measure must be an object");
    reject_unknown(j, {"preset", "alpha", "dim", "atoms", "density", "weights"}, "measure");
    double alpha = alpha_override ? *alpha_override : number(j, "alpha", -1.0);
    if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("measure alpha must lie in (0, 2)");
    const int dim = j.value("dim", 1);
    if (dim < 1 || dim > kMaxDim) throw InvalidArgument("measure dim must be 1, 2 or 3");

    if (j.contains("preset")) {
        const std::string preset = j.at("preset").get<std::string>();
        if (preset == "raw") return SpectralMeasure::raw(alpha, dim);
        if (preset == "fractional_laplacian") return SpectralMeasure::fractional_laplacian(alpha, dim);
        if (preset == "axis_atoms") {
            if (!j.contains("weights")) throw InvalidArgument("axis_atoms needs 'weights'");
            return SpectralMeasure::axis_atoms(alpha, dim, j.at("weights").get<std::vector<double>>());
        }
        throw InvalidArgument("unknown measure preset '" + preset + "'");
    }

    std::vector<Atom> atoms;
    for (const auto& a : j.value("atoms", Json::array())) {
        reject_unknown(a, {"dir", "w"}, "atom");
        if (!a.contains("dir") || !a.contains("w")) throw InvalidArgument("atom needs 'dir' and 'w'");
        Point dir = point_from(a.at("dir"));
        if (a.at("dir").size() != static_cast<std::size_t>(dim)) throw InvalidArgument("atom direction length differs from dim");
        atoms.push_back({dir, a.at("w").get<double>()});
    }
    SphericalDensity density;
    if (j.contains("density")) {
        const Json& dj = j.at("density");
        reject_unknown(dj, {"kind", "mass"}, "density");
        const std::string kind = dj.value("kind", std::string("none"));
        if (kind == "uniform") {
            density.kind = SphericalDensity::Kind::Uniform;
            density.mass = number(dj, "mass", 0.0);
        } else if (kind != "none") {
            throw InvalidArgument("density kind must be 'uniform' or 'none'");
        }
    }
    return SpectralMeasure(alpha, dim, std::move(atoms), density);
}

Json measure_to_json(const SpectralMeasure& m) {
    Json atoms = Json::array();
    for (const auto& a : m.atoms()) {
        Json dir = Json::array();
        for (int i = 0; i < m.dim(); ++i) dir.push_back(a.direction[i]);
        atoms.push_back({{"dir", dir}, {"w", a.weight}});
    }
    Json density = {{"kind", m.has_density() ? "uniform" : "none"}, {"mass", m.density().mass}};
    return {{"alpha", m.alpha()}, {"dim", m.dim()}, {"atoms", atoms}, {"density", density},
            {"normalization", to_string(m.normalization())}};
}

QuadratureControls controls_from_json(const Json& j, QuadratureControls c) {
    if (j.is_null()) return c;
    if (!j.is_object()) throw InvalidArgument("quadrature must be an object");
    reject_unknown(j,
                   {"inner_radius", "panel_growth", "panel_points", "inner_points", "max_panel_width", "tail_radius",
                    "oscillation", "tail_growth", "tolerance", "density_directions", "max_bisections"},
                   "quadrature");
    c.inner_radius = number(j, "inner_radius", c.inner_radius);
    c.panel_growth = number(j, "panel_growth", c.panel_growth);
    c.panel_points = j.value("panel_points", c.panel_points);
    c.inner_points = j.value("inner_points", c.inner_points);
    c.max_panel_width = number(j, "max_panel_width", c.max_panel_width);
    c.tail_radius = number(j, "tail_radius", c.tail_radius);
    c.oscillation = number(j, "oscillation", c.oscillation);
    if (j.contains("tail_growth")) c.tail_growth = j.at("tail_growth").get<double>();
    c.tolerance = number(j, "tolerance", c.tolerance);
    c.density_directions = j.value("density_directions", c.density_directions);
    c.max_bisections = j.value("max_bisections", c.max_bisections);
    return c;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open " + path);
    try {
        return Json::parse(in, nullptr, true, true);
    } catch (const Json::parse_error& e) {
        throw InvalidArgument(path + ": " + e.what());
    }
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

CsvWriter::CsvWriter(std::ostream& os, std::vector<std::string> header, const std::string& version)
    : os_(os), columns_(header.size()) {
    os_ << '#' << version << '\n';
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    if (fields.size() != columns_) throw InvalidArgument("CSV row has the wrong number of fields");
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os_ << ',';
        os_ << csv_escape(fields[i]);
    }
    os_ << '\n';
}

namespace {

// one record; quoted fields may span lines
bool read_record(std::istream& is, std::vector<std::string>& out) {
    out.clear();
    std::string field;
    bool quoted = false, any = false;
    char ch;
    while (is.get(ch)) {
        any = true;
        if (quoted) {
            if (ch == '"') {
                if (is.peek() == '"') {
                    is.get(ch);
                    field += '"';
                } else {
                    quoted = false;
                }
            } else {
                field += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(field);
            field.clear();
        } else if (ch == '\n') {
            out.push_back(field);
            return true;
        } else if (ch != '\r') {
            field += ch;
        }
    }
    if (quoted) throw InvalidArgument("unterminated quoted CSV field");
    if (any) out.push_back(field);
    return any;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw InvalidArgument("CSV has no column '" + name + "'");
}

CsvTable read_csv(std::istream& is, const std::string& expected_version) {
    CsvTable t;
    std::string first;
    if (!std::getline(is, first) || first.empty() || first[0] != '#') throw InvalidArgument("CSV is missing its version line");
    if (!first.empty() && first.back() == '\r') first.pop_back();
    t.version = first.substr(1);
    if (t.version != expected_version)
        throw InvalidArgument("CSV version '" + t.version + "' differs from '" + expected_version + "'");
    if (!read_record(is, t.header) || t.header.empty()) throw InvalidArgument("CSV is missing its header");
    std::vector<std::string> rec;
    std::size_t line = 2;
    while (read_record(is, rec)) {
        ++line;
        if (rec.size() != t.header.size()) {
            std::ostringstream os;
            os << "CSV record " << line << " has " << rec.size() << " fields, expected " << t.header.size();
            throw InvalidArgument(os.str());
        }
        t.rows.push_back(rec);
    }
    return t;
}

}  // namespace nonlocal
