#include "nonlocal/harness.hpp"

#include "nonlocal/defaults.hpp"
#include "nonlocal/error.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#ifndef NONLOCAL_BUILD_ID
#define NONLOCAL_BUILD_ID "unknown"
#endif

namespace nonlocal {

namespace fs = std::filesystem;

const char* build_id() { return NONLOCAL_BUILD_ID; }

namespace {

struct KindName {
    CampaignKind kind;
    const char* name;
};

constexpr KindName kKinds[] = {
    {CampaignKind::Kernels, "kernels"},       {CampaignKind::Symbol, "symbol"},
    {CampaignKind::Barrier, "barrier"},       {CampaignKind::Hardy, "hardy"},
    {CampaignKind::Elliptic, "elliptic"},     {CampaignKind::Parabolic, "parabolic"},
    {CampaignKind::McCompare, "mc-compare"},  {CampaignKind::ThetaSweep, "theta-sweep"},
    {CampaignKind::NormEquivalence, "norm-equivalence"},
};

const char* const kCsvHeader[] = {"check", "anchor", "params", "value", "relation", "threshold", "result", "note"};

std::string result_word(const CheckRow& r) {
    if (!r.asserted) return "REPORTED";
    return r.pass ? "PASS" : "FAIL";
}

void write_rows(const fs::path& path, const CampaignOutput& out) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write " + path.string());
    CsvWriter w(f, {std::begin(kCsvHeader), std::end(kCsvHeader)}, defaults::kCsvVersion);
    for (const auto& r : out.rows) {
        w.row({r.check, r.anchor, r.params, format_number(r.value), r.relation, format_number(r.threshold), result_word(r),
               r.note});
    }
}

void write_series(const fs::path& path, const CampaignOutput& out) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write " + path.string());
    CsvWriter w(f, {"series", "x", "y"}, defaults::kCsvVersion);
    for (const auto& s : out.series) w.row({s.series, format_number(s.x), format_number(s.y)});
}

}  // namespace

std::string to_string(CampaignKind k) {
    for (const auto& e : kKinds)
        if (e.kind == k) return e.name;
    return "unknown";
}

CampaignKind campaign_from_string(const std::string& s) {
    for (const auto& e : kKinds)
        if (s == e.name) return e.kind;
    std::string known;
    for (const auto& e : kKinds) known += std::string(known.empty() ? "" : ", ") + e.name;
    throw InvalidArgument("unknown campaign '" + s + "' (known: " + known + ")");
}

std::vector<std::string> campaign_names() {
    std::vector<std::string> out;
    for (const auto& e : kKinds) out.emplace_back(e.name);
    return out;
}

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
    if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
    for (const auto& [k, v] : j.items()) {
        static const char* const allowed[] = {"name",   "campaign", "domain", "domains", "measure", "grid",
                                              "quadrature", "params", "output", "seed",  "jobs",   "description"};
        if (std::find_if(std::begin(allowed), std::end(allowed), [&](const char* a) { return k == a; }) == std::end(allowed))
            throw InvalidArgument("unknown config key '" + k + "'");
    }
    if (!j.contains("campaign")) throw InvalidArgument("config needs 'campaign'");
    ExperimentConfig c = preset(campaign_from_string(j.at("campaign").get<std::string>()));
    c.name = j.value("name", c.name);
    if (j.contains("domain") && j.contains("domains")) throw InvalidArgument("give either 'domain' or 'domains'");
    if (j.contains("domain")) c.domains = {domain_from_json(j.at("domain"))};
    if (j.contains("domains")) {
        c.domains.clear();
        for (const auto& d : j.at("domains")) c.domains.push_back(domain_from_json(d));
    }
    if (j.contains("measure")) c.measure = j.at("measure");
    if (j.contains("grid")) c.grid = j.at("grid");
    if (j.contains("quadrature")) c.quadrature = controls_from_json(j.at("quadrature"));
    if (j.contains("params")) {
        if (!j.at("params").is_object()) throw InvalidArgument("'params' must be an object");
        for (const auto& [k, v] : j.at("params").items()) c.params[k] = v;
    }
    if (j.contains("output")) {
        const Json& o = j.at("output");
        if (!o.is_object()) throw InvalidArgument("'output' must be an object");
        c.output_dir = o.value("dir", c.output_dir);
    }
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("jobs")) c.jobs = j.at("jobs").get<unsigned>();
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    try {
        return from_json(read_json_file(path));
    } catch (const Json::exception& e) {
        throw InvalidArgument(path + ": " + e.what());
    } catch (const Error& e) {
        throw InvalidArgument(path + ": " + e.what());
    }
}

void run_indexed(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& task) {
    unsigned workers = jobs ? jobs : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < count;) {
                try {
                    task(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    // the lowest failing index wins, whatever the scheduling
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

RunResult run(const ExperimentConfig& config) {
    config.validate();
    RunResult res;
    const std::string stem = config.name.empty() ? to_string(config.kind) : config.name;
    const fs::path dir(config.output_dir);
    fs::create_directories(dir);
    res.csv_path = dir / (stem + ".csv");
    res.series_path = dir / (stem + ".series.csv");
    res.summary_path = dir / (stem + ".summary.json");

    Json summary = {{"format", defaults::kCsvVersion},
                    {"build_id", build_id()},
                    {"name", stem},
                    {"campaign", to_string(config.kind)},
                    {"seed", config.seed},
                    {"csv", res.csv_path.filename().string()},
                    {"series", res.series_path.filename().string()}};

    const auto t0 = std::chrono::steady_clock::now();
    try {
        res.output = run_campaign(config);
    } catch (const std::exception& e) {
        summary["status"] = "partial";
        summary["error"] = e.what();
        write_rows(res.csv_path, res.output);
        std::ofstream(res.summary_path) << summary.dump(2) << '\n';
        throw Error("campaign " + to_string(config.kind) + " (" + stem + "): " + e.what());
    }
    res.budget.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.budget.limit = campaign_budget(config.kind);

    for (const auto& r : res.output.rows) {
        if (!r.asserted) continue;
        ++res.asserted;
        if (!r.pass) ++res.failed;
    }
    res.exit_code = (res.failed == 0 && res.budget.pass()) ? 0 : 1;

    write_rows(res.csv_path, res.output);
    write_series(res.series_path, res.output);
    summary["status"] = "complete";
    summary["asserted"] = res.asserted;
    summary["failed"] = res.failed;
    summary["rows"] = res.output.rows.size();
    summary["exit_code"] = res.exit_code;
    summary["runtime"] = {{"seconds", res.budget.seconds}, {"limit", res.budget.limit}, {"pass", res.budget.pass()}};
    summary["warnings"] = res.output.warnings;
    std::ofstream(res.summary_path) << summary.dump(2) << '\n';
    return res;
}

namespace {

struct Table {
    std::string title;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> notes;
};

Table table_from_csv(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open artifact " + path.string());
    CsvTable t;
    try {
        t = read_csv(in, defaults::kCsvVersion);
    } catch (const Error& e) {
        throw InvalidArgument("corrupt artifact " + path.string() + ": " + e.what());
    }
    Table out;
    out.title = path.stem().string();
    std::size_t ci, ai, vi, ri, ti, si;
    try {
        ci = t.column("check"), ai = t.column("anchor"), vi = t.column("value");
        ri = t.column("relation"), ti = t.column("threshold"), si = t.column("result");
    } catch (const Error& e) {
        throw InvalidArgument("corrupt artifact " + path.string() + ": " + e.what());
    }
    std::size_t pi = t.column("params"), ni = t.column("note");
    for (const auto& r : t.rows) {
        const std::string& res = r[si];
        if (res != "PASS" && res != "FAIL" && res != "REPORTED")
            throw InvalidArgument("corrupt artifact " + path.string() + ": bad result '" + res + "'");
        std::string check = r[ci] + (r[pi].empty() ? "" : " [" + r[pi] + "]");
        out.rows.push_back({check, r[ai], r[vi], r[ri].empty() ? "-" : r[ri] + " " + r[ti], res});
        if (res == "FAIL" && !r[ni].empty()) out.notes.push_back("FAIL " + check + ": " + r[ni]);
    }
    return out;
}

void print_table(const Table& t, std::ostream& os) {
    static const std::vector<std::string> head = {"check", "anchor", "value", "threshold", "result"};
    std::vector<std::size_t> w(head.size());
    for (std::size_t i = 0; i < head.size(); ++i) w[i] = head[i].size();
    for (const auto& r : t.rows)
        for (std::size_t i = 0; i < r.size(); ++i) w[i] = std::max(w[i], r[i].size());
    if (!t.title.empty()) os << "== " << t.title << " ==\n";
    auto line = [&](const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i) os << std::left << std::setw(static_cast<int>(w[i]) + 2) << r[i];
        os << '\n';
    };
    line(head);
    for (const auto& r : t.rows) line(r);
    for (const auto& n : t.notes) os << "  note: " << n << '\n';
}

}  // namespace

std::size_t report(const std::vector<fs::path>& artifacts, std::ostream& os) {
    if (artifacts.empty()) {
        print_table({}, os);
        return 0;
    }
    std::size_t failures = 0;
    for (const auto& a : artifacts) {
        Table t;
        const std::string name = a.filename().string();
        if (name.size() > 13 && name.substr(name.size() - 13) == ".summary.json") {
            Json s;
            try {
                s = read_json_file(a.string());
            } catch (const Error& e) {
                throw InvalidArgument("corrupt artifact " + a.string() + ": " + e.what());
            }
            if (!s.is_object() || !s.contains("csv") || !s.contains("status") || s.value("format", "") != defaults::kCsvVersion)
                throw InvalidArgument("corrupt artifact " + a.string() + ": not a run summary");
            t = table_from_csv(a.parent_path() / s.at("csv").get<std::string>());
            t.title = s.value("name", t.title) + " (" + s.value("campaign", "") + ", build " + s.value("build_id", "?") + ")";
            if (s.at("status") != "complete") {
                t.notes.push_back("PARTIAL run: " + s.value("error", std::string("unknown error")));
                ++failures;
            } else if (s.contains("runtime")) {
                const Json& rt = s.at("runtime");
                std::ostringstream n;
                n << "runtime " << std::setprecision(3) << rt.value("seconds", 0.0) << " s";
                if (rt.value("limit", 0.0) > 0.0) n << " (limit " << rt.value("limit", 0.0) << " s)";
                if (!rt.value("pass", true)) {
                    n << " EXCEEDED";
                    ++failures;
                }
                t.notes.push_back(n.str());
            }
        } else {
            t = table_from_csv(a);
        }
        for (const auto& r : t.rows)
            if (r.back() == "FAIL") ++failures;
        print_table(t, os);
        os << '\n';
    }
    return failures;
}

}  // namespace nonlocal
