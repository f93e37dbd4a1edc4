#include "nonlocal/error.hpp"
#include "nonlocal/harness.hpp"

#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

using namespace nonlocal;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("nonlocal-unit-" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

ExperimentConfig parse(const char* text) { return ExperimentConfig::from_json(Json::parse(text)); }

}  // namespace

TEST_CASE("campaign names round trip") {
    for (const auto& n : campaign_names()) CHECK(to_string(campaign_from_string(n)) == n);
    CHECK_THROWS_AS(campaign_from_string("nope"), InvalidArgument);
}

TEST_CASE("beta outside the range is rejected before any compute") {
    auto c = parse(R"({"name":"bad","campaign":"kernels","params":{"alphas":[0.8],"betas":[0.9]}})");
    CHECK_THROWS_AS(c.validate(), DomainError);
    c.output_dir = scratch("bad").string();
    CHECK_THROWS_AS(run(c), DomainError);
    CHECK_FALSE(fs::exists(fs::path(c.output_dir) / "bad.csv"));
}

TEST_CASE("unknown parameters are rejected") {
    auto c = parse(R"({"name":"x","campaign":"hardy","params":{"alphass":[1]}})");
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    CHECK_THROWS_AS(parse(R"({"name":"x","campaign":"hardy","colour":1})"), InvalidArgument);
}

TEST_CASE("theta outside the window is reported, not asserted") {
    auto c = parse(R"({"name":"sweep","campaign":"theta-sweep",
        "domain":{"kind":"interval","params":{"a":-1,"b":1}},
        "grid":{"n":100},
        "params":{"alphas":[1.0],"rhs":["const"],"interior_thetas":2,"near_edge":false,"extra_thetas":[2.5]}})");
    c.output_dir = scratch("sweep").string();
    auto r = run(c);
    bool found = false;
    for (const auto& row : r.output.rows) {
        if (row.note.find("outside-window: not asserted") != std::string::npos) {
            found = true;
            CHECK_FALSE(row.asserted);
        }
    }
    CHECK(found);
    CHECK(r.exit_code == 0);
}

TEST_CASE("same config and seed give byte-identical csv") {
    auto c = parse(R"({"name":"det","campaign":"mc-compare","grid":{"n":256},
        "params":{"points":[0.0],"paths":2000,"cf_frequencies":[1.0]}})");
    c.output_dir = scratch("det1").string();
    auto a = run(c);
    c.output_dir = scratch("det2").string();
    c.jobs = 2;
    auto b = run(c);
    CHECK(slurp(a.csv_path) == slurp(b.csv_path));
    CHECK(slurp(a.series_path) == slurp(b.series_path));
    CHECK(slurp(a.csv_path).rfind("#nlab-csv-1\n", 0) == 0);
    c.seed += 1;
    c.output_dir = scratch("det3").string();
    CHECK(slurp(run(c).csv_path) != slurp(a.csv_path));
}

TEST_CASE("report") {
    std::ostringstream empty;
    CHECK(report({}, empty) == 0);
    CHECK(empty.str().find("check") != std::string::npos);

    auto dir = scratch("report");
    auto c = parse(R"({"name":"k","campaign":"kernels","params":{"alphas":[1.0],"interior_betas":2}})");
    c.output_dir = dir.string();
    auto r = run(c);
    CHECK(r.exit_code == 0);
    std::ostringstream os;
    CHECK(report({r.summary_path, r.csv_path}, os) == 0);
    CHECK(os.str().find("halfline-power-kernel") != std::string::npos);

    std::ofstream(dir / "corrupt.csv") << "#nlab-csv-1\ncheck,anchor\nonly-one-field\n";
    CHECK_THROWS_AS(report({dir / "corrupt.csv"}, os), InvalidArgument);
    std::ofstream(dir / "corrupt.summary.json") << "{ not json";
    CHECK_THROWS_AS(report({dir / "corrupt.summary.json"}, os), InvalidArgument);
    CHECK_THROWS_AS(report({dir / "missing.csv"}, os), InvalidArgument);
}

TEST_CASE("failing barrier row names the worst point") {
    auto c = parse(R"({"name":"bfail","campaign":"barrier",
        "domains":[{"kind":"interval","params":{"a":0,"b":1}}],
        "params":{"alphas":[0.8],"beta_fractions":[],"betas":[0.5],"assert_outside":true}})");
    c.output_dir = scratch("bfail").string();
    auto r = run(c);
    CHECK(r.exit_code != 0);
    std::ostringstream os;
    CHECK(report({r.summary_path}, os) > 0);
    CHECK(os.str().find("worst value") != std::string::npos);
    CHECK(os.str().find("x=(") != std::string::npos);
}

TEST_CASE("module errors carry campaign context and leave partial artifacts") {
    // an unreachable tolerance makes the operator quadrature give up mid-run
    auto c = parse(R"({"name":"partial","campaign":"symbol",
        "quadrature":{"tolerance":1e-300,"max_bisections":0},
        "params":{"alphas":[1.0],"frequencies":[1.0]}})");
    c.output_dir = scratch("partial").string();
    try {
        run(c);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("campaign symbol (partial)") != std::string::npos);
    }
    auto summary = read_json_file((fs::path(c.output_dir) / "partial.summary.json").string());
    CHECK(summary["status"] == "partial");
    std::ostringstream os;
    CHECK(report({fs::path(c.output_dir) / "partial.summary.json"}, os) >= 1);
}

TEST_CASE("indexed runner keeps order and rethrows the first failure") {
    std::vector<int> out(50, -1);
    run_indexed(out.size(), 4, [&](std::size_t i) { out[i] = static_cast<int>(i * i); });
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i * i));
    try {
        run_indexed(20, 3, [](std::size_t i) {
            if (i == 7 || i == 13) throw std::runtime_error("task " + std::to_string(i));
        });
        FAIL("expected an error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()) == "task 7");
    }
}

TEST_CASE("presets validate") {
    for (const auto& n : campaign_names()) {
        CAPTURE(n);
        ExperimentConfig::preset(campaign_from_string(n)).validate();
    }
}
