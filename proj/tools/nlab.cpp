// nlab: command-line front end for the verification campaigns.

#include "nonlocal/error.hpp"
#include "nonlocal/harness.hpp"
#include "nonlocal/kernels.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

using namespace nonlocal;

namespace {

struct Common {
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> jobs;
};

void apply_common(ExperimentConfig& c, const Common& o) {
    if (!o.out.empty()) c.output_dir = o.out;
    if (o.seed) c.seed = *o.seed;
    if (o.jobs) c.jobs = *o.jobs;
}

int run_and_report(ExperimentConfig c, const Common& o) {
    apply_common(c, o);
    RunResult r = run(c);
    report({r.summary_path}, std::cout);
    std::cout << "artifacts: " << r.csv_path.string() << ", " << r.series_path.string() << ", " << r.summary_path.string() << '\n';
    return r.exit_code;
}

int run_config_of(const std::string& path, const std::set<CampaignKind>& allowed, const std::string& cmd, const Common& o) {
    ExperimentConfig c = ExperimentConfig::load(path);
    if (!allowed.count(c.kind)) throw InvalidArgument(cmd + " does not run '" + to_string(c.kind) + "' campaigns; use verify");
    return run_and_report(std::move(c), o);
}

bool ends_with(const std::string& s, const std::string& tail) {
    return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nlab: numerical laboratory for nonlocal stable operators"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(build_id()));

    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", common.out, "output directory (default $NLAB_OUT_DIR or ./nlab-out)");
        sub->add_option("--seed", common.seed, "random seed");
        sub->add_option("--jobs", common.jobs, "worker threads for independent parameter points");
    };

    double alpha = 1.0, beta = 0.0;
    bool oracle = false;
    std::string normalization = "raw";
    auto* kernels = app.add_subcommand("kernels", "half-line power kernel constant as JSON");
    kernels->add_option("--alpha", alpha, "stability index in (0, 2)")->required();
    kernels->add_option("--beta", beta, "power in (-1, alpha)")->required();
    kernels->add_flag("--oracle", oracle, "also evaluate the quadrature oracle");
    kernels->add_option("--normalization", normalization, "raw or fractional_laplacian")
        ->check(CLI::IsMember({"raw", "fractional_laplacian"}));

    std::string config;
    auto* solve = app.add_subcommand("solve", "elliptic campaigns from a config");
    solve->add_option("--config", config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    add_common(solve);
    auto* parabolic = app.add_subcommand("parabolic", "parabolic campaign from a config");
    parabolic->add_option("--config", config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    add_common(parabolic);
    auto* mc = app.add_subcommand("mc", "Monte Carlo comparison from a config");
    mc->add_option("--config", config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    add_common(mc);

    std::string target;
    auto* verify = app.add_subcommand("verify", "run a campaign by name (default parameters) or a config file");
    verify->add_option("target", target, "campaign name or config path")->required();
    verify->add_option("--config", config, "config file (alternative to a positional path)");
    add_common(verify);

    std::vector<std::string> artifacts;
    auto* rep = app.add_subcommand("report", "summary tables of run artifacts (.summary.json or .csv)");
    rep->add_option("artifacts", artifacts, "artifact files");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*kernels) {
            Normalization n = normalization == "raw" ? Normalization::Raw : Normalization::FractionalLaplacian;
            Json j = {{"alpha", alpha}, {"beta", beta}, {"normalization", normalization}};
            j["closed_form"] = kernel_constant(alpha, beta, n);
            j["sign"] = to_string(kernel_sign(alpha, beta));
            if (oracle) j["oracle"] = pv_kernel_oracle(alpha, beta, {}, n);
            std::cout << j.dump(2) << '\n';
            return 0;
        }
        if (*solve)
            return run_config_of(config,
                                 {CampaignKind::Elliptic, CampaignKind::ThetaSweep, CampaignKind::Barrier, CampaignKind::Hardy},
                                 "solve", common);
        if (*parabolic) return run_config_of(config, {CampaignKind::Parabolic}, "parabolic", common);
        if (*mc) return run_config_of(config, {CampaignKind::McCompare}, "mc", common);
        if (*verify) {
            std::string path = !config.empty() ? config : target;
            if (ends_with(path, ".json")) return run_and_report(ExperimentConfig::load(path), common);
            return run_and_report(ExperimentConfig::preset(campaign_from_string(target)), common);
        }
        if (*rep) {
            std::vector<std::filesystem::path> paths(artifacts.begin(), artifacts.end());
            return report(paths, std::cout) == 0 ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << "nlab: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "nlab: unexpected error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
