#include "nonlocal/stable_mc.hpp"

#include "nonlocal/defaults.hpp"
#include "nonlocal/error.hpp"
#include "nonlocal/operator.hpp"
#include "nonlocal/special.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace nonlocal {

void PathConfig::validate() const {
    if (measure.has_density()) throw Unsupported("path simulation needs a purely atomic measure");
    if (!measure.is_symmetric()) throw InvalidArgument("path simulation needs symmetric atoms");
    if (measure.dim() != domain.dim()) throw InvalidArgument("measure and domain dimensions differ");
    if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
    if (paths < static_cast<std::size_t>(defaults::kMinPaths)) throw InvalidArgument("path count must be at least 1000");
    if (!(max_time > 0.0)) throw InvalidArgument("max_time must be positive");
}

std::vector<IncrementPair> increment_pairs(const SpectralMeasure& m) {
    if (m.has_density()) throw Unsupported("path simulation needs a purely atomic measure");
    StableOperator op(m);
    const double c = stable_symbol_constant(m.alpha());
    std::vector<IncrementPair> out;
    for (const auto& p : op.pairs()) out.push_back({p.direction, std::pow(2.0 * p.weight * c, 1.0 / m.alpha())});
    return out;
}

double levy_symbol(const SpectralMeasure& m, const Point& xi) {
    if (m.has_density()) throw Unsupported("levy_symbol is implemented for atomic measures");
    StableOperator op(m);
    const double c = stable_symbol_constant(m.alpha());
    double s = 0.0;
    for (const auto& p : op.pairs()) s -= 2.0 * p.weight * c * std::pow(std::abs(dot(xi, p.direction)), m.alpha());
    return s;
}

double standard_symmetric_stable(double alpha, double u_angle, double u_exp) {
    const double v = kPi * (u_angle - 0.5);
    const double w = -std::log1p(-u_exp);
    if (std::abs(alpha - 1.0) < 1e-12) return std::tan(v);
    return std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
           std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

unsigned worker_count(unsigned jobs, std::size_t work) {
    unsigned n = jobs ? jobs : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(1, work / 256)));
}

// runs body(path) for every path, results stored by index, so the reduction
// order never depends on the thread count
template <class Result, class Body>
std::vector<Result> run_paths(std::size_t paths, unsigned jobs, Body body) {
    std::vector<Result> out(paths);
    unsigned workers = worker_count(jobs, paths);
    if (workers <= 1) {
        for (std::size_t i = 0; i < paths; ++i) out[i] = body(i);
        return out;
    }
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < paths; i += workers) out[i] = body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return out;
}

MeanEstimate summarize(const std::vector<double>& v, std::size_t count) {
    RunningStats s;
    for (std::size_t i = 0; i < count; ++i) s.add(v[i]);
    return s.estimate();
}

}  // namespace

std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t path) {
    std::uint64_t a = splitmix64(seed);
    std::uint64_t b = splitmix64(a ^ splitmix64(path + 0x632be59bd9b4e019ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32), static_cast<std::uint32_t>(a),
                      static_cast<std::uint32_t>(a >> 32)};
    return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Point sample_increment(const std::vector<IncrementPair>& pairs, double alpha, double dt, std::mt19937_64& rng) {
    Point x{};
    if (dt == 0.0) return x;
    if (!(dt > 0.0)) throw InvalidArgument("dt must be nonnegative");
    const double tscale = std::pow(dt, 1.0 / alpha);
    for (const auto& p : pairs) {
        double u1 = uniform01(rng);
        double u2 = uniform01(rng);
        x = axpy(x, p.scale_per_unit_time * tscale * standard_symmetric_stable(alpha, u1, u2), p.direction);
    }
    return x;
}

Point sample_increment(const PathConfig& cfg, double dt, std::mt19937_64& rng) {
    return sample_increment(increment_pairs(cfg.measure), cfg.measure.alpha(), dt, rng);
}

CfReport characteristic_function_check(const PathConfig& cfg, const std::vector<Point>& frequencies, std::size_t samples) {
    cfg.validate();
    const auto pairs = increment_pairs(cfg.measure);
    const double alpha = cfg.measure.alpha();
    auto draws = run_paths<Point>(samples, cfg.jobs, [&](std::size_t i) {
        auto rng = path_rng(cfg.seed, i);
        return sample_increment(pairs, alpha, cfg.dt, rng);
    });
    CfReport rep;
    for (const auto& xi : frequencies) {
        RunningStats s;
        for (const auto& x : draws) s.add(std::cos(dot(xi, x)));
        CfRow row;
        row.xi = xi;
        auto e = s.estimate();
        row.empirical = e.mean;
        row.std_error = e.std_error;
        row.analytic = std::exp(cfg.dt * levy_symbol(cfg.measure, xi));
        row.z = std::abs(row.empirical - row.analytic) / std::max(row.std_error, 1e-300);
        rep.max_z = std::max(rep.max_z, row.z);
        rep.rows.push_back(row);
    }
    return rep;
}

IndependenceReport independence_check(const PathConfig& cfg, std::size_t samples) {
    cfg.validate();
    if (cfg.measure.dim() != 2) throw InvalidArgument("independence check is for d = 2");
    const auto pairs = increment_pairs(cfg.measure);
    const double alpha = cfg.measure.alpha();
    auto draws = run_paths<Point>(samples, cfg.jobs, [&](std::size_t i) {
        auto rng = path_rng(cfg.seed, i);
        return sample_increment(pairs, alpha, cfg.dt, rng);
    });
    // bounded functionals of each coordinate
    auto g = [](double v) { return std::cos(3.0 * v); };
    auto h = [](double v) { return std::tanh(5.0 * v) + 0.5; };
    RunningStats sg, sh, sgh;
    for (const auto& x : draws) {
        sg.add(g(x[0]));
        sh.add(h(x[1]));
        sgh.add(g(x[0]) * h(x[1]));
    }
    IndependenceReport rep;
    rep.product_of_means = sg.estimate().mean * sh.estimate().mean;
    rep.joint_mean = sgh.estimate().mean;
    rep.std_error = sgh.estimate().std_error;
    rep.z = std::abs(rep.joint_mean - rep.product_of_means) / std::max(rep.std_error, 1e-300);
    return rep;
}

MeanEstimate killed_semigroup(const PathConfig& cfg, const std::function<double(const Point&)>& f, double t, const Point& x) {
    cfg.validate();
    if (!(t >= 0.0)) throw InvalidArgument("t must be nonnegative");
    if (!cfg.domain.contains(x)) return {0.0, 0.0, cfg.paths};
    if (t == 0.0) return {f(x), 0.0, cfg.paths};
    const auto pairs = increment_pairs(cfg.measure);
    const double alpha = cfg.measure.alpha();
    const auto full = static_cast<std::size_t>(std::floor(t / cfg.dt * (1.0 + 1e-12)));
    const double rest = t - static_cast<double>(full) * cfg.dt;
    auto values = run_paths<double>(cfg.paths, cfg.jobs, [&](std::size_t i) {
        auto rng = path_rng(cfg.seed, i);
        Point pos = x;
        for (std::size_t k = 0; k < full; ++k) {
            pos = axpy(pos, 1.0, sample_increment(pairs, alpha, cfg.dt, rng));
            if (!cfg.domain.contains(pos)) return 0.0;
        }
        if (rest > 1e-12 * cfg.dt) {
            pos = axpy(pos, 1.0, sample_increment(pairs, alpha, rest, rng));
            if (!cfg.domain.contains(pos)) return 0.0;
        }
        return f(pos);
    });
    return summarize(values, values.size());
}

EllipticEstimate elliptic_representation(const PathConfig& cfg, const std::function<double(const Point&)>& f,
                                         const Point& x, double ci_target) {
    cfg.validate();
    EllipticEstimate est;
    if (!cfg.domain.contains(x)) {
        est.value = est.exit_time = est.exit_time_sq = est.exit_time_sq_half = {0.0, 0.0, cfg.paths};
        return est;
    }
    const auto pairs = increment_pairs(cfg.measure);
    const double alpha = cfg.measure.alpha();
    const auto max_steps = static_cast<std::size_t>(std::ceil(cfg.max_time / cfg.dt));
    struct PathResult {
        double integral = 0.0;
        double exit = 0.0;
        bool truncated = false;
    };
    auto results = run_paths<PathResult>(cfg.paths, cfg.jobs, [&](std::size_t i) {
        auto rng = path_rng(cfg.seed, i);
        Point pos = x;
        PathResult r;
        std::size_t k = 0;
        for (; k < max_steps; ++k) {
            r.integral -= f(pos) * cfg.dt;
            pos = axpy(pos, 1.0, sample_increment(pairs, alpha, cfg.dt, rng));
            if (!cfg.domain.contains(pos)) break;
        }
        r.truncated = k == max_steps;
        r.exit = static_cast<double>(std::min(k + 1, max_steps)) * cfg.dt;
        return r;
    });
    std::vector<double> v(results.size()), e(results.size()), e2(results.size());
    for (std::size_t i = 0; i < results.size(); ++i) {
        v[i] = results[i].integral;
        e[i] = results[i].exit;
        e2[i] = results[i].exit * results[i].exit;
        if (results[i].truncated) ++est.truncated;
    }
    est.value = summarize(v, v.size());
    est.exit_time = summarize(e, e.size());
    est.exit_time_sq = summarize(e2, e2.size());
    est.exit_time_sq_half = summarize(e2, e2.size() / 2);
    if (est.truncated) {
        std::ostringstream os;
        os << est.truncated << " paths were still alive at t = " << cfg.max_time;
        est.warnings.push_back(os.str());
    }
    if (ci_target > 0.0 && 1.96 * est.value.std_error > ci_target) {
        std::ostringstream os;
        os << "path budget exhausted: 95% half-width " << 1.96 * est.value.std_error << " exceeds target " << ci_target;
        est.warnings.push_back(os.str());
    }
    return est;
}

DtBiasReport dt_bias_check(const PathConfig& cfg, const std::function<double(const Point&)>& f, double t, const Point& x) {
    DtBiasReport rep;
    rep.coarse = killed_semigroup(cfg, f, t, x);
    PathConfig fine = cfg;
    fine.dt = 0.5 * cfg.dt;
    fine.seed = splitmix64(cfg.seed ^ 0x5851f42d4c957f2dULL);
    rep.fine = killed_semigroup(fine, f, t, x);
    rep.difference = std::abs(rep.fine.mean - rep.coarse.mean);
    rep.ci_width = 1.96 * std::hypot(rep.coarse.std_error, rep.fine.std_error);
    return rep;
}

}  // namespace nonlocal
