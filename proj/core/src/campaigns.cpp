#include "nonlocal/defaults.hpp"
#include "nonlocal/error.hpp"
#include "nonlocal/harness.hpp"
#include "nonlocal/kernels.hpp"
#include "nonlocal/norms.hpp"
#include "nonlocal/solve.hpp"
#include "nonlocal/special.hpp"
#include "nonlocal/stable_mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <set>
#include <sstream>

namespace nonlocal {

namespace {

// --- parameter access ---------------------------------------------------------

class Params {
public:
    Params(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) throw InvalidArgument(where_ + " must be an object");
    }

    bool has(const std::string& k) {
        used_.insert(k);
        return j_.contains(k);
    }
    double num(const std::string& k, double def) {
        if (!has(k)) return def;
        if (!j_.at(k).is_number()) throw InvalidArgument(where_ + "." + k + " must be a number");
        return j_.at(k).get<double>();
    }
    int integer(const std::string& k, int def) {
        if (!has(k)) return def;
        if (!j_.at(k).is_number_integer()) throw InvalidArgument(where_ + "." + k + " must be an integer");
        return j_.at(k).get<int>();
    }
    bool flag(const std::string& k, bool def) {
        if (!has(k)) return def;
        if (!j_.at(k).is_boolean()) throw InvalidArgument(where_ + "." + k + " must be true or false");
        return j_.at(k).get<bool>();
    }
    std::string str(const std::string& k, const std::string& def) {
        if (!has(k)) return def;
        if (!j_.at(k).is_string()) throw InvalidArgument(where_ + "." + k + " must be a string");
        return j_.at(k).get<std::string>();
    }
    std::vector<double> nums(const std::string& k, std::vector<double> def) {
        if (!has(k)) return def;
        const Json& v = j_.at(k);
        if (!v.is_array()) throw InvalidArgument(where_ + "." + k + " must be an array of numbers");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) throw InvalidArgument(where_ + "." + k + " must be an array of numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }
    std::vector<std::string> strs(const std::string& k, std::vector<std::string> def) {
        if (!has(k)) return def;
        const Json& v = j_.at(k);
        if (!v.is_array()) throw InvalidArgument(where_ + "." + k + " must be an array of strings");
        std::vector<std::string> out;
        for (const auto& e : v) out.push_back(e.get<std::string>());
        return out;
    }
    const Json& raw(const std::string& k) {
        used_.insert(k);
        return j_.at(k);
    }
    /// Rejects keys nobody asked for.
    void done() const {
        for (const auto& [k, v] : j_.items())
            if (!used_.count(k)) throw InvalidArgument("unknown key '" + k + "' in " + where_);
    }

private:
    const Json& j_;
    std::string where_;
    std::set<std::string> used_;
};

void require_alpha(double a, const std::string& where) {
    if (!(a > 0.0 && a < 2.0)) throw DomainError(where + ": alpha must lie in (0, 2)");
}

void require_beta(double a, double b, const std::string& where) {
    if (!(b > -1.0 && b < a)) {
        std::ostringstream os;
        os << where << ": beta = " << b << " lies outside (-1, alpha) = (-1, " << a << ")";
        throw DomainError(os.str());
    }
}

std::string num_text(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string kv(std::initializer_list<std::pair<const char*, double>> items) {
    std::string s;
    for (const auto& [k, v] : items) s += std::string(s.empty() ? "" : " ") + k + "=" + num_text(v);
    return s;
}

CheckRow make_row(std::string check, std::string anchor, std::string params, double value, std::string relation,
                  double threshold) {
    CheckRow r;
    r.check = std::move(check);
    r.anchor = std::move(anchor);
    r.params = std::move(params);
    r.value = value;
    r.relation = std::move(relation);
    r.threshold = threshold;
    return r;
}

CheckRow at_most(std::string check, std::string anchor, std::string params, double value, double limit) {
    CheckRow r = make_row(std::move(check), std::move(anchor), std::move(params), value, "<=", limit);
    r.pass = value <= limit;  // NaN fails
    return r;
}

CheckRow at_least(std::string check, std::string anchor, std::string params, double value, double limit) {
    CheckRow r = make_row(std::move(check), std::move(anchor), std::move(params), value, ">=", limit);
    r.pass = value >= limit;
    return r;
}

CheckRow holds(std::string check, std::string anchor, std::string params, bool ok) {
    CheckRow r = make_row(std::move(check), std::move(anchor), std::move(params), ok ? 1.0 : 0.0, "==", 1.0);
    r.pass = ok;
    return r;
}

CheckRow info(std::string check, std::string anchor, std::string params, double value, std::string note = {}) {
    CheckRow r = make_row(std::move(check), std::move(anchor), std::move(params), value, "", 0.0);
    r.asserted = false;
    r.note = std::move(note);
    return r;
}

CheckRow reported(CheckRow r, const std::string& note) {
    r.asserted = false;
    r.note = note;
    return r;
}

/// Measure template with the campaign's alpha and the domain's dimension.
SpectralMeasure make_measure(const Json& tmpl, double alpha, int dim) {
    Json j = tmpl.is_null() ? Json{{"preset", "fractional_laplacian"}} : tmpl;
    j["dim"] = dim;
    return measure_from_json(j, alpha);
}

std::vector<double> interior_fractions(int count) {
    std::vector<double> out;
    for (int k = 1; k <= count; ++k) out.push_back(static_cast<double>(k) / (count + 1));
    return out;
}

/// Collects per-task outputs and concatenates them in task order.
struct Parallel {
    explicit Parallel(std::size_t n) : parts(n) {}
    std::vector<CampaignOutput> parts;
    CampaignOutput merge() {
        CampaignOutput out;
        for (auto& p : parts) {
            out.rows.insert(out.rows.end(), p.rows.begin(), p.rows.end());
            out.series.insert(out.series.end(), p.series.begin(), p.series.end());
            out.warnings.insert(out.warnings.end(), p.warnings.begin(), p.warnings.end());
        }
        return out;
    }
};

double profile_constant_fl(double alpha) {
    return std::sqrt(kPi) / (std::pow(2.0, alpha) * gamma_fn(0.5 * (1.0 + alpha)) * gamma_fn(1.0 + 0.5 * alpha));
}

const Interval& interval_of(const Domain& d, const std::string& where) {
    const auto* iv = std::get_if<Interval>(&d.shape());
    if (!iv) throw InvalidArgument(where + " needs an interval domain");
    return *iv;
}

// --- kernels ------------------------------------------------------------------

struct KernelParams {
    std::vector<double> alphas;
    std::vector<double> betas;  ///< explicit list; empty means `interior_count` points per alpha
    int interior_count = 7;
    Normalization normalization = Normalization::Raw;
    bool oracle = true;
    struct Explicit {
        double alpha, beta, value;
    };
    std::vector<Explicit> explicit_values;

    static KernelParams parse(const ExperimentConfig& c) {
        Params p(c.params, "params");
        KernelParams k;
        k.alphas = p.nums("alphas", {0.4, 0.8, 1.0, 1.3, 1.7});
        k.betas = p.nums("betas", {});
        k.interior_count = p.integer("interior_betas", 7);
        std::string norm = p.str("normalization", "raw");
        if (norm == "raw") k.normalization = Normalization::Raw;
        else if (norm == "fractional_laplacian") k.normalization = Normalization::FractionalLaplacian;
        else throw InvalidArgument("params.normalization must be 'raw' or 'fractional_laplacian'");
        k.oracle = p.flag("oracle", true);
        if (p.has("explicit")) {
            for (const auto& e : p.raw("explicit")) {
                Params q(e, "params.explicit[]");
                k.explicit_values.push_back({q.num("alpha", NAN), q.num("beta", NAN), q.num("value", NAN)});
                q.done();
            }
        }
        p.done();
        if (k.interior_count < 1) throw InvalidArgument("params.interior_betas must be positive");
        for (double a : k.alphas) {
            require_alpha(a, "kernels");
            for (double b : k.betas) require_beta(a, b, "kernels");
        }
        for (const auto& e : k.explicit_values) {
            require_alpha(e.alpha, "kernels explicit");
            require_beta(e.alpha, e.beta, "kernels explicit");
            if (!std::isfinite(e.value)) throw InvalidArgument("kernels explicit value must be a number");
        }
        return k;
    }
};

CampaignOutput run_kernels(const ExperimentConfig& c) {
    const KernelParams k = KernelParams::parse(c);
    const std::string anchor = "halfline-power-kernel";
    Parallel par(k.alphas.size() + 1);
    run_indexed(par.parts.size(), c.jobs, [&](std::size_t t) {
        CampaignOutput& out = par.parts[t];
        if (t == k.alphas.size()) {
            for (const auto& e : k.explicit_values) {
                std::string ps = kv({{"alpha", e.alpha}, {"beta", e.beta}});
                double K = kernel_constant(e.alpha, e.beta, k.normalization);
                out.rows.push_back(at_most("explicit value, closed form", "kernel-explicit-value", ps, std::abs(K - e.value),
                                           defaults::kExplicitFormulaTolerance));
                if (k.oracle) {
                    double o = pv_kernel_oracle(e.alpha, e.beta, {}, k.normalization);
                    out.rows.push_back(at_most("explicit value, oracle", "kernel-explicit-value", ps,
                                               std::abs(o - e.value) / (1.0 + std::abs(e.value)),
                                               defaults::kOracleRelTolerance));
                }
            }
            return;
        }
        const double a = k.alphas[t];
        std::vector<double> betas = k.betas;
        if (betas.empty())
            for (double f : interior_fractions(k.interior_count)) betas.push_back(-1.0 + f * (1.0 + a));
        for (double b : betas) {
            std::string ps = kv({{"alpha", a}, {"beta", b}});
            double K = kernel_constant(a, b, k.normalization);
            out.series.push_back({"K alpha=" + num_text(a), b, K});
            if (!k.oracle) {
                out.rows.push_back(info("closed form", anchor, ps, K));
                continue;
            }
            double o = pv_kernel_oracle(a, b, {}, k.normalization);
            out.rows.push_back(
                at_most("closed form vs oracle", anchor, ps, std::abs(K - o) / (1.0 + std::abs(K)), defaults::kOracleRelTolerance));
            KernelSign s = kernel_sign(a, b);
            bool agree = std::abs(o) <= defaults::kOracleZeroTolerance
                             ? s == KernelSign::Zero || std::abs(K) <= defaults::kOracleZeroTolerance
                             : (o > 0.0 ? s == KernelSign::Positive : s == KernelSign::Negative);
            CheckRow sr = holds("sign matches oracle", "kernel-sign", ps, agree);
            sr.note = to_string(s);
            out.rows.push_back(sr);
        }
        for (double b : {-1.0 + 0.5 * a, 0.5 * a}) {
            std::string ps = kv({{"alpha", a}, {"beta", b}});
            double K = kernel_constant(a, b, k.normalization);
            out.rows.push_back(holds("exact zero", "kernel-zero-set", ps, K == 0.0 && kernel_sign(a, b) == KernelSign::Zero));
            if (k.oracle) {
                double o = pv_kernel_oracle(a, b, {}, k.normalization);
                out.rows.push_back(at_most("oracle at zero", "kernel-zero-set", ps, std::abs(o), defaults::kOracleZeroTolerance));
            }
        }
    });
    return par.merge();
}

// --- symbol -------------------------------------------------------------------

struct SymbolParams {
    std::vector<double> alphas, frequencies, points;
    double target_tolerance = defaults::kSymbolRelTolerance;

    static SymbolParams parse(const ExperimentConfig& c) {
        Params p(c.params, "params");
        SymbolParams s;
        s.alphas = p.nums("alphas", {0.5, 1.0, 1.5});
        s.frequencies = p.nums("frequencies", {0.5, 1.0, 2.0});
        s.points = p.nums("points", {0.0});
        p.done();
        for (double a : s.alphas) require_alpha(a, "symbol");
        for (double xi : s.frequencies)
            if (!(xi > 0.0)) throw InvalidArgument("symbol frequencies must be positive");
        return s;
    }
};

CampaignOutput run_symbol(const ExperimentConfig& c) {
    const SymbolParams s = SymbolParams::parse(c);
    Parallel par(s.alphas.size());
    run_indexed(par.parts.size(), c.jobs, [&](std::size_t t) {
        CampaignOutput& out = par.parts[t];
        const double a = s.alphas[t];
        const auto measure = make_measure(c.measure.is_null() ? Json{{"preset", "raw"}} : c.measure, a, 1);
        const double target_constant = -kPi;
        const double exact_constant = -2.0 * stable_symbol_constant(a) * StableOperator(measure).pairs().front().weight;
        for (double xi : s.frequencies) {
            // panels shorter than a quarter period; the oscillating tail is cut at 2e4
            QuadratureControls q = c.quadrature;
            q.max_panel_width = std::min(q.max_panel_width, 1.0 / xi);
            if (q.tail_radius == 0.0) q.tail_radius = 2e4;
            StableOperator op(measure, q);
            for (double x0 : s.points) {
                std::string ps = kv({{"alpha", a}, {"xi", xi}, {"x", x0}});
                double v = apply(op, [xi](const Point& x) { return std::cos(xi * x[0]); }, point1(x0)) / std::cos(xi * x0);
                double expected = target_constant * std::pow(xi, a);
                double exact = exact_constant * std::pow(xi, a);
                out.rows.push_back(at_most("quadrature vs -pi|xi|^alpha", "operator-symbol", ps,
                                           std::abs(v / expected - 1.0), s.target_tolerance));
                out.rows.push_back(at_most("quadrature vs exact stable symbol", "operator-symbol-exact", ps,
                                           std::abs(v / exact - 1.0), s.target_tolerance));
                out.series.push_back({"symbol alpha=" + num_text(a), xi, v});
            }
        }
    });
    return par.merge();
}

// --- elliptic -----------------------------------------------------------------

struct EllipticParams {
    std::vector<double> alphas;
    int n = 2048;
    double rhs = -1.0;
    std::vector<double> profile_points;
    int series_stride = 16;

    static EllipticParams parse(const ExperimentConfig& c) {
        Params p(c.params, "params");
        Params g(c.grid, "grid");
        EllipticParams e;
        e.alphas = p.nums("alphas", {0.6, 1.0, 1.4});
        e.rhs = p.num("rhs", -1.0);
        e.profile_points = p.nums("profile_points", {0.0, 0.5, 0.9, 0.99});
        e.series_stride = p.integer("series_stride", 16);
        e.n = g.integer("n", 2048);
        p.done();
        g.done();
        for (double a : e.alphas) require_alpha(a, "elliptic");
        if (e.n < 16) throw InvalidArgument("grid.n must be at least 16");
        if (e.rhs == 0.0) throw InvalidArgument("params.rhs must be nonzero");
        if (c.domains.size() != 1) throw InvalidArgument("elliptic takes one domain");
        interval_of(c.domains.front(), "elliptic");
        return e;
    }
};

CampaignOutput run_elliptic(const ExperimentConfig& c) {
    const EllipticParams e = EllipticParams::parse(c);
    const Domain& D = c.domains.front();
    const Interval iv = interval_of(D, "elliptic");
    const double mid = 0.5 * (iv.a + iv.b);
    Parallel par(e.alphas.size());
    run_indexed(par.parts.size(), c.jobs, [&](std::size_t t) {
        CampaignOutput& out = par.parts[t];
        const double a = e.alphas[t];
        StableOperator op(make_measure(c.measure, a, 1), c.quadrature);
        // ((x-a)(b-x))^{alpha/2} is mapped to a constant; its image fixes the exact solution
        auto profile = [&](const Point& x) {
            double q = (x[0] - iv.a) * (iv.b - x[0]);
            return q > 0.0 ? std::pow(q, 0.5 * a) : 0.0;
        };
        const double image = apply(op, profile, point1(mid), D);
        double spread = 0.0;
        for (double s : e.profile_points) {
            double x = mid + s * 0.5 * (iv.b - iv.a);
            spread = std::max(spread, std::abs(apply(op, profile, point1(x), D) / image - 1.0));
        }
        std::string ps = kv({{"alpha", a}, {"n", static_cast<double>(e.n)}});
        out.rows.push_back(at_most("profile image is constant", "distance-profile-image", ps, spread, 1e-6));
        if (op.normalization() == Normalization::FractionalLaplacian) {
            double closed = -1.0 / profile_constant_fl(a);
            out.rows.push_back(
                at_most("profile image vs closed form", "distance-profile-image", ps, std::abs(image / closed - 1.0), 1e-6));
        }

        auto grid = Grid::interval(D, e.n);
        auto A = DiscreteOperator::build(op, grid);
        const double rhs = e.rhs;
        auto sol = solve_elliptic(A, [rhs](const Point&) { return rhs; });
        out.rows.push_back(at_most("relative residual", "discrete-solve", ps, sol.residual, defaults::kResidualTolerance));
        out.rows.push_back(holds("discrete maximum principle", "discrete-maximum-principle", ps, sol.max_principle));

        const double scale = rhs / image;
        double err = 0.0;
        for (std::size_t i = 0; i < grid->size(); ++i) {
            const Point& x = grid->node(i);
            double exact = scale * profile(x);
            if (D.dist(x) >= defaults::kInteriorDistance) err = std::max(err, std::abs(sol.u[i] / exact - 1.0));
            if (i % static_cast<std::size_t>(e.series_stride) == 0) out.series.push_back({"u alpha=" + num_text(a), x[0], sol.u[i]});
        }
        out.rows.push_back(at_most("interior relative error vs profile", "fractional-laplacian-profile", ps, err,
                                   defaults::kInteriorRelError));
        auto fit = boundary_exponent_fit(sol.u);
        CheckRow fr = at_most("boundary exponent |slope - alpha/2|", "boundary-regularity-exponent", ps,
                              std::abs(fit.slope - 0.5 * a), defaults::kExponentTolerance);
        fr.note = "slope " + num_text(fit.slope) + " over d in [" + num_text(fit.window_lo) + ", " + num_text(fit.window_hi) + "]";
        out.rows.push_back(fr);
    });
    return par.merge();
}

// --- barrier ------------------------------------------------------------------

struct BarrierParams {
    std::vector<double> alphas;
    std::vector<double> fractions;  ///< beta = lo + f (hi - lo) inside the barrier range
    std::vector<double> betas;      ///< extra explicit betas
    std::set<std::string> reported_kinds;
    BarrierScan scan;
    bool assert_outside = false;  ///< control runs: assert betas outside the range too

    static BarrierParams parse(const ExperimentConfig& c) {
        Params p(c.params, "params");
        BarrierParams b;
        b.alphas = p.nums("alphas", {0.8, 1.2});
        b.fractions = p.nums("beta_fractions", {0.25, 0.5, 0.75});
        b.betas = p.nums("betas", {});
        auto rk = p.strs("reported_only", {"square"});
        b.reported_kinds = {rk.begin(), rk.end()};
        b.scan.levels = p.integer("levels", b.scan.levels);
        b.scan.per_level = p.integer("per_level", b.scan.per_level);
        b.scan.fit_radius = p.num("fit_radius", b.scan.fit_radius);
        b.scan.corner_fraction = p.num("corner_fraction", defaults::kSquareCornerFraction);
        b.assert_outside = p.flag("assert_outside", false);
        p.done();
        for (double a : b.alphas) {
            require_alpha(a, "barrier");
            for (double x : b.betas) require_beta(a, x, "barrier");
        }
        for (double f : b.fractions)
            if (!(f > 0.0 && f < 1.0)) throw InvalidArgument("barrier beta_fractions must lie in (0, 1)");
        if (c.domains.empty()) throw InvalidArgument("barrier needs at least one domain");
        return b;
    }
};

CampaignOutput run_barrier(const ExperimentConfig& c) {
    const BarrierParams b = BarrierParams::parse(c);
    struct Task {
        double alpha;
        const Domain* domain;
        double beta;
        bool in_range;
    };
    std::vector<Task> tasks;
    for (double a : b.alphas) {
        for (const auto& D : c.domains) {
            for (double f : b.fractions) tasks.push_back({a, &D, -1.0 + 0.5 * a + f, true});
            for (double x : b.betas) tasks.push_back({a, &D, x, x > -1.0 + 0.5 * a && x < 0.5 * a});
        }
    }
    Parallel par(tasks.size());
    run_indexed(tasks.size(), c.jobs, [&](std::size_t t) {
        const Task& k = tasks[t];
        CampaignOutput& out = par.parts[t];
        const Domain& D = *k.domain;
        StableOperator op(make_measure(c.measure, k.alpha, D.dim()), c.quadrature);
        auto rep = barrier_check(op, D, k.beta, b.scan, false);
        std::string ps = D.kind() + " " + kv({{"alpha", k.alpha}, {"beta", k.beta}, {"expected_slope", rep.expected_slope}});
        CheckRow sign = holds("L(psi^beta) < 0 near the boundary", "barrier-convex-domain", ps, rep.sign_ok);
        sign.value = static_cast<double>(rep.sign_violations);
        sign.threshold = 0.0;
        if (!rep.sign_ok) {
            std::string at = "x=(" + num_text(rep.worst_point[0]);
            for (int i = 1; i < D.dim(); ++i) at += " " + num_text(rep.worst_point[i]);
            sign.note = "worst value " + num_text(rep.worst_value) + " at " + at + ") d=" + num_text(D.dist(rep.worst_point));
        }
        CheckRow slope = at_most("|log-log slope - (beta - alpha)|", "barrier-convex-domain", ps,
                                 std::abs(rep.fit.slope - rep.expected_slope), defaults::kSlopeTolerance);
        slope.note = "slope " + num_text(rep.fit.slope);
        std::string why;
        if (b.reported_kinds.count(D.kind()))
            why = D.kind() == "square" ? "corner-excluded square: reported only" : "reported only";
        else if (!k.in_range && !b.assert_outside)
            why = "beta outside the barrier range: not asserted";
        if (!why.empty()) {
            sign = reported(sign, why);
            slope = reported(slope, why + "; " + slope.note);
        }
        out.rows.push_back(sign);
        out.rows.push_back(slope);
        for (std::size_t i = 0; i < rep.distances.size(); ++i)
            out.series.push_back({"barrier " + ps, rep.distances[i], rep.values[i]});
    });
    return par.merge();
}

// --- hardy --------------------------------------------------------------------

struct HardyParams {
    std::vector<double> alphas;
    std::vector<double> ps;
    std::vector<double> fractions;
    std::vector<double> cs;
    int points = 64;

    static HardyParams parse(const ExperimentConfig& c) {
        Params p(c.params, "params");
        HardyParams h;
        h.alphas = p.nums("alphas", {1.0});
        h.ps = p.nums("p", {1.5, 2.0, 3.0});
        h.fractions = p.nums("c_fractions", {0.25, 0.5, 0.75});
        h.cs = p.nums("c", {});
        h.points = p.integer("points", 64);
        p.done();
        for (double a : h.alphas) require_alpha(a, "hardy");
        for (double q : h.ps)
            if (!(q > 1.0)) throw InvalidArgument("hardy p must exceed 1");
        for (double f : h.fractions)
            if (!(f > 0.0 && f < 1.0)) throw InvalidArgument("hardy c_fractions must lie in (0, 1)");
        if (h.points < 8) throw InvalidArgument("hardy points must be at least 8");
        return h;
    }
};

CampaignOutput run_hardy(const ExperimentConfig& c) {
    const HardyParams h = HardyParams::parse(c);
    struct Task {
        double alpha, p, c;
        bool inside;
    };
    std::vector<Task> tasks;
    for (double a : h.alphas) {
        for (double p : h.ps) {
            auto [lo, hi] = hardy_window(a, p);
            for (double f : h.fractions) tasks.push_back({a, p, lo + f * (hi - lo), true});
            for (double x : h.cs) tasks.push_back({a, p, x, x > lo && x < hi});
        }
    }
    const auto family = default_hardy_family();
    Parallel par(tasks.size());
    run_indexed(tasks.size(), c.jobs, [&](std::size_t t) {
        const Task& k = tasks[t];
        CampaignOutput& out = par.parts[t];
        StableOperator op(make_measure(c.measure.is_null() ? Json{{"preset", "raw"}} : c.measure, k.alpha, 1), c.quadrature);
        auto rep = hardy_check(op, k.p, k.c, family, h.points);
        std::string ps = kv({{"alpha", k.alpha}, {"p", k.p}, {"c", k.c}});
        double min_rhs = defaults::kInf;
        for (const auto& r : rep.rows) min_rhs = std::min(min_rhs, r.rhs);
        CheckRow pos = holds("RHS > 0 for every member", "hardy-inequality", ps, rep.rhs_positive);
        pos.value = min_rhs;
        pos.relation = ">";
        pos.threshold = 0.0;
        CheckRow fin = holds("sup ratio finite", "hardy-inequality", ps, std::isfinite(rep.sup_ratio));
        fin.value = rep.sup_ratio;
        fin.relation = "<";
        fin.threshold = defaults::kInf;
        CheckRow drift = at_most("sup ratio drift under refinement", "hardy-inequality", ps, rep.drift,
                                 defaults::kQuadratureStability);
        if (!k.inside) {
            pos = reported(pos, "c outside the admissible window: not asserted");
            fin = reported(fin, "c outside the admissible window: not asserted");
            drift = reported(drift, "c outside the admissible window: not asserted");
        }
        out.rows.push_back(pos);
        out.rows.push_back(fin);
        out.rows.push_back(drift);
        for (std::size_t i = 0; i < rep.rows.size(); ++i) out.series.push_back({"hardy " + ps, static_cast<double>(i), rep.rows[i].ratio});
    });
    return par.merge();
}

// --- theta sweep --------------------------------------------------------------

enum class RhsPreset { Const, DistancePower, Bump };

RhsPreset rhs_from_string(const std::string& s) {
    if (s == "const") return RhsPreset::Const;
    if (s == "power-of-distance") return RhsPreset::DistancePower;
    if (s == "bump") return RhsPreset::Bump;
    throw InvalidArgument("unknown rhs preset '" + s + "' (const, power-of-distance, bump)");
}

/// Nonpositive data for the presets: -1, -d^{exponent}, and a bump on the middle half.
std::function<double(const Point&)> rhs_field(RhsPreset kind, const Domain& D, double exponent) {
    switch (kind) {
        case RhsPreset::Const:
            return [](const Point&) { return -1.0; };
        case RhsPreset::DistancePower:
            return [D, exponent](const Point& x) { return -distance_power(D.dist(x), exponent); };
        case RhsPreset::Bump: {
            const Interval iv = interval_of(D, "bump preset");
            const double mid = 0.5 * (iv.a + iv.b), r = 0.25 * (iv.b - iv.a);
            return [mid, r](const Point& x) {
                double y = (x[0] - mid) / r;
                return std::abs(y) < 1.0 ? -std::exp(1.0 - 1.0 / (1.0 - y * y)) : 0.0;
            };
        }
    }
    return {};
}

struct ThetaParams {
    std::vector<double> alphas;
    double p = 2.0;
    std::vector<std::string> presets;
    double blowup_offset = 0.05;  ///< f = -d^{-alpha/2 + offset}
    int interior = 5;
    bool near_edge = true;
    std::vector<double> extra_thetas;
    int n = 400;

    static ThetaParams parse(const ExperimentConfig& c) {
        Params p(c.params, "params");
        Params g(c.grid, "grid");
        ThetaParams t;
        t.alphas = p.nums("alphas", {1.0});
        t.p = p.num("p", 2.0);
        t.presets = p.strs("rhs", {"const", "power-of-distance", "bump"});
        t.blowup_offset = p.num("blowup_offset", 0.05);
        t.interior = p.integer("interior_thetas", 5);
        t.near_edge = p.flag("near_edge", true);
        t.extra_thetas = p.nums("extra_thetas", {});
        t.n = g.integer("n", 400);
        p.done();
        g.done();
        for (double a : t.alphas) require_alpha(a, "theta-sweep");
        if (!(t.p > 1.0)) throw InvalidArgument("theta-sweep p must exceed 1");
        for (const auto& s : t.presets) rhs_from_string(s);
        if (t.interior < 2) throw InvalidArgument("theta-sweep needs at least two interior thetas");
        if (t.n < 16) throw InvalidArgument("grid.n must be at least 16");
        if (c.domains.size() != 1) throw InvalidArgument("theta-sweep takes one domain");
        interval_of(c.domains.front(), "theta-sweep");
        return t;
    }
};

CampaignOutput run_theta_sweep(const ExperimentConfig& c) {
    const ThetaParams tp = ThetaParams::parse(c);
    const Domain& D = c.domains.front();
    const auto [lo, hi] = theta_window(D.dim(), tp.p);
    struct Theta {
        double value;
        std::string role;  // interior, near-edge, outside
    };
    std::vector<Theta> thetas;
    for (double f : interior_fractions(tp.interior)) thetas.push_back({lo + f * (hi - lo), "interior"});
    if (tp.near_edge) {
        thetas.push_back({lo + defaults::kThetaEdgeMargin * (hi - lo), "near-edge"});
        thetas.push_back({hi - defaults::kThetaEdgeMargin * (hi - lo), "near-edge"});
    }
    for (double x : tp.extra_thetas) thetas.push_back({x, x > lo && x < hi ? "extra" : "outside"});

    struct Task {
        double alpha;
        std::string preset;
    };
    std::vector<Task> tasks;
    for (double a : tp.alphas)
        for (const auto& s : tp.presets) tasks.push_back({a, s});
    Parallel par(tasks.size());
    run_indexed(tasks.size(), c.jobs, [&](std::size_t t) {
        const Task& k = tasks[t];
        CampaignOutput& out = par.parts[t];
        StableOperator op(make_measure(c.measure, k.alpha, 1), c.quadrature);
        auto f = rhs_field(rhs_from_string(k.preset), D, -0.5 * k.alpha + tp.blowup_offset);
        std::vector<std::vector<EstimateRatio>> ratios;
        for (int n : {tp.n, 2 * tp.n}) {
            auto grid = Grid::interval(D, n);
            auto A = DiscreteOperator::build(op, grid);
            auto fg = GridFunction::sample(grid, f);
            auto sol = solve_elliptic(A, fg);
            std::vector<EstimateRatio> row;
            for (const auto& th : thetas) row.push_back(estimate_ratio(sol.u, fg, tp.p, th.value, k.alpha, false));
            ratios.push_back(row);
        }
        double rmin = defaults::kInf, rmax = 0.0;
        for (std::size_t i = 0; i < thetas.size(); ++i) {
            const auto& th = thetas[i];
            std::string ps = kv({{"alpha", k.alpha}, {"p", tp.p}, {"theta", th.value}}) + " rhs=" + k.preset;
            double coarse = ratios[0][i].ratio_psi, fine = ratios[1][i].ratio_psi;
            CheckRow fin = holds("estimate ratio finite", "elliptic-weighted-estimate", ps,
                                 std::isfinite(coarse) && std::isfinite(fine));
            fin.value = fine;
            fin.relation = "<";
            fin.threshold = defaults::kInf;
            fin.note = "d_x weights: " + num_text(ratios[1][i].ratio_dist);
            CheckRow ref = at_most("ratio change under h -> h/2", "elliptic-weighted-estimate", ps,
                                   std::abs(fine / coarse - 1.0), defaults::kRefinementStability);
            if (th.role == "outside") {
                fin = reported(fin, "outside-window: not asserted");
                ref = reported(ref, "outside-window: not asserted");
            } else if (th.role != "interior") {
                fin.note += "; " + th.role;
                ref.note = th.role;
            } else {
                rmin = std::min(rmin, fine);
                rmax = std::max(rmax, fine);
            }
            out.rows.push_back(fin);
            out.rows.push_back(ref);
            out.series.push_back({"ratio alpha=" + num_text(k.alpha) + " rhs=" + k.preset, th.value, fine});
        }
        out.rows.push_back(at_most("max/min ratio over interior thetas", "elliptic-weighted-estimate",
                                   kv({{"alpha", k.alpha}, {"p", tp.p}}) + " rhs=" + k.preset, rmax / rmin,
                                   defaults::kThetaSpread));
    });
    return par.merge();
}

// --- parabolic ----------------------------------------------------------------

struct ParabolicParams {
    double alpha = 1.0;
    std::vector<double> breakpoints;
    std::vector<std::vector<double>> weights;
    std::vector<double> envelope;
    double horizon = 1.0;
    double dt = 0.02;
    double rhs = 1.0;
    double p = 2.0;
    std::vector<double> thetas;
    int n = 48;

    static ParabolicParams parse(const ExperimentConfig& c) {
        Params p(c.params, "params");
        Params g(c.grid, "grid");
        ParabolicParams r;
        r.alpha = p.num("alpha", 1.0);
        r.horizon = p.num("horizon", 1.0);
        r.dt = p.num("dt", 0.02);
        r.rhs = p.num("rhs", 1.0);
        r.p = p.num("p", 2.0);
        r.thetas = p.nums("thetas", {});
        r.envelope = p.nums("envelope", {0.5, 0.5, 0.5, 0.5});
        r.breakpoints = {0.0};
        if (p.has("pieces")) {
            for (const auto& e : p.raw("pieces")) {
                Params q(e, "params.pieces[]");
                r.breakpoints.push_back(q.num("until", NAN));
                r.weights.push_back(q.nums("weights", {}));
                q.done();
            }
        } else {
            r.breakpoints = {0.0, 0.5 * r.horizon, r.horizon};
            r.weights = {{1.0, 1.0, 1.0, 1.0}, {2.0, 2.0, 0.5, 0.5}};
        }
        r.n = g.integer("n", 48);
        p.done();
        g.done();
        require_alpha(r.alpha, "parabolic");
        if (!(r.horizon > 0.0) || !(r.dt > 0.0)) throw InvalidArgument("parabolic horizon and dt must be positive");
        if (r.weights.empty()) throw InvalidArgument("parabolic needs at least one piece");
        if (std::abs(r.breakpoints.back() - r.horizon) > 1e-12 * r.horizon)
            throw InvalidArgument("the last piece must end at the horizon");
        if (!(r.p > 1.0)) throw InvalidArgument("parabolic p must exceed 1");
        if (c.domains.size() != 1 || c.domains.front().kind() != "square")
            throw InvalidArgument("parabolic runs on one square domain");
        if (r.thetas.empty()) {
            auto [lo, hi] = theta_window(2, r.p);
            for (double f : interior_fractions(3)) r.thetas.push_back(lo + f * (hi - lo));
        }
        return r;
    }
};

CampaignOutput run_parabolic(const ExperimentConfig& c) {
    const ParabolicParams r = ParabolicParams::parse(c);
    const Domain& D = c.domains.front();
    std::vector<SpectralMeasure> pieces;
    for (const auto& w : r.weights) pieces.push_back(SpectralMeasure::axis_atoms(r.alpha, 2, w));
    LevyFamily family(r.breakpoints, pieces, SpectralMeasure::axis_atoms(r.alpha, 2, r.envelope));
    CampaignOutput out;
    auto env = check_envelope(family);
    CheckRow er = holds("every piece dominates the envelope", "levy-envelope", kv({{"alpha", r.alpha}}), env.dominated);
    if (!env.dominated) er.note = env.violations.front();
    out.rows.push_back(er);

    const double rhs = r.rhs;
    std::vector<ParabolicProblem> problems;
    std::vector<ParabolicSolution> sols(2);
    auto grid = Grid::square(D, r.n);
    for (double dt : {r.dt, 0.5 * r.dt}) {
        ParabolicProblem P{family, grid, [rhs](double, const Point&) { return rhs; }, [](const Point&) { return 0.0; },
                           r.horizon, dt, 1, c.quadrature};
        problems.push_back(P);
    }
    run_indexed(2, c.jobs, [&](std::size_t i) { sols[i] = solve_parabolic(problems[i]); });
    for (std::size_t i = 0; i < 2; ++i) {
        std::string ps = kv({{"alpha", r.alpha}, {"dt", problems[i].dt}, {"n", static_cast<double>(r.n)}});
        CheckRow mp = holds("discrete maximum principle", "discrete-maximum-principle", ps, sols[i].max_principle);
        mp.note = "bound " + num_text(sols[i].bound);
        out.rows.push_back(mp);
        out.rows.push_back(info("largest step change", "parabolic-weighted-estimate", ps, sols[i].largest_step_change));
        out.rows.push_back(info("operator switches", "levy-envelope", ps, static_cast<double>(sols[i].switch_steps.size())));
        for (std::size_t k = 0; k < sols[i].times.size(); ++k)
            out.series.push_back({"sup|u| dt=" + num_text(problems[i].dt), sols[i].times[k], sols[i].sup_norms[k]});
    }
    for (double th : r.thetas) {
        std::string ps = kv({{"alpha", r.alpha}, {"p", r.p}, {"theta", th}});
        double coarse = parabolic_ratio(problems[0], sols[0], r.p, th);
        double fine = parabolic_ratio(problems[1], sols[1], r.p, th);
        CheckRow fin = holds("weighted ratio finite", "parabolic-weighted-estimate", ps, std::isfinite(coarse) && std::isfinite(fine));
        fin.value = fine;
        fin.relation = "<";
        fin.threshold = defaults::kInf;
        out.rows.push_back(fin);
        out.rows.push_back(at_most("ratio change under dt -> dt/2", "parabolic-weighted-estimate", ps,
                                   std::abs(fine / coarse - 1.0), defaults::kRefinementStability));
    }
    return out;
}

// --- Monte Carlo --------------------------------------------------------------

struct McParams {
    double alpha = 1.0;
    std::vector<double> points;
    std::size_t paths = 100000;
    double dt = 1e-3;
    double max_time = 50.0;
    double rhs = -1.0;
    int n = 2048;
    std::vector<double> cf_frequencies;
    double moment_stability = defaults::kRefinementStability;

    static McParams parse(const ExperimentConfig& c) {
        Params p(c.params, "params");
        Params g(c.grid, "grid");
        McParams m;
        m.alpha = p.num("alpha", 1.0);
        m.points = p.nums("points", {0.0, 0.5, -0.5});
        double paths = p.num("paths", 100000);
        m.dt = p.num("dt", 1e-3);
        m.max_time = p.num("max_time", 50.0);
        m.rhs = p.num("rhs", -1.0);
        m.cf_frequencies = p.nums("cf_frequencies", {0.5, 1.0, 2.0, 5.0});
        m.moment_stability = p.num("moment_stability", defaults::kRefinementStability);
        m.n = g.integer("n", 2048);
        p.done();
        g.done();
        require_alpha(m.alpha, "mc-compare");
        if (!(paths >= defaults::kMinPaths) || paths != std::floor(paths))
            throw InvalidArgument("mc-compare paths must be an integer >= 1000");
        m.paths = static_cast<std::size_t>(paths);
        if (!(m.dt > 0.0)) throw InvalidArgument("mc-compare dt must be positive");
        if (c.domains.size() != 1) throw InvalidArgument("mc-compare takes one domain");
        interval_of(c.domains.front(), "mc-compare");
        return m;
    }
};

double interpolate(const GridFunction& u, double x) {
    const Grid& g = u.grid();
    const Interval& iv = std::get<Interval>(g.domain().shape());
    const double h = g.spacing();
    double s = (x - iv.a) / h - 1.0;  // node i sits at a + (i + 1) h
    long i = static_cast<long>(std::floor(s));
    double w = s - static_cast<double>(i);
    auto at = [&](long k) { return k < 0 || k >= static_cast<long>(g.size()) ? 0.0 : u[static_cast<std::size_t>(k)]; };
    return (1.0 - w) * at(i) + w * at(i + 1);
}

CampaignOutput run_mc(const ExperimentConfig& c) {
    const McParams m = McParams::parse(c);
    const Domain& D = c.domains.front();
    CampaignOutput out;
    PathConfig cfg{make_measure(c.measure, m.alpha, 1), D, m.dt, c.seed, m.paths, c.jobs, m.max_time};
    cfg.validate();

    std::vector<Point> freqs;
    for (double xi : m.cf_frequencies) freqs.push_back(point1(xi));
    if (!freqs.empty()) {
        auto cf = characteristic_function_check(cfg, freqs, m.paths);
        for (const auto& r : cf.rows) {
            std::string ps = kv({{"alpha", m.alpha}, {"xi", r.xi[0]}, {"dt", m.dt}});
            out.rows.push_back(at_most("increment characteristic function z-score", "stable-increment-law", ps, r.z,
                                       defaults::kCfStderrMultiplier));
        }
    }

    StableOperator op(cfg.measure, c.quadrature);
    auto grid = Grid::interval(D, m.n);
    const double rhs = m.rhs;
    auto det = solve_elliptic(DiscreteOperator::build(op, grid), [rhs](const Point&) { return rhs; });
    for (double x : m.points) {
        auto est = elliptic_representation(cfg, [rhs](const Point&) { return rhs; }, point1(x));
        double ref = interpolate(det.u, x);
        std::string ps = kv({{"alpha", m.alpha}, {"x", x}, {"paths", static_cast<double>(m.paths)}, {"dt", m.dt}});
        double limit = defaults::kMcStderrMultiplier * est.value.std_error + defaults::kMcRelTolerance * std::abs(ref);
        CheckRow cmp = at_most("|MC - deterministic|", "probabilistic-representation", ps, std::abs(est.value.mean - ref), limit);
        cmp.note = "mc " + num_text(est.value.mean) + " +- " + num_text(est.value.std_error) + ", grid " + num_text(ref);
        out.rows.push_back(cmp);
        CheckRow fin = holds("E[exit time^2] finite", "exit-time-moment", ps, std::isfinite(est.exit_time_sq.mean));
        fin.value = est.exit_time_sq.mean;
        fin.relation = "<";
        fin.threshold = defaults::kInf;
        out.rows.push_back(fin);
        out.rows.push_back(at_most("E[exit time^2] half-sample drift", "exit-time-moment", ps,
                                   std::abs(est.exit_time_sq_half.mean / est.exit_time_sq.mean - 1.0), m.moment_stability));
        out.rows.push_back(at_most("paths truncated at max_time", "exit-time-moment", ps, static_cast<double>(est.truncated), 0.0));
        for (const auto& w : est.warnings) out.warnings.push_back(ps + ": " + w);
        out.series.push_back({"mc", x, est.value.mean});
        out.series.push_back({"grid", x, ref});
    }
    return out;
}

// --- norm machinery -----------------------------------------------------------

struct NormParams {
    std::vector<int> sizes;     ///< 1D grids
    std::vector<int> sizes_2d;  ///< nodes per side (square) or per diameter (disk)
    double p = 2.0;
    std::optional<double> theta;
    double c1 = 1.0, c2 = std::exp(2.0);
    std::size_t convexity_samples = 10000;
    std::vector<std::string> convexity_kinds;
    double tail_alpha = 1.0;
    std::vector<double> tail_kappa2;
    int tail_levels = 8;

    static NormParams parse(const ExperimentConfig& c) {
        Params p(c.params, "params");
        Params g(c.grid, "grid");
        NormParams r;
        for (double v : g.nums("sizes", {200, 400, 800})) r.sizes.push_back(static_cast<int>(v));
        for (double v : g.nums("sizes_2d", {24, 48, 96})) r.sizes_2d.push_back(static_cast<int>(v));
        r.p = p.num("p", 2.0);
        if (p.has("theta")) r.theta = p.num("theta", 1.0);
        r.c1 = p.num("band_lo", 1.0);
        r.c2 = p.num("band_hi", std::exp(2.0));
        r.convexity_samples = static_cast<std::size_t>(p.num("convexity_samples", 10000));
        r.convexity_kinds = p.strs("convexity_domains", {"halfline", "interval", "square", "disk"});
        r.tail_alpha = p.num("tail_alpha", 1.0);
        r.tail_kappa2 = p.nums("tail_kappa2", {-0.5, 0.0, 0.5});
        r.tail_levels = p.integer("tail_levels", 8);
        p.done();
        g.done();
        if (r.sizes.size() < 2 || r.sizes_2d.size() < 2) throw InvalidArgument("norm-equivalence needs at least two grid sizes");
        for (int n : r.sizes_2d)
            if (n < 8) throw InvalidArgument("2D grid sizes must be at least 8");
        for (int n : r.sizes)
            if (n < 16) throw InvalidArgument("grid sizes must be at least 16");
        require_alpha(r.tail_alpha, "norm-equivalence tail");
        for (double k : r.tail_kappa2)
            if (!(k > -1.0 && k < r.tail_alpha)) throw DomainError("tail kappa2 must lie in (-1, tail_alpha)");
        if (c.domains.empty()) throw InvalidArgument("norm-equivalence needs at least one domain");
        return r;
    }
};

std::vector<LabelledField> norm_family(const Domain& D) {
    auto psi = [D](const Point& x) { return D.psi_tilde(x).value; };
    auto pw = [psi](double k) { return [psi, k](const Point& x) { return distance_power(psi(x), k); }; };
    return {
        {"psi^0.3", pw(0.3)},
        {"psi^0.6", pw(0.6)},
        {"psi", pw(1.0)},
        {"psi^1.5", pw(1.5)},
        {"psi^2", pw(2.0)},
        {"sin(3x) psi^0.5", [psi](const Point& x) { return std::sin(3.0 * x[0]) * distance_power(psi(x), 0.5); }},
        {"cos(2x+y) psi^0.8", [psi](const Point& x) { return std::cos(2.0 * x[0] + x[1]) * distance_power(psi(x), 0.8); }},
        {"exp(x) psi", [psi](const Point& x) { return std::exp(x[0]) * psi(x); }},
        {"psi^0.4 (1 + x^2)", [psi](const Point& x) { return (1.0 + x[0] * x[0]) * distance_power(psi(x), 0.4); }},
        {"(x + 2) psi^1.2", [psi](const Point& x) { return (x[0] + 2.0) * distance_power(psi(x), 1.2); }},
    };
}

std::shared_ptr<const Grid> grid_for(const Domain& D, int n) {
    const std::string k = D.kind();
    if (k == "interval") return Grid::interval(D, n);
    if (k == "square") return Grid::square(D, n);
    if (k == "disk") return Grid::disk(D, n);
    throw Unsupported("no grid for domain kind " + k);
}

CampaignOutput run_norms(const ExperimentConfig& c) {
    const NormParams r = NormParams::parse(c);
    CampaignOutput out;
    // one task per (domain, order) for the equivalence, then convexity, then tails
    struct EqTask {
        const Domain* domain;
        NormOrder order;
    };
    std::vector<EqTask> eq;
    for (const auto& D : c.domains)
        if (D.bounded())
            for (NormOrder o : {NormOrder::Zero, NormOrder::One}) eq.push_back({&D, o});
    Parallel par(eq.size());
    run_indexed(eq.size(), c.jobs, [&](std::size_t t) {
        const Domain& D = *eq[t].domain;
        CampaignOutput& o = par.parts[t];
        WeightedNormSpec spec;
        spec.p = r.p;
        spec.theta = r.theta.value_or(static_cast<double>(D.dim()));
        spec.order = eq[t].order;
        auto part = build_partition(D, r.c1, r.c2);
        std::vector<std::shared_ptr<const Grid>> grids;
        const auto& sizes = D.dim() == 1 ? r.sizes : r.sizes_2d;
        for (int n : sizes) grids.push_back(grid_for(D, n));
        auto rep = norm_equivalence(norm_family(D), grids, spec, part);
        std::string base = D.kind() + " order=" + to_string(spec.order) + " " + kv({{"p", spec.p}, {"theta", spec.theta}});
        for (std::size_t g = 0; g < grids.size(); ++g) {
            o.rows.push_back(info("equivalence constant", "dyadic-integral-equivalence",
                                  base + " n=" + std::to_string(sizes[g]), rep.constants[g]));
            for (std::size_t k = 0; k < rep.labels.size(); ++k)
                o.series.push_back({base + " " + rep.labels[k], static_cast<double>(sizes[g]), rep.ratios[g][k]});
        }
        o.rows.push_back(at_most("constant spread over refinements", "dyadic-integral-equivalence", base, rep.spread,
                                 defaults::kNormConstantStability));
    });
    out = par.merge();

    for (const auto& kind : r.convexity_kinds) {
        Domain D = kind == "halfline" ? Domain(HalfLine{})
                   : kind == "interval" ? Domain(Interval{-1.0, 1.0})
                   : kind == "square"   ? Domain(Square{1.0})
                   : kind == "disk"     ? Domain(Disk{1.0})
                                        : throw InvalidArgument("unknown convexity domain " + kind);
        std::string ps = kind + " samples=" + std::to_string(r.convexity_samples);
        try {
            auto rep = convexity_gap_check(D, r.convexity_samples, c.seed);
            CheckRow row = at_least("min concavity gap of the distance", "distance-concavity", ps, rep.worst_gap,
                                    -defaults::kConvexitySlack);
            out.rows.push_back(row);
        } catch (const InvalidArgument& e) {
            CheckRow row = holds("distance concavity", "distance-concavity", ps, false);
            row.note = e.what();
            out.rows.push_back(row);
        }
    }

    for (const auto& D : c.domains) {
        auto m = make_measure(c.measure, r.tail_alpha, D.dim());
        auto samples = D.graded_points(r.tail_levels, 1);
        for (double k2 : r.tail_kappa2) {
            auto rep = tail_integral_check(D, m, r.tail_alpha, k2, samples, defaults::kQuadratureStability);
            std::string ps = D.kind() + " " + kv({{"kappa1", r.tail_alpha}, {"kappa2", k2}});
            CheckRow g = at_most("tail ratio growth under refinement", "tail-integral-bound", ps, std::abs(rep.growth),
                                 defaults::kQuadratureStability);
            g.note = "sup " + num_text(rep.sup_ratio) + ", refined " + num_text(rep.refined_sup_ratio);
            out.rows.push_back(g);
        }
    }
    return out;
}

}  // namespace

// --- config -------------------------------------------------------------------

ExperimentConfig ExperimentConfig::preset(CampaignKind kind) {
    ExperimentConfig c;
    c.kind = kind;
    c.name = to_string(kind);
    if (const char* env = std::getenv("NLAB_OUT_DIR"); env && *env) c.output_dir = env;
    switch (kind) {
        case CampaignKind::Kernels:
            break;
        case CampaignKind::Symbol:
        case CampaignKind::Hardy:
            c.measure = {{"preset", "raw"}};
            break;
        case CampaignKind::Elliptic:
        case CampaignKind::ThetaSweep:
        case CampaignKind::McCompare:
            c.measure = {{"preset", "fractional_laplacian"}};
            c.domains = {Domain(Interval{-1.0, 1.0})};
            break;
        case CampaignKind::Barrier:
            c.measure = {{"preset", "fractional_laplacian"}};
            c.domains = {Domain(Interval{0.0, 1.0}), Domain(Disk{1.0}), Domain(Square{1.0})};
            break;
        case CampaignKind::Parabolic:
            c.domains = {Domain(Square{1.0})};
            break;
        case CampaignKind::NormEquivalence:
            c.measure = {{"preset", "fractional_laplacian"}};
            c.domains = {Domain(Interval{0.0, 1.0})};
            break;
    }
    return c;
}

void ExperimentConfig::validate() const {
    if (output_dir.empty()) throw InvalidArgument("output directory is empty");
    switch (kind) {
        case CampaignKind::Kernels: KernelParams::parse(*this); break;
        case CampaignKind::Symbol: SymbolParams::parse(*this); break;
        case CampaignKind::Elliptic: EllipticParams::parse(*this); break;
        case CampaignKind::Barrier: BarrierParams::parse(*this); break;
        case CampaignKind::Hardy: HardyParams::parse(*this); break;
        case CampaignKind::ThetaSweep: ThetaParams::parse(*this); break;
        case CampaignKind::Parabolic: ParabolicParams::parse(*this); break;
        case CampaignKind::McCompare: McParams::parse(*this); break;
        case CampaignKind::NormEquivalence: NormParams::parse(*this); break;
    }
    if (!measure.is_null()) {
        // surfaces schema errors before compute; alpha comes from the campaign when absent
        Json m = measure;
        if (!m.contains("alpha")) m["alpha"] = 1.0;
        measure_from_json(m);
    }
}

double campaign_budget(CampaignKind kind) {
    switch (kind) {
        case CampaignKind::Kernels: return defaults::kKernelCampaignBudget;
        case CampaignKind::Elliptic: return defaults::kEllipticCampaignBudget;
        case CampaignKind::McCompare: return defaults::kMcCampaignBudget;
        default: return 0.0;
    }
}

CampaignOutput run_campaign(const ExperimentConfig& c) {
    c.validate();
    switch (c.kind) {
        case CampaignKind::Kernels: return run_kernels(c);
        case CampaignKind::Symbol: return run_symbol(c);
        case CampaignKind::Elliptic: return run_elliptic(c);
        case CampaignKind::Barrier: return run_barrier(c);
        case CampaignKind::Hardy: return run_hardy(c);
        case CampaignKind::ThetaSweep: return run_theta_sweep(c);
        case CampaignKind::Parabolic: return run_parabolic(c);
        case CampaignKind::McCompare: return run_mc(c);
        case CampaignKind::NormEquivalence: return run_norms(c);
    }
    throw InvalidArgument("unknown campaign");
}

}  // namespace nonlocal
