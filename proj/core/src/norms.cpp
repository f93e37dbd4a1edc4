#include "nonlocal/norms.hpp"

#include "nonlocal/error.hpp"
#include "nonlocal/levy.hpp"
#include "nonlocal/operator.hpp"
#include "nonlocal/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <variant>

namespace nonlocal {

std::string to_string(NormOrder o) {
    switch (o) {
    case NormOrder::Zero: return "0";
    case NormOrder::One: return "1";
    case NormOrder::HalfAlpha: return "alpha/2";
    case NormOrder::Alpha: return "alpha";
    }
    return "?";
}

void WeightedNormSpec::validate() const {
    if (!(p > 1.0) || !std::isfinite(p)) throw InvalidArgument("norm exponent p must exceed 1");
    if (!std::isfinite(theta)) throw InvalidArgument("theta must be finite");
    if ((order == NormOrder::HalfAlpha || order == NormOrder::Alpha) && !(alpha > 0.0 && alpha < 2.0))
        throw DomainError("fractional norm orders need alpha in (0, 2)");
}

double WeightedNormSpec::smoothness() const {
    switch (order) {
    case NormOrder::Zero: return 0.0;
    case NormOrder::One: return 1.0;
    case NormOrder::HalfAlpha: return 0.5 * alpha;
    case NormOrder::Alpha: return alpha;
    }
    return 0.0;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// int_{t1}^{t2} t^s dt, 0 <= t1 <= t2
double power_integral(double t1, double t2, double s) {
    if (t2 <= t1) return 0.0;
    if (t1 == 0.0 && s <= -1.0) return kInf;
    if (s == -1.0) return std::log(t2 / t1);
    return (std::pow(t2, s + 1.0) - (t1 == 0.0 ? 0.0 : std::pow(t1, s + 1.0))) / (s + 1.0);
}

// 1D rule on [lo, hi]: plain Gauss-Legendre, or graded toward a boundary end.
// The innermost sliver uses Gauss-Jacobi for t^s with the weight divided
// back out, so integrands behaving like dist^s there are integrated exactly.
struct Rule1d {
    std::vector<double> x, w;
};

Rule1d make_rule(double lo, double hi, int edge, double s) {
    Rule1d r;
    const auto& gl = gauss_legendre(8);
    auto add_panel = [&](double a, double b) {
        for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
            r.x.push_back(0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[k]);
            r.w.push_back(0.5 * (b - a) * gl.weights[k]);
        }
    };
    if (edge == 0) {
        add_panel(lo, hi);
        return r;
    }
    const int levels = 24;
    const double len = hi - lo;
    for (int k = 0; k < levels; ++k) {
        double a = len * std::ldexp(1.0, -(k + 1)), b = len * std::ldexp(1.0, -k);
        if (edge < 0) add_panel(lo + a, lo + b);
        else add_panel(hi - b, hi - a);
    }
    double eps = len * std::ldexp(1.0, -levels);
    GaussRule gj = gauss_jacobi(6, 0.0, s);
    double scale = std::pow(0.5 * eps, s + 1.0);
    for (std::size_t k = 0; k < gj.nodes.size(); ++k) {
        double t = 0.5 * eps * (1.0 + gj.nodes[k]);
        r.x.push_back(edge < 0 ? lo + t : hi - t);
        r.w.push_back(gj.weights[k] * scale * std::pow(t, -s));
    }
    return r;
}

double square_cell_weight(double side, const Cell& c, double s) {
    auto edge = [&](double lo, double hi) { return lo <= 0.0 ? -1 : (hi >= side ? 1 : 0); };
    Rule1d rx = make_rule(c.lo[0], c.hi[0], edge(c.lo[0], c.hi[0]), s);
    Rule1d ry = make_rule(c.lo[1], c.hi[1], edge(c.lo[1], c.hi[1]), s);
    double total = 0.0;
    for (std::size_t i = 0; i < rx.x.size(); ++i) {
        double dx = std::min(rx.x[i], side - rx.x[i]);
        for (std::size_t j = 0; j < ry.x.size(); ++j) {
            double dy = std::min(ry.x[j], side - ry.x[j]);
            total += rx.w[i] * ry.w[j] * std::pow(std::min(dx, dy), s);
        }
    }
    return total;
}

// recursive subdivision toward the boundary with the domain mask
double masked_box(const Domain& d, const Point& lo, const Point& hi, double s, int depth) {
    const auto& gl = gauss_legendre(4);
    double diag = std::hypot(hi[0] - lo[0], hi[1] - lo[1]);
    Point mid = point2(0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1]));
    if (depth > 0 && d.dist(mid) < diag) {
        double total = 0.0;
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                Point l = point2(a ? mid[0] : lo[0], b ? mid[1] : lo[1]);
                Point h = point2(a ? hi[0] : mid[0], b ? hi[1] : mid[1]);
                total += masked_box(d, l, h, s, depth - 1);
            }
        }
        return total;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
            Point x = point2(mid[0] + 0.5 * (hi[0] - lo[0]) * gl.nodes[i], mid[1] + 0.5 * (hi[1] - lo[1]) * gl.nodes[j]);
            double dist = d.dist(x);
            if (dist > 0.0) total += 0.25 * (hi[0] - lo[0]) * (hi[1] - lo[1]) * gl.weights[i] * gl.weights[j] * std::pow(dist, s);
        }
    }
    return total;
}

double centre_weight(const Grid& g, std::size_t i, double s) {
    double d = g.domain().dist(g.node(i));
    return std::pow(d, s) * g.cell(i).volume(g.dim());
}

// sum_i |v_i|^p w_i(s) with the centre-value fallback for nonintegrable cells
double weighted_power_sum(const Grid& g, const Eigen::VectorXd& v, double p, double s, std::vector<std::string>* warnings,
                          const std::vector<double>* factors = nullptr) {
    double total = 0.0;
    bool fallback = false;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double a = std::abs(v[static_cast<Eigen::Index>(i)]);
        if (a == 0.0) continue;
        double w = cell_weight(g, i, s);
        if (!std::isfinite(w)) {
            w = centre_weight(g, i, s);
            fallback = true;
        }
        if (factors) w *= (*factors)[i];
        total += std::pow(a, p) * w;
    }
    if (fallback && warnings) warnings->push_back("weight nonintegrable; relies on u decay");
    return total;
}

const Interval& require_interval(const Grid& g, const char* what) {
    const auto* iv = std::get_if<Interval>(&g.domain().shape());
    if (!iv) throw Unsupported(std::string(what) + " is implemented on Interval grids only");
    return *iv;
}

// L = -(-Delta)^{gamma/2} on the grid's interior nodes
Eigen::MatrixXd fractional_matrix(const Grid& g, double gamma) {
    require_interval(g, "fractional norm order");
    StableOperator op(SpectralMeasure::fractional_laplacian(gamma, 1));
    return assemble_matrix_1d(op, g.domain(), static_cast<int>(g.size()));
}

}  // namespace

double cell_weight(const Grid& g, std::size_t i, double s) {
    const Cell& c = g.cell(i);
    const Domain& d = g.domain();
    if (g.dim() == 1) {
        double lo = c.lo[0], hi = c.hi[0];
        if (std::holds_alternative<HalfLine>(d.shape())) return power_integral(lo, hi, s);
        const auto& iv = std::get<Interval>(d.shape());
        double m = 0.5 * (iv.a + iv.b);
        double total = 0.0;
        if (lo < m) total += power_integral(lo - iv.a, std::min(hi, m) - iv.a, s);
        if (hi > m) total += power_integral(iv.b - hi, iv.b - std::max(lo, m), s);
        return total;
    }
    if (const auto* sq = std::get_if<Square>(&d.shape())) {
        bool touches = c.lo[0] <= 0.0 || c.lo[1] <= 0.0 || c.hi[0] >= sq->side || c.hi[1] >= sq->side;
        if (touches && s <= -1.0) return kInf;
        return square_cell_weight(sq->side, c, s);
    }
    if (s <= -1.0 && g.boundary_cell(i)) return kInf;
    return masked_box(d, c.lo, c.hi, s, 6);
}

double weighted_Lp(const GridFunction& u, const WeightedNormSpec& spec, std::vector<std::string>* warnings) {
    spec.validate();
    const Grid& g = u.grid();
    return std::pow(weighted_power_sum(g, u.values(), spec.p, spec.theta - g.dim(), warnings), 1.0 / spec.p);
}

double weighted_sobolev_int(const GridFunction& u, const WeightedNormSpec& spec, std::vector<std::string>* warnings) {
    spec.validate();
    if (spec.order != NormOrder::Zero && spec.order != NormOrder::One)
        throw InvalidArgument("integral Sobolev norm takes order 0 or 1");
    double value = weighted_Lp(u, spec, warnings);
    if (spec.order == NormOrder::Zero) return value;
    const Grid& g = u.grid();
    Eigen::VectorXd grad2 = Eigen::VectorXd::Zero(u.values().size());
    for (int axis = 0; axis < g.dim(); ++axis) grad2 += u.derivative(axis).cwiseAbs2();
    Eigen::VectorXd grad = grad2.cwiseSqrt();
    // |d D u|^p d^{theta-d} = |D u|^p d^{theta-d+p}
    value += std::pow(weighted_power_sum(g, grad, spec.p, spec.theta - g.dim() + spec.p, warnings), 1.0 / spec.p);
    return value;
}

BandSum dyadic_bands(const GridFunction& u, const WeightedNormSpec& spec, const DyadicPartition& partition) {
    spec.validate();
    const Grid& g = u.grid();
    const int dim = g.dim();
    const double p = spec.p;
    double psi_lo = kInf, psi_hi = 0.0;
    std::vector<double> vol(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        double v = partition.domain().psi_tilde(g.node(i)).value;
        psi_lo = std::min(psi_lo, v);
        psi_hi = std::max(psi_hi, v);
        vol[i] = g.cell(i).volume(dim);
    }
    BandSum out;
    if (g.size() == 0) return out;
    auto [n_lo, n_hi] = partition.active_range(psi_lo, psi_hi);
    const double gamma = spec.smoothness();
    Eigen::MatrixXd frac;
    if (spec.order == NormOrder::HalfAlpha || spec.order == NormOrder::Alpha) frac = fractional_matrix(g, gamma);

    for (int n = n_lo; n <= n_hi; ++n) {
        Eigen::VectorXd v(static_cast<Eigen::Index>(g.size()));
        bool any = false;
        for (std::size_t i = 0; i < g.size(); ++i) {
            double z = partition.zeta(n, g.node(i));
            v[static_cast<Eigen::Index>(i)] = z * u[i];
            any = any || z != 0.0;
        }
        if (!any) continue;
        double local = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) local += std::pow(std::abs(v[static_cast<Eigen::Index>(i)]), p) * vol[i];
        if (spec.order == NormOrder::One) {
            GridFunction zv(u.grid_ptr(), v);
            Eigen::VectorXd grad2 = Eigen::VectorXd::Zero(v.size());
            for (int axis = 0; axis < dim; ++axis) grad2 += zv.derivative(axis).cwiseAbs2();
            double s = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) s += std::pow(grad2[static_cast<Eigen::Index>(i)], 0.5 * p) * vol[i];
            local += std::exp(-n * p) * s;
        } else if (frac.size() > 0) {
            Eigen::VectorXd w = -(frac * v);
            double s = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) s += std::pow(std::abs(w[static_cast<Eigen::Index>(i)]), p) * vol[i];
            local += std::exp(-n * gamma * p) * s;
        }
        double term = std::exp(n * (dim - spec.theta)) * local;
        out.indices.push_back(n);
        out.terms.push_back(term);
        out.total += term;
    }
    return out;
}

double dyadic_norm(const GridFunction& u, const WeightedNormSpec& spec, const DyadicPartition& partition,
                   std::vector<std::string>* warnings) {
    BandSum b = dyadic_bands(u, spec, partition);
    if (b.total == 0.0) return 0.0;
    if (warnings && b.terms.size() > 2) {
        // the finest band is cut by the grid; on the half-line so is the coarsest
        double edge = b.terms.back();
        if (!partition.domain().bounded()) edge = std::max(edge, b.terms.front());
        if (edge > 0.01 * b.total) {
            std::ostringstream os;
            os << "truncated band range [" << b.indices.front() << ", " << b.indices.back() << "]: an extreme band carries "
               << edge / b.total << " of the sum";
            warnings->push_back(os.str());
        }
    }
    return std::pow(b.total, 1.0 / spec.p);
}

std::pair<double, double> theta_window(int dim, double p) { return {dim - 1.0, dim - 1.0 + p}; }

EstimateRatio estimate_ratio(const GridFunction& u, const GridFunction& f, double p, double theta, double alpha,
                             bool enforce_window) {
    if (u.grid_ptr() != f.grid_ptr()) throw InvalidArgument("u and f must share a grid");
    if (!(p > 1.0)) throw InvalidArgument("p must exceed 1");
    if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("alpha must lie in (0, 2)");
    const Grid& g = u.grid();
    require_interval(g, "estimate_ratio");
    EstimateRatio r;
    auto [w_lo, w_hi] = theta_window(g.dim(), p);
    r.inside_window = theta > w_lo && theta < w_hi;
    if (enforce_window && !r.inside_window) {
        std::ostringstream os;
        os << "theta = " << theta << " outside the admissible window (" << w_lo << ", " << w_hi << ")";
        throw DomainError(os.str());
    }
    const double s = theta - g.dim();
    const double q = 0.5 * alpha * p;
    Eigen::VectorXd lam = -(fractional_matrix(g, alpha) * u.values());

    // psi_tilde / d at the nodes, raised to the weight power
    std::vector<double> minus(g.size()), plus(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        double ratio = g.domain().psi_tilde(g.node(i)).value / g.domain().dist(g.node(i));
        minus[i] = std::pow(ratio, -q);
        plus[i] = std::pow(ratio, q);
    }
    auto norms = [&](bool use_psi) {
        double a = weighted_power_sum(g, u.values(), p, s - q, nullptr, use_psi ? &minus : nullptr);
        double b = weighted_power_sum(g, lam, p, s + q, nullptr, use_psi ? &plus : nullptr);
        double c = weighted_power_sum(g, f.values(), p, s + q, nullptr, use_psi ? &plus : nullptr);
        return std::array<double, 2>{std::pow(a, 1.0 / p) + std::pow(b, 1.0 / p), std::pow(c, 1.0 / p)};
    };
    auto psi = norms(true);
    auto dist = norms(false);
    if (!(psi[1] > 0.0) || !(dist[1] > 0.0)) throw InvalidArgument("estimate ratio: data norm is zero");
    r.ratio_psi = psi[0] / psi[1];
    r.ratio_dist = dist[0] / dist[1];
    r.solution_norm = psi[0];
    r.data_norm = psi[1];
    return r;
}

NormEquivalenceReport norm_equivalence(const std::vector<LabelledField>& family,
                                       const std::vector<std::shared_ptr<const Grid>>& grids,
                                       const WeightedNormSpec& spec, const DyadicPartition& partition) {
    if (family.empty() || grids.empty()) throw InvalidArgument("norm equivalence needs functions and grids");
    NormEquivalenceReport rep;
    for (const auto& f : family) rep.labels.push_back(f.label);
    for (const auto& g : grids) {
        rep.grid_sizes.push_back(static_cast<int>(g->size()));
        std::vector<double> row;
        double c = 1.0;
        for (const auto& f : family) {
            GridFunction u = GridFunction::sample(g, f.f);
            double integral = weighted_sobolev_int(u, spec);
            double dyadic = dyadic_norm(u, spec, partition);
            if (!(integral > 0.0)) throw InvalidArgument("norm equivalence: '" + f.label + "' has zero integral norm");
            double r = dyadic / integral;
            row.push_back(r);
            c = std::max({c, r, 1.0 / r});
        }
        rep.ratios.push_back(row);
        rep.constants.push_back(c);
    }
    auto [mn, mx] = std::minmax_element(rep.constants.begin(), rep.constants.end());
    rep.spread = *mx / *mn - 1.0;
    return rep;
}

}  // namespace nonlocal
