#include "nonlocal/operator.hpp"

#include "nonlocal/defaults.hpp"
#include "nonlocal/error.hpp"
#include "nonlocal/quadrature.hpp"
#include "nonlocal/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace nonlocal {

QuadratureControls QuadratureControls::refined() const {
    QuadratureControls c = *this;
    c.panel_points *= 2;
    c.inner_points *= 2;
    c.inner_radius *= 0.5;
    c.tolerance *= 0.1;
    c.density_directions *= 2;
    if (std::isfinite(c.max_panel_width)) c.max_panel_width *= 0.5;
    return c;
}

namespace {

bool canonical(const Point& p) {
    for (int i = 0; i < kMaxDim; ++i) {
        if (p[i] > 1e-14) return true;
        if (p[i] < -1e-14) return false;
    }
    return true;
}

}  // namespace

StableOperator::StableOperator(SpectralMeasure measure, QuadratureControls controls)
    : measure_(std::move(measure)), controls_(controls) {
    if (!measure_.is_symmetric()) throw InvalidArgument("operator needs a symmetric measure (see symmetrized())");
    if (controls_.tail_growth && !(*controls_.tail_growth < measure_.alpha())) throw InvalidArgument("tail_growth must be below alpha");
    if (controls_.panel_points < 2 || controls_.inner_points < 2 || !(controls_.inner_radius > 0.0) ||
        !(controls_.panel_growth > 1.0) || !(controls_.max_panel_width > 0.0) || !(controls_.tolerance > 0.0))
        throw InvalidArgument("invalid quadrature controls");
    int res = controls_.density_directions + controls_.density_directions % 2;
    for (const auto& a : measure_.discretized(res)) {
        if (a.weight > 0.0 && canonical(a.direction)) pairs_.push_back(a);
    }
}

namespace {

struct PanelTrace {
    std::vector<std::string> lines;
    std::size_t dropped = 0;
    void add(double lo, double hi, double coarse, double fine) {
        if (lines.size() >= 5) {
            ++dropped;
            return;
        }
        std::ostringstream os;
        os.precision(10);
        os << "[" << lo << ", " << hi << "] " << coarse << " vs " << fine;
        lines.push_back(os.str());
    }
    std::string str() const {
        std::string s;
        for (const auto& l : lines) s += "\n  " + l;
        if (dropped) s += "\n  ... " + std::to_string(dropped) + " more";
        return s;
    }
};

// GL panel with an embedded half-order check, bisecting on disagreement
double adaptive_panel(const RealFunction& f, double lo, double hi, int n, double tol, int depth, PanelTrace& trace,
                      bool& failed) {
    const auto& fine_rule = gauss_legendre(n);
    const auto& coarse_rule = gauss_legendre(std::max(2, n / 2));
    double fine = integrate_panel(f, lo, hi, fine_rule);
    double coarse = integrate_panel(f, lo, hi, coarse_rule);
    if (std::abs(fine - coarse) <= tol * std::max(1.0, std::abs(fine)) || !std::isfinite(fine)) {
        if (!std::isfinite(fine)) failed = true;
        return fine;
    }
    if (depth <= 0) {
        trace.add(lo, hi, coarse, fine);
        failed = true;
        return fine;
    }
    double mid = 0.5 * (lo + hi);
    return adaptive_panel(f, lo, mid, n, tol, depth - 1, trace, failed) +
           adaptive_panel(f, mid, hi, n, tol, depth - 1, trace, failed);
}

}  // namespace

double radial_integral(const StableOperator& op, const Field& u, const Point& x, const Point& theta,
                       const std::optional<Domain>& support) {
    const auto& c = op.controls();
    const double alpha = op.alpha();
    const double u0 = u(x);
    auto g = [&](double r) { return u(axpy(x, r, theta)) + u(axpy(x, -r, theta)) - 2.0 * u0; };

    std::vector<double> kinks;
    double reach = defaults::kInf;  // beyond this both rays are outside the support
    if (support) {
        kinks = support->ray_kinks(x, theta);
        for (double k : support->ray_kinks(x, negated(theta))) kinks.push_back(k);
        std::sort(kinks.begin(), kinks.end());
        auto [lo, hi] = support->line_span(x, theta);
        if (!(lo < hi)) {
            reach = 0.0;
        } else if (std::isfinite(lo) && std::isfinite(hi)) {
            reach = std::max(std::abs(lo), std::abs(hi));
            if (lo > 0.0 || hi < 0.0) kinks.push_back(std::min(std::abs(lo), std::abs(hi)));
        }
        std::sort(kinks.begin(), kinks.end());
    }
    if (reach == 0.0) {
        if (u0 != 0.0) throw InvalidArgument("u is nonzero at a point whose line misses the declared support");
        return 0.0;
    }

    double radius = c.tail_radius;
    if (!(radius > 0.0)) {
        radius = std::pow(2.0 * c.oscillation / (alpha * c.tolerance), 1.0 / alpha);
        radius = std::min(radius, defaults::kMaxTailRadius);
    }
    double end = std::min(radius, reach);

    // inner region: Gauss-Jacobi for the weight r^{1-alpha} applied to g / r^2
    double r0 = std::min(c.inner_radius, end);
    if (!kinks.empty()) r0 = std::min(r0, 0.25 * kinks.front());
    double umax = std::abs(u0);
    double slope = 0.0;  // |u'| estimate: the argument x + r theta carries a rounding error of eps |x|
    auto inner = [&](int n, double& noise) {
        GaussRule rule = gauss_jacobi(n, 0.0, 1.0 - alpha);
        double s = 0.0, inv = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            double r = 0.5 * r0 * (1.0 + rule.nodes[i]);
            double up = u(axpy(x, r, theta)), um = u(axpy(x, -r, theta));
            umax = std::max({umax, std::abs(up), std::abs(um)});
            slope = std::max(slope, std::abs(up - um) / (2.0 * r));
            s += rule.weights[i] * (up + um - 2.0 * u0) / (r * r);
            inv += rule.weights[i] / (r * r);
        }
        double scale = std::pow(0.5 * r0, 2.0 - alpha);
        noise = inv * scale;  // times the per-sample rounding level: floor of the second differences
        return s * scale;
    };
    double noise_c = 0.0, noise_f = 0.0;
    double in_c = inner(std::max(2, c.inner_points / 2), noise_c);
    double in_f = inner(c.inner_points, noise_f);
    double floor = 8.0 * std::numeric_limits<double>::epsilon() * (umax + (norm(x) + r0) * slope) * (noise_c + noise_f);
    PanelTrace trace;
    bool failed = false;
    double total = in_f;

    auto f = [&](double r) { return g(r) * std::pow(r, -1.0 - alpha); };
    std::vector<double> pts{r0};
    for (double k : kinks) {
        if (k > pts.back() * (1.0 + 1e-14) && k < end) pts.push_back(k);
    }
    // segments ending at a kink: tanh-sinh copes with integrable blow-up there
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double err = 0.0;
        try {
            total += integrate_endpoint_singular(f, pts[i], pts[i + 1], c.tolerance, &err);
        } catch (const ConvergenceError&) {
            trace.add(pts[i], pts[i + 1], 0.0, err);
            failed = true;
        }
    }
    // last kink to the end: geometric panels (exact if the last kink is the support exit)
    double a = pts.back();
    if (end > a) {
        bool singular_start = pts.size() > 1;
        if (singular_start && std::isfinite(reach) && end == reach) {
            // remaining stretch lies between the support exits; still piecewise smooth
            double err = 0.0;
            try {
                total += integrate_endpoint_singular(f, a, end, c.tolerance, &err);
            } catch (const ConvergenceError&) {
                trace.add(a, end, 0.0, err);
                failed = true;
            }
        } else {
            double lo = a;
            double width = singular_start ? a : std::max(a, r0);
            while (lo < end) {
                double w = std::min({width, c.max_panel_width, end - lo});
                double hi = lo + w;
                if (singular_start && lo == a) {
                    double err = 0.0;
                    try {
                        total += integrate_endpoint_singular(f, lo, hi, c.tolerance, &err);
                    } catch (const ConvergenceError&) {
                        trace.add(lo, hi, 0.0, err);
                        failed = true;
                    }
                } else {
                    total += adaptive_panel(f, lo, hi, c.panel_points, c.tolerance, c.max_bisections, trace, failed);
                }
                lo = hi;
                width = w * c.panel_growth;
                if (width > c.max_panel_width) width = c.max_panel_width;
            }
        }
    }
    // beyond `end`: -2u(x) r^{-1-alpha}, plus u along the rays when truncated early
    total += -2.0 * u0 * std::pow(end, -alpha) / alpha;
    if (c.tail_growth && end < reach) {
        double far = g(end) + 2.0 * u0;
        if (far != 0.0) total += far * std::pow(end, -alpha) / (alpha - *c.tail_growth);
    }
    // the inner region is judged against the whole radial integral
    if (std::abs(in_f - in_c) > c.tolerance * std::max({1.0, std::abs(in_f), std::abs(total)}) + floor) {
        trace.add(0.0, r0, in_c, in_f);
        failed = true;
    }
    if (failed) {
        std::ostringstream os;
        os << "operator quadrature did not converge at x = (" << x[0] << ", " << x[1] << "), theta = (" << theta[0]
           << ", " << theta[1] << "); unresolved panels:" << trace.str();
        throw ConvergenceError(os.str());
    }
    return total;
}

double apply(const StableOperator& op, const Field& u, const Point& x, const std::optional<Domain>& support) {
    if (support && support->dim() != op.dim()) throw InvalidArgument("support and operator dimensions differ");
    double s = 0.0;
    for (const auto& p : op.pairs()) s += p.weight * radial_integral(op, u, x, p.direction, support);
    return s;
}

// --- 1D stiffness ----------------------------------------------------------------

double hat_weight(double alpha, int k) {
    if (k < 1) throw InvalidArgument("hat_weight needs k >= 1");
    auto G = [&](double s) { return std::abs(alpha - 1.0) < 1e-14 ? std::log(s) : std::pow(s, 1.0 - alpha) / (1.0 - alpha); };
    auto H = [&](double s) { return std::pow(s, -alpha) / (-alpha); };
    const double kk = k;
    if (k > 24) {
        // closed form loses ~k^2 ulps here; Gauss-Legendre is exact to rounding
        const auto& rule = gauss_legendre(12);
        auto left = [&](double s) { return (s - (kk - 1.0)) * std::pow(s, -1.0 - alpha); };
        auto right = [&](double s) { return ((kk + 1.0) - s) * std::pow(s, -1.0 - alpha); };
        return integrate_panel(left, kk - 1.0, kk, rule) + integrate_panel(right, kk, kk + 1.0, rule);
    }
    double right = ((kk + 1.0) * H(kk + 1.0) - G(kk + 1.0)) - ((kk + 1.0) * H(kk) - G(kk));
    if (k == 1) return right;
    double left = (G(kk) - (kk - 1.0) * H(kk)) - (G(kk - 1.0) - (kk - 1.0) * H(kk - 1.0));
    return left + right;
}

Eigen::MatrixXd unit_stiffness_1d(double alpha, int n, double h) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("alpha must lie in (0, 2)");
    if (n < 1 || !(h > 0.0)) throw InvalidArgument("stiffness needs n >= 1 and h > 0");
    const double scale = std::pow(h, -alpha);
    std::vector<double> band(static_cast<std::size_t>(n));
    band[0] = -(2.0 / (2.0 - alpha) + 2.0 / alpha) * scale;
    for (int k = 1; k < n; ++k) {
        band[static_cast<std::size_t>(k)] = (hat_weight(alpha, k) + (k == 1 ? 1.0 / (2.0 - alpha) : 0.0)) * scale;
    }
    for (double v : band) {
        if (!std::isfinite(v) || (v == 0.0 && n > 1)) throw DomainError("stiffness weights under- or overflow for this alpha and h");
    }
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) A(i, j) = band[static_cast<std::size_t>(std::abs(i - j))];
    }
    return A;
}

namespace {

// weight of the +e_axis pair; checks that the measure is purely axial
std::vector<double> axis_weights(const StableOperator& op) {
    const auto& m = op.measure();
    if (m.has_density()) throw InvalidArgument("axis-atom assembly needs a purely atomic measure");
    std::vector<double> plus(static_cast<std::size_t>(m.dim()), 0.0), minus(static_cast<std::size_t>(m.dim()), 0.0);
    for (const auto& a : m.atoms()) {
        int axis = -1;
        for (int i = 0; i < m.dim(); ++i) {
            if (std::abs(std::abs(a.direction[i]) - 1.0) < 1e-12) axis = i;
        }
        if (axis < 0) {
            if (a.weight == 0.0) continue;
            throw InvalidArgument("measure has an atom off the coordinate axes");
        }
        (a.direction[axis] > 0 ? plus : minus)[static_cast<std::size_t>(axis)] += a.weight;
    }
    for (std::size_t i = 0; i < plus.size(); ++i) {
        if (std::abs(plus[i] - minus[i]) > defaults::kSymmetryTolerance * std::max(1.0, plus[i]))
            throw InvalidArgument("axis atoms must have equal weights at +e_i and -e_i");
    }
    return plus;
}

}  // namespace

Eigen::MatrixXd assemble_matrix_1d(const StableOperator& op, const Domain& interval, int n) {
    const auto* iv = std::get_if<Interval>(&interval.shape());
    if (!iv) throw InvalidArgument("assemble_matrix_1d needs an Interval domain");
    if (op.dim() != 1) throw InvalidArgument("assemble_matrix_1d needs a one-dimensional measure");
    double w = axis_weights(op)[0];
    double h = (iv->b - iv->a) / (n + 1);
    return w * unit_stiffness_1d(op.alpha(), n, h);
}

Eigen::VectorXd AxisOperator2d::apply(const Eigen::VectorXd& v) const {
    Eigen::Map<const Eigen::MatrixXd> V(v.data(), n, n);  // V(i, j): i = x index
    Eigen::MatrixXd out = wx * (unit * V) + wy * (V * unit.transpose());
    return Eigen::Map<const Eigen::VectorXd>(out.data(), size());
}

Eigen::SparseMatrix<double> AxisOperator2d::sparse() const {
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(static_cast<std::size_t>(size()) * static_cast<std::size_t>(2 * n));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            Eigen::Index row = static_cast<Eigen::Index>(j) * n + i;
            for (int k = 0; k < n; ++k) {
                double vx = wx * unit(i, k);
                if (k == i) {
                    // diagonal collects both axes
                    t.emplace_back(row, row, vx + wy * unit(j, j));
                    continue;
                }
                if (vx != 0.0) t.emplace_back(row, static_cast<Eigen::Index>(j) * n + k, vx);
            }
            for (int k = 0; k < n; ++k) {
                if (k == j) continue;
                double vy = wy * unit(j, k);
                if (vy != 0.0) t.emplace_back(row, static_cast<Eigen::Index>(k) * n + i, vy);
            }
        }
    }
    Eigen::SparseMatrix<double> S(size(), size());
    S.setFromTriplets(t.begin(), t.end());
    return S;
}

Eigen::VectorXd AxisOperator2d::row_sums() const { return apply(Eigen::VectorXd::Ones(size())); }

AxisOperator2d assemble_matrix_2d_axes(const StableOperator& op, const Domain& square, int n) {
    const auto* sq = std::get_if<Square>(&square.shape());
    if (!sq) throw InvalidArgument("assemble_matrix_2d_axes needs a Square domain");
    if (op.dim() != 2) throw InvalidArgument("assemble_matrix_2d_axes needs a two-dimensional measure");
    auto w = axis_weights(op);
    AxisOperator2d A;
    A.n = n;
    A.h = sq->side / (n + 1);
    A.wx = w[0];
    A.wy = w[1];
    A.unit = unit_stiffness_1d(op.alpha(), n, A.h);
    return A;
}

// --- indicator decay -------------------------------------------------------------

double indicator_image(const StableOperator& op, const Domain& d, const Point& x) {
    if (!d.contains(x)) throw InvalidArgument("indicator_image needs x inside the domain");
    const double alpha = op.alpha();
    double s = 0.0;
    for (const auto& p : op.pairs()) {
        auto [lo, hi] = d.line_span(x, p.direction);
        double t = 0.0;
        if (std::isfinite(hi)) t += std::pow(hi, -alpha);
        if (std::isfinite(lo)) t += std::pow(-lo, -alpha);
        s -= p.weight * t / alpha;
    }
    return s;
}

IndicatorDecayReport indicator_decay_check(const StableOperator& op, const Domain& d, const std::vector<Point>& x_samples,
                                           double slope_tolerance) {
    IndicatorDecayReport rep;
    for (const auto& x : x_samples) {
        rep.distances.push_back(d.dist(x));
        rep.values.push_back(indicator_image(op, d, x));
    }
    rep.expected = -op.alpha();
    rep.slope = fit_loglog(rep.distances, rep.values).slope;
    rep.pass = std::abs(rep.slope - rep.expected) <= slope_tolerance &&
               std::all_of(rep.values.begin(), rep.values.end(), [](double v) { return v < 0.0; });
    return rep;
}

void write_csr(std::ostream& os, const Eigen::SparseMatrix<double>& m) {
    Eigen::SparseMatrix<double, Eigen::RowMajor> r = m;
    r.makeCompressed();
    os.precision(17);
    os << r.rows() << " " << r.cols() << " " << r.nonZeros() << "\n";
    for (Eigen::Index i = 0; i < r.outerSize(); ++i) {
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(r, i); it; ++it) {
            os << it.row() << " " << it.col() << " " << it.value() << "\n";
        }
    }
}

void write_csr(std::ostream& os, const Eigen::MatrixXd& m) {
    Eigen::SparseMatrix<double> s = m.sparseView();
    write_csr(os, s);
}

}  // namespace nonlocal
