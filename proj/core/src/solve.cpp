#include "nonlocal/solve.hpp"

#include "nonlocal/defaults.hpp"
#include "nonlocal/error.hpp"
#include "nonlocal/norms.hpp"
#include "nonlocal/quadrature.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <variant>

namespace nonlocal {

DiscreteOperator DiscreteOperator::build(const StableOperator& op, std::shared_ptr<const Grid> grid) {
    if (!grid) throw InvalidArgument("discrete operator needs a grid");
    if (op.dim() != grid->dim()) throw InvalidArgument("operator and grid dimensions differ");
    DiscreteOperator d;
    d.grid_ = grid;
    const auto& shape = grid->domain().shape();
    if (std::holds_alternative<Interval>(shape)) {
        d.dense_ = assemble_matrix_1d(op, grid->domain(), static_cast<int>(grid->size()));
    } else if (std::holds_alternative<Square>(shape)) {
        d.axis_ = assemble_matrix_2d_axes(op, grid->domain(), grid->side());
    } else {
        throw Unsupported("discrete operators exist for Interval and Square grids");
    }
    return d;
}

Eigen::VectorXd DiscreteOperator::apply(const Eigen::VectorXd& v) const {
    if (axis_) return axis_->apply(v);
    return dense_ * v;
}

Eigen::VectorXd DiscreteOperator::row_sums() const {
    if (axis_) return axis_->row_sums();
    return dense_.rowwise().sum();
}

namespace {

// preconditioned CG on -A x = -b
Eigen::VectorXd conjugate_gradient(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& A,
                                   const Eigen::VectorXd& diag, const Eigen::VectorXd& b, double tol, int max_iter) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(b.size());
    Eigen::VectorXd r = -b;  // residual of -A x = -b at x = 0
    Eigen::VectorXd z = r.cwiseQuotient(-diag);
    Eigen::VectorXd p = z;
    double rz = r.dot(z);
    const double bnorm = b.norm();
    for (int it = 0; it < max_iter && r.norm() > tol * bnorm; ++it) {
        Eigen::VectorXd q = -A(p);
        double step = rz / p.dot(q);
        x += step * p;
        r -= step * q;
        z = r.cwiseQuotient(-diag);
        double rz_new = r.dot(z);
        p = z + (rz_new / rz) * p;
        rz = rz_new;
    }
    return x;
}

Eigen::VectorXd axis_diagonal(const AxisOperator2d& a) {
    Eigen::VectorXd d(a.size());
    for (int j = 0; j < a.n; ++j) {
        for (int i = 0; i < a.n; ++i) d[static_cast<Eigen::Index>(j) * a.n + i] = a.wx * a.unit(i, i) + a.wy * a.unit(j, j);
    }
    return d;
}

// Q diag(lambda) Q^T of the unit 1D factor
struct AxisEigen {
    Eigen::MatrixXd Q;
    Eigen::VectorXd lambda;
};

AxisEigen axis_eigen(const AxisOperator2d& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.unit);
    if (es.info() != Eigen::Success) throw ConvergenceError("eigendecomposition of the 1D stiffness failed");
    return {es.eigenvectors(), es.eigenvalues()};
}

// solves (c0 I + c1 A) x = b for the axis operator via its eigenbasis
Eigen::VectorXd axis_solve(const AxisOperator2d& a, const AxisEigen& e, double c0, double c1, const Eigen::VectorXd& b) {
    const int n = a.n;
    Eigen::Map<const Eigen::MatrixXd> B(b.data(), n, n);
    Eigen::MatrixXd G = e.Q.transpose() * B * e.Q;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            double den = c0 + c1 * (a.wx * e.lambda[i] + a.wy * e.lambda[j]);
            if (den == 0.0) throw InvalidArgument("singular operator: both axis weights vanish");
            G(i, j) /= den;
        }
    }
    Eigen::MatrixXd U = e.Q * G * e.Q.transpose();
    return Eigen::Map<const Eigen::VectorXd>(U.data(), a.size());
}

double sup_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

EllipticSolution solve_elliptic(const DiscreteOperator& A, const GridFunction& f) {
    if (f.grid_ptr() != A.grid_ptr()) throw InvalidArgument("right-hand side lives on a different grid");
    const Eigen::VectorXd& b = f.values();
    for (Eigen::Index i = 0; i < b.size(); ++i) {
        if (!std::isfinite(b[i])) throw InvalidArgument("right-hand side is not finite at an interior node");
    }
    Eigen::VectorXd u;
    std::string method;
    if (!A.is_axis()) {
        const Eigen::MatrixXd& M = A.dense();
        if (M.rows() <= defaults::kDirectLimit1d) {
            Eigen::LLT<Eigen::MatrixXd> llt(-M);
            if (llt.info() != Eigen::Success) throw InvalidArgument("operator matrix is singular or not negative definite");
            u = -llt.solve(b);
            method = "cholesky";
        } else {
            u = conjugate_gradient([&](const Eigen::VectorXd& v) { return Eigen::VectorXd(M * v); }, M.diagonal(), b, 1e-14,
                                   10 * static_cast<int>(M.rows()));
            method = "cg";
        }
    } else {
        const auto& ax = A.axis();
        if (ax.n <= defaults::kDirectLimit2dSide) {
            u = axis_solve(ax, axis_eigen(ax), 0.0, 1.0, b);
            method = "eigen";
        } else {
            u = conjugate_gradient([&](const Eigen::VectorXd& v) { return ax.apply(v); }, axis_diagonal(ax), b, 1e-14,
                                   10 * static_cast<int>(ax.size()));
            method = "cg";
        }
    }
    EllipticSolution sol{GridFunction(A.grid_ptr(), u), 0.0, true, method};
    double fn = sup_norm(b);
    sol.residual = fn > 0.0 ? sup_norm(A.apply(u) - b) / fn : sup_norm(u);
    if (!(sol.residual <= defaults::kResidualTolerance)) {
        std::ostringstream os;
        os << "elliptic solve (" << method << ") left relative residual " << sol.residual;
        throw ConvergenceError(os.str());
    }
    if (b.size() > 0 && b.maxCoeff() <= 0.0) {
        sol.max_principle = u.minCoeff() >= -defaults::kMaxPrincipleSlack * std::max(1.0, sup_norm(u));
    }
    return sol;
}

EllipticSolution solve_elliptic(const DiscreteOperator& A, const std::function<double(const Point&)>& f) {
    return solve_elliptic(A, GridFunction::sample(A.grid_ptr(), f));
}

ParabolicSolution solve_parabolic(const ParabolicProblem& P) {
    if (!P.grid) throw InvalidArgument("parabolic problem needs a grid");
    if (!P.f || !P.u0) throw InvalidArgument("parabolic problem needs f and u0");
    if (!(P.dt > 0.0) || !(P.horizon > 0.0)) throw InvalidArgument("dt and the horizon must be positive");
    if (P.store_every < 1) throw InvalidArgument("store_every must be positive");
    auto on_step = [&](double t) {
        double k = t / P.dt;
        return std::abs(k - std::round(k)) <= 1e-9 * std::max(1.0, k);
    };
    for (double b : P.family.breakpoints()) {
        if (b < P.horizon && !on_step(b)) {
            std::ostringstream os;
            os << "family breakpoint " << b << " is not a multiple of dt = " << P.dt;
            throw InvalidArgument(os.str());
        }
    }
    if (!on_step(P.horizon)) throw InvalidArgument("horizon is not a multiple of dt");
    if (P.family.horizon() < P.horizon * (1.0 - 1e-12)) throw InvalidArgument("family does not cover the horizon");
    const auto steps = static_cast<std::size_t>(std::llround(P.horizon / P.dt));

    // one factorization of (I - dt A) per piece
    struct Stepper {
        std::optional<DiscreteOperator> A;
        Eigen::LLT<Eigen::MatrixXd> llt;
        AxisEigen eig;
    };
    std::map<std::size_t, Stepper> steppers;
    auto stepper = [&](std::size_t k) -> Stepper& {
        auto it = steppers.find(k);
        if (it != steppers.end()) return it->second;
        Stepper s;
        s.A = DiscreteOperator::build(StableOperator(P.family.pieces()[k], P.controls), P.grid);
        if (s.A->is_axis()) {
            s.eig = axis_eigen(s.A->axis());
        } else {
            Eigen::MatrixXd M = Eigen::MatrixXd::Identity(s.A->dense().rows(), s.A->dense().cols()) - P.dt * s.A->dense();
            s.llt.compute(M);
            if (s.llt.info() != Eigen::Success) throw ConvergenceError("implicit Euler matrix factorization failed");
        }
        return steppers.emplace(k, std::move(s)).first->second;
    };

    ParabolicSolution sol;
    GridFunction u = GridFunction::sample(P.grid, P.u0);
    double f_sup = 0.0;
    bool nonneg_data = u.values().size() == 0 || u.values().minCoeff() >= 0.0;
    double u_min = u.values().size() ? u.values().minCoeff() : 0.0;
    double u_max_abs = sup_norm(u.values());
    const double u0_sup = u_max_abs;
    sol.times.push_back(0.0);
    sol.snapshots.push_back(u);
    sol.sup_norms.push_back(u_max_abs);
    std::size_t prev_piece = P.family.piece_index(0.0);

    for (std::size_t k = 0; k < steps; ++k) {
        double t = static_cast<double>(k + 1) * P.dt;
        std::size_t piece = P.family.piece_index(t);
        if (piece != prev_piece) sol.switch_steps.push_back(k + 1);
        prev_piece = piece;
        Stepper& s = stepper(piece);
        Eigen::VectorXd rhs = u.values();
        for (std::size_t i = 0; i < P.grid->size(); ++i) {
            double fv = P.f(t, P.grid->node(i));
            if (!std::isfinite(fv)) throw InvalidArgument("f is not finite at an interior node");
            f_sup = std::max(f_sup, std::abs(fv));
            nonneg_data = nonneg_data && fv >= 0.0;
            rhs[static_cast<Eigen::Index>(i)] += P.dt * fv;
        }
        Eigen::VectorXd next = s.A->is_axis() ? axis_solve(s.A->axis(), s.eig, 1.0, -P.dt, rhs) : Eigen::VectorXd(s.llt.solve(rhs));
        sol.largest_step_change = std::max(sol.largest_step_change, sup_norm(next - u.values()));
        u = GridFunction(P.grid, std::move(next));
        double sn = sup_norm(u.values());
        sol.sup_norms.push_back(sn);
        u_max_abs = std::max(u_max_abs, sn);
        if (u.values().size()) u_min = std::min(u_min, u.values().minCoeff());
        if ((k + 1) % static_cast<std::size_t>(P.store_every) == 0 || k + 1 == steps) {
            sol.times.push_back(t);
            sol.snapshots.push_back(u);
        }
    }
    sol.bound = u0_sup + P.horizon * f_sup;
    const double slack = defaults::kMaxPrincipleSlack * std::max(1.0, sol.bound);
    sol.max_principle = u_max_abs <= sol.bound + slack && (!nonneg_data || u_min >= -slack);
    return sol;
}

double parabolic_ratio(const ParabolicProblem& P, const ParabolicSolution& S, double p, double theta) {
    if (P.store_every != 1) throw InvalidArgument("parabolic_ratio needs every step stored");
    if (!(p > 1.0)) throw InvalidArgument("p must exceed 1");
    const Grid& g = *P.grid;
    const double alpha = P.family.envelope().alpha();
    const double s = theta - g.dim();
    const double q = 0.5 * alpha * p;
    auto weights = [&](double e) {
        std::vector<double> w(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            w[i] = cell_weight(g, i, e);
            if (!std::isfinite(w[i])) w[i] = std::pow(g.domain().dist(g.node(i)), e) * g.cell(i).volume(g.dim());
        }
        return w;
    };
    auto wu = weights(s - q);
    auto wf = weights(s + q);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 1; k < S.snapshots.size(); ++k) {
        double t = S.times[k];
        for (std::size_t i = 0; i < g.size(); ++i) {
            num += P.dt * std::pow(std::abs(S.snapshots[k][i]), p) * wu[i];
            den += P.dt * std::pow(std::abs(P.f(t, g.node(i))), p) * wf[i];
        }
    }
    if (!(den > 0.0)) throw InvalidArgument("parabolic ratio: data norm is zero");
    return std::pow(num, 1.0 / p) / std::pow(den, 1.0 / p);
}

ExponentFit boundary_exponent_fit(const GridFunction& u, std::optional<double> lo, std::optional<double> hi) {
    const Grid& g = u.grid();
    const Domain& D = g.domain();
    const double h = g.spacing();
    double extent = D.bounded() ? D.diameter() : (g.side() + 1) * h;
    ExponentFit fit;
    fit.window_lo = lo.value_or(4.0 * h);
    fit.window_hi = hi.value_or(0.1 * extent);
    if (fit.window_hi - fit.window_lo < defaults::kMinFitBands * h) {
        std::ostringstream os;
        os << "fit window [" << fit.window_lo << ", " << fit.window_hi << "] spans fewer than " << defaults::kMinFitBands
           << " grid spacings";
        throw InvalidArgument(os.str());
    }
    std::vector<double> x, y;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double d = D.dist(g.node(i));
        if (d >= fit.window_lo && d <= fit.window_hi && u[i] != 0.0) {
            x.push_back(d);
            y.push_back(u[i]);
        }
    }
    if (x.size() < 3) throw InvalidArgument("fit window holds fewer than three nonzero nodes");
    LineFit lf = fit_loglog(x, y);
    fit.slope = lf.slope;
    fit.stderr_slope = lf.slope_stderr;
    fit.intercept = lf.intercept;
    fit.points = lf.points;
    return fit;
}

BarrierReport barrier_check(const StableOperator& op, const Domain& d, double beta, const BarrierScan& scan,
                            bool strict_range) {
    if (op.dim() != d.dim()) throw InvalidArgument("operator and domain dimensions differ");
    const double alpha = op.alpha();
    if (strict_range && !(beta > -1.0 + 0.5 * alpha && beta < 0.5 * alpha)) {
        std::ostringstream os;
        os << "beta = " << beta << " outside (" << -1.0 + 0.5 * alpha << ", " << 0.5 * alpha << ")";
        throw DomainError(os.str());
    }
    StableOperator L = op;
    if (!d.bounded() && beta > 0.0) {
        QuadratureControls c = op.controls();
        c.tail_growth = beta;
        L = op.with_controls(c);
    }
    auto u = [&](const Point& x) {
        double v = d.psi_tilde(x).value;
        return v > 0.0 ? std::pow(v, beta) : 0.0;
    };
    BarrierReport rep;
    rep.beta = beta;
    rep.expected_slope = beta - alpha;
    const double scale = d.bounded() ? d.inradius() : 4.0;
    rep.delta_hat = scan.delta_hat > 0.0 ? scan.delta_hat : (d.bounded() ? d.inradius() : defaults::kInf);
    for (const Point& x : d.graded_points(scan.levels, scan.per_level)) {
        if (std::holds_alternative<Square>(d.shape()) && d.near_corner(x, scan.corner_fraction)) continue;
        rep.points.push_back(x);
        rep.distances.push_back(d.dist(x));
        rep.values.push_back(apply(L, u, x, d));
    }
    std::vector<std::size_t> order(rep.points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rep.distances[a] < rep.distances[b]; });
    bool prefix = true;
    rep.worst_value = -defaults::kInf;
    for (std::size_t k : order) {
        double v = rep.values[k];
        if (prefix && v < 0.0) rep.negative_up_to = rep.distances[k];
        if (v >= 0.0) prefix = false;
        if (rep.distances[k] < rep.delta_hat && v >= 0.0) ++rep.sign_violations;
        if (v > rep.worst_value) {
            rep.worst_value = v;
            rep.worst_point = rep.points[k];
        }
    }
    rep.sign_ok = rep.sign_violations == 0 && !rep.points.empty();
    std::vector<double> fx, fy;
    for (std::size_t i = 0; i < rep.points.size(); ++i) {
        if (rep.distances[i] <= scan.fit_radius * scale && rep.values[i] != 0.0) {
            fx.push_back(rep.distances[i]);
            fy.push_back(rep.values[i]);
        }
    }
    if (fx.size() >= 3) {
        rep.fit = fit_loglog(fx, fy);
        rep.slope_ok = std::abs(rep.fit.slope - rep.expected_slope) <= defaults::kSlopeTolerance;
    }
    return rep;
}

std::pair<double, double> hardy_window(double alpha, double p) {
    return {-1.0 + alpha - 0.5 * alpha * p, p - 1.0 + alpha - 0.5 * alpha * p};
}

namespace {

struct HardySides {
    double lhs = 0.0;
    double rhs = 0.0;
};

HardySides hardy_sides(const StableOperator& op, double p, double c, const HardyMember& m, int points) {
    const double alpha = op.alpha();
    const Domain support(Interval{m.a, m.b});
    auto u = [&](const Point& x) {
        double y = (x[0] - m.a) / (m.b - m.a);
        double t = y * (1.0 - y);
        return t > 0.0 ? m.scale * std::exp(-1.0 / t) : 0.0;
    };
    const auto& rule = gauss_legendre(points);
    HardySides s;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        double x = 0.5 * (m.a + m.b) + 0.5 * (m.b - m.a) * rule.nodes[k];
        double w = 0.5 * (m.b - m.a) * rule.weights[k];
        double v = u(point1(x));
        if (v == 0.0) continue;
        double Lu = apply(op, u, point1(x), support);
        s.lhs += w * std::pow(std::abs(v), p) * std::pow(x, c - alpha);
        s.rhs -= w * std::copysign(std::pow(std::abs(v), p - 1.0), v) * Lu * std::pow(x, c);
    }
    return s;
}

}  // namespace

HardyReport hardy_check(const StableOperator& op, double p, double c, const std::vector<HardyMember>& family, int points) {
    if (op.dim() != 1) throw InvalidArgument("hardy_check works on the half-line");
    if (!(p > 1.0)) throw InvalidArgument("p must exceed 1");
    auto [lo, hi] = hardy_window(op.alpha(), p);
    if (!(c > lo && c < hi)) {
        std::ostringstream os;
        os << "c = " << c << " outside the admissible window (" << lo << ", " << hi << ")";
        throw DomainError(os.str());
    }
    for (const auto& m : family) {
        if (!(m.a > 0.0 && m.b > m.a)) throw InvalidArgument("bump support must lie in (0, inf)");
    }
    HardyReport rep;
    rep.p = p;
    rep.c = c;
    StableOperator fine = op.with_controls(op.controls().refined());
    for (const auto& m : family) {
        HardyRow row;
        row.member = m;
        HardySides s = hardy_sides(op, p, c, m, points);
        HardySides r = hardy_sides(fine, p, c, m, 2 * points);
        row.lhs = s.lhs;
        row.rhs = s.rhs;
        if (!(s.rhs > 0.0) || !(r.rhs > 0.0)) rep.rhs_positive = false;
        row.ratio = s.lhs / s.rhs;
        row.refined_ratio = r.lhs / r.rhs;
        rep.sup_ratio = std::max(rep.sup_ratio, row.ratio);
        rep.refined_sup_ratio = std::max(rep.refined_sup_ratio, row.refined_ratio);
        rep.rows.push_back(row);
    }
    rep.drift = rep.sup_ratio > 0.0 ? std::abs(rep.refined_sup_ratio / rep.sup_ratio - 1.0) : defaults::kInf;
    return rep;
}

std::vector<HardyMember> default_hardy_family() {
    return {{0.4, 0.6, 1.0},  {0.2, 0.4, 1.0},  {0.1, 0.3, 1.0},   {0.05, 0.25, 1.0}, {0.02, 0.12, 1.0},
            {0.01, 0.06, 1.0}, {0.005, 0.03, 1.0}, {0.3, 1.0, 1.0}, {0.1, 2.0, 1.0},   {0.4, 0.6, 5.0}};
}

}  // namespace nonlocal
