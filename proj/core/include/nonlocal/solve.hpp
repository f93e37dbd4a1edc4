#pragma once

#include "nonlocal/grid.hpp"
#include "nonlocal/levy.hpp"
#include "nonlocal/operator.hpp"
#include "nonlocal/stats.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace nonlocal {

/// Operator restricted to the interior nodes of a grid, exterior values zero.
/// Interval grids carry a dense matrix; Square grids the axis-atom Kronecker form.
class DiscreteOperator {
public:
    static DiscreteOperator build(const StableOperator& op, std::shared_ptr<const Grid> grid);

    const Grid& grid() const { return *grid_; }
    const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }
    Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
    /// Row sums; strictly negative rows make -A an M-matrix.
    Eigen::VectorXd row_sums() const;
    bool is_axis() const { return axis_.has_value(); }
    const Eigen::MatrixXd& dense() const { return dense_; }
    const AxisOperator2d& axis() const { return *axis_; }

private:
    std::shared_ptr<const Grid> grid_;
    Eigen::MatrixXd dense_;
    std::optional<AxisOperator2d> axis_;
};

struct EllipticSolution {
    GridFunction u;
    double residual = 0.0;     ///< ||A u - f||_inf / ||f||_inf
    bool max_principle = true; ///< f <= 0 implies u >= 0 (true when f changes sign)
    std::string method;        ///< "cholesky", "eigen" or "cg"
};

/// Solves A u = f. Dense Cholesky of -A up to 4096 nodes in 1D, diagonalization
/// of the 1D factor up to 128 nodes per side in 2D, conjugate gradients beyond.
/// Throws ConvergenceError if the relative residual exceeds 1e-10 and
/// InvalidArgument if -A is not positive definite.
EllipticSolution solve_elliptic(const DiscreteOperator& A, const GridFunction& f);

/// Convenience: sample f at the nodes and solve.
EllipticSolution solve_elliptic(const DiscreteOperator& A, const std::function<double(const Point&)>& f);

struct ParabolicProblem {
    LevyFamily family;
    std::shared_ptr<const Grid> grid;
    std::function<double(double, const Point&)> f;
    std::function<double(const Point&)> u0;
    double horizon = 1.0;
    double dt = 0.01;
    int store_every = 1;
    QuadratureControls controls{};
};

struct ParabolicSolution {
    std::vector<double> times;
    std::vector<GridFunction> snapshots;
    std::vector<double> sup_norms;     ///< ||u(t_k)||_inf at every step
    double bound = 0.0;                ///< ||u0||_inf + T ||f||_inf
    bool max_principle = true;         ///< |u| <= bound, and u >= 0 when u0, f >= 0
    double largest_step_change = 0.0;  ///< max_k ||u^{k+1} - u^k||_inf
    std::vector<std::size_t> switch_steps;  ///< steps whose operator differs from the previous one
};

/// Implicit Euler (I - dt A_k) u^{k+1} = u^k + dt f(t_{k+1}), with A_k from the
/// family piece active at t_{k+1}. Breakpoints must be multiples of dt.
ParabolicSolution solve_parabolic(const ParabolicProblem& problem);

/// (int_0^T int |u|^p d^{theta - d - alpha p / 2})^{1/p} / (int_0^T int |f|^p d^{theta - d + alpha p / 2})^{1/p}
/// with rectangle sums over the stored steps (store_every must be 1).
double parabolic_ratio(const ParabolicProblem& problem, const ParabolicSolution& solution, double p, double theta);

struct ExponentFit {
    double slope = 0.0;
    double stderr_slope = 0.0;
    double intercept = 0.0;
    std::size_t points = 0;
    double window_lo = 0.0;
    double window_hi = 0.0;
};

/// Log-log regression of |u| against d_x over nodes with d_x in [lo, hi]
/// (defaults 4h and 0.1 diam). Throws InvalidArgument if the window spans
/// fewer than 5 grid spacings.
ExponentFit boundary_exponent_fit(const GridFunction& u, std::optional<double> lo = std::nullopt,
                                  std::optional<double> hi = std::nullopt);

struct BarrierReport {
    double beta = 0.0;
    std::vector<Point> points;
    std::vector<double> distances;
    std::vector<double> values;      ///< L(psi_tilde^beta)
    double delta_hat = 0.0;          ///< sign asserted for d_x < delta_hat
    double negative_up_to = 0.0;     ///< largest sampled d with all values negative below it
    LineFit fit;                     ///< log|L psi^beta| against log d over d <= fit_radius
    double expected_slope = 0.0;     ///< beta - alpha
    std::size_t sign_violations = 0;
    Point worst_point{};
    double worst_value = 0.0;
    bool sign_ok = false;
    bool slope_ok = false;
    bool pass() const { return sign_ok && slope_ok; }
};

struct BarrierScan {
    int levels = 12;               ///< graded distances 2^{-k} inradius
    int per_level = 1;             ///< points per level (per boundary side in 2D)
    double delta_hat = 0.0;        ///< 0 means the inradius
    double fit_radius = 0.02;      ///< fit over d <= fit_radius * inradius
    double corner_fraction = 0.05; ///< Square: skip this neighbourhood of the corners
};

/// Evaluates L(psi_tilde^beta) on a boundary-graded sample. Throws DomainError
/// if beta is outside (-1 + alpha/2, alpha/2) for `strict_range`.
BarrierReport barrier_check(const StableOperator& op, const Domain& d, double beta, const BarrierScan& scan = {},
                            bool strict_range = true);

struct HardyMember {
    double a = 0.0;
    double b = 1.0;
    double scale = 1.0;
};

struct HardyRow {
    HardyMember member;
    double lhs = 0.0;  ///< int |u|^p x^{c - alpha}
    double rhs = 0.0;  ///< -int |u|^{p-2} u Lu x^c
    double ratio = 0.0;
    double refined_ratio = 0.0;
};

struct HardyReport {
    double p = 0.0;
    double c = 0.0;
    std::vector<HardyRow> rows;
    double sup_ratio = 0.0;
    double refined_sup_ratio = 0.0;
    double drift = 0.0;       ///< |refined / sup - 1|
    bool rhs_positive = true;
    bool pass(double tolerance) const { return rhs_positive && std::isfinite(sup_ratio) && drift <= tolerance; }
};

/// Admissible c window (-1 + alpha - alpha p/2, p - 1 + alpha - alpha p/2).
std::pair<double, double> hardy_window(double alpha, double p);

/// u = scale * exp(-1/(y(1-y))), y = (x-a)/(b-a), on (a, b); half-line operator. Both
/// sides by Gauss-Legendre in (a, b); the refined pass doubles the points
/// and tightens the operator quadrature.
HardyReport hardy_check(const StableOperator& op, double p, double c, const std::vector<HardyMember>& family,
                        int points = 64);

/// Default 10-member family: interior bumps, translates toward 0, wide members and one rescaled copy.
std::vector<HardyMember> default_hardy_family();

}  // namespace nonlocal
