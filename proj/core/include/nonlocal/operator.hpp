#pragma once

#include "nonlocal/geometry.hpp"
#include "nonlocal/levy.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace nonlocal {

using Field = std::function<double(const Point&)>;

/// Controls for the radial quadrature in `apply`.
struct QuadratureControls {
    double inner_radius = 0.1;   ///< Taylor region (0, r0]; capped at a quarter of the first kink
    double panel_growth = 2.0;   ///< geometric ratio of successive outer panels
    int panel_points = 20;       ///< Gauss-Legendre points per outer panel
    int inner_points = 12;       ///< Gauss-Jacobi points on (0, r0]
    double max_panel_width = std::numeric_limits<double>::infinity();
    double tail_radius = 0.0;    ///< truncation radius; 0 chooses it from `oscillation`
    double oscillation = 1.0;    ///< bound on sup|u| used for the automatic radius
    /// Set when u(x +- r theta) ~ r^growth past the truncation radius (growth < alpha):
    /// the remainder is completed as (u(x+R theta) + u(x-R theta)) R^{-alpha} / (alpha - growth).
    /// Leave unset for oscillating u, whose remainder is already below the tolerance.
    std::optional<double> tail_growth;
    double tolerance = 1e-10;
    int density_directions = 64; ///< discretization of a spherical density
    int max_bisections = 16;

    /// Doubled point counts, halved inner radius, tenfold tighter tolerance.
    QuadratureControls refined() const;
};

/// L u(x) = (1/2) int (u(x+y) + u(x-y) - 2u(x)) nu(dy) for a symmetric measure.
class StableOperator {
public:
    explicit StableOperator(SpectralMeasure measure, QuadratureControls controls = {});

    const SpectralMeasure& measure() const { return measure_; }
    const QuadratureControls& controls() const { return controls_; }
    Normalization normalization() const { return measure_.normalization(); }
    double alpha() const { return measure_.alpha(); }
    int dim() const { return measure_.dim(); }

    /// One representative per symmetric pair {theta, -theta} with the weight
    /// of theta: L u(x) = sum_pairs w int_0^inf (u(x+r theta) + u(x-r theta) - 2u(x)) r^{-1-alpha} dr.
    const std::vector<Atom>& pairs() const { return pairs_; }

    StableOperator with_controls(const QuadratureControls& c) const { return StableOperator(measure_, c); }

private:
    SpectralMeasure measure_;
    QuadratureControls controls_;
    std::vector<Atom> pairs_;
};

/// Pointwise evaluation. When `support` is given, u must vanish outside it:
/// ray crossings of its boundary become quadrature breakpoints (u may be
/// non-smooth or have integrable blow-up there) and the tail beyond the
/// support is added in closed form. Throws ConvergenceError with a panel
/// trace when a panel cannot be resolved.
double apply(const StableOperator& op, const Field& u, const Point& x, const std::optional<Domain>& support = std::nullopt);

/// Radial integral int_0^inf (u(x+r theta) + u(x-r theta) - 2u(x)) r^{-1-alpha} dr for one direction.
double radial_integral(const StableOperator& op, const Field& u, const Point& x, const Point& theta,
                       const std::optional<Domain>& support = std::nullopt);

/// Unit-weight stiffness for nu(dy) = |y|^{-1-alpha} dy on n nodes of spacing h
/// (exterior values zero): entries are
///   diagonal  -(2/(2-alpha) + 2/alpha) h^{-alpha},
///   |i-j| = k  (omega_k + [k = 1]/(2-alpha)) h^{-alpha},
/// with omega_k the exact integral of the k-th hat function against s^{-1-alpha}.
Eigen::MatrixXd unit_stiffness_1d(double alpha, int n, double h);

/// omega_k for k >= 1 (k = 1 integrates only the right half of the hat).
double hat_weight(double alpha, int k);

/// Discrete operator on the interior nodes of a uniform Interval grid.
/// The measure must be one-dimensional with equal atoms at +1 and -1.
Eigen::MatrixXd assemble_matrix_1d(const StableOperator& op, const Domain& interval, int n);

/// Kronecker-sum operator for axis atoms on a square grid (x index fastest):
/// A = w_x (I kron T) + w_y (T kron I).
struct AxisOperator2d {
    int n = 0;
    double h = 0.0;
    double wx = 0.0;
    double wy = 0.0;
    Eigen::MatrixXd unit;  ///< T, the unit-weight 1D stiffness

    Eigen::Index size() const { return static_cast<Eigen::Index>(n) * n; }
    Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
    Eigen::SparseMatrix<double> sparse() const;
    Eigen::VectorXd row_sums() const;
};

/// Throws InvalidArgument if the measure has atoms off the coordinate axes,
/// asymmetric axis weights, or a density.
AxisOperator2d assemble_matrix_2d_axes(const StableOperator& op, const Domain& square, int n_per_side);

struct IndicatorDecayReport {
    std::vector<double> distances;
    std::vector<double> values;  ///< L 1_D(x)
    double slope = 0.0;
    double expected = 0.0;       ///< -alpha
    bool pass = false;
};

/// L 1_D(x) = -sum_pairs w (r_+^{-alpha} + r_-^{-alpha}) / alpha with r_+- the
/// exit distances along +-theta; fitted log-log slope against d_x.
IndicatorDecayReport indicator_decay_check(const StableOperator& op, const Domain& d, const std::vector<Point>& x_samples,
                                           double slope_tolerance = 0.1);

double indicator_image(const StableOperator& op, const Domain& d, const Point& x);

/// "row col value" lines preceded by a "rows cols nnz" header.
void write_csr(std::ostream& os, const Eigen::SparseMatrix<double>& m);
void write_csr(std::ostream& os, const Eigen::MatrixXd& m);

}  // namespace nonlocal
