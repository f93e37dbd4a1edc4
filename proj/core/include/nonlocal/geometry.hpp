#pragma once

#include "nonlocal/levy.hpp"
#include "nonlocal/point.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace nonlocal {

/// (0, inf)
struct HalfLine {};
/// (a, b)
struct Interval {
    double a = 0.0;
    double b = 1.0;
};
/// (0, side)^2
struct Square {
    double side = 1.0;
};
/// Open disk of the given radius centred at the origin.
struct Disk {
    double radius = 1.0;
};

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// Value, gradient and Hessian of a scalar function at a point.
struct Jet {
    double value = 0.0;
    Point grad{};
    Matrix3 hess{};
};

/// Operator norm (largest absolute eigenvalue) of a symmetric 3x3 matrix.
double spectral_norm(const Matrix3& m, int dim);

/// Model convex domain.
class Domain {
public:
    using Shape = std::variant<HalfLine, Interval, Square, Disk>;

    Domain(Shape shape);  // NOLINT(google-explicit-constructor)

    const Shape& shape() const { return shape_; }
    int dim() const;
    std::string kind() const;
    bool bounded() const { return !std::holds_alternative<HalfLine>(shape_); }

    bool contains(const Point& x) const { return dist(x) > 0.0; }
    /// Euclidean distance to the complement; 0 outside the domain.
    double dist(const Point& x) const;
    /// Largest distance to the boundary attained in the domain (inf on the half-line).
    double inradius() const;
    double diameter() const;

    /// {r in R : x + r theta in D} as an open interval, or nullopt-like
    /// (lo >= hi) when the line misses D. Entries may be +-inf.
    std::pair<double, double> line_span(const Point& x, const Point& theta) const;

    /// Positive r at which r -> d_{x + r theta} fails to be smooth
    /// (boundary crossings and medial-axis crossings), sorted.
    std::vector<double> ray_kinks(const Point& x, const Point& theta) const;

    /// Regularized distance: smooth in D, comparable to dist.
    /// Interval: (x-a)(b-x)/(b-a); Disk: (R^2-|x|^2)/(2R); Square: smooth
    /// minimum (p = 8) of the two per-axis interval functions. Zero outside D.
    Jet psi_tilde(const Point& x) const;

    /// Bounds lo <= psi_tilde / dist <= hi valid on all of D.
    std::pair<double, double> psi_tilde_bounds() const;

    /// True if x lies within `fraction * side` of a square corner.
    bool near_corner(const Point& x, double fraction) const;

    /// Boundary-graded interior sample: distances 2^{-k} (k < levels) along
    /// the model's inward normals plus a uniform layer.
    std::vector<Point> graded_points(int levels, int per_level) const;

    /// Uniform sample from D (the half-line is truncated to (0, 10)).
    template <class Rng>
    Point sample(Rng& rng) const;

private:
    Point sample_box(double u0, double u1) const;
    Shape shape_;
};

template <class Rng>
Point Domain::sample(Rng& rng) const {
    for (;;) {
        double u0 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        double u1 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        Point p = sample_box(u0, u1);
        if (contains(p)) return p;
    }
}

double dist(const Point& x, const Domain& d);

/// Smooth indicator of (c1, c2): a bump-mollified indicator of
/// (c1 + w, c2 - w) with mollifier radius w. Values and two derivatives.
class MollifiedBand {
public:
    MollifiedBand(double c1, double c2, double w);
    double value(double t) const;
    double d1(double t) const;
    double d2(double t) const;
    double c1() const { return c1_; }
    double c2() const { return c2_; }

private:
    double c1_, c2_, w_;
};

/// zeta_n(x) = band(e^n psi_tilde(x)); supported where
/// c1 e^{-n} < psi_tilde(x) < c2 e^{-n}.
class DyadicPartition {
public:
    DyadicPartition(Domain domain, double c1, double c2, double width_fraction);

    const Domain& domain() const { return domain_; }
    double c1() const { return c1_; }
    double c2() const { return c2_; }
    /// Band constants in terms of dist: zeta_n(x) != 0 implies
    /// dist_c1 e^{-n} < d_x < dist_c2 e^{-n}.
    double dist_c1() const;
    double dist_c2() const;

    double zeta(int n, const Point& x) const;
    Jet zeta_jet(int n, const Point& x) const;
    /// Indices whose band meets psi_tilde values in [lo, hi].
    std::pair<int, int> active_range(double psi_lo, double psi_hi) const;
    /// Indices with zeta_n(x) != 0.
    std::pair<int, int> indices_at(const Point& x) const;
    double coverage(const Point& x) const;

    /// Constants found by build_partition's validation.
    struct Checks {
        double coverage_min = 0.0;
        Point coverage_argmin{};
        std::array<double, 3> growth{};  ///< sup |D^m zeta_n| e^{-mn}, m = 0, 1, 2
        std::array<double, 3> fd_growth{};  ///< same from finite differences
        double support_violation = 0.0;  ///< largest |zeta_n| found outside the stated band
        std::size_t points = 0;
    };
    const Checks& checks() const { return checks_; }
    void set_checks(const Checks& c) { checks_ = c; }

private:
    Domain domain_;
    double c1_, c2_;
    MollifiedBand band_;
    Checks checks_;
};

/// Build and validate a partition. Requires c2 / c1 > e. `width_fraction`
/// is the mollifier radius as a fraction of the band length (default 1/8).
/// Throws InvalidArgument if some validation point has coverage below the floor.
DyadicPartition build_partition(const Domain& d, double c1, double c2, double width_fraction = 0.125);

/// psi(x) = sum_n e^{-n} zeta_n(x) together with the analytic psi_tilde.
class RegularizedDistance {
public:
    explicit RegularizedDistance(DyadicPartition partition);

    const DyadicPartition& partition() const { return partition_; }
    /// Dyadic psi with first and second derivatives.
    Jet psi(const Point& x) const;
    Jet psi_tilde(const Point& x) const { return partition_.domain().psi_tilde(x); }

    struct Checks {
        double comparability_tilde = 0.0;  ///< max(psi_tilde/d, d/psi_tilde)
        double comparability = 0.0;        ///< max(psi/d, d/psi)
        double hessian_tilde = 0.0;        ///< sup |D^2 psi_tilde| d^{1-tau}, tau = 1
        double hessian_scaled = 0.0;       ///< sup d |D^2 psi|
        std::size_t points = 0;
        std::size_t corner_excluded = 0;
    };
    const Checks& checks() const { return checks_; }
    void set_checks(const Checks& c) { checks_ = c; }

private:
    DyadicPartition partition_;
    Checks checks_;
};

/// Builds psi and validates comparability (<= 10) and the Hessian bounds on
/// a boundary-graded grid. Square corner neighbourhoods are skipped for the
/// Hessian check. Throws InvalidArgument on violation.
RegularizedDistance regularized_distance(const Domain& d, const DyadicPartition& partition);

struct ConvexityReport {
    std::size_t samples = 0;
    std::size_t violations = 0;
    double worst_gap = 0.0;  ///< min over samples of d_z - (1-t) d_x - t d_y
};

/// Samples (x, y, t) and checks d_z >= (1-t) d_x + t d_y - 1e-12.
/// Throws InvalidArgument on violation.
ConvexityReport convexity_gap_check(const Domain& d, std::size_t sample_count, std::uint64_t seed);

/// d^kappa with 0^kappa = 0 for kappa != 0 and 0^0 = 1.
double distance_power(double d, double kappa);

/// int_{|y| >= rho} d_{x+y}^{kappa2} r^{-1-kappa1} dr mu(dtheta), densities
/// discretized with `directions` points.
double tail_integral(const Domain& d, const SpectralMeasure& m, double kappa1, double kappa2, const Point& x,
                     double rho, int directions = 64, double tolerance = 1e-10);

struct TailReport {
    std::vector<Point> samples;
    std::vector<double> ratios;  ///< LHS d_x^{kappa1 - kappa2} with rho = d_x
    double sup_ratio = 0.0;
    double refined_sup_ratio = 0.0;  ///< samples plus halved-distance points, doubled quadrature
    double growth = 0.0;             ///< refined / sup - 1
    bool stable = false;
};

TailReport tail_integral_check(const Domain& d, const SpectralMeasure& m, double kappa1, double kappa2,
                               const std::vector<Point>& x_samples, double max_growth = 0.05);

}  // namespace nonlocal
