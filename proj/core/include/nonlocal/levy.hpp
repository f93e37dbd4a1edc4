#pragma once

#include "nonlocal/point.hpp"

#include <string>
#include <vector>

namespace nonlocal {

/// Which Levy-measure convention produced a measure.
///
/// Raw: nu(dy) = |y|^{-d-alpha} dy (in d = 1 this is the operator with
/// L cos(xi .)(0) = -pi |xi|^alpha / (Gamma(1+alpha) sin(pi alpha/2))).
/// FractionalLaplacian: nu scaled so that L = -(-Delta)^{alpha/2}.
/// Custom: anything assembled by hand from atoms and densities.
enum class Normalization { Raw, FractionalLaplacian, Custom };

const char* to_string(Normalization n);

/// Point mass of the spherical part.
struct Atom {
    Point direction{};
    double weight = 0.0;
};

/// Absolutely continuous part of the spherical measure. Only the uniform
/// density is supported; `mass` is its total mass on the sphere.
struct SphericalDensity {
    enum class Kind { None, Uniform };
    Kind kind = Kind::None;
    double mass = 0.0;
};

/// Spherical part mu of an alpha-stable Levy measure
///     nu(A) = int_{S^{d-1}} int_0^inf 1_A(r theta) r^{-1-alpha} dr mu(d theta).
///
/// Immutable after construction. Atom directions are renormalized to unit
/// length; deviations larger than 1e-9 are recorded in warnings().
class SpectralMeasure {
public:
    SpectralMeasure(double alpha, int dim, std::vector<Atom> atoms, SphericalDensity density = {},
                    Normalization tag = Normalization::Custom);

    /// nu(dy) = |y|^{-d-alpha} dy.
    static SpectralMeasure raw(double alpha, int dim);
    /// nu(dy) = C_{d,alpha} |y|^{-d-alpha} dy, so that L = -(-Delta)^{alpha/2}.
    static SpectralMeasure fractional_laplacian(double alpha, int dim);
    /// Atoms at +e_1, -e_1, +e_2, -e_2, ... with the given weights (2 * dim entries).
    static SpectralMeasure axis_atoms(double alpha, int dim, const std::vector<double>& weights);

    double alpha() const { return alpha_; }
    int dim() const { return dim_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    const SphericalDensity& density() const { return density_; }
    Normalization normalization() const { return tag_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    /// Density value per unit surface measure (0 when there is no density).
    double density_value() const;
    bool has_density() const { return density_.kind != SphericalDensity::Kind::None && density_.mass > 0.0; }
    bool is_atomic() const { return !has_density(); }
    bool is_symmetric() const;

    /// Total mass Lambda of the spherical part.
    double total_mass() const;

    /// int |rho . theta|^alpha mu(d theta): atoms summed exactly, uniform
    /// density through the closed-form spherical moment.
    double projection_moment(const Point& rho) const;

    /// Every weight (and the density) multiplied by c > 0.
    SpectralMeasure scaled(double c) const;

    /// (mu + reflected mu) / 2.
    SpectralMeasure symmetrized() const;

    /// Atoms plus the density discretized into `resolution` equal-weight
    /// directions (d = 2: uniform angles, d = 3: Fibonacci points).
    std::vector<Atom> discretized(int resolution) const;

private:
    double alpha_;
    int dim_;
    std::vector<Atom> atoms_;
    SphericalDensity density_;
    Normalization tag_;
    std::vector<std::string> warnings_;
};

/// Deterministic direction grid on S^{d-1}: {+1, -1} for d = 1, uniform
/// angles for d = 2, Fibonacci sphere for d = 3.
std::vector<Point> sphere_grid(int dim, int resolution);

/// Grid minimum of rho -> int |rho . theta|^alpha mu(d theta).
///
/// The true infimum never exceeds the returned value. Throws InvalidArgument
/// for a zero-mass measure ("degenerate measure") and for resolution < 16.
double nondegeneracy_lambda(const SpectralMeasure& m, int sphere_resolution);

/// Same minimization on an explicit direction list.
double nondegeneracy_lambda(const SpectralMeasure& m, const std::vector<Point>& directions);

double total_mass(const SpectralMeasure& m);

/// Piecewise-constant-in-time family of measures with a declared lower envelope.
///
/// Piece k is active on (breakpoints[k], breakpoints[k+1]]; piece 0 also at t = 0.
class LevyFamily {
public:
    LevyFamily(std::vector<double> breakpoints, std::vector<SpectralMeasure> pieces,
               SpectralMeasure envelope);

    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<SpectralMeasure>& pieces() const { return pieces_; }
    const SpectralMeasure& envelope() const { return envelope_; }
    double horizon() const { return breakpoints_.back(); }

    std::size_t piece_index(double t) const;
    const SpectralMeasure& at(double t) const { return pieces_[piece_index(t)]; }

private:
    std::vector<double> breakpoints_;
    std::vector<SpectralMeasure> pieces_;
    SpectralMeasure envelope_;
};

struct EnvelopeReport {
    bool dominated = true;
    std::vector<std::string> violations;
};

/// True iff every piece dominates the envelope: each envelope atom is matched
/// by a piece atom in the same direction with at least its weight, and the
/// piece density is pointwise at least the envelope density.
EnvelopeReport check_envelope(const LevyFamily& family);

}  // namespace nonlocal
