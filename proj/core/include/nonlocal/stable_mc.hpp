#pragma once

#include "nonlocal/geometry.hpp"
#include "nonlocal/levy.hpp"
#include "nonlocal/stats.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace nonlocal {

/// Simulation setup for a pure-jump symmetric stable process with an atomic
/// spectral measure, killed on leaving `domain`.
struct PathConfig {
    SpectralMeasure measure;
    Domain domain;
    double dt = 1e-3;
    std::uint64_t seed = 20240601;
    std::size_t paths = 100000;
    unsigned jobs = 0;        ///< worker threads; 0 uses the hardware count
    double max_time = 50.0;   ///< elliptic paths still alive at this time are truncated

    void validate() const;
};

/// One atom pair {+theta, -theta} of weight w moves the process by
/// scale * S * theta per step, S standard symmetric stable (E e^{i xi S} = e^{-|xi|^alpha}).
struct IncrementPair {
    Point direction{};
    double scale_per_unit_time = 0.0;  ///< (2 w c_alpha)^{1/alpha}; multiply by dt^{1/alpha}
};

/// Pairs of a symmetric atomic measure. Throws Unsupported for densities.
std::vector<IncrementPair> increment_pairs(const SpectralMeasure& m);

/// Levy exponent -sum_pairs 2 w c_alpha |xi . theta|^alpha, so E e^{i xi . X_t} = exp(t * symbol).
double levy_symbol(const SpectralMeasure& m, const Point& xi);

/// Standard symmetric stable variable by Chambers-Mallows-Stuck from two uniforms in [0, 1).
double standard_symmetric_stable(double alpha, double u_angle, double u_exp);

/// Per-path generator: mt19937_64 seeded from splitmix64(seed, path).
std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t path);

/// Uniform double in [0, 1) from the top 53 bits.
double uniform01(std::mt19937_64& rng);

/// Displacement over dt. Zero for dt = 0.
Point sample_increment(const std::vector<IncrementPair>& pairs, double alpha, double dt, std::mt19937_64& rng);
Point sample_increment(const PathConfig& cfg, double dt, std::mt19937_64& rng);

struct CfRow {
    Point xi{};
    double empirical = 0.0;  ///< mean of cos(xi . X_dt)
    double analytic = 0.0;   ///< exp(dt * symbol)
    double std_error = 0.0;
    double z = 0.0;          ///< |empirical - analytic| / std_error
};

struct CfReport {
    std::vector<CfRow> rows;
    double max_z = 0.0;
    bool pass(double multiplier) const { return max_z <= multiplier; }
};

/// Empirical characteristic function of the increment against the symbol.
CfReport characteristic_function_check(const PathConfig& cfg, const std::vector<Point>& frequencies, std::size_t samples);

struct IndependenceReport {
    double product_of_means = 0.0;  ///< E g(X1) E h(X2)
    double joint_mean = 0.0;        ///< E g(X1) h(X2)
    double std_error = 0.0;
    double z = 0.0;
};

/// Cross-moment test for axis atoms in d = 2 with g = cos(a .), h = tanh(.).
IndependenceReport independence_check(const PathConfig& cfg, std::size_t samples);

/// E[f(x + X_t); kappa_D > t]; exit checked after every step. x outside D gives 0
/// and t = 0 gives f(x) exactly.
MeanEstimate killed_semigroup(const PathConfig& cfg, const std::function<double(const Point&)>& f, double t, const Point& x);

struct EllipticEstimate {
    MeanEstimate value;          ///< -E int_0^kappa f(x + X_s) ds
    MeanEstimate exit_time;      ///< E kappa
    MeanEstimate exit_time_sq;   ///< E kappa^2
    MeanEstimate exit_time_sq_half;  ///< E kappa^2 over the first half of the paths
    std::size_t truncated = 0;   ///< paths still alive at max_time
    std::vector<std::string> warnings;
};

/// Left-point path-time quadrature of -int_0^kappa f. f must be bounded.
/// Adds a warning when `ci_target` > 0 and 1.96 stderr exceeds it.
EllipticEstimate elliptic_representation(const PathConfig& cfg, const std::function<double(const Point&)>& f,
                                         const Point& x, double ci_target = 0.0);

struct DtBiasReport {
    MeanEstimate coarse;
    MeanEstimate fine;
    double difference = 0.0;
    double ci_width = 0.0;  ///< 1.96 * stderr of the difference
    bool within() const { return difference <= ci_width; }
};

/// killed_semigroup at dt and dt / 2 with independent seeds.
DtBiasReport dt_bias_check(const PathConfig& cfg, const std::function<double(const Point&)>& f, double t, const Point& x);

}  // namespace nonlocal
