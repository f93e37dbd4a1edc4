#pragma once

namespace nonlocal {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Gamma function for real arguments.
///
/// Lanczos approximation (g = 7, nine coefficients) on [0.5, inf) and Euler's
/// reflection Gamma(x) Gamma(1 - x) = pi / sin(pi x) below 0.5. Relative
/// accuracy is about 1e-15 on (-3, 5) away from the poles. Throws DomainError
/// at non-positive integers.
double gamma_fn(double x);

/// c_alpha = int_0^inf (1 - cos r) r^{-1-alpha} dr = pi / (2 Gamma(1+alpha) sin(pi alpha / 2)).
///
/// A symmetric pair of atoms {+theta, -theta} with weight w contributes
/// 2 w c_alpha |xi . theta|^alpha to the Levy symbol.
double stable_symbol_constant(double alpha);

/// C_{d,alpha} such that nu(dy) = C |y|^{-d-alpha} dy gives L = -(-Delta)^{alpha/2}.
double fractional_laplacian_constant(int dim, double alpha);

/// Surface area of S^{d-1}.
double sphere_area(int dim);

/// int_{S^{d-1}} |theta_1|^alpha dsigma(theta).
double sphere_abs_moment(int dim, double alpha);

}  // namespace nonlocal
