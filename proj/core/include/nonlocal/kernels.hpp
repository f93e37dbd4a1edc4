#pragma once

#include "nonlocal/levy.hpp"
#include "nonlocal/point.hpp"

namespace nonlocal {

/// Sign of the half-line power kernel constant.
enum class KernelSign { Positive, Zero, Negative };

const char* to_string(KernelSign s);

/// Constant K with L[(x_+)^beta](x) = K x^{beta - alpha} on the half-line.
///
/// `normalization` selects the 1D operator: Raw is (1/2) int (...) |y|^{-1-alpha} dy,
/// FractionalLaplacian is -(-Delta)^{alpha/2}. Custom is rejected.
/// Requires alpha in (0, 2) and beta in (-1, alpha); throws DomainError otherwise.
/// Returns exactly 0 at beta = alpha/2 and beta = -1 + alpha/2.
double kernel_constant(double alpha, double beta, Normalization normalization = Normalization::Raw);

struct OracleControls {
    int panel_points = 24;      ///< Gauss-Legendre points per panel
    int levels = 40;            ///< geometric panels toward each singular endpoint
    double inner_cutoff = 0.5;  ///< Taylor subtraction on (0, inner_cutoff]
    double tolerance = 1e-9;    ///< allowed gap between the rule and its refinement
};

/// Independent quadrature of int_0^inf ((1+y)^beta + (1-y)_+^beta - 2) y^{-1-alpha} dy,
/// i.e. L[(x_+)^beta](1), scaled for the requested normalization.
///
/// Every piece is computed twice (panel_points and 2*panel_points); a gap
/// above `tolerance` raises ConvergenceError with the per-piece values.
double pv_kernel_oracle(double alpha, double beta, const OracleControls& controls = {},
                        Normalization normalization = Normalization::Raw);

/// Directional constant for half-space powers:
/// L[((x.rho)_+)^beta](x) = N (x.rho)^{beta - alpha} with
/// N = (K_raw / 2) int |theta.rho|^alpha mu(dtheta).
double halfspace_constant(double alpha, double beta, const Point& rho, const SpectralMeasure& m);

KernelSign kernel_sign(double alpha, double beta);

}  // namespace nonlocal
