#pragma once

#include <functional>
#include <vector>

namespace nonlocal {

/// Nodes and weights of an interpolatory rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (cached per n, thread-safe).
const GaussRule& gauss_legendre(int n);

/// n-point Gauss-Jacobi rule for the weight (1 - t)^a (1 + t)^b on [-1, 1],
/// built by Golub-Welsch. Requires a, b > -1.
GaussRule gauss_jacobi(int n, double a, double b);

using RealFunction = std::function<double(double)>;

/// Composite rule on [lo, hi] with one panel.
double integrate_panel(const RealFunction& f, double lo, double hi, const GaussRule& rule);

/// Geometrically graded panels clustering at `lo` (when `toward_lo`) or `hi`.
///
/// Panel k spans a fraction ratio^k of the interval; `levels` panels are
/// used and the remaining sliver is integrated with a single midpoint value.
/// Suited to integrands that are bounded but not smooth at one endpoint.
double integrate_graded(const RealFunction& f, double lo, double hi, bool toward_lo,
                        const GaussRule& rule, int levels = 48, double ratio = 0.5);

/// Double-exponential (tanh-sinh) quadrature on a finite interval.
///
/// Handles integrable algebraic endpoint singularities; f may be evaluated
/// within rounding of an endpoint. `tolerance` is the target relative error.
/// The reported estimate is the last level-to-level change, so the call
/// throws ConvergenceError only if it exceeds `sqrt(tolerance) * max(1, L1)`.
double integrate_endpoint_singular(const RealFunction& f, double lo, double hi,
                                   double tolerance = 1e-10, double* error_estimate = nullptr);

/// Adaptive Gauss-Kronrod (21 points, bisection) for integrands smooth on [lo, hi].
/// Throws ConvergenceError if the error estimate exceeds `tolerance * max(1, L1)`.
double integrate_adaptive(const RealFunction& f, double lo, double hi, double tolerance = 1e-10,
                          double* error_estimate = nullptr);

}  // namespace nonlocal
