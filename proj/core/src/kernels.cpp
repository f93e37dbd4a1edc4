#include "nonlocal/kernels.hpp"

#include "nonlocal/defaults.hpp"
#include "nonlocal/error.hpp"
#include "nonlocal/quadrature.hpp"
#include "nonlocal/special.hpp"

#include <cmath>
#include <sstream>

namespace nonlocal {

const char* to_string(KernelSign s) {
    switch (s) {
        case KernelSign::Positive: return "positive";
        case KernelSign::Zero: return "zero";
        case KernelSign::Negative: return "negative";
    }
    return "zero";
}

namespace {

void check_range(double alpha, double beta) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("alpha must lie in (0, 2)");
    if (!(beta > -1.0 && beta < alpha)) throw DomainError("beta must lie in (-1, alpha)");
}

bool is_zero_point(double alpha, double beta) {
    return std::abs(beta - alpha / 2.0) <= defaults::kKernelZeroTolerance ||
           std::abs(beta - (alpha / 2.0 - 1.0)) <= defaults::kKernelZeroTolerance;
}

double normalization_factor(double alpha, Normalization n) {
    switch (n) {
        case Normalization::Raw: return 1.0;
        case Normalization::FractionalLaplacian: return fractional_laplacian_constant(1, alpha);
        case Normalization::Custom: break;
    }
    throw InvalidArgument("kernel constants need the raw or fractional-laplacian normalization");
}

double raw_kernel(double alpha, double beta) {
    if (std::abs(alpha - 1.0) < defaults::kAlphaOneBranch) {
        double x = kPi * beta;
        if (std::abs(x) < 1e-8) return -1.0 + x * x / 3.0;
        return -x / std::tan(x);
    }
    return -(2.0 / kPi) * gamma_fn(-alpha) * gamma_fn(1.0 + beta) * gamma_fn(alpha - beta) *
           std::cos(alpha * kPi / 2.0) * std::sin((beta - alpha / 2.0) * kPi);
}

// 2 * sum_{k >= 4, even} binom(beta, k) y^k, i.e. the even part of
// (1+y)^beta + (1-y)^beta - 2 minus its quadratic term; |y| <= 1/2 keeps
// the series short.
double even_remainder(double beta, double y) {
    double b = 1.0;
    double yk = 1.0;
    double s = 0.0;
    for (int k = 1; k < 200; ++k) {
        b *= (beta - k + 1.0) / k;
        yk *= y;
        if (k >= 4 && k % 2 == 0) {
            double term = 2.0 * b * yk;
            s += term;
            if (std::abs(term) < 1e-18 * std::abs(s) || b == 0.0) break;
        }
    }
    return s;
}

struct OraclePieces {
    double inner = 0.0;
    double middle = 0.0;
    double reflected = 0.0;
    double outer = 0.0;
    double total() const { return inner + middle + reflected + outer; }
};

OraclePieces oracle_pieces(double alpha, double beta, const OracleControls& ctl, int points) {
    const auto& rule = gauss_legendre(points);
    const double c = ctl.inner_cutoff;
    OraclePieces p;

    // (0, c]: Taylor-subtracted remainder plus the exact quadratic part
    double quad = beta * (beta - 1.0) * std::pow(c, 2.0 - alpha) / (2.0 - alpha);
    p.inner = quad + integrate_graded([&](double y) { return even_remainder(beta, y) * std::pow(y, -1.0 - alpha); },
                                      0.0, c, true, rule, ctl.levels);

    // (c, 1): smooth part, then the (1-y)^beta part
    p.middle = integrate_panel([&](double y) { return (std::pow(1.0 + y, beta) - 2.0) * std::pow(y, -1.0 - alpha); },
                               c, 1.0, rule);
    // t = 1 - y carries the t^beta endpoint weight, handled by Gauss-Jacobi
    const double len = 1.0 - c;
    GaussRule jac = gauss_jacobi(points, 0.0, beta);
    double acc = 0.0;
    for (std::size_t i = 0; i < jac.nodes.size(); ++i) {
        double t = 0.5 * len * (1.0 + jac.nodes[i]);
        acc += jac.weights[i] * std::pow(1.0 - t, -1.0 - alpha);
    }
    p.reflected = acc * std::pow(0.5 * len, 1.0 + beta);

    // (1, inf): split off y^beta exactly, then y = 1/s on the rest
    double g = alpha - beta;
    p.outer = integrate_graded([&](double s) { return std::pow(s, g - 1.0) * (std::pow(1.0 + s, beta) - 1.0); },
                               0.0, 1.0, true, rule, ctl.levels) +
              1.0 / g - 2.0 / alpha;
    return p;
}

}  // namespace

double kernel_constant(double alpha, double beta, Normalization normalization) {
    check_range(alpha, beta);
    double f = normalization_factor(alpha, normalization);
    if (is_zero_point(alpha, beta)) return 0.0;
    return f * raw_kernel(alpha, beta);
}

double pv_kernel_oracle(double alpha, double beta, const OracleControls& controls, Normalization normalization) {
    check_range(alpha, beta);
    double f = normalization_factor(alpha, normalization);
    if (controls.panel_points < 2 || controls.levels < 1 || !(controls.inner_cutoff > 0.0 && controls.inner_cutoff <= 0.5))
        throw InvalidArgument("oracle controls: need panel_points >= 2, levels >= 1, inner_cutoff in (0, 0.5]");
    OraclePieces coarse = oracle_pieces(alpha, beta, controls, controls.panel_points);
    OraclePieces fine = oracle_pieces(alpha, beta, controls, 2 * controls.panel_points);
    double gap = std::abs(fine.total() - coarse.total());
    if (!(gap <= controls.tolerance * (1.0 + std::abs(fine.total())))) {
        std::ostringstream os;
        os.precision(12);
        os << "pv_kernel_oracle(" << alpha << ", " << beta << ") did not converge: coarse/fine pieces"
           << " inner " << coarse.inner << "/" << fine.inner << " middle " << coarse.middle << "/" << fine.middle
           << " reflected " << coarse.reflected << "/" << fine.reflected << " outer " << coarse.outer << "/"
           << fine.outer;
        throw ConvergenceError(os.str());
    }
    return f * fine.total();
}

double halfspace_constant(double alpha, double beta, const Point& rho, const SpectralMeasure& m) {
    check_range(alpha, beta);
    if (std::abs(alpha - m.alpha()) > 0.0) throw InvalidArgument("measure alpha differs from the kernel alpha");
    if (!m.is_symmetric()) throw InvalidArgument("half-space constant needs a symmetric measure");
    if (std::abs(norm(rho) - 1.0) > 1e-9) throw InvalidArgument("rho must be a unit vector");
    double k = kernel_constant(alpha, beta, Normalization::Raw);
    if (k == 0.0) return 0.0;
    return 0.5 * k * m.projection_moment(rho);
}

KernelSign kernel_sign(double alpha, double beta) {
    check_range(alpha, beta);
    if (is_zero_point(alpha, beta)) return KernelSign::Zero;
    if (beta < alpha / 2.0 - 1.0 || beta > alpha / 2.0) return KernelSign::Positive;
    return KernelSign::Negative;
}

}  // namespace nonlocal
