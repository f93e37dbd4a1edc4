#include "nonlocal/special.hpp"

#include "nonlocal/error.hpp"

#include <array>
#include <cmath>
#include <string>

namespace nonlocal {

namespace {

constexpr int kLanczosG = 7;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

double gamma_fn(double x) {
    if (!std::isfinite(x)) {
        throw DomainError("gamma_fn: non-finite argument");
    }
    if (x <= 0.0 && x == std::floor(x)) {
        throw DomainError("gamma_fn: pole at " + std::to_string(x));
    }
    if (x < 0.5) {
        return kPi / (std::sin(kPi * x) * gamma_fn(1.0 - x));
    }
    const double z = x - 1.0;
    double sum = kLanczos[0];
    for (int i = 1; i < kLanczosG + 2; ++i) {
        sum += kLanczos[i] / (z + i);
    }
    const double t = z + kLanczosG + 0.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * sum;
}

double stable_symbol_constant(double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0)) {
        throw DomainError("stable_symbol_constant: alpha must lie in (0,2)");
    }
    return kPi / (2.0 * gamma_fn(1.0 + alpha) * std::sin(kPi * alpha / 2.0));
}

double fractional_laplacian_constant(int dim, double alpha) {
    if (dim < 1) {
        throw DomainError("fractional_laplacian_constant: dim must be >= 1");
    }
    if (!(alpha > 0.0 && alpha < 2.0)) {
        throw DomainError("fractional_laplacian_constant: alpha must lie in (0,2)");
    }
    return std::pow(2.0, alpha) * gamma_fn((dim + alpha) / 2.0) /
           (std::pow(kPi, dim / 2.0) * std::abs(gamma_fn(-alpha / 2.0)));
}

double sphere_area(int dim) {
    if (dim < 1) {
        throw DomainError("sphere_area: dim must be >= 1");
    }
    return 2.0 * std::pow(kPi, dim / 2.0) / gamma_fn(dim / 2.0);
}

double sphere_abs_moment(int dim, double alpha) {
    if (dim < 1) {
        throw DomainError("sphere_abs_moment: dim must be >= 1");
    }
    if (dim == 1) {
        return 2.0;
    }
    return 2.0 * std::pow(kPi, (dim - 1) / 2.0) * gamma_fn((alpha + 1.0) / 2.0) /
           gamma_fn((dim + alpha) / 2.0);
}

}  // namespace nonlocal
