#include "nonlocal/error.hpp"
#include "nonlocal/kernels.hpp"
#include "nonlocal/operator.hpp"
#include "nonlocal/special.hpp"

#include <doctest.h>

#include <cmath>

using namespace nonlocal;

namespace {

// Raw half-line constants from 40-digit direct integration of
// ((1+r)^b + (1-r)_+^b - 2) r^{-1-a} (series near 0, r -> 1/r in the tail).
struct Frozen {
    double alpha, beta, value;
};
const Frozen kFrozen[] = {
    {0.4, 0.1, -1.6863612094136026},  {0.8, -0.5, -0.55493559924402316}, {1.0, 0.25, -0.78539816339744831},
    {1.3, 0.9, 1.4511176110060678},   {1.7, 1.2, 2.481262079334239},     {1.5, -0.3, 0.20120237895067213},
    {0.6, 0.0, -1.6666666666666667},
};

}  // namespace

TEST_CASE("closed form against frozen integrals") {
    for (const auto& f : kFrozen) {
        CAPTURE(f.alpha);
        CAPTURE(f.beta);
        CHECK(std::abs(kernel_constant(f.alpha, f.beta) - f.value) <= 1e-12 * (1.0 + std::abs(f.value)));
    }
}

TEST_CASE("oracle against frozen integrals") {
    for (const auto& f : kFrozen) {
        CAPTURE(f.alpha);
        CAPTURE(f.beta);
        CHECK(std::abs(pv_kernel_oracle(f.alpha, f.beta) - f.value) <= 1e-7 * (1.0 + std::abs(f.value)));
    }
}

TEST_CASE("explicit value at alpha = 1, beta = 0") {
    CHECK(kernel_constant(1.0, 0.0, Normalization::FractionalLaplacian) == doctest::Approx(-1.0 / kPi).epsilon(1e-14));
    CHECK(kernel_constant(1.0, 0.0) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(pv_kernel_oracle(1.0, 0.0, {}, Normalization::FractionalLaplacian) ==
          doctest::Approx(-1.0 / kPi).epsilon(1e-8));
}

TEST_CASE("zero set is exact") {
    for (double a : {0.4, 1.0, 1.7}) {
        CHECK(kernel_constant(a, a / 2.0) == 0.0);
        CHECK(kernel_constant(a, a / 2.0 - 1.0) == 0.0);
        CHECK(std::abs(pv_kernel_oracle(a, a / 2.0 - 1.0)) < 1e-6);
    }
}

TEST_CASE("sign pattern") {
    CHECK(kernel_sign(1.2, -0.9) == KernelSign::Positive);
    CHECK(kernel_sign(1.2, 0.6) == KernelSign::Zero);
    CHECK(kernel_sign(1.2, 0.0) == KernelSign::Negative);
    CHECK(kernel_sign(1.2, 0.9) == KernelSign::Positive);
    CHECK(kernel_sign(1.5, 0.3) == KernelSign::Negative);
    CHECK(pv_kernel_oracle(1.5, 0.3) < 0.0);
    CHECK(kernel_sign(0.5, -0.4) == KernelSign::Negative);
    CHECK(pv_kernel_oracle(0.5, -0.4) < 0.0);
}

TEST_CASE("continuity across alpha = 1") {
    for (double b : {-0.3, 0.2, 0.7}) {
        double mid = kernel_constant(1.0, b);
        CHECK(kernel_constant(1.0 - 1e-7, b) == doctest::Approx(mid).epsilon(1e-5));
        CHECK(kernel_constant(1.0 + 1e-7, b) == doctest::Approx(mid).epsilon(1e-5));
    }
}

TEST_CASE("out of range") {
    CHECK_THROWS_AS(kernel_constant(1.0, 1.0), DomainError);
    CHECK_THROWS_AS(kernel_constant(1.0, -1.0), DomainError);
    CHECK_THROWS_AS(kernel_constant(0.0, 0.0), DomainError);
    CHECK_THROWS_AS(pv_kernel_oracle(1.0, 1.5), DomainError);
}

TEST_CASE("half-space constant") {
    auto one = SpectralMeasure::raw(1.0, 1);
    CHECK(halfspace_constant(1.0, 0.0, {1.0, 0.0, 0.0}, one) == doctest::Approx(-1.0).epsilon(1e-12));
    auto axes = SpectralMeasure::axis_atoms(1.0, 2, {1, 1, 1, 1});
    CHECK(halfspace_constant(1.0, 0.75, {1.0, 0.0, 0.0}, axes) ==
          doctest::Approx(kernel_constant(1.0, 0.75)).epsilon(1e-12));
    auto axes14 = SpectralMeasure::axis_atoms(1.4, 2, {1, 1, 1, 1});
    CHECK(halfspace_constant(1.4, 0.7, {0.6, 0.8, 0.0}, axes14) == 0.0);
}
