#include "nonlocal/error.hpp"
#include "nonlocal/geometry.hpp"
#include "nonlocal/levy.hpp"

#include <doctest.h>

#include <cmath>

using namespace nonlocal;

TEST_CASE("distance to the boundary") {
    CHECK(dist({0.3, 0.0, 0.0}, Domain(Interval{0.0, 1.0})) == doctest::Approx(0.3));
    CHECK(dist({0.6, 0.0, 0.0}, Domain(Disk{1.0})) == doctest::Approx(0.4));
    CHECK(dist({0.5, 0.2, 0.0}, Domain(Square{1.0})) == doctest::Approx(0.2));
    CHECK(dist({-0.1, 0.0, 0.0}, Domain(Interval{0.0, 1.0})) == 0.0);
    CHECK(dist({5.0, 0.0, 0.0}, Domain(HalfLine{})) == 5.0);
}

TEST_CASE("dyadic partition on the unit interval") {
    Domain D(Interval{0.0, 1.0});
    auto part = build_partition(D, 1.0, std::exp(2.0));
    double cmin = 1e300;
    for (int i = 1; i < 4000; ++i) cmin = std::min(cmin, part.coverage({i / 4000.0, 0.0, 0.0}));
    CHECK(cmin > 0.0);
    CHECK(part.checks().coverage_min > 0.0);
    for (int n : {1, 3, 6}) {
        double x = part.dist_c2() * std::exp(-n);
        if (x < 0.5) CHECK(part.zeta(n, {x, 0.0, 0.0}) == 0.0);
    }
    CHECK_THROWS_AS(build_partition(D, 1.0, 2.0), InvalidArgument);
}

TEST_CASE("regularized distance is comparable to the distance") {
    Domain D(Interval{0.0, 1.0});
    auto rd = regularized_distance(D, build_partition(D, 1.0, std::exp(2.0)));
    double lo = 1e300, hi = 0.0;
    for (int k = 2; k < 40; ++k) {
        double x = std::ldexp(1.0, -k);
        double r = rd.psi({x, 0.0, 0.0}).value / x;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    CHECK(lo > 0.0);
    CHECK(hi / lo < 100.0);

    Domain H(HalfLine{});
    auto rh = regularized_distance(H, build_partition(H, 1.0, std::exp(2.0)));
    double far = rh.psi({1e3, 0.0, 0.0}).value / 1e3;
    CHECK(far > 0.01);
    CHECK(far < 100.0);
}

TEST_CASE("concavity of the distance on convex domains") {
    for (Domain D : {Domain(Square{1.0}), Domain(Disk{1.0}), Domain(Interval{0.0, 1.0}), Domain(HalfLine{})}) {
        auto rep = convexity_gap_check(D, 10000, 11);
        CHECK(rep.samples == 10000);
        CHECK(rep.violations == 0);
        CHECK(rep.worst_gap >= -1e-12);
    }
}

TEST_CASE("distance power convention") {
    CHECK(distance_power(0.0, 0.0) == 1.0);
    CHECK(distance_power(0.0, 0.5) == 0.0);
    CHECK(distance_power(4.0, 0.5) == doctest::Approx(2.0));
}

TEST_CASE("tail integral") {
    Domain D(Interval{0.0, 1.0});
    auto raw = SpectralMeasure::raw(1.5, 1);
    // no distance factor: every direction contributes rho^{-k1} / k1
    CHECK(tail_integral(D, raw, 1.5, 0.0, {0.1, 0.0, 0.0}, 0.05) ==
          doctest::Approx(2.0 * std::pow(0.05, -1.5) / 1.5).epsilon(1e-13));
    // 30-digit quadrature of sum_pm int d(0.1 pm r)^{-1/2} r^{-5/2} dr over r >= 0.05
    CHECK(tail_integral(D, raw, 1.5, -0.5, {0.1, 0.0, 0.0}, 0.05) ==
          doctest::Approx(401.0147838333207).epsilon(1e-8));
    CHECK_THROWS_AS(tail_integral(D, raw, 1.5, 1.5, {0.1, 0.0, 0.0}, 0.05), DomainError);
}

TEST_CASE("graded sample points approach the boundary") {
    Domain D(Disk{1.0});
    auto pts = D.graded_points(8, 1);
    REQUIRE(!pts.empty());
    double dmin = 1.0;
    for (const auto& p : pts) {
        CHECK(D.contains(p));
        dmin = std::min(dmin, D.dist(p));
    }
    CHECK(dmin < 0.01);
}
