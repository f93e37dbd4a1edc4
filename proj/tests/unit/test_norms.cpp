#include "nonlocal/error.hpp"
#include "nonlocal/grid.hpp"
#include "nonlocal/norms.hpp"
#include "nonlocal/solve.hpp"

#include <doctest.h>

#include <cmath>

using namespace nonlocal;

namespace {

WeightedNormSpec spec(double p, double theta, NormOrder o = NormOrder::Zero) {
    WeightedNormSpec s;
    s.p = p;
    s.theta = theta;
    s.order = o;
    return s;
}

}  // namespace

TEST_CASE("weighted L_p on the unit interval") {
    auto g = Grid::interval(Domain(Interval{0.0, 1.0}), 400);
    auto one = GridFunction::sample(g, [](const Point&) { return 1.0; });
    CHECK(weighted_Lp(one, spec(2.0, 1.0)) == doctest::Approx(1.0).epsilon(1e-2));
    // (int_0^1 min(x, 1-x) dx)^{1/2}
    CHECK(weighted_Lp(one, spec(2.0, 2.0)) == doctest::Approx(0.5).epsilon(1e-2));
    // d^{alpha/2} against theta = 1 - alpha: weights cancel
    const double a = 0.8;
    auto pw = GridFunction::sample(g, [](const Point& x) { return std::pow(std::min(x[0], 1.0 - x[0]), 0.4); });
    CHECK(weighted_Lp(pw, spec(2.0, 1.0 - a)) == doctest::Approx(weighted_Lp(one, spec(2.0, 1.0))).epsilon(2e-2));
}

TEST_CASE("first-order weighted norm") {
    auto g = Grid::interval(Domain(Interval{0.0, 1.0}), 2000);
    auto c = GridFunction::sample(g, [](const Point&) { return 3.0; });
    CHECK(weighted_sobolev_int(c, spec(2.0, 1.0, NormOrder::One)) ==
          doctest::Approx(weighted_Lp(c, spec(2.0, 1.0))).epsilon(1e-3));
    // u = x: (int x^2)^{1/2} + (int min(x,1-x)^2)^{1/2}
    auto x = GridFunction::sample(g, [](const Point& p) { return p[0]; });
    CHECK(weighted_sobolev_int(x, spec(2.0, 1.0, NormOrder::One)) ==
          doctest::Approx(1.0 / std::sqrt(3.0) + 1.0 / std::sqrt(12.0)).epsilon(2e-3));
}

TEST_CASE("dyadic norm") {
    Domain D(Interval{0.0, 1.0});
    auto g = Grid::interval(D, 400);
    auto part = build_partition(D, 1.0, std::exp(2.0));
    CHECK(dyadic_norm(GridFunction::zeros(g), spec(2.0, 1.0), part) == 0.0);
    auto u = GridFunction::sample(g, [](const Point& x) { return std::sin(3.0 * x[0]) + 0.2; });
    double dy = dyadic_norm(u, spec(2.0, 1.0), part);
    double in = weighted_Lp(u, spec(2.0, 1.0));
    CHECK(dy > 0.0);
    CHECK(dy / in < 10.0);
    CHECK(in / dy < 10.0);
}

TEST_CASE("norm spec validation") {
    CHECK_THROWS(spec(0.5, 1.0).validate());
    auto s = spec(2.0, 1.0);
    s.validate();
}

TEST_CASE("estimate ratio is invariant under scaling the data") {
    Domain D(Interval{-1.0, 1.0});
    auto g = Grid::interval(D, 200);
    StableOperator op(SpectralMeasure::fractional_laplacian(1.0, 1));
    auto A = DiscreteOperator::build(op, g);
    auto f1 = GridFunction::sample(g, [](const Point&) { return -1.0; });
    auto f5 = f1 * 5.0;
    auto u1 = solve_elliptic(A, f1).u;
    auto u5 = solve_elliptic(A, f5).u;
    auto [lo, hi] = theta_window(1, 2.0);
    double th = 0.5 * (lo + hi);
    auto r1 = estimate_ratio(u1, f1, 2.0, th, 1.0);
    auto r5 = estimate_ratio(u5, f5, 2.0, th, 1.0);
    CHECK(std::isfinite(r1.ratio_psi));
    CHECK(r1.ratio_psi > 0.0);
    CHECK(r5.ratio_psi == doctest::Approx(r1.ratio_psi).epsilon(1e-9));
    CHECK_THROWS_AS(estimate_ratio(u1, f1, 2.0, hi + 0.5, 1.0), DomainError);
    CHECK_FALSE(estimate_ratio(u1, f1, 2.0, hi + 0.5, 1.0, false).inside_window);
}
