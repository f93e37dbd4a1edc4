#include "nonlocal/error.hpp"
#include "nonlocal/special.hpp"
#include "nonlocal/stable_mc.hpp"

#include <doctest.h>

#include <cmath>

using namespace nonlocal;

namespace {

PathConfig config(double alpha, std::size_t paths) {
    return PathConfig{SpectralMeasure::fractional_laplacian(alpha, 1), Domain(Interval{-1.0, 1.0}), 1e-3, 7, paths, 1, 50.0};
}

}  // namespace

TEST_CASE("symbol of the fractional laplacian measure is -|xi|^alpha") {
    for (double a : {0.5, 1.0, 1.5})
        CHECK(levy_symbol(SpectralMeasure::fractional_laplacian(a, 1), {2.0, 0.0, 0.0}) ==
              doctest::Approx(-std::pow(2.0, a)).epsilon(1e-12));
}

TEST_CASE("zero step") {
    auto cfg = config(1.2, 1);
    auto rng = path_rng(cfg.seed, 0);
    Point z = sample_increment(cfg, 0.0, rng);
    CHECK(z[0] == 0.0);
}

TEST_CASE("per-path streams are reproducible") {
    auto a = path_rng(5, 17), b = path_rng(5, 17), c = path_rng(5, 18);
    CHECK(a() == b());
    CHECK(a() != c());
}

TEST_CASE("increment characteristic function") {
    for (double a : {0.7, 1.0, 1.6}) {
        auto cfg = config(a, 1000);
        cfg.dt = 0.05;
        auto rep = characteristic_function_check(cfg, {{0.5, 0, 0}, {1.0, 0, 0}, {3.0, 0, 0}}, 200000);
        CAPTURE(a);
        CHECK(rep.pass(4.0));
    }
}

TEST_CASE("axis increments are independent") {
    PathConfig cfg{SpectralMeasure::axis_atoms(1.0, 2, {1, 1, 1, 1}), Domain(Square{1.0}), 0.05, 3, 1000, 1, 50.0};
    auto rep = independence_check(cfg, 200000);
    CHECK(rep.z < 4.0);
}

TEST_CASE("killed semigroup edge cases") {
    auto cfg = config(1.0, 2000);
    auto f = [](const Point& x) { return 1.0 + x[0]; };
    auto t0 = killed_semigroup(cfg, f, 0.0, point1(0.3));
    CHECK(t0.mean == 1.3);
    CHECK(t0.std_error == 0.0);
    CHECK(killed_semigroup(cfg, f, 0.5, point1(1.5)).mean == 0.0);
    auto late = killed_semigroup(cfg, [](const Point&) { return 1.0; }, 20.0, point1(0.0));
    CHECK(late.mean < 0.01);
}

TEST_CASE("exit-time representation") {
    auto cfg = config(1.0, 20000);
    auto zero = elliptic_representation(cfg, [](const Point&) { return 0.0; }, point1(0.0));
    CHECK(zero.value.mean == 0.0);
    // u(0) = 1 for f = -1 at alpha = 1
    auto est = elliptic_representation(cfg, [](const Point&) { return -1.0; }, point1(0.0));
    CHECK(std::abs(est.value.mean - 1.0) <= 3.0 * est.value.std_error + 0.02);
    CHECK(std::isfinite(est.exit_time_sq.mean));
    CHECK(est.truncated == 0);
}

TEST_CASE("path config validation") {
    auto cfg = config(1.0, 0);
    CHECK_THROWS(cfg.validate());
}
