#include "nonlocal/error.hpp"
#include "nonlocal/grid.hpp"
#include "nonlocal/solve.hpp"
#include "nonlocal/special.hpp"

#include <doctest.h>

#include <cmath>

using namespace nonlocal;

TEST_CASE("zero data gives the zero solution") {
    auto g = Grid::interval(Domain(Interval{-1.0, 1.0}), 100);
    auto A = DiscreteOperator::build(StableOperator(SpectralMeasure::fractional_laplacian(0.9, 1)), g);
    auto sol = solve_elliptic(A, [](const Point&) { return 0.0; });
    CHECK(sol.u.values().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("interval solve against the closed-form profile") {
    const double a = 1.0;
    Domain D(Interval{-1.0, 1.0});
    auto g = Grid::interval(D, 1024);
    auto A = DiscreteOperator::build(StableOperator(SpectralMeasure::fractional_laplacian(a, 1)), g);
    auto sol = solve_elliptic(A, [](const Point&) { return -1.0; });
    CHECK(sol.residual < 1e-10);
    CHECK(sol.max_principle);
    // u = C (1 - x^2)^{a/2}, C = 1 at a = 1
    for (std::size_t i = 0; i < g->size(); ++i) {
        double x = g->node(i)[0];
        if (1.0 - std::abs(x) < 0.05) continue;
        CHECK(sol.u[i] == doctest::Approx(std::sqrt(1.0 - x * x)).epsilon(0.01));
    }
    auto fit = boundary_exponent_fit(sol.u);
    CHECK(fit.slope >= 0.47);
    CHECK(fit.slope <= 0.53);
}

TEST_CASE("exponent fit on exact powers") {
    Domain D(Interval{-1.0, 1.0});
    auto g = Grid::interval(D, 2048);
    auto p = GridFunction::sample(g, [](const Point& x) { return std::pow(1.0 - std::abs(x[0]), 0.7); });
    CHECK(boundary_exponent_fit(p).slope == doctest::Approx(0.7).epsilon(1e-3 / 0.7));
    auto lin = GridFunction::sample(g, [](const Point& x) { return 1.0 - std::abs(x[0]); });
    CHECK(boundary_exponent_fit(lin).slope == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("axis-atom square solve is positive and symmetric") {
    Domain S(Square{1.0});
    const int n = 16;
    auto g = Grid::square(S, n);
    auto m = SpectralMeasure::axis_atoms(1.0, 2, {1.0, 1.0, 1.0, 1.0});
    auto sol = solve_elliptic(DiscreteOperator::build(StableOperator(m), g), [](const Point&) { return -1.0; });
    CHECK(sol.u.values().minCoeff() > 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double v = sol.u[g->lattice_index(i, j)];
            CHECK(sol.u[g->lattice_index(j, i)] == doctest::Approx(v).epsilon(1e-10));
            CHECK(sol.u[g->lattice_index(n - 1 - i, j)] == doctest::Approx(v).epsilon(1e-10));
        }
}

TEST_CASE("parabolic maximum principle") {
    auto m = SpectralMeasure::axis_atoms(1.0, 2, {1.0, 1.0, 1.0, 1.0});
    LevyFamily fam({0.0, 1.0}, {m}, m);
    auto g = Grid::square(Domain(Square{1.0}), 12);
    ParabolicProblem P{fam, g, [](double, const Point&) { return 0.0; }, [](const Point&) { return 0.0; }, 0.5, 0.05};
    auto zero = solve_parabolic(P);
    CHECK(zero.snapshots.back().values().cwiseAbs().maxCoeff() == 0.0);

    P.u0 = [](const Point& x) { return x[0] * (1.0 - x[0]) * x[1] * (1.0 - x[1]); };
    auto decay = solve_parabolic(P);
    CHECK(decay.max_principle);
    for (std::size_t k = 1; k < decay.sup_norms.size(); ++k) CHECK(decay.sup_norms[k] <= decay.sup_norms[k - 1] + 1e-15);
    for (const auto& s : decay.snapshots) CHECK(s.values().minCoeff() >= 0.0);
}

TEST_CASE("parabolic switch between pieces") {
    auto env = SpectralMeasure::axis_atoms(1.0, 2, {0.5, 0.5, 0.5, 0.5});
    auto a = SpectralMeasure::axis_atoms(1.0, 2, {1.0, 1.0, 1.0, 1.0});
    auto b = SpectralMeasure::axis_atoms(1.0, 2, {2.0, 2.0, 0.5, 0.5});
    LevyFamily fam({0.0, 0.5, 1.0}, {a, b}, env);
    REQUIRE(check_envelope(fam).dominated);
    auto g = Grid::square(Domain(Square{1.0}), 12);
    ParabolicProblem P{fam, g, [](double, const Point&) { return 1.0; }, [](const Point&) { return 0.0; }, 1.0, 0.05};
    auto sol = solve_parabolic(P);
    CHECK(sol.switch_steps.size() == 1);
    CHECK(sol.max_principle);
    // no jump at the switch beyond an ordinary step
    CHECK(sol.largest_step_change <= P.dt * 1.0 + 1e-12);
    double r = parabolic_ratio(P, sol, 2.0, 2.0);
    CHECK(std::isfinite(r));
    CHECK(r > 0.0);
}

TEST_CASE("barrier sign flips above the range") {
    StableOperator op(SpectralMeasure::fractional_laplacian(1.2, 1));
    Domain D(Interval{0.0, 1.0});
    const double mid = 0.5 * ((-1.0 + 0.6) + 0.6);
    auto in = barrier_check(op, D, mid);
    CHECK(in.pass());
    CHECK(in.fit.slope == doctest::Approx(mid - 1.2).epsilon(0.1 / 1.0));
    auto out = barrier_check(op, D, 0.9, {}, false);
    CHECK_FALSE(out.sign_ok);
    CHECK(out.worst_value > 0.0);
    CHECK_THROWS_AS(barrier_check(op, D, 0.9), DomainError);
}

TEST_CASE("hardy ratio") {
    StableOperator op(SpectralMeasure::raw(1.0, 1));
    auto rep = hardy_check(op, 2.0, 0.0, {{0.4, 0.6, 1.0}});
    CHECK(rep.rhs_positive);
    CHECK(std::isfinite(rep.sup_ratio));
    auto scaled = hardy_check(op, 2.0, 0.0, {{0.4, 0.6, 5.0}});
    CHECK(scaled.sup_ratio == doctest::Approx(rep.sup_ratio).epsilon(1e-9));
    double last = 0.0;
    for (double a : {0.2, 0.1, 0.05}) {
        auto r = hardy_check(op, 2.0, 0.0, {{a, a + 0.2, 1.0}});
        CHECK(r.rows.front().rhs > last);
        last = r.rows.front().rhs;
        CHECK(std::isfinite(r.sup_ratio));
    }
    CHECK(default_hardy_family().size() == 10);
}
