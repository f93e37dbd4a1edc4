#include "nonlocal/error.hpp"
#include "nonlocal/levy.hpp"
#include "nonlocal/special.hpp"

#include <doctest.h>

#include <cmath>

using namespace nonlocal;

TEST_CASE("nondegeneracy constant") {
    SpectralMeasure one_d(0.7, 1, {{{1.0, 0.0, 0.0}, 1.0}, {{-1.0, 0.0, 0.0}, 1.0}});
    CHECK(nondegeneracy_lambda(one_d, 16) == doctest::Approx(2.0).epsilon(1e-14));

    auto axes = SpectralMeasure::axis_atoms(1.0, 2, {1.0, 1.0, 1.0, 1.0});
    CHECK(nondegeneracy_lambda(axes, 720) == doctest::Approx(2.0).epsilon(1e-6));

    // oracle: trapezoid of |cos phi| / (2 pi) over the circle, 2/pi per unit mass
    double trap = 0.0;
    const int n = 1 << 16;
    for (int i = 0; i < n; ++i) trap += std::abs(std::cos(2.0 * kPi * i / n));
    trap /= n;
    SpectralMeasure uniform(1.0, 2, {}, {SphericalDensity::Kind::Uniform, 1.0});
    CHECK(trap == doctest::Approx(2.0 / kPi).epsilon(1e-9));
    CHECK(nondegeneracy_lambda(uniform, 64) == doctest::Approx(trap).epsilon(1e-4));
}

TEST_CASE("total mass") {
    CHECK(total_mass(SpectralMeasure::axis_atoms(1.0, 2, {1, 1, 1, 1})) == doctest::Approx(4.0));
    CHECK(total_mass(SpectralMeasure(1.0, 1, {{{1.0, 0.0, 0.0}, 3.0}})) == doctest::Approx(3.0));
    SpectralMeasure dens(1.0, 2, {}, {SphericalDensity::Kind::Uniform, 2.0 * kPi * 0.25});
    CHECK(total_mass(dens) == doctest::Approx(2.0 * kPi * 0.25));
}

TEST_CASE("presets") {
    auto raw = SpectralMeasure::raw(1.3, 1);
    REQUIRE(raw.atoms().size() == 2);
    CHECK(raw.atoms()[0].weight == 1.0);
    CHECK(raw.normalization() == Normalization::Raw);
    auto fl = SpectralMeasure::fractional_laplacian(1.3, 1);
    CHECK(total_mass(fl) == doctest::Approx(2.0 * fractional_laplacian_constant(1, 1.3)));
    CHECK_THROWS_AS(SpectralMeasure::raw(2.0, 1), DomainError);
}

TEST_CASE("envelope domination") {
    auto env = SpectralMeasure::axis_atoms(1.0, 2, {0.5, 0.5, 0.5, 0.5});
    CHECK(check_envelope(LevyFamily({0.0, 1.0}, {env}, env)).dominated);

    auto low = SpectralMeasure::axis_atoms(1.0, 2, {0.5, 0.2, 0.5, 0.5});
    auto bad = check_envelope(LevyFamily({0.0, 0.5, 1.0}, {env, low}, env));
    CHECK_FALSE(bad.dominated);
    REQUIRE(!bad.violations.empty());
    CHECK(bad.violations.front().find("piece 1") != std::string::npos);

    std::vector<Atom> extra = env.atoms();
    extra.push_back({{std::sqrt(0.5), std::sqrt(0.5), 0.0}, 1.0});
    SpectralMeasure sup(1.0, 2, extra);
    CHECK(check_envelope(LevyFamily({0.0, 0.5, 1.0}, {sup, sup}, env)).dominated);
}

TEST_CASE("family lookup") {
    auto a = SpectralMeasure::axis_atoms(1.0, 2, {1, 1, 1, 1});
    auto b = SpectralMeasure::axis_atoms(1.0, 2, {2, 2, 0.5, 0.5});
    LevyFamily f({0.0, 0.5, 1.0}, {a, b}, a);
    CHECK(f.piece_index(0.0) == 0);
    CHECK(f.piece_index(0.5) == 0);
    CHECK(f.piece_index(0.51) == 1);
    CHECK(f.horizon() == 1.0);
}
