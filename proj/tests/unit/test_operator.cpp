#include "nonlocal/kernels.hpp"
#include "nonlocal/operator.hpp"
#include "nonlocal/special.hpp"
#include "nonlocal/stats.hpp"

#include <doctest.h>

#include <cmath>

using namespace nonlocal;

TEST_CASE("constants are annihilated") {
    StableOperator op(SpectralMeasure::fractional_laplacian(1.3, 2));
    CHECK(std::abs(apply(op, [](const Point&) { return 2.5; }, {0.1, 0.2, 0.0})) < 1e-9);
}

TEST_CASE("half-line power reproduces the kernel constant") {
    for (auto [a, b] : {std::pair{0.8, 0.1}, {1.0, 0.25}, {1.5, -0.3}}) {
        StableOperator op(SpectralMeasure::raw(a, 1));
        auto u = [b = b](const Point& x) { return x[0] > 0.0 ? std::pow(x[0], b) : 0.0; };
        double v = apply(op, u, point1(1.0), Domain(HalfLine{}));
        CHECK(v == doctest::Approx(kernel_constant(a, b)).epsilon(1e-7));
    }
}

TEST_CASE("distance profile has a constant image") {
    // -1/C with C = sqrt(pi) / (2^a Gamma((1+a)/2) Gamma(1+a/2)), 40 digits
    const std::pair<double, double> frozen[] = {{0.6, -0.89351534928769026}, {1.0, -1.0}, {1.4, -1.2421693445043053}};
    Domain D(Interval{-1.0, 1.0});
    for (auto [a, image] : frozen) {
        StableOperator op(SpectralMeasure::fractional_laplacian(a, 1));
        auto profile = [a = a](const Point& x) {
            double q = 1.0 - x[0] * x[0];
            return q > 0.0 ? std::pow(q, 0.5 * a) : 0.0;
        };
        for (double x : {0.0, 0.4, -0.85}) CHECK(apply(op, profile, point1(x), D) == doctest::Approx(image).epsilon(1e-7));
    }
}

TEST_CASE("symbol of the raw kernel") {
    // -pi / (Gamma(1+a) sin(pi a / 2)) |xi|^a
    const std::pair<double, double> frozen[] = {{0.5, -5.013256549262001}, {1.0, -3.1415926535897932},
                                                {1.5, -3.342171032841334}};
    for (auto [a, c] : frozen) {
        for (double xi : {0.5, 2.0}) {
            QuadratureControls q;
            q.max_panel_width = 1.0 / xi;
            q.tail_radius = 2e4;
            StableOperator op(SpectralMeasure::raw(a, 1), q);
            double v = apply(op, [xi = xi](const Point& x) { return std::cos(xi * x[0]); }, point1(0.0));
            CHECK(v == doctest::Approx(c * std::pow(xi, a)).epsilon(1e-5));
        }
    }
}

TEST_CASE("stiffness matrix structure") {
    StableOperator op(SpectralMeasure::fractional_laplacian(1.2, 1));
    auto A = assemble_matrix_1d(op, Domain(Interval{-1.0, 1.0}), 64);
    CHECK((A - A.transpose()).cwiseAbs().maxCoeff() < 1e-12 * A.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        CHECK(A(i, i) < 0.0);
        CHECK(A.row(i).sum() < 0.0);
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            if (j != i) CHECK(A(i, j) >= 0.0);
    }
}

TEST_CASE("stiffness converges to the operator on a bump") {
    const double a = 1.0;
    StableOperator op(SpectralMeasure::fractional_laplacian(a, 1));
    Domain D(Interval{-1.0, 1.0});
    auto bump = [](double x) { return std::abs(x) < 0.5 ? std::exp(-1.0 / (1.0 - 4.0 * x * x)) : 0.0; };
    const double exact = apply(op, [&](const Point& x) { return bump(x[0]); }, point1(0.0));
    std::vector<double> hs, errs;
    for (int k = 6; k <= 10; ++k) {
        int n = (1 << k) - 1;  // x = 0 is the middle node
        double h = 2.0 / (n + 1);
        auto A = assemble_matrix_1d(op, D, n);
        Eigen::VectorXd u(n);
        for (int i = 0; i < n; ++i) u[i] = bump(-1.0 + (i + 1) * h);
        hs.push_back(h);
        errs.push_back(std::abs((A * u)[n / 2] - exact));
    }
    CHECK(fit_loglog(hs, errs).slope >= std::min(2.0 - a, 1.0) - 0.05);
}

TEST_CASE("axis operator is a Kronecker sum") {
    auto m = SpectralMeasure::axis_atoms(1.0, 2, {1.0, 1.0, 1.0, 1.0});
    auto A = assemble_matrix_2d_axes(StableOperator(m), Domain(Square{1.0}), 8);
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(8, 8);
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(64, 64);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            K.block(8 * i, 8 * j, 8, 8) += A.wx * I(i, j) * A.unit;
            K.block(8 * i, 8 * j, 8, 8) += A.wy * A.unit(i, j) * I;
        }
    CHECK((Eigen::MatrixXd(A.sparse()) - K).cwiseAbs().maxCoeff() < 1e-10);
    Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(64, 0.0, 1.0);
    CHECK((A.apply(v) - K * v).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("indicator decays like d^-alpha") {
    StableOperator op(SpectralMeasure::raw(0.8, 1));
    Domain D(Interval{0.0, 1.0});
    std::vector<Point> xs;
    for (int k = 4; k < 16; ++k) xs.push_back(point1(std::ldexp(1.0, -k)));
    auto rep = indicator_decay_check(op, D, xs);
    CHECK(rep.pass);
    CHECK(rep.slope == doctest::Approx(-0.8).epsilon(0.1));
}
