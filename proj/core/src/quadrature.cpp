#include "nonlocal/quadrature.hpp"

#include "nonlocal/error.hpp"
#include "nonlocal/special.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace nonlocal {

namespace {

GaussRule build_gauss_legendre(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0;
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            dp = n * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) {
                break;
            }
        }
        // recompute derivative at the converged node
        double p1 = 1.0;
        double p2 = 0.0;
        for (int j = 0; j < n; ++j) {
            const double p3 = p2;
            p2 = p1;
            p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
        }
        dp = n * (z * p1 - p2) / (z * z - 1.0);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 1) {
        throw InvalidArgument("gauss_legendre: n must be positive");
    }
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) {
        slot = std::make_unique<GaussRule>(build_gauss_legendre(n));
    }
    return *slot;
}

GaussRule gauss_jacobi(int n, double a, double b) {
    if (n < 1) {
        throw InvalidArgument("gauss_jacobi: n must be positive");
    }
    if (!(a > -1.0 && b > -1.0)) {
        throw DomainError("gauss_jacobi: exponents must exceed -1");
    }
    // Monic three-term recurrence of the Jacobi polynomials.
    Eigen::VectorXd diag(n);
    Eigen::VectorXd off(n > 1 ? n - 1 : 1);
    for (int k = 0; k < n; ++k) {
        const double s = 2.0 * k + a + b;
        if (k == 0) {
            diag(k) = (b - a) / (a + b + 2.0);
        } else {
            diag(k) = (b * b - a * a) / (s * (s + 2.0));
        }
        if (k + 1 < n) {
            const double kk = k + 1.0;
            const double s1 = 2.0 * kk + a + b;
            const double num = 4.0 * kk * (kk + a) * (kk + b) * (kk + a + b);
            const double den = s1 * s1 * (s1 + 1.0) * (s1 - 1.0);
            off(k) = std::sqrt(num / den);
        }
    }
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        jac(k, k) = diag(k);
        if (k + 1 < n) {
            jac(k, k + 1) = off(k);
            jac(k + 1, k) = off(k);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jac);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceError("gauss_jacobi: eigenvalue solve failed");
    }
    const double mu0 = std::pow(2.0, a + b + 1.0) * gamma_fn(a + 1.0) * gamma_fn(b + 1.0) /
                       gamma_fn(a + b + 2.0);
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int k = 0; k < n; ++k) {
        rule.nodes[k] = solver.eigenvalues()(k);
        const double v0 = solver.eigenvectors()(0, k);
        rule.weights[k] = mu0 * v0 * v0;
    }
    return rule;
}

double integrate_panel(const RealFunction& f, double lo, double hi, const GaussRule& rule) {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    return sum * half;
}

double integrate_graded(const RealFunction& f, double lo, double hi, bool toward_lo,
                        const GaussRule& rule, int levels, double ratio) {
    const double length = hi - lo;
    double sum = 0.0;
    double outer = 1.0;
    for (int k = 0; k < levels; ++k) {
        const double inner = outer * ratio;
        if (toward_lo) {
            sum += integrate_panel(f, lo + inner * length, lo + outer * length, rule);
        } else {
            sum += integrate_panel(f, hi - outer * length, hi - inner * length, rule);
        }
        outer = inner;
    }
    const double sliver = outer * length;
    sum += sliver * (toward_lo ? f(lo + 0.5 * sliver) : f(hi - 0.5 * sliver));
    return sum;
}

double integrate_endpoint_singular(const RealFunction& f, double lo, double hi, double tolerance,
                                   double* error_estimate) {
    if (!(hi > lo)) {
        if (error_estimate) {
            *error_estimate = 0.0;
        }
        return 0.0;
    }
    // integrate() is not const-callable in this boost release
    thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
    double error = 0.0;
    double l1 = 0.0;
    std::size_t levels = 0;
    const double value = integrator.integrate(f, lo, hi, tolerance, &error, &l1, &levels);
    if (error_estimate) {
        *error_estimate = error;
    }
    // the estimate is the last level-to-level change; the error after that
    // level is roughly its square
    if (!std::isfinite(value) || error > std::sqrt(tolerance) * std::max(1.0, l1)) {
        std::ostringstream msg;
        msg << "tanh-sinh on [" << lo << ", " << hi << "] did not converge: value " << value
            << ", error estimate " << error << ", L1 " << l1;
        throw ConvergenceError(msg.str());
    }
    return value;
}

namespace {

struct KronrodPanel {
    double kronrod = 0.0;
    double error = 0.0;
    double l1 = 0.0;
};

// One 21-point Gauss-Kronrod panel; the error is |K - G| of the embedded pair.
KronrodPanel kronrod_panel(const RealFunction& f, double lo, double hi) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
    const auto& x = GK::abscissa();
    const auto& wk = GK::weights();
    // the 10 Gauss nodes sit at the odd Kronrod indices
    const auto& wg = boost::math::quadrature::gauss<double, 10>::weights();
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    double fc = f(c);
    double k = wk[0] * fc, g = 0.0, l1 = wk[0] * std::abs(fc);
    for (std::size_t i = 1; i < x.size(); ++i) {
        double a = f(c - h * x[i]), b = f(c + h * x[i]);
        k += wk[i] * (a + b);
        if (i % 2 == 1) g += wg[(i - 1) / 2] * (a + b);
        l1 += wk[i] * (std::abs(a) + std::abs(b));
    }
    return {k * h, std::abs(k - g) * h, l1 * h};
}

// Bisects until each panel meets its share of the absolute tolerance.
void adaptive_bisect(const RealFunction& f, double lo, double hi, const KronrodPanel& whole, double abs_tol,
                     double full_length, int depth, KronrodPanel& acc) {
    const double share = abs_tol * (hi - lo) / full_length;
    if (whole.error <= share || depth == 0 || !(hi - lo > 1e-15 * std::max(1.0, std::abs(lo)))) {
        acc.kronrod += whole.kronrod;
        acc.error += whole.error;
        acc.l1 += whole.l1;
        return;
    }
    const double mid = 0.5 * (lo + hi);
    adaptive_bisect(f, lo, mid, kronrod_panel(f, lo, mid), abs_tol, full_length, depth - 1, acc);
    adaptive_bisect(f, mid, hi, kronrod_panel(f, mid, hi), abs_tol, full_length, depth - 1, acc);
}

}  // namespace

double integrate_adaptive(const RealFunction& f, double lo, double hi, double tolerance, double* error_estimate) {
    if (!(hi > lo)) {
        if (error_estimate) {
            *error_estimate = 0.0;
        }
        return 0.0;
    }
    const KronrodPanel first = kronrod_panel(f, lo, hi);
    const double abs_tol = tolerance * std::max(1.0, first.l1);
    KronrodPanel acc;
    adaptive_bisect(f, lo, hi, first, abs_tol, hi - lo, 30, acc);
    if (error_estimate) {
        *error_estimate = acc.error;
    }
    if (!std::isfinite(acc.kronrod) || acc.error > tolerance * std::max(1.0, acc.l1)) {
        std::ostringstream msg;
        msg << "Gauss-Kronrod on [" << lo << ", " << hi << "] did not converge: value " << acc.kronrod
            << ", error estimate " << acc.error << ", L1 " << acc.l1;
        throw ConvergenceError(msg.str());
    }
    return acc.kronrod;
}

}  // namespace nonlocal
