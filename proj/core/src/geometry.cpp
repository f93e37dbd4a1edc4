#include "nonlocal/geometry.hpp"

#include "nonlocal/defaults.hpp"
#include "nonlocal/error.hpp"
#include "nonlocal/quadrature.hpp"
#include "nonlocal/special.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>
#include <sstream>

namespace nonlocal {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kSmoothMinPower = 8.0;

std::string fmt(const Point& p, int dim) {
    std::ostringstream os;
    os.precision(10);
    os << "(";
    for (int i = 0; i < dim; ++i) os << (i ? ", " : "") << p[i];
    os << ")";
    return os.str();
}

// slab intersection for one coordinate: lo < x + r t < hi
void clip_slab(double x, double t, double lo, double hi, double& rlo, double& rhi) {
    if (t == 0.0) {
        if (!(x > lo && x < hi)) {
            rlo = 1.0;
            rhi = 0.0;
        }
        return;
    }
    double r1 = (lo - x) / t;
    double r2 = (hi - x) / t;
    if (r1 > r2) std::swap(r1, r2);
    rlo = std::max(rlo, r1);
    rhi = std::min(rhi, r2);
}

// point at distance fraction*d_x from x toward the nearest boundary point
Point toward_boundary(const Domain& dom, const Point& x, double fraction) {
    double d = dom.dist(x);
    return std::visit(
        overloaded{[&](const HalfLine&) { return point1(x[0] - fraction * d); },
                   [&](const Interval& s) {
                       return point1(x[0] - s.a <= s.b - x[0] ? x[0] - fraction * d : x[0] + fraction * d);
                   },
                   [&](const Square& s) {
                       double c[4] = {x[0], s.side - x[0], x[1], s.side - x[1]};
                       int k = static_cast<int>(std::min_element(c, c + 4) - c);
                       Point p = x;
                       if (k == 0) p[0] -= fraction * d;
                       if (k == 1) p[0] += fraction * d;
                       if (k == 2) p[1] -= fraction * d;
                       if (k == 3) p[1] += fraction * d;
                       return p;
                   },
                   [&](const Disk&) {
                       double r = norm(x);
                       Point u = r > 0.0 ? scaled(x, 1.0 / r) : point2(1.0, 0.0);
                       return axpy(x, fraction * d, u);
                   }},
        dom.shape());
}

}  // namespace

double spectral_norm(const Matrix3& m, int dim) {
    if (dim == 1) return std::abs(m[0][0]);
    Eigen::Matrix2d a;
    a << m[0][0], m[0][1], m[1][0], m[1][1];
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

Domain::Domain(Shape shape) : shape_(shape) {
    std::visit(overloaded{[](const HalfLine&) {},
                          [](const Interval& s) {
                              if (!(s.a < s.b)) throw InvalidArgument("interval needs a < b");
                          },
                          [](const Square& s) {
                              if (!(s.side > 0.0)) throw InvalidArgument("square side must be positive");
                          },
                          [](const Disk& s) {
                              if (!(s.radius > 0.0)) throw InvalidArgument("disk radius must be positive");
                          }},
               shape_);
}

int Domain::dim() const {
    return std::holds_alternative<HalfLine>(shape_) || std::holds_alternative<Interval>(shape_) ? 1 : 2;
}

std::string Domain::kind() const {
    return std::visit(overloaded{[](const HalfLine&) { return std::string("halfline"); },
                                 [](const Interval&) { return std::string("interval"); },
                                 [](const Square&) { return std::string("square"); },
                                 [](const Disk&) { return std::string("disk"); }},
                      shape_);
}

double Domain::dist(const Point& x) const {
    return std::visit(overloaded{[&](const HalfLine&) { return std::max(x[0], 0.0); },
                                 [&](const Interval& s) { return std::max(std::min(x[0] - s.a, s.b - x[0]), 0.0); },
                                 [&](const Square& s) {
                                     double d = std::min(std::min(x[0], s.side - x[0]), std::min(x[1], s.side - x[1]));
                                     return std::max(d, 0.0);
                                 },
                                 [&](const Disk& s) { return std::max(s.radius - std::hypot(x[0], x[1]), 0.0); }},
                      shape_);
}

double dist(const Point& x, const Domain& d) { return d.dist(x); }

double Domain::inradius() const {
    return std::visit(overloaded{[](const HalfLine&) { return defaults::kInf; },
                                 [](const Interval& s) { return 0.5 * (s.b - s.a); },
                                 [](const Square& s) { return 0.5 * s.side; },
                                 [](const Disk& s) { return s.radius; }},
                      shape_);
}

double Domain::diameter() const {
    return std::visit(overloaded{[](const HalfLine&) { return defaults::kInf; },
                                 [](const Interval& s) { return s.b - s.a; },
                                 [](const Square& s) { return std::sqrt(2.0) * s.side; },
                                 [](const Disk& s) { return 2.0 * s.radius; }},
                      shape_);
}

std::pair<double, double> Domain::line_span(const Point& x, const Point& t) const {
    double lo = -defaults::kInf;
    double hi = defaults::kInf;
    std::visit(overloaded{[&](const HalfLine&) { clip_slab(x[0], t[0], 0.0, defaults::kInf, lo, hi); },
                          [&](const Interval& s) { clip_slab(x[0], t[0], s.a, s.b, lo, hi); },
                          [&](const Square& s) {
                              clip_slab(x[0], t[0], 0.0, s.side, lo, hi);
                              clip_slab(x[1], t[1], 0.0, s.side, lo, hi);
                          },
                          [&](const Disk& s) {
                              double tt = t[0] * t[0] + t[1] * t[1];
                              double b = (x[0] * t[0] + x[1] * t[1]) / tt;
                              double c = (x[0] * x[0] + x[1] * x[1] - s.radius * s.radius) / tt;
                              double disc = b * b - c;
                              if (disc <= 0.0) {
                                  lo = 1.0;
                                  hi = 0.0;
                                  return;
                              }
                              double q = std::sqrt(disc);
                              lo = -b - q;
                              hi = -b + q;
                          }},
               shape_);
    return {lo, hi};
}

std::vector<double> Domain::ray_kinks(const Point& x, const Point& t) const {
    std::vector<double> r;
    auto [lo, hi] = line_span(x, t);
    auto add = [&](double v) {
        if (std::isfinite(v) && v > 0.0) r.push_back(v);
    };
    if (lo < hi) {
        add(lo);
        add(hi);
    }
    std::visit(overloaded{[&](const HalfLine&) {},
                          [&](const Interval& s) {
                              if (t[0] != 0.0) add((0.5 * (s.a + s.b) - x[0]) / t[0]);
                          },
                          [&](const Square& s) {
                              double h = 0.5 * s.side;
                              if (t[0] != 0.0) add((h - x[0]) / t[0]);
                              if (t[1] != 0.0) add((h - x[1]) / t[1]);
                              // diagonals z0 = z1 and z0 + z1 = side
                              if (t[0] != t[1]) add((x[1] - x[0]) / (t[0] - t[1]));
                              if (t[0] != -t[1]) add((s.side - x[0] - x[1]) / (t[0] + t[1]));
                          },
                          [&](const Disk&) { add(-(x[0] * t[0] + x[1] * t[1])); }},
               shape_);
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end(), [](double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(1.0, a); }),
            r.end());
    return r;
}

Jet Domain::psi_tilde(const Point& x) const {
    Jet j;
    if (!contains(x)) return j;
    std::visit(overloaded{[&](const HalfLine&) {
                              j.value = x[0];
                              j.grad[0] = 1.0;
                          },
                          [&](const Interval& s) {
                              double l = s.b - s.a;
                              j.value = (x[0] - s.a) * (s.b - x[0]) / l;
                              j.grad[0] = (s.a + s.b - 2.0 * x[0]) / l;
                              j.hess[0][0] = -2.0 / l;
                          },
                          [&](const Disk& s) {
                              double R = s.radius;
                              j.value = (R * R - x[0] * x[0] - x[1] * x[1]) / (2.0 * R);
                              j.grad[0] = -x[0] / R;
                              j.grad[1] = -x[1] / R;
                              j.hess[0][0] = j.hess[1][1] = -1.0 / R;
                          },
                          [&](const Square& s) {
                              const double p = kSmoothMinPower;
                              const double L = s.side;
                              double q[2], dq[2];
                              for (int i = 0; i < 2; ++i) {
                                  q[i] = x[i] * (L - x[i]) / L;
                                  dq[i] = (L - 2.0 * x[i]) / L;
                              }
                              const double ddq = -2.0 / L;
                              // psi = (q0^-p + q1^-p)^(-1/p), computed relative to the smaller q
                              double qm = std::min(q[0], q[1]);
                              double sum = std::pow(q[0] / qm, -p) + std::pow(q[1] / qm, -p);
                              double psi = qm * std::pow(sum, -1.0 / p);
                              double w[2], dpsi[2];
                              for (int i = 0; i < 2; ++i) {
                                  w[i] = psi / q[i];
                                  dpsi[i] = std::pow(w[i], p + 1.0);
                              }
                              double h[2][2];
                              for (int i = 0; i < 2; ++i) {
                                  for (int k = 0; k < 2; ++k) {
                                      h[i][k] = (p + 1.0) * std::pow(w[i], p) *
                                                (dpsi[k] / q[i] - (i == k ? w[i] / q[i] : 0.0));
                                  }
                              }
                              j.value = psi;
                              for (int i = 0; i < 2; ++i) j.grad[i] = dpsi[i] * dq[i];
                              for (int i = 0; i < 2; ++i) {
                                  for (int k = 0; k < 2; ++k) {
                                      j.hess[i][k] = h[i][k] * dq[i] * dq[k] + (i == k ? dpsi[i] * ddq : 0.0);
                                  }
                              }
                          }},
               shape_);
    return j;
}

std::pair<double, double> Domain::psi_tilde_bounds() const {
    return std::visit(overloaded{[](const HalfLine&) { return std::pair{1.0, 1.0}; },
                                 [](const Interval&) { return std::pair{0.5, 1.0}; },
                                 [](const Disk&) { return std::pair{0.5, 1.0}; },
                                 [](const Square&) { return std::pair{0.5 * std::pow(2.0, -1.0 / kSmoothMinPower), 1.0}; }},
                      shape_);
}

bool Domain::near_corner(const Point& x, double fraction) const {
    const auto* s = std::get_if<Square>(&shape_);
    if (!s) return false;
    double e = fraction * s->side;
    double dx = std::min(x[0], s->side - x[0]);
    double dy = std::min(x[1], s->side - x[1]);
    return std::hypot(dx, dy) < e;
}

std::vector<Point> Domain::graded_points(int levels, int per_level) const {
    if (levels < 1 || per_level < 1) throw InvalidArgument("graded_points needs positive counts");
    std::vector<Point> pts;
    const double scale = bounded() ? 0.99 * inradius() : 4.0;
    for (int k = 0; k < levels; ++k) {
        for (int j = 0; j < per_level; ++j) {
            double t = scale * std::pow(2.0, -k - static_cast<double>(j) / per_level);
            std::visit(overloaded{[&](const HalfLine&) { pts.push_back(point1(t)); },
                                  [&](const Interval& s) {
                                      pts.push_back(point1(s.a + t));
                                      pts.push_back(point1(s.b - t));
                                  },
                                  [&](const Disk& s) {
                                      double phi = 2.0 * kPi * (j + 0.37 * k) / per_level;
                                      double r = s.radius - t;
                                      pts.push_back(point2(r * std::cos(phi), r * std::sin(phi)));
                                  },
                                  [&](const Square& s) {
                                      double u = s.side * (j + 0.5) / per_level;
                                      double L = s.side;
                                      if (t >= 0.5 * L) return;
                                      for (const Point& p : {point2(u, t), point2(u, L - t), point2(t, u), point2(L - t, u)}) {
                                          if (dist(p) > 0.0) pts.push_back(p);
                                      }
                                  }},
                       shape_);
        }
    }
    return pts;
}

Point Domain::sample_box(double u0, double u1) const {
    return std::visit(overloaded{[&](const HalfLine&) { return point1(10.0 * u0); },
                                 [&](const Interval& s) { return point1(s.a + (s.b - s.a) * u0); },
                                 [&](const Square& s) { return point2(s.side * u0, s.side * u1); },
                                 [&](const Disk& s) {
                                     return point2(s.radius * (2.0 * u0 - 1.0), s.radius * (2.0 * u1 - 1.0));
                                 }},
                      shape_);
}

// --- mollified band ---------------------------------------------------------

namespace {

double bump(double u) { return std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0; }

double bump_d1(double u) {
    if (std::abs(u) >= 1.0) return 0.0;
    double s = 1.0 - u * u;
    return bump(u) * (-2.0 * u / (s * s));
}

// Cumulative bump distribution H(u) = int_{-1}^u bump / Z, tabulated and
// evaluated by quintic Hermite interpolation (H, H', H'' known exactly).
class BumpCdf {
public:
    static const BumpCdf& get() {
        static const BumpCdf table;
        return table;
    }
    double operator()(double u) const {
        if (u <= -1.0) return 0.0;
        if (u >= 1.0) return 1.0;
        double pos = (u + 1.0) / h_;
        auto i = std::min(static_cast<std::size_t>(pos), cells_ - 1);
        double t = pos - static_cast<double>(i);
        double x0 = -1.0 + h_ * static_cast<double>(i), x1 = x0 + h_;
        double f0 = cum_[i], f1 = cum_[i + 1];
        double d0 = bump(x0) / z_ * h_, d1 = bump(x1) / z_ * h_;
        double s0 = bump_d1(x0) / z_ * h_ * h_, s1 = bump_d1(x1) / z_ * h_ * h_;
        double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
        double h00 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
        double h10 = t - 6 * t3 + 8 * t4 - 3 * t5;
        double h20 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
        double h01 = 10 * t3 - 15 * t4 + 6 * t5;
        double h11 = -4 * t3 + 7 * t4 - 3 * t5;
        double h21 = 0.5 * (t3 - 2 * t4 + t5);
        return h00 * f0 + h10 * d0 + h20 * s0 + h01 * f1 + h11 * d1 + h21 * s1;
    }
    double z() const { return z_; }

private:
    BumpCdf() : h_(2.0 / static_cast<double>(cells_)), cum_(cells_ + 1, 0.0) {
        const auto& rule = gauss_legendre(12);
        double acc = 0.0;
        for (std::size_t i = 0; i < cells_; ++i) {
            double a = -1.0 + h_ * static_cast<double>(i);
            acc += integrate_panel(bump, a, a + h_, rule);
            cum_[i + 1] = acc;
        }
        z_ = acc;
        for (auto& c : cum_) c /= z_;
    }
    std::size_t cells_ = 2048;
    double h_;
    std::vector<double> cum_;
    double z_ = 1.0;
};

}  // namespace

MollifiedBand::MollifiedBand(double c1, double c2, double w) : c1_(c1), c2_(c2), w_(w) {
    if (!(c1 > 0.0 && c2 > c1)) throw InvalidArgument("band needs 0 < c1 < c2");
    if (!(w > 0.0 && 2.0 * w < c2 - c1)) throw InvalidArgument("mollifier radius must lie in (0, (c2-c1)/2)");
}

double MollifiedBand::value(double t) const {
    if (t <= c1_ || t >= c2_) return 0.0;
    const auto& H = BumpCdf::get();
    return H((t - c1_ - w_) / w_) - H((t - c2_ + w_) / w_);
}

double MollifiedBand::d1(double t) const {
    if (t <= c1_ || t >= c2_) return 0.0;
    double z = BumpCdf::get().z();
    return (bump((t - c1_ - w_) / w_) - bump((t - c2_ + w_) / w_)) / (w_ * z);
}

double MollifiedBand::d2(double t) const {
    if (t <= c1_ || t >= c2_) return 0.0;
    double z = BumpCdf::get().z();
    return (bump_d1((t - c1_ - w_) / w_) - bump_d1((t - c2_ + w_) / w_)) / (w_ * w_ * z);
}

// --- dyadic partition ----------------------------------------------------------

DyadicPartition::DyadicPartition(Domain domain, double c1, double c2, double width_fraction)
    : domain_(std::move(domain)), c1_(c1), c2_(c2), band_(c1, c2, width_fraction * (c2 - c1)) {
    if (!(c2 / c1 > std::exp(1.0))) throw InvalidArgument("dyadic partition needs c2 / c1 > e");
}

double DyadicPartition::dist_c1() const { return c1_ / domain_.psi_tilde_bounds().second; }
double DyadicPartition::dist_c2() const { return c2_ / domain_.psi_tilde_bounds().first; }

double DyadicPartition::zeta(int n, const Point& x) const {
    double p = domain_.psi_tilde(x).value;
    if (p <= 0.0) return 0.0;
    return band_.value(std::exp(static_cast<double>(n)) * p);
}

Jet DyadicPartition::zeta_jet(int n, const Point& x) const {
    Jet out;
    Jet p = domain_.psi_tilde(x);
    if (p.value <= 0.0) return out;
    double e = std::exp(static_cast<double>(n));
    double t = e * p.value;
    double v = band_.value(t), g1 = band_.d1(t), g2 = band_.d2(t);
    out.value = v;
    for (int i = 0; i < kMaxDim; ++i) {
        out.grad[i] = g1 * e * p.grad[i];
        for (int k = 0; k < kMaxDim; ++k) {
            out.hess[i][k] = g2 * e * e * p.grad[i] * p.grad[k] + g1 * e * p.hess[i][k];
        }
    }
    return out;
}

std::pair<int, int> DyadicPartition::active_range(double psi_lo, double psi_hi) const {
    int lo = static_cast<int>(std::floor(std::log(c1_ / psi_hi))) + 1;
    int hi = static_cast<int>(std::ceil(std::log(c2_ / psi_lo))) - 1;
    return {lo, hi};
}

std::pair<int, int> DyadicPartition::indices_at(const Point& x) const {
    double p = domain_.psi_tilde(x).value;
    if (p <= 0.0) return {1, 0};
    return active_range(p, p);
}

double DyadicPartition::coverage(const Point& x) const {
    auto [lo, hi] = indices_at(x);
    double s = 0.0;
    for (int n = lo; n <= hi; ++n) s += zeta(n, x);
    return s;
}

DyadicPartition build_partition(const Domain& d, double c1, double c2, double width_fraction) {
    if (!(width_fraction > 0.0 && width_fraction < 0.5)) throw InvalidArgument("width_fraction must lie in (0, 0.5)");
    DyadicPartition part(d, c1, c2, width_fraction);
    DyadicPartition::Checks chk;
    chk.coverage_min = defaults::kInf;
    const int dim = d.dim();
    auto pts = d.graded_points(d.dim() == 1 ? 24 : 14, d.dim() == 1 ? 16 : 12);
    for (const auto& x : pts) {
        double dx = d.dist(x);
        if (dx <= 0.0) continue;
        ++chk.points;
        double cov = part.coverage(x);
        if (cov < chk.coverage_min) {
            chk.coverage_min = cov;
            chk.coverage_argmin = x;
        }
        auto [lo, hi] = part.indices_at(x);
        for (int n = lo - 2; n <= hi + 2; ++n) {
            Jet z = part.zeta_jet(n, x);
            double e = std::exp(static_cast<double>(n));
            bool inside = dx > part.dist_c1() / e && dx < part.dist_c2() / e;
            if (!inside) chk.support_violation = std::max(chk.support_violation, std::abs(z.value));
            chk.growth[0] = std::max(chk.growth[0], std::abs(z.value));
            chk.growth[1] = std::max(chk.growth[1], norm(z.grad) / e);
            chk.growth[2] = std::max(chk.growth[2], spectral_norm(z.hess, dim) / (e * e));
            // central differences along each axis
            double h = 1e-3 * std::min(dx, 1.0 / e);
            for (int a = 0; a < dim; ++a) {
                Point xp = x, xm = x;
                xp[a] += h;
                xm[a] -= h;
                double fp = part.zeta(n, xp), fm = part.zeta(n, xm);
                chk.fd_growth[1] = std::max(chk.fd_growth[1], std::abs(fp - fm) / (2.0 * h) / e);
                chk.fd_growth[2] = std::max(chk.fd_growth[2], std::abs(fp - 2.0 * z.value + fm) / (h * h) / (e * e));
            }
            chk.fd_growth[0] = chk.growth[0];
        }
    }
    part.set_checks(chk);
    if (chk.support_violation > 0.0) throw InvalidArgument("dyadic partition violates its support band");
    if (!(chk.coverage_min > defaults::kZetaCoverageFloor)) {
        throw InvalidArgument("dyadic partition does not cover the point " + fmt(chk.coverage_argmin, dim) +
                              " (sum of zeta_n = " + std::to_string(chk.coverage_min) + ")");
    }
    return part;
}

// --- regularized distance --------------------------------------------------------

RegularizedDistance::RegularizedDistance(DyadicPartition partition) : partition_(std::move(partition)) {}

Jet RegularizedDistance::psi(const Point& x) const {
    Jet out;
    auto [lo, hi] = partition_.indices_at(x);
    for (int n = lo; n <= hi; ++n) {
        double s = std::exp(-static_cast<double>(n));
        Jet z = partition_.zeta_jet(n, x);
        out.value += s * z.value;
        for (int i = 0; i < kMaxDim; ++i) {
            out.grad[i] += s * z.grad[i];
            for (int k = 0; k < kMaxDim; ++k) out.hess[i][k] += s * z.hess[i][k];
        }
    }
    return out;
}

RegularizedDistance regularized_distance(const Domain& d, const DyadicPartition& partition) {
    RegularizedDistance rd(partition);
    RegularizedDistance::Checks chk;
    const int dim = d.dim();
    for (const auto& x : d.graded_points(dim == 1 ? 24 : 14, dim == 1 ? 16 : 12)) {
        double dx = d.dist(x);
        if (dx <= 0.0) continue;
        ++chk.points;
        Jet pt = rd.psi_tilde(x);
        Jet p = rd.psi(x);
        chk.comparability_tilde = std::max({chk.comparability_tilde, pt.value / dx, dx / pt.value});
        chk.comparability = std::max({chk.comparability, p.value / dx, dx / p.value});
        if (d.near_corner(x, defaults::kSquareCornerFraction)) {
            ++chk.corner_excluded;
            continue;
        }
        chk.hessian_tilde = std::max(chk.hessian_tilde, spectral_norm(pt.hess, dim));
        chk.hessian_scaled = std::max(chk.hessian_scaled, dx * spectral_norm(p.hess, dim));
    }
    rd.set_checks(chk);
    if (!(chk.comparability_tilde <= defaults::kComparabilityBound) || !(chk.comparability <= defaults::kComparabilityBound)) {
        throw InvalidArgument("regularized distance is not comparable to the distance within N = 10");
    }
    if (!std::isfinite(chk.hessian_tilde) || !std::isfinite(chk.hessian_scaled)) {
        throw InvalidArgument("regularized distance has an unbounded Hessian on the validation grid");
    }
    return rd;
}

// --- convexity and tails ---------------------------------------------------------

ConvexityReport convexity_gap_check(const Domain& d, std::size_t sample_count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    ConvexityReport rep;
    rep.worst_gap = defaults::kInf;
    std::string first;
    for (std::size_t i = 0; i < sample_count; ++i) {
        Point x = d.sample(rng);
        Point y = d.sample(rng);
        double t = unif(rng);
        Point z;
        for (int k = 0; k < kMaxDim; ++k) z[k] = (1.0 - t) * x[k] + t * y[k];
        double gap = d.dist(z) - (1.0 - t) * d.dist(x) - t * d.dist(y);
        rep.worst_gap = std::min(rep.worst_gap, gap);
        ++rep.samples;
        if (gap < -defaults::kConvexitySlack) {
            if (rep.violations == 0) first = "x=" + fmt(x, d.dim()) + " y=" + fmt(y, d.dim()) + " t=" + std::to_string(t);
            ++rep.violations;
        }
    }
    if (rep.violations) throw InvalidArgument("convexity inequality violated at " + first);
    return rep;
}

double distance_power(double d, double kappa) {
    if (kappa == 0.0) return 1.0;
    if (d <= 0.0) return 0.0;
    return std::pow(d, kappa);
}

double tail_integral(const Domain& dom, const SpectralMeasure& m, double kappa1, double kappa2, const Point& x,
                     double rho, int directions, double tolerance) {
    if (!(kappa1 > 0.0)) throw DomainError("kappa1 must be positive");
    if (!(kappa2 > -1.0 && kappa2 < kappa1)) throw DomainError("kappa2 must lie in (-1, kappa1)");
    if (!(rho > 0.0)) throw DomainError("rho must be positive");
    if (m.dim() != dom.dim()) throw InvalidArgument("measure and domain dimensions differ");
    double total = 0.0;
    for (const auto& atom : m.discretized(directions)) {
        if (atom.weight == 0.0) continue;
        const Point& th = atom.direction;
        if (kappa2 == 0.0) {
            total += atom.weight * std::pow(rho, -kappa1) / kappa1;
            continue;
        }
        auto [lo, hi] = dom.line_span(x, th);
        (void)lo;
        if (!(hi > rho)) continue;
        auto g = [&](double r) { return distance_power(dom.dist(axpy(x, r, th)), kappa2) * std::pow(r, -1.0 - kappa1); };
        std::vector<double> br{rho};
        for (double k : dom.ray_kinks(x, th)) {
            if (k > rho && k < hi) br.push_back(k);
        }
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < br.size(); ++i) s += integrate_adaptive(g, br[i], br[i + 1], tolerance);
        if (std::isfinite(hi)) {
            // d vanishes linearly at the exit: pull (hi - r)^kappa2 into a Jacobi weight
            double a = br.back(), half = 0.5 * (hi - a);
            auto jacobi = [&](int n) {
                GaussRule rule = gauss_jacobi(n, kappa2, 0.0);
                double acc = 0.0;
                for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                    double r = a + half * (1.0 + rule.nodes[i]);
                    double q = dom.dist(axpy(x, r, th)) / (half * (1.0 - rule.nodes[i]));
                    acc += rule.weights[i] * std::pow(q, kappa2) * std::pow(r, -1.0 - kappa1);
                }
                return acc * std::pow(half, 1.0 + kappa2);
            };
            double c = jacobi(32), f = jacobi(64);
            if (std::abs(f - c) > 1e3 * tolerance * std::max(1.0, std::abs(f)))
                throw ConvergenceError("tail integral: exit segment did not converge");
            s += f;
        } else {
            double r0 = br.back();
            s += std::pow(r0, -kappa1) *
                 integrate_endpoint_singular(
                     [&](double v) {
                         return distance_power(dom.dist(axpy(x, r0 / v, th)), kappa2) * std::pow(v, kappa1 - 1.0);
                     },
                     0.0, 1.0, tolerance);
        }
        total += atom.weight * s;
    }
    return total;
}

TailReport tail_integral_check(const Domain& dom, const SpectralMeasure& m, double kappa1, double kappa2,
                               const std::vector<Point>& x_samples, double max_growth) {
    if (x_samples.empty()) throw InvalidArgument("tail_integral_check needs samples");
    TailReport rep;
    rep.samples = x_samples;
    for (const auto& x : x_samples) {
        double dx = dom.dist(x);
        if (!(dx > 0.0)) throw InvalidArgument("tail_integral_check samples must lie in the domain");
        double r = tail_integral(dom, m, kappa1, kappa2, x, dx) * std::pow(dx, kappa1 - kappa2);
        rep.ratios.push_back(r);
        rep.sup_ratio = std::max(rep.sup_ratio, r);
    }
    std::vector<Point> refined = x_samples;
    for (const auto& x : x_samples) refined.push_back(toward_boundary(dom, x, 0.5));
    for (const auto& x : refined) {
        double dx = dom.dist(x);
        double r = tail_integral(dom, m, kappa1, kappa2, x, dx, 2 * defaults::kDensityDirections) *
                   std::pow(dx, kappa1 - kappa2);
        rep.refined_sup_ratio = std::max(rep.refined_sup_ratio, r);
    }
    rep.growth = rep.refined_sup_ratio / rep.sup_ratio - 1.0;
    rep.stable = std::isfinite(rep.sup_ratio) && std::isfinite(rep.refined_sup_ratio) && rep.sup_ratio > 0.0 &&
                 std::abs(rep.growth) < max_growth;
    return rep;
}

}  // namespace nonlocal
