#include "nonlocal/levy.hpp"

#include "nonlocal/defaults.hpp"
#include "nonlocal/error.hpp"
#include "nonlocal/special.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nonlocal {

const char* to_string(Normalization n) {
    switch (n) {
        case Normalization::Raw: return "raw";
        case Normalization::FractionalLaplacian: return "fractional-laplacian";
        case Normalization::Custom: return "custom";
    }
    return "custom";
}

namespace {

bool same_direction(const Point& a, const Point& b) {
    for (int i = 0; i < kMaxDim; ++i) {
        if (std::abs(a[i] - b[i]) > 1e-9) return false;
    }
    return true;
}

std::string format_point(const Point& p, int dim) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < dim; ++i) {
        if (i) os << ", ";
        os << p[i];
    }
    os << ")";
    return os.str();
}

}  // namespace

SpectralMeasure::SpectralMeasure(double alpha, int dim, std::vector<Atom> atoms,
                                 SphericalDensity density, Normalization tag)
    : alpha_(alpha), dim_(dim), atoms_(std::move(atoms)), density_(density), tag_(tag) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("alpha must lie in (0, 2)");
    if (dim < 1 || dim > kMaxDim) throw InvalidArgument("dimension must be 1, 2 or 3");
    if (density_.kind == SphericalDensity::Kind::Uniform && !(density_.mass >= 0.0 && std::isfinite(density_.mass)))
        throw InvalidArgument("density mass must be finite and nonnegative");
    if (density_.kind == SphericalDensity::Kind::None) density_.mass = 0.0;
    for (auto& a : atoms_) {
        if (!(a.weight >= 0.0) || !std::isfinite(a.weight)) throw InvalidArgument("atom weights must be finite and nonnegative");
        for (int i = dim; i < kMaxDim; ++i) {
            if (a.direction[i] != 0.0) throw InvalidArgument("atom direction has components beyond the dimension");
        }
        double n = norm(a.direction);
        if (n == 0.0) throw InvalidArgument("atom direction is the zero vector");
        if (std::abs(n - 1.0) > defaults::kUnitNormTolerance) {
            if (std::abs(n - 1.0) > defaults::kRenormalizeWarn) {
                warnings_.push_back("renormalized atom direction " + format_point(a.direction, dim) +
                                    " of norm " + std::to_string(n));
            }
            a.direction = nonlocal::scaled(a.direction, 1.0 / n);
        }
    }
    if (!(total_mass() > 0.0)) throw InvalidArgument("degenerate measure: total mass is zero");
}

SpectralMeasure SpectralMeasure::raw(double alpha, int dim) {
    if (dim == 1) {
        return SpectralMeasure(alpha, 1, {{point1(1.0), 1.0}, {point1(-1.0), 1.0}}, {}, Normalization::Raw);
    }
    // |y|^{-d-alpha} dy = r^{-1-alpha} dr dsigma
    return SpectralMeasure(alpha, dim, {}, {SphericalDensity::Kind::Uniform, sphere_area(dim)}, Normalization::Raw);
}

SpectralMeasure SpectralMeasure::fractional_laplacian(double alpha, int dim) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("alpha must lie in (0, 2)");
    double c = fractional_laplacian_constant(dim, alpha);
    if (dim == 1) {
        return SpectralMeasure(alpha, 1, {{point1(1.0), c}, {point1(-1.0), c}}, {},
                               Normalization::FractionalLaplacian);
    }
    return SpectralMeasure(alpha, dim, {}, {SphericalDensity::Kind::Uniform, c * sphere_area(dim)},
                           Normalization::FractionalLaplacian);
}

SpectralMeasure SpectralMeasure::axis_atoms(double alpha, int dim, const std::vector<double>& weights) {
    if (dim < 1 || dim > kMaxDim) throw InvalidArgument("dimension must be 1, 2 or 3");
    if (weights.size() != static_cast<std::size_t>(2 * dim))
        throw InvalidArgument("axis_atoms needs 2*dim weights ordered +e1, -e1, +e2, -e2, ...");
    std::vector<Atom> atoms;
    for (int i = 0; i < dim; ++i) {
        Point plus{}, minus{};
        plus[i] = 1.0;
        minus[i] = -1.0;
        atoms.push_back({plus, weights[2 * i]});
        atoms.push_back({minus, weights[2 * i + 1]});
    }
    return SpectralMeasure(alpha, dim, std::move(atoms));
}

double SpectralMeasure::density_value() const {
    if (!has_density()) return 0.0;
    return density_.mass / sphere_area(dim_);
}

bool SpectralMeasure::is_symmetric() const {
    for (const auto& a : atoms_) {
        if (a.weight == 0.0) continue;
        Point r = negated(a.direction);
        double w = 0.0;
        for (const auto& b : atoms_) {
            if (same_direction(b.direction, r)) w += b.weight;
        }
        double w_self = 0.0;
        for (const auto& b : atoms_) {
            if (same_direction(b.direction, a.direction)) w_self += b.weight;
        }
        if (std::abs(w - w_self) > defaults::kSymmetryTolerance * std::max(1.0, w_self)) return false;
    }
    return true;
}

double SpectralMeasure::total_mass() const {
    double s = density_.mass;
    for (const auto& a : atoms_) s += a.weight;
    return s;
}

double SpectralMeasure::projection_moment(const Point& rho) const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.weight * std::pow(std::abs(dot(a.direction, rho)), alpha_);
    if (has_density()) {
        s += density_value() * std::pow(norm(rho), alpha_) * sphere_abs_moment(dim_, alpha_);
    }
    return s;
}

SpectralMeasure SpectralMeasure::scaled(double c) const {
    if (!(c > 0.0)) throw InvalidArgument("scale factor must be positive");
    std::vector<Atom> atoms = atoms_;
    for (auto& a : atoms) a.weight *= c;
    SphericalDensity d = density_;
    d.mass *= c;
    return SpectralMeasure(alpha_, dim_, std::move(atoms), d, Normalization::Custom);
}

SpectralMeasure SpectralMeasure::symmetrized() const {
    std::vector<Atom> atoms;
    auto add = [&](const Point& dir, double w) {
        for (auto& a : atoms) {
            if (same_direction(a.direction, dir)) {
                a.weight += w;
                return;
            }
        }
        atoms.push_back({dir, w});
    };
    for (const auto& a : atoms_) {
        add(a.direction, 0.5 * a.weight);
        add(negated(a.direction), 0.5 * a.weight);
    }
    return SpectralMeasure(alpha_, dim_, std::move(atoms), density_, tag_);
}

std::vector<Atom> SpectralMeasure::discretized(int resolution) const {
    std::vector<Atom> out = atoms_;
    if (has_density()) {
        auto dirs = sphere_grid(dim_, resolution);
        double w = density_.mass / static_cast<double>(dirs.size());
        for (const auto& d : dirs) out.push_back({d, w});
    }
    return out;
}

std::vector<Point> sphere_grid(int dim, int resolution) {
    if (resolution < 1) throw InvalidArgument("sphere resolution must be positive");
    std::vector<Point> g;
    if (dim == 1) {
        g = {point1(1.0), point1(-1.0)};
    } else if (dim == 2) {
        g.reserve(resolution);
        for (int k = 0; k < resolution; ++k) {
            double phi = 2.0 * kPi * k / resolution;
            g.push_back(point2(std::cos(phi), std::sin(phi)));
        }
    } else if (dim == 3) {
        const double golden = kPi * (3.0 - std::sqrt(5.0));
        g.reserve(resolution);
        for (int k = 0; k < resolution; ++k) {
            double z = 1.0 - (2.0 * k + 1.0) / resolution;
            double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            double phi = golden * k;
            g.push_back({r * std::cos(phi), r * std::sin(phi), z});
        }
    } else {
        throw InvalidArgument("dimension must be 1, 2 or 3");
    }
    return g;
}

double nondegeneracy_lambda(const SpectralMeasure& m, const std::vector<Point>& directions) {
    if (!(m.total_mass() > 0.0)) throw InvalidArgument("degenerate measure");
    if (directions.empty()) throw InvalidArgument("empty direction list");
    double best = defaults::kInf;
    for (const auto& rho : directions) best = std::min(best, m.projection_moment(rho));
    return best;
}

double nondegeneracy_lambda(const SpectralMeasure& m, int sphere_resolution) {
    if (sphere_resolution < defaults::kMinSphereResolution)
        throw InvalidArgument("sphere_resolution must be at least 16");
    if (m.dim() == 2) {
        // nested grids: resolution 2r contains the resolution-r grid, so the
        // minimum is monotone under doubling
        return nondegeneracy_lambda(m, sphere_grid(2, sphere_resolution));
    }
    if (m.dim() == 3) {
        // union with the coarser dyadic grids keeps the doubling monotonicity
        std::vector<Point> dirs;
        for (int r = sphere_resolution; r >= defaults::kMinSphereResolution; r /= 2) {
            auto g = sphere_grid(3, r);
            dirs.insert(dirs.end(), g.begin(), g.end());
            if (r % 2) break;
        }
        return nondegeneracy_lambda(m, dirs);
    }
    return nondegeneracy_lambda(m, sphere_grid(1, sphere_resolution));
}

double total_mass(const SpectralMeasure& m) { return m.total_mass(); }

LevyFamily::LevyFamily(std::vector<double> breakpoints, std::vector<SpectralMeasure> pieces,
                       SpectralMeasure envelope)
    : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)), envelope_(std::move(envelope)) {
    if (pieces_.empty()) throw InvalidArgument("family has no pieces");
    if (breakpoints_.size() != pieces_.size() + 1)
        throw InvalidArgument("family needs one more breakpoint than pieces");
    if (breakpoints_.front() != 0.0) throw InvalidArgument("first breakpoint must be 0");
    for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
        if (!(breakpoints_[i] > breakpoints_[i - 1])) throw InvalidArgument("breakpoints must increase");
    }
    for (const auto& p : pieces_) {
        if (p.dim() != envelope_.dim() || p.alpha() != envelope_.alpha())
            throw InvalidArgument("all pieces and the envelope must share alpha and dim");
    }
}

std::size_t LevyFamily::piece_index(double t) const {
    if (t <= breakpoints_[1]) return 0;
    auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), t);
    std::size_t k = static_cast<std::size_t>(it - breakpoints_.begin());
    return std::min(k - 1, pieces_.size() - 1);
}

EnvelopeReport check_envelope(const LevyFamily& family) {
    EnvelopeReport rep;
    const auto& env = family.envelope();
    for (std::size_t k = 0; k < family.pieces().size(); ++k) {
        const auto& piece = family.pieces()[k];
        for (const auto& ea : env.atoms()) {
            if (ea.weight == 0.0) continue;
            double w = 0.0;
            for (const auto& pa : piece.atoms()) {
                if (same_direction(pa.direction, ea.direction)) w += pa.weight;
            }
            if (w < ea.weight) {
                std::ostringstream os;
                os << "piece " << k << ": atom " << format_point(ea.direction, env.dim()) << " has weight " << w
                   << " < envelope weight " << ea.weight;
                rep.violations.push_back(os.str());
            }
        }
        if (piece.density_value() < env.density_value()) {
            std::ostringstream os;
            os << "piece " << k << ": density " << piece.density_value() << " < envelope density "
               << env.density_value();
            rep.violations.push_back(os.str());
        }
    }
    rep.dominated = rep.violations.empty();
    return rep;
}

}  // namespace nonlocal
