#include "nonlocal/grid.hpp"

#include "nonlocal/error.hpp"

#include <cmath>
#include <variant>

namespace nonlocal {

double Cell::volume(int dim) const {
    double v = 1.0;
    for (int i = 0; i < dim; ++i) v *= hi[i] - lo[i];
    return v;
}

Point Cell::center() const { return {0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1]), 0.5 * (lo[2] + hi[2])}; }

namespace {

// dual-cell edges of n nodes a + (k+1) h on [a, a + (n+1) h]
void cell_edges_1d(double a, double h, int n, int k, bool closed_right, double& lo, double& hi) {
    double x = a + (k + 1) * h;
    lo = k == 0 ? a : x - 0.5 * h;
    hi = (k == n - 1 && closed_right) ? a + (n + 1) * h : x + 0.5 * h;
}

}  // namespace

std::shared_ptr<const Grid> Grid::interval(const Domain& d, int n) {
    const auto* iv = std::get_if<Interval>(&d.shape());
    if (!iv) throw InvalidArgument("Grid::interval needs an Interval domain");
    if (n < 1) throw InvalidArgument("grid needs at least one node");
    double h = (iv->b - iv->a) / (n + 1);
    std::shared_ptr<Grid> g(new Grid(d, h, n));
    for (int k = 0; k < n; ++k) {
        Cell c;
        cell_edges_1d(iv->a, h, n, k, true, c.lo[0], c.hi[0]);
        g->nodes_.push_back(point1(iv->a + (k + 1) * h));
        g->cells_.push_back(c);
    }
    return g;
}

std::shared_ptr<const Grid> Grid::halfline(double length, int n) {
    if (!(length > 0.0) || n < 1) throw InvalidArgument("half-line grid needs length > 0 and n >= 1");
    double h = length / (n + 1);
    std::shared_ptr<Grid> g(new Grid(Domain(HalfLine{}), h, n));
    for (int k = 0; k < n; ++k) {
        Cell c;
        cell_edges_1d(0.0, h, n, k, false, c.lo[0], c.hi[0]);
        g->nodes_.push_back(point1((k + 1) * h));
        g->cells_.push_back(c);
    }
    return g;
}

std::shared_ptr<const Grid> Grid::square(const Domain& d, int n) {
    const auto* sq = std::get_if<Square>(&d.shape());
    if (!sq) throw InvalidArgument("Grid::square needs a Square domain");
    if (n < 1) throw InvalidArgument("grid needs at least one node per side");
    double h = sq->side / (n + 1);
    std::shared_ptr<Grid> g(new Grid(d, h, n));
    g->lattice_map_.assign(static_cast<std::size_t>(n) * n, -1);
    // x index fastest
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            Cell c;
            cell_edges_1d(0.0, h, n, i, true, c.lo[0], c.hi[0]);
            cell_edges_1d(0.0, h, n, j, true, c.lo[1], c.hi[1]);
            g->lattice_map_[static_cast<std::size_t>(j) * n + i] = static_cast<long>(g->nodes_.size());
            g->nodes_.push_back(point2((i + 1) * h, (j + 1) * h));
            g->cells_.push_back(c);
            g->lattice_.push_back({i, j});
        }
    }
    return g;
}

std::shared_ptr<const Grid> Grid::disk(const Domain& d, int n) {
    const auto* dk = std::get_if<Disk>(&d.shape());
    if (!dk) throw InvalidArgument("Grid::disk needs a Disk domain");
    if (n < 2) throw InvalidArgument("disk grid needs at least two nodes per diameter");
    double R = dk->radius;
    double h = 2.0 * R / n;
    std::shared_ptr<Grid> g(new Grid(d, h, n));
    g->lattice_map_.assign(static_cast<std::size_t>(n) * n, -1);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            Point x = point2(-R + (i + 0.5) * h, -R + (j + 0.5) * h);
            if (!d.contains(x)) continue;
            Cell c;
            c.lo = point2(x[0] - 0.5 * h, x[1] - 0.5 * h);
            c.hi = point2(x[0] + 0.5 * h, x[1] + 0.5 * h);
            g->lattice_map_[static_cast<std::size_t>(j) * n + i] = static_cast<long>(g->nodes_.size());
            g->nodes_.push_back(x);
            g->cells_.push_back(c);
            g->lattice_.push_back({i, j});
        }
    }
    return g;
}

long Grid::lattice_index(int i, int j) const {
    if (lattice_map_.empty() || i < 0 || j < 0 || i >= n_ || j >= n_) return -1;
    return lattice_map_[static_cast<std::size_t>(j) * n_ + i];
}

bool Grid::boundary_cell(std::size_t i) const {
    const Cell& c = cells_[i];
    if (dim() == 1) return domain_.dist(c.lo) <= 0.0 || (domain_.bounded() && domain_.dist(c.hi) <= 0.0);
    for (const Point& p : {c.lo, c.hi, point2(c.lo[0], c.hi[1]), point2(c.hi[0], c.lo[1])}) {
        if (domain_.dist(p) <= 0.0) return true;
    }
    return false;
}

GridFunction::GridFunction(std::shared_ptr<const Grid> grid, Eigen::VectorXd values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw InvalidArgument("grid function needs a grid");
    if (static_cast<std::size_t>(values_.size()) != grid_->size()) throw InvalidArgument("value count differs from grid size");
}

GridFunction GridFunction::sample(std::shared_ptr<const Grid> grid, const std::function<double(const Point&)>& f) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(grid->size()));
    for (std::size_t i = 0; i < grid->size(); ++i) v[static_cast<Eigen::Index>(i)] = f(grid->node(i));
    return GridFunction(std::move(grid), std::move(v));
}

GridFunction GridFunction::zeros(std::shared_ptr<const Grid> grid) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid->size()));
    return GridFunction(std::move(grid), std::move(v));
}

GridFunction GridFunction::operator+(const GridFunction& o) const {
    if (o.grid_.get() != grid_.get()) throw InvalidArgument("grid functions live on different grids");
    return GridFunction(grid_, values_ + o.values_);
}

GridFunction GridFunction::operator*(double c) const { return GridFunction(grid_, values_ * c); }

Eigen::VectorXd GridFunction::derivative(int axis) const {
    const Grid& g = *grid_;
    const double h = g.spacing();
    Eigen::VectorXd d(values_.size());
    auto value_at = [&](std::size_t k, int step, bool& inside) -> double {
        if (g.dim() == 1) {
            long m = static_cast<long>(k) + step;
            inside = m >= 0 && m < static_cast<long>(g.size());
            return inside ? values_[m] : 0.0;
        }
        auto [i, j] = g.lattice_position(k);
        long m = axis == 0 ? g.lattice_index(i + step, j) : g.lattice_index(i, j + step);
        inside = m >= 0;
        return inside ? values_[m] : 0.0;
    };
    for (std::size_t k = 0; k < g.size(); ++k) {
        bool ip = false, im = false;
        double up = value_at(k, 1, ip);
        double um = value_at(k, -1, im);
        double u0 = values_[static_cast<Eigen::Index>(k)];
        if (ip && im) {
            d[static_cast<Eigen::Index>(k)] = (up - um) / (2.0 * h);
        } else if (ip) {
            d[static_cast<Eigen::Index>(k)] = (up - u0) / h;
        } else if (im) {
            d[static_cast<Eigen::Index>(k)] = (u0 - um) / h;
        } else {
            d[static_cast<Eigen::Index>(k)] = 0.0;
        }
    }
    return d;
}

}  // namespace nonlocal
