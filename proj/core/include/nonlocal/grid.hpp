#pragma once

#include "nonlocal/geometry.hpp"

#include <Eigen/Core>

#include <functional>
#include <memory>

namespace nonlocal {

/// Axis-aligned box [lo, hi] (trailing dimensions unused).
struct Cell {
    Point lo{};
    Point hi{};
    double volume(int dim) const;
    Point center() const;
};

/// Uniform structured grid of interior nodes with one cell per node.
///
/// 1D (Interval, HalfLine): nodes a + (i+1) h. Cells are the dual cells
/// [x_i - h/2, x_i + h/2]; the first and last cells extend to the boundary,
/// so the cells tile the domain. On the half-line the grid covers (0, length).
/// Square: tensor product of the 1D construction. Disk: Cartesian nodes of
/// spacing h inside the disk, cells clipped by the boundary only through the
/// weight quadrature.
class Grid {
public:
    static std::shared_ptr<const Grid> interval(const Domain& d, int n);
    static std::shared_ptr<const Grid> halfline(double length, int n);
    static std::shared_ptr<const Grid> square(const Domain& d, int n_per_side);
    static std::shared_ptr<const Grid> disk(const Domain& d, int n_per_diameter);

    const Domain& domain() const { return domain_; }
    int dim() const { return domain_.dim(); }
    std::size_t size() const { return nodes_.size(); }
    double spacing() const { return h_; }
    /// Nodes per side (1D: total; Square: per axis; Disk: per bounding-box side).
    int side() const { return n_; }
    const Point& node(std::size_t i) const { return nodes_[i]; }
    const Cell& cell(std::size_t i) const { return cells_[i]; }
    /// Square and Disk lattices: node index of lattice position (i, j), or -1.
    long lattice_index(int i, int j) const;
    /// Lattice position of node k.
    std::pair<int, int> lattice_position(std::size_t k) const { return lattice_[k]; }
    /// True if the cell touches the boundary of the domain.
    bool boundary_cell(std::size_t i) const;

private:
    Grid(Domain d, double h, int n) : domain_(std::move(d)), h_(h), n_(n) {}
    Domain domain_;
    double h_;
    int n_;
    std::vector<Point> nodes_;
    std::vector<Cell> cells_;
    std::vector<std::pair<int, int>> lattice_;
    std::vector<long> lattice_map_;
};

/// Values on a grid; the function is zero outside the domain.
class GridFunction {
public:
    GridFunction(std::shared_ptr<const Grid> grid, Eigen::VectorXd values);
    static GridFunction sample(std::shared_ptr<const Grid> grid, const std::function<double(const Point&)>& f);
    static GridFunction zeros(std::shared_ptr<const Grid> grid);

    const Grid& grid() const { return *grid_; }
    const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }
    const Eigen::VectorXd& values() const { return values_; }
    Eigen::VectorXd& values() { return values_; }
    double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }
    std::size_t size() const { return static_cast<std::size_t>(values_.size()); }

    GridFunction operator+(const GridFunction& o) const;
    GridFunction operator*(double c) const;

    /// Partial derivative along `axis` at every node: central differences in
    /// the interior, one-sided at nodes adjacent to the boundary.
    Eigen::VectorXd derivative(int axis) const;

private:
    std::shared_ptr<const Grid> grid_;
    Eigen::VectorXd values_;
};

}  // namespace nonlocal
