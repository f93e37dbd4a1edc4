#pragma once

#include "nonlocal/geometry.hpp"
#include "nonlocal/grid.hpp"

#include <string>
#include <vector>

namespace nonlocal {

enum class NormOrder { Zero, One, HalfAlpha, Alpha };

std::string to_string(NormOrder o);

/// Exponent p, weight exponent theta (the measure is d_x^{theta - d} dx),
/// smoothness order and the stability index used by fractional orders.
struct WeightedNormSpec {
    double p = 2.0;
    double theta = 1.0;
    NormOrder order = NormOrder::Zero;
    double alpha = 1.0;

    void validate() const;
    /// Numeric smoothness: 0, 1, alpha/2 or alpha.
    double smoothness() const;
};

/// int_cell d_x^s dx. Exact on 1D grids; graded tensor Gauss-Legendre on 2D
/// cells, restricted to the domain. Returns +inf when s <= -1 and the cell
/// touches the boundary.
double cell_weight(const Grid& g, std::size_t i, double s);

/// (sum_i |u_i|^p int_cell d^{theta - d})^{1/p}. Cells where the weight is not
/// integrable fall back to the centre value and add a warning.
double weighted_Lp(const GridFunction& u, const WeightedNormSpec& spec, std::vector<std::string>* warnings = nullptr);

/// sum_{k <= 1} || d^k |D^k u| ||_{L_{p,theta}}. Spec order must be Zero or One.
double weighted_sobolev_int(const GridFunction& u, const WeightedNormSpec& spec,
                            std::vector<std::string>* warnings = nullptr);

/// (sum_n e^{n(d - theta)} N_n)^{1/p} with N_n the local cost of zeta_n u:
///   order 0:          int |zeta_n u|^p
///   order 1:          adds e^{-np} int |D(zeta_n u)|^p
///   order gamma in {alpha/2, alpha}: adds e^{-n gamma p} int |(-Delta)^{gamma/2}(zeta_n u)|^p
/// (fractional orders on Interval grids only).
double dyadic_norm(const GridFunction& u, const WeightedNormSpec& spec, const DyadicPartition& partition,
                   std::vector<std::string>* warnings = nullptr);

/// Per-band contributions of `dyadic_norm` before the 1/p power.
struct BandSum {
    std::vector<int> indices;
    std::vector<double> terms;
    double total = 0.0;
};
BandSum dyadic_bands(const GridFunction& u, const WeightedNormSpec& spec, const DyadicPartition& partition);

/// Admissible theta window (d - 1, d - 1 + p).
std::pair<double, double> theta_window(int dim, double p);

struct EstimateRatio {
    double ratio_psi = 0.0;   ///< weights built on psi_tilde
    double ratio_dist = 0.0;  ///< weights built on d_x
    double solution_norm = 0.0;
    double data_norm = 0.0;
    bool inside_window = true;
};

/// (||psi^{-alpha/2} u||_{L_{p,theta}} + ||psi^{alpha/2} (-Delta)^{alpha/2} u||_{L_{p,theta}})
///   / ||psi^{alpha/2} f||_{L_{p,theta}}
/// on an Interval grid, with (-Delta)^{alpha/2} from the stiffness matrix.
/// Throws DomainError if theta is outside the window and `enforce_window`.
EstimateRatio estimate_ratio(const GridFunction& u, const GridFunction& f, double p, double theta, double alpha,
                             bool enforce_window = true);

struct NormEquivalenceReport {
    std::vector<std::string> labels;
    std::vector<int> grid_sizes;
    /// ratios[g][k] = dyadic / integral for function k on grid g
    std::vector<std::vector<double>> ratios;
    std::vector<double> constants;  ///< per grid: max_k max(r, 1/r)
    double spread = 0.0;            ///< max/min of the constants over grids, minus one
};

struct LabelledField {
    std::string label;
    std::function<double(const Point&)> f;
};

/// Dyadic and integral forms of the same spec on each grid, for every member
/// of `family`.
NormEquivalenceReport norm_equivalence(const std::vector<LabelledField>& family,
                                       const std::vector<std::shared_ptr<const Grid>>& grids,
                                       const WeightedNormSpec& spec, const DyadicPartition& partition);

}  // namespace nonlocal
