#pragma once

#include <vector>

namespace hspline {

/// One-dimensional rule on [0,1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    [[nodiscard]] std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre rule with `order` nodes mapped to [0,1].
[[nodiscard]] QuadratureRule gauss_legendre(int order);

/// Composite Gauss-Legendre: `panels` equal panels of `order` nodes on [0,1].
[[nodiscard]] QuadratureRule composite_gauss_legendre(int panels, int order);

struct QuadratureSpec {
    /// Gauss-Legendre order per axis inside every partition cell.
    int nodes_per_cell_axis = 12;
    /// Panels per axis for whole-square integrals (each panel uses
    /// nodes_per_cell_axis nodes per axis).
    int global_lattice = 16;

    void validate() const;
};

} // namespace hspline
