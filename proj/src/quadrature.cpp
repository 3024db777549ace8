#include "hspline/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "hspline/errors.hpp"
#include "hspline/geometry.hpp"

namespace hspline {

QuadratureRule gauss_legendre(int order)
{
    if (order < 1) {
        throw InvalidArgument("gauss_legendre: order must be >= 1");
    }
    const int n = order;
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // Newton on P_n from the Chebyshev-like initial guess; roots come in
    // symmetric pairs on [-1,1].
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) {
                break;
            }
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        // Map [-1,1] -> [0,1], ascending order.
        rule.nodes[i] = 0.5 * (1.0 - z);
        rule.nodes[n - 1 - i] = 0.5 * (1.0 + z);
        rule.weights[i] = 0.5 * w;
        rule.weights[n - 1 - i] = 0.5 * w;
    }
    return rule;
}

QuadratureRule composite_gauss_legendre(int panels, int order)
{
    if (panels < 1) {
        throw InvalidArgument("composite_gauss_legendre: panels must be >= 1");
    }
    const QuadratureRule base = gauss_legendre(order);
    QuadratureRule rule;
    rule.nodes.reserve(static_cast<std::size_t>(panels) * base.size());
    rule.weights.reserve(rule.nodes.capacity());
    const double width = 1.0 / panels;
    for (int p = 0; p < panels; ++p) {
        for (std::size_t q = 0; q < base.size(); ++q) {
            rule.nodes.push_back((p + base.nodes[q]) * width);
            rule.weights.push_back(base.weights[q] * width);
        }
    }
    return rule;
}

void QuadratureSpec::validate() const
{
    if (nodes_per_cell_axis < 2) {
        throw InvalidArgument("QuadratureSpec: nodes_per_cell_axis must be >= 2");
    }
    if (global_lattice < 1) {
        throw InvalidArgument("QuadratureSpec: global_lattice must be >= 1");
    }
}

void SeriesTruncation::validate() const
{
    if (max_mode < 1) {
        throw InvalidArgument("SeriesTruncation: max_mode must be >= 1");
    }
    if (!(tail_tol >= 0.0)) {
        throw InvalidArgument("SeriesTruncation: tail_tol must be >= 0");
    }
}

} // namespace hspline
