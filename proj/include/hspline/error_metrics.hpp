#pragma once

#include <vector>

#include "hspline/functions.hpp"
#include "hspline/parallel.hpp"
#include "hspline/quadrature.hpp"
#include "hspline/spline.hpp"

namespace hspline {

/// ‖f - s‖_{L_p} split into p-th power contributions per intermediate block.
struct ErrorBreakdown {
    double total_p_norm = 0.0;
    /// Σ over the block's cells of ∫|f - s|^p.
    std::vector<double> per_block_contrib;
    /// ∫|f - s|^p per cell, aligned with the partition's cell list.
    std::vector<double> per_cell_contrib;
    double p = 1.0;
};

/// Tensor Gauss-Legendre quadrature of |f - s|^p on every cell. Per-cell
/// values are reduced in cell order, so serial and parallel results agree
/// bit for bit. Throws InvalidArgument for p < 1.
[[nodiscard]] ErrorBreakdown lp_error(const ScalarField& f, const SplineModel& model, double p,
                                      const QuadratureSpec& quad = {}, Execution exec = Execution::parallel);

/// ‖I‖_{L_p} memoised on (p, truncation, quadrature). Thread-safe.
[[nodiscard]] double cached_torsion_norm(double p, const SeriesTruncation& trunc = kKernelTruncation,
                                         const QuadratureSpec& quad = {});

/// Closed-form error of harmonic interpolation of Q = A x² + B y² on a
/// square of the given area: 2|A+B| · area^{1+1/p} · ‖I‖_{L_p}.
[[nodiscard]] double lemma3_error(double a, double b, double cell_area, double p,
                                  const SeriesTruncation& trunc = kKernelTruncation,
                                  const QuadratureSpec& quad = {});

/// (∫ |Δf|^q)^{1/q} with q = p/(p+1), composite Gauss-Legendre on the
/// global lattice. Fields with constant |Δf| return it directly.
[[nodiscard]] double laplacian_quasinorm(const ScalarField& f, double p, const QuadratureSpec& quad = {});

/// ‖I‖_{L_p} · ‖Δf‖_{L_{p/(p+1)}}, the limit of N‖f - s‖_{L_p} on the
/// adaptive partitions.
[[nodiscard]] double asymptotic_constant(const ScalarField& f, double p,
                                         const SeriesTruncation& trunc = kKernelTruncation,
                                         const QuadratureSpec& quad = {});

} // namespace hspline
