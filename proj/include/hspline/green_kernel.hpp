#pragma once

#include "hspline/geometry.hpp"
#include "hspline/quadrature.hpp"

namespace hspline::green {

/// Points closer than this are treated as coincident by green_unit_square.
inline constexpr double kCoincidentRadius = 1e-6;

/// Upper bound on modes any kernel series will sum, whatever tail_tol asks.
inline constexpr int kModeCap = 1 << 18;

/// Green's function of the Dirichlet Laplacian on the unit square,
/// -Δ_x G(x;v) = δ(x - v), G = 0 on the boundary.
///
/// Summed as a single sine/sinh series along whichever axis separates x and
/// v the most, so terms decay like exp(-kπ·sep). Throws DomainError outside
/// the closed square and CoincidentPointsError for |x - v| < 1e-6.
[[nodiscard]] double green_unit_square(Point x, Point v,
                                       const SeriesTruncation& trunc = kKernelTruncation);

/// Torsion function I(x) = ∫ G(x;v) dv: ΔI = -1 in the square, I = 0 on
/// the boundary.
[[nodiscard]] double torsion(Point x, const SeriesTruncation& trunc = kKernelTruncation);

/// ‖I‖_{L_p} over the unit square by composite Gauss-Legendre quadrature.
/// Throws InvalidArgument for p < 1.
[[nodiscard]] double torsion_norm(double p, const SeriesTruncation& trunc = kKernelTruncation,
                                  const QuadratureSpec& quad = {});

} // namespace hspline::green
