#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "hspline/functions.hpp"
#include "hspline/geometry.hpp"

namespace hspline {

/// Restrictions of a field to the four edges of a cell. Each edge function
/// takes the arc parameter in [0,1]: bottom/top run left to right, left/right
/// run bottom to top.
struct BoundaryTrace {
    std::function<double(double)> bottom;
    std::function<double(double)> top;
    std::function<double(double)> left;
    std::function<double(double)> right;

    /// Trace of f on the boundary of cell.
    [[nodiscard]] static BoundaryTrace of(const ScalarField& f, const Rect& cell);
};

enum class Edge { bottom = 0, top = 1, left = 2, right = 3 };

/// Exact Dirichlet solution of Laplace's equation on one rectangle, stored as
/// the corner-interpolating bilinear part plus four one-sided sine/sinh
/// series (one per edge, other three edges zero):
///
///   u = B(s,t) + Σ_k b_k sin(kπs) sinh(kπ(1-t)ρ)/sinh(kπρ)     (bottom)
///              + Σ_k c_k sin(kπs) sinh(kπ t ρ)/sinh(kπρ)       (top)
///              + Σ_k l_k sin(kπt) sinh(kπ(1-s)/ρ)/sinh(kπ/ρ)   (left)
///              + Σ_k r_k sin(kπt) sinh(kπ s/ρ)/sinh(kπ/ρ)      (right)
///
/// with local coordinates s, t in [0,1] and aspect ratio ρ = h/w. Every term
/// is harmonic, so the solution is harmonic term by term.
class HarmonicCellSolution {
public:
    [[nodiscard]] const Rect& cell() const { return cell_; }
    [[nodiscard]] const SeriesTruncation& truncation() const { return trunc_; }
    /// Corner values in the order (x0,y0), (x1,y0), (x0,y1), (x1,y1).
    [[nodiscard]] const std::array<double, 4>& corners() const { return corners_; }
    /// Weight of the harmonic quadratic (x-x0)(x-x1) - (y-y0)(y-y1).
    [[nodiscard]] double quadratic_weight() const { return alpha_; }
    /// Sine coefficients of the edge residual left after the corner and
    /// quadratic parts.
    [[nodiscard]] std::span<const double> edge_coefficients(Edge e) const
    {
        return coeffs_[static_cast<int>(e)];
    }

    /// Throws DomainError when x is outside the closed cell.
    [[nodiscard]] double eval(Point x) const;
    [[nodiscard]] std::vector<double> eval_many(std::span<const Point> xs) const;

    /// Evaluates at local coordinates (s,t) in [0,1]^2 without a range check.
    [[nodiscard]] double eval_local(double s, double t) const;

private:
    friend HarmonicCellSolution solve_cell(const BoundaryTrace&, const Rect&, const SeriesTruncation&);

    Rect cell_;
    SeriesTruncation trunc_;
    std::array<double, 4> corners_{};
    std::array<std::vector<double>, 4> coeffs_;
    std::array<double, 4> coeff_bound_{};
    double alpha_ = 0.0;
};

/// Solves Δu = 0 in cell, u = trace on the boundary. Edge sine coefficients
/// use composite Gauss-Legendre with 4·max_mode nodes per edge.
///
/// Throws DegenerateCellError for w <= 0 or h <= 0 and InvalidArgument when
/// adjacent edge functions disagree at a shared corner by more than 1e-12.
[[nodiscard]] HarmonicCellSolution solve_cell(const BoundaryTrace& trace, const Rect& cell,
                                              const SeriesTruncation& trunc = kCellTruncation);

[[nodiscard]] HarmonicCellSolution solve_cell(const ScalarField& f, const Rect& cell,
                                              const SeriesTruncation& trunc = kCellTruncation);

} // namespace hspline
