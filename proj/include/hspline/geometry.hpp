#pragma once

#include <algorithm>

namespace hspline {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Axis-aligned rectangle [x0, x0+w] x [y0, y0+h].
struct Rect {
    double x0 = 0.0;
    double y0 = 0.0;
    double w = 1.0;
    double h = 1.0;

    [[nodiscard]] double x1() const { return x0 + w; }
    [[nodiscard]] double y1() const { return y0 + h; }
    [[nodiscard]] double area() const { return w * h; }
    [[nodiscard]] Point center() const { return {x0 + 0.5 * w, y0 + 0.5 * h}; }

    /// Closed containment with an absolute slack.
    [[nodiscard]] bool contains(Point p, double slack = 0.0) const
    {
        return p.x >= x0 - slack && p.x <= x1() + slack && p.y >= y0 - slack &&
               p.y <= y1() + slack;
    }

    /// Local coordinates in [0,1]^2, clamped against round-off.
    [[nodiscard]] Point to_local(Point p) const
    {
        return {std::clamp((p.x - x0) / w, 0.0, 1.0), std::clamp((p.y - y0) / h, 0.0, 1.0)};
    }

    [[nodiscard]] Point from_local(Point s) const { return {x0 + s.x * w, y0 + s.y * h}; }
};

/// Truncation of the one-dimensional sine/sinh series used throughout.
///
/// `max_mode` is the number of modes always summed. Series that expose a
/// geometric tail bound keep adding modes past `max_mode` until the bound
/// drops below `tail_tol` (up to a hard cap), so `tail_tol` is the accuracy
/// target and `max_mode` the minimum work.
struct SeriesTruncation {
    int max_mode = 64;
    double tail_tol = 1e-10;

    void validate() const;
};

/// Default truncation for Green's function and torsion series.
inline constexpr SeriesTruncation kKernelTruncation{64, 1e-10};
/// Default truncation per spline cell.
inline constexpr SeriesTruncation kCellTruncation{32, 1e-10};

} // namespace hspline
