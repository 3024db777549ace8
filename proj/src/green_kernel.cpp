#include "hspline/green_kernel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hspline/errors.hpp"
#include "series_util.hpp"

namespace hspline::green {

namespace {

constexpr double kPi = std::numbers::pi;

void require_in_square(Point p, const char* what)
{
    if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0)) {
        throw DomainError(std::string(what) + ": point (" + std::to_string(p.x) + ", " +
                          std::to_string(p.y) + ") outside the closed unit square");
    }
}

} // namespace

double green_unit_square(Point x, Point v, const SeriesTruncation& trunc)
{
    trunc.validate();
    require_in_square(x, "green_unit_square");
    require_in_square(v, "green_unit_square");
    if (std::hypot(x.x - v.x, x.y - v.y) < kCoincidentRadius) {
        throw CoincidentPointsError("green_unit_square: coincident points");
    }

    // Sine modes run along the axis with the smaller separation; the sinh
    // profile runs along the other, where decay is exp(-kπ·sep).
    double a = x.x;
    double b = v.x;
    double lo = std::min(x.y, v.y);
    double hi = std::max(x.y, v.y);
    if (std::abs(x.x - v.x) > std::abs(x.y - v.y)) {
        a = x.y;
        b = v.y;
        lo = std::min(x.x, v.x);
        hi = std::max(x.x, v.x);
    }
    const double sep = hi - lo;
    if (lo <= 0.0 || hi >= 1.0 || a <= 0.0 || a >= 1.0 || b <= 0.0 || b >= 1.0) {
        return 0.0;
    }

    // sinh(kπ lo) sinh(kπ(1-hi)) / sinh(kπ)
    //   = r^k (1 - qa^k)(1 - qb^k) / (2 (1 - qc^k))
    const double r = std::exp(-kPi * sep);
    const double qa = std::exp(-2.0 * kPi * lo);
    const double qb = std::exp(-2.0 * kPi * (1.0 - hi));
    const double qc = std::exp(-2.0 * kPi);
    const double tail_den = (1.0 - r) * (1.0 - qc);

    detail::SineSequence sa(kPi * a, kPi * a);
    detail::SineSequence sb(kPi * b, kPi * b);
    double rk = 1.0;
    double qak = 1.0;
    double qbk = 1.0;
    double qck = 1.0;
    double sum = 0.0;
    for (int k = 1; k <= kModeCap; ++k) {
        rk *= r;
        qak *= qa;
        qbk *= qb;
        qck *= qc;
        const double profile = rk * (1.0 - qak) * (1.0 - qbk) / (2.0 * (1.0 - qck));
        sum += 2.0 / (k * kPi) * sa.next() * sb.next() * profile;
        if (k >= trunc.max_mode) {
            const double tail = rk * r / ((k + 1) * kPi * tail_den);
            if (tail <= trunc.tail_tol || rk == 0.0) {
                break;
            }
        }
    }
    return sum;
}

double torsion(Point x, const SeriesTruncation& trunc)
{
    trunc.validate();
    require_in_square(x, "torsion");

    // I = a(1-a)/2 - Σ_{k odd} 4/(k³π³) sin(kπa) cosh(kπ(b-½))/cosh(kπ/2),
    // with the cosh variable b chosen farthest from its boundary.
    double a = x.x;
    double b = x.y;
    if (std::min(a, 1.0 - a) > std::min(b, 1.0 - b)) {
        std::swap(a, b);
    }
    const double dist = std::min(b, 1.0 - b);
    if (dist <= 0.0 || a <= 0.0 || a >= 1.0) {
        return 0.0;
    }
    const double off = std::abs(b - 0.5);
    const double r2 = std::exp(-2.0 * kPi * dist);   // step of e^{kπ(off-½)} for k -> k+2
    const double g2 = std::exp(-4.0 * kPi * off);    // step of e^{-2kπ off}
    const double h2 = std::exp(-2.0 * kPi);          // step of e^{-kπ}
    const double tail_den = 1.0 - std::exp(-2.0 * kPi * dist);

    detail::SineSequence s(kPi * a, 2.0 * kPi * a);
    double rk = std::exp(-kPi * dist);
    double gk = std::exp(-2.0 * kPi * off);
    double hk = std::exp(-kPi);
    double sum = 0.0;
    for (int k = 1; k <= kModeCap; k += 2) {
        const double k3 = static_cast<double>(k) * k * k;
        const double profile = rk * (1.0 + gk) / (1.0 + hk);
        sum += 4.0 / (k3 * kPi * kPi * kPi) * s.next() * profile;
        if (k >= trunc.max_mode) {
            const double kn = k + 2.0;
            const double tail = 8.0 / (kn * kn * kn * kPi * kPi * kPi) * rk * r2 / tail_den;
            if (tail <= trunc.tail_tol || rk == 0.0) {
                break;
            }
        }
        rk *= r2;
        gk *= g2;
        hk *= h2;
    }
    return 0.5 * a * (1.0 - a) - sum;
}

double torsion_norm(double p, const SeriesTruncation& trunc, const QuadratureSpec& quad)
{
    if (!(p >= 1.0) || !std::isfinite(p)) {
        throw InvalidArgument("torsion_norm: p must be a finite value >= 1");
    }
    trunc.validate();
    quad.validate();
    const QuadratureRule rule = composite_gauss_legendre(quad.global_lattice, quad.nodes_per_cell_axis);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < rule.size(); ++j) {
            const double v = torsion({rule.nodes[i], rule.nodes[j]}, trunc);
            row += rule.weights[j] * std::pow(v, p);
        }
        acc += rule.weights[i] * row;
    }
    return std::pow(acc, 1.0 / p);
}

} // namespace hspline::green
