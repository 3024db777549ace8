#include "hspline/harmonic_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include "hspline/errors.hpp"
#include "hspline/quadrature.hpp"
#include "series_util.hpp"

namespace hspline {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCornerTol = 1e-12;
constexpr int kEdgeOrder = 8;

/// Edge quadrature with 4·modes nodes and its sine table sin(kπ s_q).
struct EdgeQuadrature {
    int modes = 0;
    QuadratureRule rule;
    std::vector<double> sines; // [k-1][q]

    explicit EdgeQuadrature(int k_max)
        : modes(k_max), rule(composite_gauss_legendre((k_max + 1) / 2, kEdgeOrder))
    {
        sines.resize(static_cast<std::size_t>(modes) * rule.size());
        for (int k = 1; k <= modes; ++k) {
            for (std::size_t q = 0; q < rule.size(); ++q) {
                sines[(k - 1) * rule.size() + q] = std::sin(k * kPi * rule.nodes[q]);
            }
        }
    }
};

const EdgeQuadrature& edge_quadrature(int modes)
{
    thread_local std::unique_ptr<EdgeQuadrature> cache;
    if (!cache || cache->modes != modes) {
        cache = std::make_unique<EdgeQuadrature>(modes);
    }
    return *cache;
}

/// Σ_k coeff_k sin(kπ u) sinh(kπ a)/sinh(kπ c), 0 <= a <= c.
double edge_series(std::span<const double> coeff, double bound, double u, double a, double c)
{
    if (bound == 0.0 || u <= 0.0 || u >= 1.0 || a <= 0.0) {
        return 0.0;
    }
    detail::SineSequence sine(kPi * u, kPi * u);
    double sum = 0.0;
    const int modes = static_cast<int>(coeff.size());
    if (2.0 * kPi * c < 1e-2) {
        for (int k = 1; k <= modes; ++k) {
            sum += coeff[k - 1] * sine.next() * detail::sinh_ratio(k * kPi * a, k * kPi * c);
        }
        return sum;
    }
    const double r = std::exp(kPi * (a - c));
    const double qa = std::exp(-2.0 * kPi * a);
    const double qc = std::exp(-2.0 * kPi * c);
    double rk = 1.0;
    double qak = 1.0;
    double qck = 1.0;
    for (int k = 1; k <= modes; ++k) {
        rk *= r;
        qak *= qa;
        qck *= qc;
        const double profile = rk * (1.0 - qak) / (1.0 - qck);
        sum += coeff[k - 1] * sine.next() * profile;
        if (rk * bound < 1e-19 * (1.0 - qc)) {
            break;
        }
    }
    return sum;
}

} // namespace

BoundaryTrace BoundaryTrace::of(const ScalarField& f, const Rect& cell)
{
    const ScalarField* fp = &f;
    return BoundaryTrace{
        [fp, cell](double s) { return fp->value({cell.x0 + s * cell.w, cell.y0}); },
        [fp, cell](double s) { return fp->value({cell.x0 + s * cell.w, cell.y1()}); },
        [fp, cell](double t) { return fp->value({cell.x0, cell.y0 + t * cell.h}); },
        [fp, cell](double t) { return fp->value({cell.x1(), cell.y0 + t * cell.h}); },
    };
}

HarmonicCellSolution solve_cell(const BoundaryTrace& trace, const Rect& cell, const SeriesTruncation& trunc)
{
    if (!(cell.w > 0.0) || !(cell.h > 0.0) || !std::isfinite(cell.w) || !std::isfinite(cell.h)) {
        throw DegenerateCellError("solve_cell: cell must have positive width and height");
    }
    trunc.validate();

    HarmonicCellSolution sol;
    sol.cell_ = cell;
    sol.trunc_ = trunc;

    const double c00 = trace.bottom(0.0);
    const double c10 = trace.bottom(1.0);
    const double c01 = trace.top(0.0);
    const double c11 = trace.top(1.0);
    auto agree = [](double a, double b) {
        return std::abs(a - b) <= kCornerTol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
    };
    if (!agree(trace.left(0.0), c00) || !agree(trace.right(0.0), c10) || !agree(trace.left(1.0), c01) ||
        !agree(trace.right(1.0), c11)) {
        throw InvalidArgument("solve_cell: boundary trace is inconsistent at a corner");
    }
    sol.corners_ = {c00, c10, c01, c11};

    const EdgeQuadrature& eq = edge_quadrature(trunc.max_mode);
    const std::size_t nq = eq.rule.size();
    std::vector<double> g(nq);

    // Edge residuals after the bilinear corner part.
    const std::array<const std::function<double(double)>*, 4> edges{&trace.bottom, &trace.top, &trace.left,
                                                                      &trace.right};
    const std::array<std::array<double, 2>, 4> ends{{{c00, c10}, {c01, c11}, {c00, c01}, {c10, c11}}};
    std::array<std::vector<double>, 4> resid;
    for (int e = 0; e < 4; ++e) {
        resid[e].resize(nq);
        for (std::size_t q = 0; q < nq; ++q) {
            const double s = eq.rule.nodes[q];
            resid[e][q] = (*edges[e])(s) - (ends[e][0] * (1.0 - s) + ends[e][1] * s);
        }
    }

    // Least-squares weight of H = (x-x0)(x-x1) - (y-y0)(y-y1), whose traces
    // are w²s(s-1) on the horizontal edges and -h²t(t-1) on the vertical ones.
    const double w2 = cell.w * cell.w;
    const double h2 = cell.h * cell.h;
    const std::array<double, 4> scale{w2, w2, -h2, -h2};
    double num = 0.0;
    for (int e = 0; e < 4; ++e) {
        double acc = 0.0;
        for (std::size_t q = 0; q < nq; ++q) {
            const double s = eq.rule.nodes[q];
            acc += eq.rule.weights[q] * resid[e][q] * s * (s - 1.0);
        }
        num += scale[e] * acc;
    }
    sol.alpha_ = 30.0 * num / (2.0 * (w2 * w2 + h2 * h2));

    for (int e = 0; e < 4; ++e) {
        for (std::size_t q = 0; q < nq; ++q) {
            const double s = eq.rule.nodes[q];
            g[q] = eq.rule.weights[q] * (resid[e][q] - sol.alpha_ * scale[e] * s * (s - 1.0));
        }
        auto& coeff = sol.coeffs_[e];
        coeff.assign(trunc.max_mode, 0.0);
        double bound = 0.0;
        for (int k = 1; k <= trunc.max_mode; ++k) {
            const double* sines = &eq.sines[(k - 1) * nq];
            double acc = 0.0;
            for (std::size_t q = 0; q < nq; ++q) {
                acc += g[q] * sines[q];
            }
            coeff[k - 1] = 2.0 * acc;
            bound = std::max(bound, std::abs(coeff[k - 1]));
        }
        sol.coeff_bound_[e] = bound;
    }
    return sol;
}

HarmonicCellSolution solve_cell(const ScalarField& f, const Rect& cell, const SeriesTruncation& trunc)
{
    return solve_cell(BoundaryTrace::of(f, cell), cell, trunc);
}

double HarmonicCellSolution::eval_local(double s, double t) const
{
    const auto& [c00, c10, c01, c11] = corners_;
    double u = c00 * (1.0 - s) * (1.0 - t) + c10 * s * (1.0 - t) + c01 * (1.0 - s) * t + c11 * s * t;
    u += alpha_ * (cell_.w * cell_.w * s * (s - 1.0) - cell_.h * cell_.h * t * (t - 1.0));
    const double rho = cell_.h / cell_.w;
    const double inv = 1.0 / rho;
    u += edge_series(coeffs_[0], coeff_bound_[0], s, (1.0 - t) * rho, rho);
    u += edge_series(coeffs_[1], coeff_bound_[1], s, t * rho, rho);
    u += edge_series(coeffs_[2], coeff_bound_[2], t, (1.0 - s) * inv, inv);
    u += edge_series(coeffs_[3], coeff_bound_[3], t, s * inv, inv);
    return u;
}

double HarmonicCellSolution::eval(Point x) const
{
    const double slack = 1e-12 * std::max(cell_.w, cell_.h) + 1e-15;
    if (!cell_.contains(x, slack)) {
        throw DomainError("HarmonicCellSolution::eval: point (" + std::to_string(x.x) + ", " +
                          std::to_string(x.y) + ") outside the cell");
    }
    const Point s = cell_.to_local(x);
    return eval_local(s.x, s.y);
}

std::vector<double> HarmonicCellSolution::eval_many(std::span<const Point> xs) const
{
    std::vector<double> out;
    out.reserve(xs.size());
    for (const Point& x : xs) {
        out.push_back(eval(x));
    }
    return out;
}

} // namespace hspline
