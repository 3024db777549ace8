#include "hspline/error_metrics.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "hspline/errors.hpp"
#include "hspline/green_kernel.hpp"

namespace hspline {

namespace {

void validate_p(double p, const char* where)
{
    if (!(p >= 1.0) || !std::isfinite(p)) {
        throw InvalidArgument(std::string(where) + ": p must be a finite value >= 1");
    }
}

double power(double v, double p)
{
    if (p == 1.0) {
        return v;
    }
    if (p == 2.0) {
        return v * v;
    }
    return std::pow(v, p);
}

double cell_contribution(const ScalarField& f, const HarmonicCellSolution& sol, const QuadratureRule& rule,
                         double p)
{
    const Rect& c = sol.cell();
    double acc = 0.0;
    for (std::size_t j = 0; j < rule.size(); ++j) {
        const double t = rule.nodes[j];
        const double y = c.y0 + t * c.h;
        double row = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            const double s = rule.nodes[i];
            const double diff = f.value({c.x0 + s * c.w, y}) - sol.eval_local(s, t);
            row += rule.weights[i] * power(std::abs(diff), p);
        }
        acc += rule.weights[j] * row;
    }
    return acc * c.area();
}

} // namespace

ErrorBreakdown lp_error(const ScalarField& f, const SplineModel& model, double p, const QuadratureSpec& quad,
                        Execution exec)
{
    validate_p(p, "lp_error");
    quad.validate();
    const QuadratureRule rule = gauss_legendre(quad.nodes_per_cell_axis);
    const auto& sols = model.solutions();
    const auto n = static_cast<std::ptrdiff_t>(sols.size());

    ErrorBreakdown out;
    out.p = p;
    out.per_cell_contrib.resize(sols.size());
    if (exec == Execution::serial) {
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            out.per_cell_contrib[i] = cell_contribution(f, sols[i], rule, p);
        }
    } else {
#pragma omp parallel for schedule(dynamic, 64) num_threads(worker_count())
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            out.per_cell_contrib[i] = cell_contribution(f, sols[i], rule, p);
        }
    }

    const Partition& part = model.partition();
    out.per_block_contrib.assign(part.blocks.size(), 0.0);
    for (std::size_t i = 0; i < part.cells.size(); ++i) {
        out.per_block_contrib[part.cells[i].block] += out.per_cell_contrib[i];
    }
    double total = 0.0;
    for (double v : out.per_block_contrib) {
        total += v;
    }
    out.total_p_norm = std::pow(total, 1.0 / p);
    return out;
}

double cached_torsion_norm(double p, const SeriesTruncation& trunc, const QuadratureSpec& quad)
{
    using Key = std::tuple<double, int, double, int, int>;
    static std::mutex mutex;
    static std::map<Key, double> cache;
    const Key key{p, trunc.max_mode, trunc.tail_tol, quad.nodes_per_cell_axis, quad.global_lattice};
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) {
            return it->second;
        }
    }
    const double value = green::torsion_norm(p, trunc, quad);
    std::lock_guard lock(mutex);
    cache.emplace(key, value);
    return value;
}

double lemma3_error(double a, double b, double cell_area, double p, const SeriesTruncation& trunc,
                    const QuadratureSpec& quad)
{
    validate_p(p, "lemma3_error");
    if (!(cell_area > 0.0)) {
        throw InvalidArgument("lemma3_error: cell area must be positive");
    }
    if (a + b == 0.0) {
        return 0.0;
    }
    return 2.0 * std::abs(a + b) * std::pow(cell_area, 1.0 + 1.0 / p) * cached_torsion_norm(p, trunc, quad);
}

double laplacian_quasinorm(const ScalarField& f, double p, const QuadratureSpec& quad)
{
    validate_p(p, "laplacian_quasinorm");
    quad.validate();
    if (f.known_asymptotic_constant()) {
        return std::abs(f.laplacian({0.5, 0.5}));
    }
    const double q = p / (p + 1.0);
    const QuadratureRule rule = composite_gauss_legendre(quad.global_lattice, quad.nodes_per_cell_axis);
    double acc = 0.0;
    for (std::size_t j = 0; j < rule.size(); ++j) {
        double row = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            row += rule.weights[i] * std::pow(std::abs(f.laplacian({rule.nodes[i], rule.nodes[j]})), q);
        }
        acc += rule.weights[j] * row;
    }
    return std::pow(acc, 1.0 / q);
}

double asymptotic_constant(const ScalarField& f, double p, const SeriesTruncation& trunc,
                           const QuadratureSpec& quad)
{
    validate_p(p, "asymptotic_constant");
    const double lap = laplacian_quasinorm(f, p, quad);
    if (lap == 0.0) {
        return 0.0;
    }
    return cached_torsion_norm(p, trunc, quad) * lap;
}

} // namespace hspline
