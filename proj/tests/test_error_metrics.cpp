#include <gtest/gtest.h>

#include <cmath>

#include "hspline/error_metrics.hpp"
#include "hspline/errors.hpp"
#include "hspline/harmonic_solver.hpp"
#include "oracles.hpp"

using namespace hspline;

TEST(LpError, HarmonicIsZero)
{
    const FieldPtr f = registry_get("harmonic");
    const SplineModel model = fit(*f, uniform_partition(36));
    for (double p : {1.0, 2.0}) {
        EXPECT_LE(lp_error(*f, model, p).total_p_norm, 1e-8);
    }
}

TEST(LpError, QuadraticUniformClosedForm)
{
    const FieldPtr f = registry_get("quadratic");
    for (long long n : {1LL, 16LL, 100LL}) {
        const SplineModel model = fit(*f, uniform_partition(n));
        const double err = lp_error(*f, model, 2.0).total_p_norm;
        EXPECT_NEAR(err * n, 4.0 * oracle::kTorsionL2, 1e-4 * 4.0 * oracle::kTorsionL2) << "N=" << n;
    }
}

TEST(LpError, QuadratureSelfConvergence)
{
    const FieldPtr f = registry_get("quartic");
    PartitionOptions opts;
    opts.forced_m = 3;
    const SplineModel model = fit(*f, build_partition(*f, 400, 2.0, opts), {128, 1e-10});
    const double a = lp_error(*f, model, 2.0, {8, 16}).total_p_norm;
    const double b = lp_error(*f, model, 2.0, {16, 16}).total_p_norm;
    const double c = lp_error(*f, model, 2.0, {32, 16}).total_p_norm;
    // An 8-point rule integrates the squared torsion-like cell error to
    // about 1e-7; 16 and 32 points agree far closer.
    EXPECT_NEAR(a, c, 2e-7 * c);
    EXPECT_NEAR(b, c, 1e-9 * c);
}

TEST(LpError, BreakdownSumsToTotal)
{
    const FieldPtr f = registry_get("bump");
    const SplineModel model = fit(*f, build_partition(*f, 500, 1.0));
    const ErrorBreakdown e = lp_error(*f, model, 1.0);
    ASSERT_EQ(e.per_cell_contrib.size(), model.partition().total_cells());
    ASSERT_EQ(e.per_block_contrib.size(), model.partition().blocks.size());
    double cells = 0.0;
    for (double v : e.per_cell_contrib) {
        EXPECT_GE(v, 0.0);
        cells += v;
    }
    EXPECT_NEAR(cells, e.total_p_norm, 1e-12 * e.total_p_norm);
    EXPECT_THROW((void)lp_error(*f, model, 0.5), InvalidArgument);
}

TEST(QuadraticCellError, ClosedFormValues)
{
    EXPECT_EQ(lemma3_error(1.0, -1.0, 0.3, 2.0), 0.0);
    EXPECT_NEAR(lemma3_error(1.0, 1.0, 1.0, 2.0), 4.0 * oracle::kTorsionL2, 1e-12);
    EXPECT_NEAR(lemma3_error(1.0, 1.0, 0.25, 1.0), 4.0 * 0.0625 * oracle::kTorsionL1, 1e-12);
    EXPECT_THROW((void)lemma3_error(1.0, 1.0, 0.0, 2.0), InvalidArgument);
    EXPECT_THROW((void)lemma3_error(1.0, 1.0, 1.0, 0.0), InvalidArgument);
}

TEST(QuadraticCellError, MatchesSolvedQuarterCell)
{
    const FieldPtr f = registry_get("quadratic");
    const Rect c{0.0, 0.0, 0.5, 0.5};
    const auto sol = solve_cell(*f, c);
    const QuadratureRule r = gauss_legendre(12);
    double acc = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            const Point x = c.from_local({r.nodes[i], r.nodes[j]});
            acc += r.weights[i] * r.weights[j] * std::abs(f->value(x) - sol.eval(x));
        }
    }
    acc *= c.area();
    const double expected = lemma3_error(1.0, 1.0, 0.25, 1.0);
    EXPECT_NEAR(acc, expected, 1e-6 * expected);
}

TEST(LaplacianQuasinorm, ConstantLaplacians)
{
    for (double p : {1.0, 2.0, 5.0}) {
        EXPECT_NEAR(laplacian_quasinorm(*registry_get("quadratic"), p), 4.0, 1e-12);
        EXPECT_NEAR(laplacian_quasinorm(*registry_get("klim"), p), 1.0, 1e-12);
        EXPECT_EQ(laplacian_quasinorm(*registry_get("harmonic"), p), 0.0);
    }
}

TEST(LaplacianQuasinorm, QuarticAgainstMidpointOracle)
{
    const int n = 2001;
    const double q = 2.0 / 3.0;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double y = (i + 0.5) / n;
        for (int j = 0; j < n; ++j) {
            const double x = (j + 0.5) / n;
            acc += std::pow(12.0 * x * x + 12.0 * y * y, q);
        }
    }
    const double oracle_value = std::pow(acc / (double(n) * n), 1.0 / q);
    const double v = laplacian_quasinorm(*registry_get("quartic"), 2.0);
    EXPECT_NEAR(v, oracle_value, 1e-5 * oracle_value);
}

TEST(AsymptoticConstant, Examples)
{
    EXPECT_EQ(asymptotic_constant(*registry_get("harmonic"), 2.0), 0.0);
    EXPECT_NEAR(asymptotic_constant(*registry_get("quadratic"), 2.0), 4.0 * oracle::kTorsionL2, 1e-11);
    EXPECT_NEAR(asymptotic_constant(*registry_get("klim"), 1.0), oracle::kTorsionL1, 1e-11);
    EXPECT_EQ(asymptotic_constant(*registry_get("klim"), 1.0), cached_torsion_norm(1.0));
}

TEST(CachedTorsionNorm, StableAcrossCalls)
{
    const double a = cached_torsion_norm(3.0);
    const double b = cached_torsion_norm(3.0);
    EXPECT_EQ(a, b);
    EXPECT_GT(a, cached_torsion_norm(2.0));
}
