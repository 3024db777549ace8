#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "hspline/errors.hpp"
#include "hspline/green_kernel.hpp"
#include "hspline/spline.hpp"

using namespace hspline;

namespace {

Partition adaptive(const char* name, long long n, double p, std::optional<int> m = {})
{
    PartitionOptions opts;
    opts.forced_m = m;
    return build_partition(*registry_get(name), n, p, opts);
}

} // namespace

TEST(Fit, HarmonicReproducedOnAnyPartition)
{
    const FieldPtr f = registry_get("harmonic");
    for (const Partition& part : {uniform_partition(1), uniform_partition(49), adaptive("quartic", 300, 2.0, 3),
                                  adaptive("bump", 2000, 1.0)}) {
        const SplineModel model = fit(*f, part);
        double worst = 0.0;
        for (int i = 0; i <= 100; ++i) {
            for (int j = 0; j <= 100; ++j) {
                const Point x{j / 100.0, i / 100.0};
                worst = std::max(worst, std::abs(model.evaluate(x) - f->value(x)));
            }
        }
        EXPECT_LE(worst, 1e-8);
    }
}

TEST(Fit, QuadraticUniformCellErrorIsScaledTorsion)
{
    const FieldPtr f = registry_get("quadratic");
    const SplineModel model = fit(*f, uniform_partition(4));
    // 2 (A + B) |Ω| I(ξ) with A + B = 2 and |Ω| = 1/4.
    for (Point x : {Point{0.1, 0.2}, Point{0.3, 0.35}, Point{0.6, 0.9}, Point{0.75, 0.25}}) {
        const Point xi{std::fmod(x.x, 0.5) / 0.5, std::fmod(x.y, 0.5) / 0.5};
        EXPECT_NEAR(model.evaluate(x) - f->value(x), green::torsion(xi), 1e-6);
    }
}

TEST(Fit, KlimMatchesOnCellEdges)
{
    const FieldPtr f = registry_get("klim");
    const SplineModel model = fit(*f, uniform_partition(256));
    double worst = 0.0;
    for (const auto& sol : model.solutions()) {
        const Rect& c = sol.cell();
        for (int k = 0; k <= 8; ++k) {
            const double s = k / 8.0;
            for (Point x : {c.from_local({s, 0.0}), c.from_local({s, 1.0}), c.from_local({0.0, s}),
                            c.from_local({1.0, s})}) {
                worst = std::max(worst, std::abs(sol.eval(x) - f->value(x)));
            }
        }
    }
    EXPECT_LT(worst, 1e-6);
}

TEST(Fit, ContinuousAcrossCellInterfaces)
{
    const FieldPtr f = registry_get("bump");
    const SplineModel model = fit(*f, adaptive("bump", 500, 1.0, 3));
    const Partition& part = model.partition();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < part.cells.size(); ++i) {
        const Rect& c = part.cells[i].rect;
        if (c.x1() >= 1.0) {
            continue;
        }
        // Points on the right edge, evaluated from both sides.
        for (int k = 0; k < 4; ++k) {
            const Point x{c.x1(), c.y0 + u(rng) * c.h};
            const double left = model.solutions()[i].eval(x);
            const double right = model.solutions()[part.locate(x)].eval(x);
            worst = std::max(worst, std::abs(left - right));
        }
    }
    EXPECT_LT(worst, 1e-6);
}

TEST(Evaluate, BoundaryAndInteriorCorners)
{
    const FieldPtr f = registry_get("quartic");
    const SplineModel model = fit(*f, uniform_partition(64));
    // Edge traces are reproduced up to the K=32 sine truncation.
    for (Point x : {Point{0.0, 0.3}, Point{1.0, 0.77}, Point{0.41, 0.0}, Point{0.5, 1.0}}) {
        EXPECT_NEAR(model.evaluate(x), f->value(x), 2e-6);
    }
    for (Point x : {Point{0.25, 0.5}, Point{0.125, 0.875}, Point{0.5, 0.5}}) {
        EXPECT_NEAR(model.evaluate(x), f->value(x), 1e-14);
    }
    EXPECT_THROW((void)model.evaluate({-0.01, 0.5}), DomainError);
    EXPECT_EQ(model.field_name(), "quartic");
}

TEST(Evaluate, InteriorQuadraticMatchesPointwiseIdentity)
{
    const FieldPtr f = registry_get("quadratic");
    const SplineModel model = fit(*f, uniform_partition(25));
    const double side = 0.2;
    for (Point x : {Point{0.13, 0.57}, Point{0.91, 0.05}, Point{0.5, 0.5}}) {
        const Point xi{std::fmod(x.x, side) / side, std::fmod(x.y, side) / side};
        EXPECT_NEAR(model.evaluate(x), f->value(x) + 4.0 * side * side * green::torsion(xi), 1e-8);
    }
}

TEST(WriteLattice, Format)
{
    const FieldPtr f = registry_get("harmonic");
    const SplineModel model = fit(*f, uniform_partition(16));
    std::stringstream ss;
    write_lattice(ss, model, 5);
    EXPECT_EQ(ss.str().rfind("# n=5\n", 0), 0u);
    const FieldPtr g = read_grid(ss);
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            const Point x{j / 4.0, i / 4.0};
            EXPECT_NEAR(g->value(x), f->value(x), 1e-12);
        }
    }
}
