#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hspline/errors.hpp"
#include "hspline/functions.hpp"
#include "hspline/harmonic_solver.hpp"
#include "hspline/partition.hpp"
#include "hspline/spline.hpp"

using namespace hspline;

namespace {

double fd_laplacian(const ScalarField& f, Point x, double h)
{
    return (f.value({x.x + h, x.y}) + f.value({x.x - h, x.y}) + f.value({x.x, x.y + h}) +
            f.value({x.x, x.y - h}) - 4.0 * f.value(x)) /
           (h * h);
}

} // namespace

TEST(Registry, KnownNames)
{
    for (const auto& name : registry_names()) {
        const FieldPtr f = registry_get(name);
        ASSERT_NE(f, nullptr);
        EXPECT_EQ(f->name(), name);
    }
    EXPECT_THROW((void)registry_get("cubic"), UnknownFieldError);
    EXPECT_THROW((void)registry_get(""), UnknownFieldError);
}

TEST(Registry, QuadraticLaplacianIsFour)
{
    const FieldPtr f = registry_get("quadratic");
    for (Point x : {Point{0.0, 0.0}, Point{0.3, 0.9}, Point{1.0, 1.0}}) {
        EXPECT_DOUBLE_EQ(f->laplacian(x), 4.0);
    }
}

TEST(Registry, HarmonicLaplacianIsZero)
{
    const FieldPtr f = registry_get("harmonic");
    for (Point x : {Point{0.0, 0.0}, Point{0.3, 0.9}, Point{0.5, 0.5}}) {
        EXPECT_DOUBLE_EQ(f->laplacian(x), 0.0);
    }
}

TEST(Registry, KlimFiniteDifferenceLaplacian)
{
    const FieldPtr f = registry_get("klim");
    for (int i = 1; i < 10; ++i) {
        for (int j = 1; j < 10; ++j) {
            const Point x{j / 10.0, i / 10.0};
            EXPECT_NEAR(fd_laplacian(*f, x, 1e-4), -1.0, 1e-6);
            EXPECT_DOUBLE_EQ(f->laplacian(x), -1.0);
        }
    }
}

TEST(Registry, KlimVanishesOnBoundary)
{
    // Up to the tail of the truncated sine series of x(1-x)/2.
    const FieldPtr f = registry_get("klim");
    for (double s : {0.0, 0.2, 0.5, 0.8, 1.0}) {
        EXPECT_NEAR(f->value({s, 0.0}), 0.0, 1e-8);
        EXPECT_NEAR(f->value({s, 1.0}), 0.0, 1e-8);
        EXPECT_NEAR(f->value({0.0, s}), 0.0, 1e-8);
        EXPECT_NEAR(f->value({1.0, s}), 0.0, 1e-8);
    }
}

TEST(Registry, AnalyticPartialsMatchDifferences)
{
    const double h = 1e-4;
    for (const auto& name : registry_names()) {
        const FieldPtr f = registry_get(name);
        for (Point x : {Point{0.3, 0.4}, Point{0.7, 0.2}, Point{0.55, 0.85}}) {
            const SecondPartials d = f->second_partials(x);
            const double fxx = (f->value({x.x + h, x.y}) - 2 * f->value(x) + f->value({x.x - h, x.y})) / (h * h);
            const double fyy = (f->value({x.x, x.y + h}) - 2 * f->value(x) + f->value({x.x, x.y - h})) / (h * h);
            const double fxy = (f->value({x.x + h, x.y + h}) - f->value({x.x + h, x.y - h}) -
                                f->value({x.x - h, x.y + h}) + f->value({x.x - h, x.y - h})) /
                               (4 * h * h);
            EXPECT_NEAR(d.xx, fxx, 1e-4) << name;
            EXPECT_NEAR(d.yy, fyy, 1e-4) << name;
            EXPECT_NEAR(d.xy, fxy, 1e-4) << name;
        }
    }
}

TEST(Modulus, QuadraticIsZero)
{
    const FieldPtr f = registry_get("quadratic");
    for (double d : {0.01, 0.1, 0.5, 1.0}) {
        EXPECT_EQ(modulus_estimate(*f, d), 0.0);
    }
}

TEST(Modulus, QuarticWitness)
{
    const FieldPtr f = registry_get("quartic");
    EXPECT_GE(modulus_estimate(*f, 0.1), 12.0 - 12.0 * 0.81 - 1e-12);
}

TEST(Modulus, MonotoneInDelta)
{
    for (const auto& name : registry_names()) {
        const FieldPtr f = registry_get(name);
        const ModulusEstimator omega(*f);
        double prev = 0.0;
        for (double d : {0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0}) {
            const double v = omega(d);
            EXPECT_GE(v, prev) << name << " delta=" << d;
            prev = v;
        }
        EXPECT_LE(omega(0.05), omega(0.1)) << name;
    }
}

TEST(Modulus, RejectsBadDelta)
{
    const FieldPtr f = registry_get("quartic");
    EXPECT_THROW((void)modulus_estimate(*f, 0.0), InvalidArgument);
    EXPECT_THROW((void)modulus_estimate(*f, 1.5), InvalidArgument);
}

TEST(Grid, QuadraticLaplacianAtCenter)
{
    const FieldPtr q = registry_get("quadratic");
    const FieldPtr g = load_grid(sample_grid(*q, 33), 33);
    EXPECT_NEAR(g->laplacian({0.5, 0.5}), 4.0, 1e-6);
    EXPECT_NEAR(g->value({0.31, 0.77}), q->value({0.31, 0.77}), 1e-6);
    EXPECT_FALSE(g->exact_derivatives());
}

TEST(Grid, ConstantHasZeroLaplacian)
{
    const std::vector<double> v(17 * 17, 3.25);
    const FieldPtr g = load_grid(v, 17);
    for (Point x : {Point{0.0, 0.0}, Point{0.4, 0.6}, Point{1.0, 0.3}}) {
        EXPECT_NEAR(g->laplacian(x), 0.0, 1e-12);
        EXPECT_NEAR(g->value(x), 3.25, 1e-12);
    }
}

TEST(Grid, HarmonicSplineEndToEnd)
{
    const FieldPtr h = registry_get("harmonic");
    const FieldPtr g = load_grid(sample_grid(*h, 65), 65);
    const SplineModel model = fit(*g, uniform_partition(64));
    for (int i = 1; i < 10; ++i) {
        for (int j = 1; j < 10; ++j) {
            const Point x{j / 10.0 + 0.013, i / 10.0 - 0.007};
            EXPECT_NEAR(model.evaluate(x), h->value(x), 1e-6);
        }
    }
}

TEST(Grid, TextRoundTrip)
{
    const FieldPtr b = registry_get("bump");
    const auto values = sample_grid(*b, 9);
    std::stringstream ss;
    write_grid(ss, values, 9);
    const FieldPtr g = read_grid(ss);
    for (int i = 0; i < 9; ++i) {
        for (int j = 0; j < 9; ++j) {
            EXPECT_EQ(g->value({j / 8.0, i / 8.0}), values[i * 9 + j]);
        }
    }
}

TEST(Grid, CommaSeparatedWithoutHeader)
{
    std::stringstream ss;
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            ss << (j ? "," : "") << i + j;
        }
        ss << "\n";
    }
    const FieldPtr g = read_grid(ss);
    EXPECT_NEAR(g->value({0.5, 0.5}), 4.0, 1e-12);
    EXPECT_NEAR(g->value({1.0, 0.25}), 5.0, 1e-12);
}

TEST(Grid, FormatErrors)
{
    {
        std::stringstream ss("1 2 3\n4 5 6\n");
        EXPECT_THROW((void)read_grid(ss), GridFormatError);
    }
    {
        std::stringstream ss("# n=5\n1 2 3 4 5\n");
        EXPECT_THROW((void)read_grid(ss), GridFormatError);
    }
    {
        std::stringstream ss("1 2 3 4 x\n1 2 3 4 5\n1 2 3 4 5\n1 2 3 4 5\n1 2 3 4 5\n");
        EXPECT_THROW((void)read_grid(ss), GridFormatError);
    }
    std::vector<double> v(25, 0.0);
    v[7] = std::nan("");
    EXPECT_THROW((void)load_grid(v, 5), GridFormatError);
    EXPECT_THROW((void)load_grid(std::vector<double>(9, 0.0), 3), GridFormatError);
    EXPECT_THROW((void)read_grid_file("/nonexistent/grid.txt"), GridFormatError);
}

TEST(Grid, FileRoundTrip)
{
    const auto path = std::filesystem::temp_directory_path() / "hspline_grid_roundtrip.txt";
    {
        std::ofstream out(path);
        write_grid(out, sample_grid(*registry_get("quartic"), 21), 21);
    }
    const FieldPtr g = read_grid_file(path);
    EXPECT_NEAR(g->value({0.5, 0.5}), 0.125, 1e-4);
    std::filesystem::remove(path);
}
