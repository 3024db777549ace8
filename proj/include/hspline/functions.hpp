#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hspline/geometry.hpp"

namespace hspline {

struct SecondPartials {
    double xx = 0.0;
    double yy = 0.0;
    double xy = 0.0;
};

/// A C² field on the closed unit square with second-derivative access.
class ScalarField {
public:
    virtual ~ScalarField() = default;

    [[nodiscard]] virtual double value(Point p) const = 0;
    [[nodiscard]] virtual SecondPartials second_partials(Point p) const = 0;
    [[nodiscard]] virtual double laplacian(Point p) const
    {
        const SecondPartials d = second_partials(p);
        return d.xx + d.yy;
    }

    [[nodiscard]] virtual std::string_view name() const = 0;
    /// True when derivatives are analytic rather than stencil estimates.
    [[nodiscard]] virtual bool exact_derivatives() const { return true; }
    /// True when ‖Δf‖_{p/(p+1)} has a closed form (constant |Δf|).
    [[nodiscard]] virtual bool known_asymptotic_constant() const { return false; }
};

using FieldPtr = std::shared_ptr<const ScalarField>;

/// Registered analytic fields: quadratic, harmonic, klim, quartic, bump.
/// Throws UnknownFieldError for any other name.
[[nodiscard]] FieldPtr registry_get(std::string_view name);
[[nodiscard]] std::vector<std::string> registry_names();

/// Terms kept in the klim harmonic series.
inline constexpr int kKlimTerms = 200;

/// Sampled lower-bound estimate of ω(δ) = max over f_xx, f_yy, f_xy of the
/// modulus of continuity with box displacement |Δx|, |Δy| <= δ.
///
/// Samples a 101x101 lattice once and compares pairs displaced by (a,0),
/// (0,a), (a,a), (a,-a) for 1 <= a <= floor(δ/h); the pair sets are nested
/// in δ, so the estimate is nondecreasing.
class ModulusEstimator {
public:
    static constexpr int kLattice = 101;

    explicit ModulusEstimator(const ScalarField& f);

    /// Throws InvalidArgument unless 0 < δ <= 1.
    [[nodiscard]] double operator()(double delta) const;

private:
    // Running maximum over displacements 1..a, indexed by a.
    std::vector<double> by_reach_;
};

[[nodiscard]] double modulus_estimate(const ScalarField& f, double delta);

/// Field backed by n x n uniform samples at nodes (j/(n-1), i/(n-1)),
/// row i, column j. Values use Keys cubic convolution (quadratic boundary
/// extrapolation); second partials are central/one-sided node stencils
/// interpolated the same way.
[[nodiscard]] FieldPtr load_grid(std::span<const double> values, int n, std::string name = "grid");

/// Parses the grid text format: n rows of n reals separated by whitespace
/// or commas, optional first line `# n=<int>`.
[[nodiscard]] FieldPtr read_grid(std::istream& in, std::string name = "grid");
[[nodiscard]] FieldPtr read_grid_file(const std::filesystem::path& path);

/// Writes values (row-major, n x n) in the grid text format.
void write_grid(std::ostream& out, std::span<const double> values, int n);

/// Samples f on the n x n grid used by load_grid.
[[nodiscard]] std::vector<double> sample_grid(const ScalarField& f, int n);

} // namespace hspline
