#include "hspline/functions.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "hspline/errors.hpp"
#include "series_util.hpp"

namespace hspline {

namespace {

constexpr double kPi = std::numbers::pi;

class QuadraticField final : public ScalarField {
public:
    double value(Point p) const override { return p.x * p.x + p.y * p.y; }
    SecondPartials second_partials(Point) const override { return {2.0, 2.0, 0.0}; }
    double laplacian(Point) const override { return 4.0; }
    std::string_view name() const override { return "quadratic"; }
    bool known_asymptotic_constant() const override { return true; }
};

class HarmonicField final : public ScalarField {
public:
    double value(Point p) const override { return p.x * p.x - p.y * p.y; }
    SecondPartials second_partials(Point) const override { return {2.0, -2.0, 0.0}; }
    double laplacian(Point) const override { return 0.0; }
    std::string_view name() const override { return "harmonic"; }
    bool known_asymptotic_constant() const override { return true; }
};

class QuarticField final : public ScalarField {
public:
    double value(Point p) const override
    {
        const double x2 = p.x * p.x;
        const double y2 = p.y * p.y;
        return x2 * x2 + y2 * y2;
    }
    SecondPartials second_partials(Point p) const override
    {
        return {12.0 * p.x * p.x, 12.0 * p.y * p.y, 0.0};
    }
    std::string_view name() const override { return "quartic"; }
};

class BumpField final : public ScalarField {
public:
    double value(Point p) const override
    {
        const double dx = p.x - 0.5;
        const double dy = p.y - 0.5;
        return std::exp(-8.0 * (dx * dx + dy * dy));
    }
    SecondPartials second_partials(Point p) const override
    {
        const double dx = p.x - 0.5;
        const double dy = p.y - 0.5;
        const double f = std::exp(-8.0 * (dx * dx + dy * dy));
        return {f * (256.0 * dx * dx - 16.0), f * (256.0 * dy * dy - 16.0), f * 256.0 * dx * dy};
    }
    std::string_view name() const override { return "bump"; }
};

// Example field with Δf = -1 on the unit square (a = b = 1):
//   f = (4/π) Σ_k [sinh(α_k(y-1)) + sinh(α_k) - sinh(α_k y)] sin(α_k x)
//                 / ((2k+1) α_k² sinh(α_k)),   α_k = (2k+1)π.
// The sinh(α_k) terms sum to x(1-x)/2 in closed form; the remaining
// harmonic part is truncated, so Δf = -1 holds term by term.
class KlimField final : public ScalarField {
public:
    double value(Point p) const override
    {
        double h = 0.0;
        for (int k = 0; k < kKlimTerms; ++k) {
            const double alpha = (2 * k + 1) * kPi;
            h += coeff(k) * std::sin(alpha * p.x) * profile(alpha, p.y);
        }
        return 0.5 * p.x * (1.0 - p.x) - h;
    }

    SecondPartials second_partials(Point p) const override
    {
        double hxx = 0.0;
        double hxy = 0.0;
        for (int k = 0; k < kKlimTerms; ++k) {
            const double alpha = (2 * k + 1) * kPi;
            const double c = coeff(k);
            hxx -= c * alpha * alpha * std::sin(alpha * p.x) * profile(alpha, p.y);
            hxy += c * alpha * std::cos(alpha * p.x) * profile_dy(alpha, p.y);
        }
        // f = x(1-x)/2 - H, H_yy = -H_xx.
        return {-1.0 - hxx, hxx, -hxy};
    }

    double laplacian(Point) const override { return -1.0; }
    std::string_view name() const override { return "klim"; }
    bool known_asymptotic_constant() const override { return true; }

private:
    static double coeff(int k)
    {
        const double m = 2 * k + 1;
        return 4.0 / (m * m * m * kPi * kPi * kPi);
    }

    // [sinh(α(1-y)) + sinh(αy)] / sinh(α)
    static double profile(double alpha, double y)
    {
        return detail::sinh_ratio(alpha * (1.0 - y), alpha) + detail::sinh_ratio(alpha * y, alpha);
    }

    // d/dy of profile: α [cosh(αy) - cosh(α(1-y))] / sinh(α)
    static double profile_dy(double alpha, double y)
    {
        auto cosh_over_sinh = [alpha](double a) {
            return std::exp(a - alpha) * (1.0 + std::exp(-2.0 * a)) / (-std::expm1(-2.0 * alpha));
        };
        return alpha * (cosh_over_sinh(alpha * y) - cosh_over_sinh(alpha * (1.0 - y)));
    }
};

// Keys cubic convolution weights (a = -1/2) for offsets -1, 0, 1, 2.
std::array<double, 4> keys_weights(double t)
{
    const double t2 = t * t;
    const double t3 = t2 * t;
    return {0.5 * (-t3 + 2.0 * t2 - t), 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0),
            0.5 * (-3.0 * t3 + 4.0 * t2 + t), 0.5 * (t3 - t2)};
}

class GriddedField final : public ScalarField {
public:
    GriddedField(std::vector<double> values, int n, std::string name)
        : n_(n), h_(1.0 / (n - 1)), values_(std::move(values)), name_(std::move(name))
    {
        build_partials();
    }

    double value(Point p) const override { return interpolate(values_, p); }

    SecondPartials second_partials(Point p) const override
    {
        return {interpolate(fxx_, p), interpolate(fyy_, p), interpolate(fxy_, p)};
    }

    std::string_view name() const override { return name_; }
    bool exact_derivatives() const override { return false; }

private:
    double at(const std::vector<double>& g, int i, int j) const
    {
        return g[static_cast<std::size_t>(i) * n_ + j];
    }

    // Sample with one ghost layer from quadratic extrapolation.
    double ghosted(const std::vector<double>& g, int i, int j) const
    {
        if (j < 0) {
            return 3.0 * ghosted(g, i, 0) - 3.0 * ghosted(g, i, 1) + ghosted(g, i, 2);
        }
        if (j >= n_) {
            return 3.0 * ghosted(g, i, n_ - 1) - 3.0 * ghosted(g, i, n_ - 2) + ghosted(g, i, n_ - 3);
        }
        if (i < 0) {
            return 3.0 * at(g, 0, j) - 3.0 * at(g, 1, j) + at(g, 2, j);
        }
        if (i >= n_) {
            return 3.0 * at(g, n_ - 1, j) - 3.0 * at(g, n_ - 2, j) + at(g, n_ - 3, j);
        }
        return at(g, i, j);
    }

    double interpolate(const std::vector<double>& g, Point p) const
    {
        const double u = std::clamp(p.x, 0.0, 1.0) * (n_ - 1);
        const double v = std::clamp(p.y, 0.0, 1.0) * (n_ - 1);
        const int j0 = std::clamp(static_cast<int>(std::floor(u)), 0, n_ - 2);
        const int i0 = std::clamp(static_cast<int>(std::floor(v)), 0, n_ - 2);
        const auto wx = keys_weights(u - j0);
        const auto wy = keys_weights(v - i0);
        double acc = 0.0;
        for (int di = 0; di < 4; ++di) {
            double row = 0.0;
            for (int dj = 0; dj < 4; ++dj) {
                row += wx[dj] * ghosted(g, i0 - 1 + di, j0 - 1 + dj);
            }
            acc += wy[di] * row;
        }
        return acc;
    }

    // Second difference along a line of n samples with stride.
    double d2(const double* base, int idx, int stride) const
    {
        auto s = [&](int k) { return base[static_cast<std::ptrdiff_t>(k) * stride]; };
        if (idx == 0) {
            return (2.0 * s(0) - 5.0 * s(1) + 4.0 * s(2) - s(3)) / (h_ * h_);
        }
        if (idx == n_ - 1) {
            const int e = n_ - 1;
            return (2.0 * s(e) - 5.0 * s(e - 1) + 4.0 * s(e - 2) - s(e - 3)) / (h_ * h_);
        }
        return (s(idx - 1) - 2.0 * s(idx) + s(idx + 1)) / (h_ * h_);
    }

    double d1(const double* base, int idx, int stride) const
    {
        auto s = [&](int k) { return base[static_cast<std::ptrdiff_t>(k) * stride]; };
        if (idx == 0) {
            return (-3.0 * s(0) + 4.0 * s(1) - s(2)) / (2.0 * h_);
        }
        if (idx == n_ - 1) {
            const int e = n_ - 1;
            return (3.0 * s(e) - 4.0 * s(e - 1) + s(e - 2)) / (2.0 * h_);
        }
        return (s(idx + 1) - s(idx - 1)) / (2.0 * h_);
    }

    void build_partials()
    {
        const std::size_t total = values_.size();
        fxx_.resize(total);
        fyy_.resize(total);
        fxy_.resize(total);
        std::vector<double> dy(total);
        for (int i = 0; i < n_; ++i) {
            for (int j = 0; j < n_; ++j) {
                const std::size_t k = static_cast<std::size_t>(i) * n_ + j;
                fxx_[k] = d2(&values_[static_cast<std::size_t>(i) * n_], j, 1);
                fyy_[k] = d2(&values_[j], i, n_);
                dy[k] = d1(&values_[j], i, n_);
            }
        }
        for (int i = 0; i < n_; ++i) {
            for (int j = 0; j < n_; ++j) {
                fxy_[static_cast<std::size_t>(i) * n_ + j] = d1(&dy[static_cast<std::size_t>(i) * n_], j, 1);
            }
        }
    }

    int n_;
    double h_;
    std::vector<double> values_;
    std::vector<double> fxx_;
    std::vector<double> fyy_;
    std::vector<double> fxy_;
    std::string name_;
};

} // namespace

FieldPtr registry_get(std::string_view name)
{
    if (name == "quadratic") {
        return std::make_shared<QuadraticField>();
    }
    if (name == "harmonic") {
        return std::make_shared<HarmonicField>();
    }
    if (name == "klim") {
        return std::make_shared<KlimField>();
    }
    if (name == "quartic") {
        return std::make_shared<QuarticField>();
    }
    if (name == "bump") {
        return std::make_shared<BumpField>();
    }
    throw UnknownFieldError("unknown field '" + std::string(name) + "'");
}

std::vector<std::string> registry_names()
{
    return {"quadratic", "harmonic", "klim", "quartic", "bump"};
}

ModulusEstimator::ModulusEstimator(const ScalarField& f)
{
    constexpr double kStep = 1.0 / (kLattice - 1);
    std::array<std::vector<double>, 3> samples;
    for (auto& s : samples) {
        s.resize(kLattice * kLattice);
    }
    for (int i = 0; i < kLattice; ++i) {
        for (int j = 0; j < kLattice; ++j) {
            const SecondPartials d = f.second_partials({j * kStep, i * kStep});
            const std::size_t k = static_cast<std::size_t>(i) * kLattice + j;
            samples[0][k] = d.xx;
            samples[1][k] = d.yy;
            samples[2][k] = d.xy;
        }
    }

    constexpr std::array<std::array<int, 2>, 4> kDirections{{{1, 0}, {0, 1}, {1, 1}, {1, -1}}};
    by_reach_.assign(kLattice, 0.0);
    for (int a = 1; a < kLattice; ++a) {
        double best = by_reach_[a - 1];
        for (const auto& g : samples) {
            for (const auto& dir : kDirections) {
                const int di = dir[1] * a;
                const int dj = dir[0] * a;
                for (int i = std::max(0, -di); i < kLattice - std::max(0, di); ++i) {
                    const double* row = &g[static_cast<std::size_t>(i) * kLattice];
                    const double* other = &g[static_cast<std::size_t>(i + di) * kLattice + dj];
                    for (int j = 0; j < kLattice - dj; ++j) {
                        best = std::max(best, std::abs(row[j] - other[j]));
                    }
                }
            }
        }
        by_reach_[a] = best;
    }
}

double ModulusEstimator::operator()(double delta) const
{
    if (!(delta > 0.0 && delta <= 1.0)) {
        throw InvalidArgument("modulus_estimate: delta must lie in (0, 1]");
    }
    constexpr double kStep = 1.0 / (kLattice - 1);
    const int reach = std::min(kLattice - 1, static_cast<int>(std::floor(delta / kStep + 1e-9)));
    return by_reach_[reach];
}

double modulus_estimate(const ScalarField& f, double delta)
{
    if (!(delta > 0.0 && delta <= 1.0)) {
        throw InvalidArgument("modulus_estimate: delta must lie in (0, 1]");
    }
    return ModulusEstimator(f)(delta);
}

FieldPtr load_grid(std::span<const double> values, int n, std::string name)
{
    if (n < 5) {
        throw GridFormatError("load_grid: need n >= 5, got " + std::to_string(n));
    }
    if (values.size() != static_cast<std::size_t>(n) * n) {
        throw GridFormatError("load_grid: expected " + std::to_string(n * n) + " values, got " +
                              std::to_string(values.size()));
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw GridFormatError("load_grid: non-finite sample");
        }
    }
    return std::make_shared<GriddedField>(std::vector<double>(values.begin(), values.end()), n,
                                          std::move(name));
}

FieldPtr read_grid(std::istream& in, std::string name)
{
    std::vector<std::vector<double>> rows;
    int declared = -1;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        const auto start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) {
            first = false;
            continue;
        }
        if (line[start] == '#') {
            const auto pos = line.find("n=");
            if (first && pos != std::string::npos) {
                try {
                    declared = std::stoi(line.substr(pos + 2));
                } catch (const std::exception&) {
                    throw GridFormatError("read_grid: malformed header '" + line + "'");
                }
            }
            first = false;
            continue;
        }
        first = false;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        std::vector<double> row;
        std::string tok;
        while (ls >> tok) {
            double v = 0.0;
            const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
                throw GridFormatError("read_grid: cannot parse '" + tok + "'");
            }
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    const int n = static_cast<int>(rows.size());
    if (declared >= 0 && declared != n) {
        throw GridFormatError("read_grid: header declares n=" + std::to_string(declared) + " but found " +
                              std::to_string(n) + " rows");
    }
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(n) * n);
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != n) {
            throw GridFormatError("read_grid: row length " + std::to_string(row.size()) +
                                  " does not match row count " + std::to_string(n));
        }
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return load_grid(flat, n, std::move(name));
}

FieldPtr read_grid_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw GridFormatError("cannot open grid file " + path.string());
    }
    return read_grid(in, path.stem().string());
}

void write_grid(std::ostream& out, std::span<const double> values, int n)
{
    out << "# n=" << n << '\n';
    char buf[32];
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const auto res = std::to_chars(buf, buf + sizeof buf, values[static_cast<std::size_t>(i) * n + j]);
            if (j > 0) {
                out << ' ';
            }
            out.write(buf, res.ptr - buf);
        }
        out << '\n';
    }
}

std::vector<double> sample_grid(const ScalarField& f, int n)
{
    std::vector<double> out(static_cast<std::size_t>(n) * n);
    const double h = 1.0 / (n - 1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            out[static_cast<std::size_t>(i) * n + j] = f.value({j * h, i * h});
        }
    }
    return out;
}

} // namespace hspline
