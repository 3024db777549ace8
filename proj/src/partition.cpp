#include "hspline/partition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <string>

#include "hspline/errors.hpp"

namespace hspline {

namespace {

// Relative distance below which n_tilde is treated as an exact integer.
constexpr double kIntegralSnap = 1e-12;

long long isqrt(long long n)
{
    auto r = static_cast<long long>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) {
        --r;
    }
    while ((r + 1) * (r + 1) <= n) {
        ++r;
    }
    return r;
}

// Coordinate of the i-th grid line of an m-grid on [0,1].
double grid_line(int i, int m)
{
    return i == m ? 1.0 : static_cast<double>(i) / m;
}

void validate_p(double p, const char* where)
{
    if (!(p >= 1.0) || !std::isfinite(p)) {
        throw InvalidArgument(std::string(where) + ": p must be a finite value >= 1");
    }
}

// Mesh line positions inside a block: bx + i·a for i <= n_side, then the
// block end. Shared by mesh_block and locate so both agree bit for bit.
struct BlockMesh {
    double origin;
    double end;
    double side;
    int n_side;
    bool integral;

    [[nodiscard]] int divisions() const { return integral ? n_side : n_side + 1; }
    [[nodiscard]] double line(int i) const
    {
        if (i >= divisions()) {
            return end;
        }
        return origin + i * side;
    }
};

BlockMesh mesh_x(const Block& b)
{
    return {b.rect.x0, b.rect.x1(), b.rect.w / b.n_tilde, b.n_side, b.integral};
}

BlockMesh mesh_y(const Block& b)
{
    return {b.rect.y0, b.rect.y1(), b.rect.h / b.n_tilde, b.n_side, b.integral};
}

// Index of the half-open interval [line(i), line(i+1)) holding v; the last
// interval is closed.
int find_division(const BlockMesh& mesh, double v)
{
    const int d = mesh.divisions();
    int i = std::clamp(static_cast<int>(std::floor((v - mesh.origin) / mesh.side)), 0, d - 1);
    while (i > 0 && v < mesh.line(i)) {
        --i;
    }
    while (i < d - 1 && v >= mesh.line(i + 1)) {
        ++i;
    }
    return i;
}

} // namespace

std::size_t Partition::rectangle_count() const
{
    return static_cast<std::size_t>(
        std::count_if(cells.begin(), cells.end(), [](const Cell& c) { return c.kind == CellKind::rectangle; }));
}

std::size_t Partition::locate(Point x) const
{
    if (!(x.x >= 0.0 && x.x <= 1.0 && x.y >= 0.0 && x.y <= 1.0)) {
        throw DomainError("Partition::locate: point outside the closed unit square");
    }
    auto block_index = [this](double v) {
        int i = std::clamp(static_cast<int>(std::floor(v * m)), 0, m - 1);
        while (i > 0 && v < grid_line(i, m)) {
            --i;
        }
        while (i < m - 1 && v >= grid_line(i + 1, m)) {
            ++i;
        }
        return i;
    };
    const int bi = block_index(x.x);
    const int bj = block_index(x.y);
    const Block& b = blocks[static_cast<std::size_t>(bj) * m + bi];

    const int col = find_division(mesh_x(b), x.x);
    const int row = find_division(mesh_y(b), x.y);
    const int n = b.n_side;
    std::size_t local = 0;
    if (col < n && row < n) {
        local = static_cast<std::size_t>(row) * n + col;
    } else if (col == n && row < n) {
        local = static_cast<std::size_t>(n) * n + row;
    } else if (row == n && col < n) {
        local = static_cast<std::size_t>(n) * n + n + col;
    } else {
        local = static_cast<std::size_t>(n) * n + 2 * n;
    }
    return b.first_cell + local;
}

int choose_m(long long n, double eps, const ScalarField& f)
{
    if (n < 1) {
        throw InvalidArgument("choose_m: N must be >= 1");
    }
    if (!(eps > 0.0 && eps < 1.0)) {
        throw InvalidArgument("choose_m: eps must lie in (0, 1)");
    }
    const ModulusEstimator omega(f);
    const auto cap = static_cast<int>(isqrt(n));
    const double threshold = eps / static_cast<double>(n);
    for (int m = 1; m < cap; ++m) {
        if (0.5 / (static_cast<double>(m) * m) * omega(1.0 / (2.0 * m)) <= threshold) {
            return m;
        }
    }
    return cap;
}

void allocate(std::span<Block> blocks, long long n, double p, double m_floor)
{
    validate_p(p, "allocate");
    if (!(m_floor > 0.0)) {
        throw InvalidArgument("allocate: m_floor must be positive");
    }
    if (blocks.empty()) {
        throw InvalidArgument("allocate: no blocks");
    }
    if (n < static_cast<long long>(blocks.size())) {
        throw BudgetError("allocate: budget N=" + std::to_string(n) + " is smaller than the " +
                          std::to_string(blocks.size()) + " intermediate blocks");
    }

    const double exponent = p / (p + 1.0);
    std::vector<double> weight(blocks.size());
    for (std::size_t l = 0; l < blocks.size(); ++l) {
        if (!(blocks[l].m_value >= 0.0)) {
            throw InvalidArgument("allocate: block weight M must be >= 0");
        }
        weight[l] = std::pow(std::max(blocks[l].m_value, m_floor), exponent);
    }

    // n_tilde² = N w / Σ w, holding any block whose share drops below one
    // square at exactly one and renormalising the remainder.
    std::vector<bool> held(blocks.size(), false);
    std::vector<double> share(blocks.size(), 1.0);
    for (;;) {
        double budget = static_cast<double>(n);
        double total = 0.0;
        for (std::size_t l = 0; l < blocks.size(); ++l) {
            if (held[l]) {
                budget -= 1.0;
            } else {
                total += weight[l];
            }
        }
        bool changed = false;
        for (std::size_t l = 0; l < blocks.size(); ++l) {
            if (held[l]) {
                continue;
            }
            share[l] = budget * weight[l] / total;
            if (share[l] < 1.0) {
                held[l] = true;
                share[l] = 1.0;
                changed = true;
            }
        }
        if (!changed) {
            break;
        }
    }

    for (std::size_t l = 0; l < blocks.size(); ++l) {
        Block& b = blocks[l];
        double nt = std::sqrt(share[l]);
        const double rounded = std::round(nt);
        b.integral = std::abs(nt - rounded) <= kIntegralSnap * nt;
        if (b.integral) {
            nt = rounded;
        }
        b.n_tilde = nt;
        b.n_side = std::max(1, static_cast<int>(std::floor(nt)));
    }
}

std::vector<Cell> mesh_block(const Block& block)
{
    const BlockMesh mx = mesh_x(block);
    const BlockMesh my = mesh_y(block);
    const int n = block.n_side;
    std::vector<Cell> cells;
    cells.reserve(block.integral ? static_cast<std::size_t>(n) * n
                                 : static_cast<std::size_t>(n + 1) * (n + 1));
    auto emit = [&](int col, int row, CellKind kind) {
        const double x0 = mx.line(col);
        const double y0 = my.line(row);
        cells.push_back({{x0, y0, mx.line(col + 1) - x0, my.line(row + 1) - y0}, kind, 0});
    };
    for (int row = 0; row < n; ++row) {
        for (int col = 0; col < n; ++col) {
            emit(col, row, CellKind::square);
        }
    }
    if (!block.integral) {
        for (int row = 0; row < n; ++row) {
            emit(n, row, CellKind::rectangle);
        }
        for (int col = 0; col < n; ++col) {
            emit(col, n, CellKind::rectangle);
        }
        emit(n, n, CellKind::rectangle);
    }
    return cells;
}

namespace {

Partition assemble(int m, std::vector<Block> blocks, double p, long long n)
{
    Partition part;
    part.m = m;
    part.p = p;
    part.n_target = n;
    for (std::size_t l = 0; l < blocks.size(); ++l) {
        Block& b = blocks[l];
        auto cells = mesh_block(b);
        b.first_cell = part.cells.size();
        b.cell_count = cells.size();
        for (Cell& c : cells) {
            c.block = static_cast<int>(l);
            part.cells.push_back(c);
        }
    }
    part.blocks = std::move(blocks);
    return part;
}

} // namespace

Partition build_partition(const ScalarField& f, long long n, double p, const PartitionOptions& opts)
{
    if (n < 1) {
        throw InvalidArgument("build_partition: N must be >= 1");
    }
    validate_p(p, "build_partition");
    int m = 0;
    if (opts.forced_m) {
        m = *opts.forced_m;
        if (m < 1) {
            throw InvalidArgument("build_partition: forced m must be >= 1");
        }
    } else {
        m = choose_m(n, opts.eps, f);
    }

    std::vector<Block> blocks(static_cast<std::size_t>(m) * m);
    double max_m = 0.0;
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
            Block& b = blocks[static_cast<std::size_t>(j) * m + i];
            const double x0 = grid_line(i, m);
            const double y0 = grid_line(j, m);
            b.rect = {x0, y0, grid_line(i + 1, m) - x0, grid_line(j + 1, m) - y0};
            b.center = b.rect.center();
            b.m_value = std::abs(f.laplacian(b.center));
            max_m = std::max(max_m, b.m_value);
        }
    }
    const double floor = opts.m_floor.value_or(max_m > 0.0 ? 1e-8 * max_m : 1e-12);
    allocate(blocks, n, p, floor);
    return assemble(m, std::move(blocks), p, n);
}

Partition uniform_partition(long long n)
{
    if (n < 1) {
        throw InvalidArgument("uniform_partition: N must be >= 1");
    }
    const long long side = isqrt(n);
    if (side * side != n) {
        throw InvalidArgument("uniform_partition: N=" + std::to_string(n) + " is not a perfect square");
    }
    Block b;
    b.rect = {0.0, 0.0, 1.0, 1.0};
    b.center = {0.5, 0.5};
    b.n_tilde = static_cast<double>(side);
    b.n_side = static_cast<int>(side);
    b.integral = true;
    return assemble(1, {b}, 1.0, n);
}

PartitionAudit audit(const Partition& part)
{
    PartitionAudit a;
    for (const Cell& c : part.cells) {
        a.area_sum += c.rect.area();
    }
    const double n = static_cast<double>(part.n_target);
    double upper_sum = 0.0;
    for (const Block& b : part.blocks) {
        a.budget_sum += b.n_tilde * b.n_tilde;
        const double ns = b.n_side;
        if (!((b.n_tilde - 1.0) * (b.n_tilde - 1.0) < ns * ns && ns * ns <= b.n_tilde * b.n_tilde)) {
            a.def_n_ok = false;
        }
        const std::size_t expected_rects = b.integral ? 0 : 2 * static_cast<std::size_t>(b.n_side) + 1;
        const auto cells = part.block_cells(static_cast<std::size_t>(&b - part.blocks.data()));
        const auto rects = static_cast<std::size_t>(std::count_if(
            cells.begin(), cells.end(), [](const Cell& c) { return c.kind == CellKind::rectangle; }));
        if (rects != expected_rects) {
            a.rectangle_count_ok = false;
        }
        upper_sum += (ns + 1.0) * (ns + 1.0);
    }
    a.cells_upper_sum = upper_sum;
    a.budget_rel_error = std::abs(a.budget_sum - n) / n;
    const double mm = part.m;
    const double lo = n - 2.0 * mm * std::sqrt(n);
    const double hi = n + 2.0 * mm * std::sqrt(n) + mm * mm;
    const double total = static_cast<double>(part.total_cells());
    a.sandwich_ok = lo <= upper_sum && upper_sum <= hi && lo <= total && total <= hi;
    return a;
}

void write_partition(std::ostream& out, const Partition& part)
{
    out << "# block tag x0 y0 w h\n";
    char buf[256];
    for (const Cell& c : part.cells) {
        std::snprintf(buf, sizeof buf, "%d %s %.17g %.17g %.17g %.17g\n", c.block,
                      c.kind == CellKind::square ? "square" : "rect", c.rect.x0, c.rect.y0, c.rect.w, c.rect.h);
        out << buf;
    }
}

} // namespace hspline
