#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "hspline/functions.hpp"
#include "hspline/geometry.hpp"

namespace hspline {

enum class CellKind { square, rectangle };

struct Cell {
    Rect rect;
    CellKind kind = CellKind::square;
    int block = 0;
};

/// One square of the intermediate m x m grid.
struct Block {
    Rect rect;
    /// Taylor point: the block center.
    Point center;
    /// |Δf(center)|.
    double m_value = 0.0;
    /// Real-valued cell budget: the block holds n_tilde² squares' worth of area.
    double n_tilde = 0.0;
    /// Full mesh squares per side; the block holds n_side² squares of side
    /// 1/(m·n_tilde) plus 2·n_side+1 boundary rectangles when n_tilde is not
    /// an integer.
    int n_side = 0;
    bool integral = false;
    /// Range of this block's cells in Partition::cells.
    std::size_t first_cell = 0;
    std::size_t cell_count = 0;
};

struct Partition {
    int m = 1;
    std::vector<Block> blocks;
    std::vector<Cell> cells;
    double p = 2.0;
    long long n_target = 0;

    [[nodiscard]] std::size_t total_cells() const { return cells.size(); }
    [[nodiscard]] std::size_t rectangle_count() const;
    [[nodiscard]] std::span<const Cell> block_cells(std::size_t l) const
    {
        return std::span<const Cell>(cells).subspan(blocks[l].first_cell, blocks[l].cell_count);
    }

    /// Index of the cell containing x under the half-open rule
    /// [x0, x0+w) x [y0, y0+h), closed on the top/right domain boundary.
    /// Throws DomainError outside the closed unit square.
    [[nodiscard]] std::size_t locate(Point x) const;
};

struct PartitionOptions {
    double eps = 0.1;
    /// Overrides choose_m when set.
    std::optional<int> forced_m;
    /// Lower clamp for block weights; defaults to 1e-8·max M, or 1e-12 when
    /// every M is zero.
    std::optional<double> m_floor;
};

/// Smallest m with (1/2)(1/m)² ω(1/(2m)) <= eps/N, ω from modulus_estimate,
/// capped so that m² <= N.
[[nodiscard]] int choose_m(long long n, double eps, const ScalarField& f);

/// Sets n_tilde, n_side and integral on every block from
///   n_tilde_l² = N w_l / Σ w_i,   w = max(M, m_floor)^{p/(p+1)},
/// so Σ n_tilde² = N. Blocks whose share would fall below one square are held
/// at n_tilde = 1 and the rest renormalised. Throws BudgetError if N is less
/// than the number of blocks.
void allocate(std::span<Block> blocks, long long n, double p, double m_floor);

/// Squares of side (block side)/n_tilde = 1/(m·n_tilde) anchored at the block's lower-left corner,
/// then the right strip (bottom to top), the top strip (left to right) and
/// the corner rectangle. The strips are empty when n_tilde is integral.
[[nodiscard]] std::vector<Cell> mesh_block(const Block& block);

/// Two-stage construction: intermediate m x m blocks with Taylor points at
/// their centers, budget allocation and block meshing.
[[nodiscard]] Partition build_partition(const ScalarField& f, long long n, double p,
                                        const PartitionOptions& opts = {});

/// √N x √N equal squares wrapped in a single block. Throws InvalidArgument
/// unless N is a perfect square.
[[nodiscard]] Partition uniform_partition(long long n);

/// Structural checks on a built partition.
struct PartitionAudit {
    double area_sum = 0.0;
    double budget_sum = 0.0;          // Σ n_tilde²
    double budget_rel_error = 0.0;    // |Σ n_tilde² - N| / N
    bool def_n_ok = true;             // (n_tilde - 1)² < n_side² <= n_tilde² per block
    bool sandwich_ok = true;          // N - 2m√N <= Σ(n_side+1)² <= N + 2m√N + m²
    bool rectangle_count_ok = true;   // 0 if integral, else 2 n_side + 1 per block
    double cells_upper_sum = 0.0;     // Σ (n_side+1)²
};

[[nodiscard]] PartitionAudit audit(const Partition& part);

/// One cell per line: block index, tag, x0, y0, w, h.
void write_partition(std::ostream& out, const Partition& part);

} // namespace hspline
