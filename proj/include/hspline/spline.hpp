#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hspline/harmonic_solver.hpp"
#include "hspline/parallel.hpp"
#include "hspline/partition.hpp"

namespace hspline {

/// Global harmonic spline: one Dirichlet solution per partition cell. The
/// spline is continuous because every cell reproduces f on its whole
/// boundary.
class SplineModel {
public:
    SplineModel(Partition partition, std::vector<HarmonicCellSolution> solutions, std::string field_name,
                SeriesTruncation trunc);

    [[nodiscard]] const Partition& partition() const { return partition_; }
    [[nodiscard]] const std::vector<HarmonicCellSolution>& solutions() const { return solutions_; }
    [[nodiscard]] const std::string& field_name() const { return field_name_; }
    [[nodiscard]] const SeriesTruncation& truncation() const { return trunc_; }

    /// Value at x using the cell picked by Partition::locate. Throws
    /// DomainError outside the closed unit square.
    [[nodiscard]] double evaluate(Point x) const;

private:
    Partition partition_;
    std::vector<HarmonicCellSolution> solutions_;
    std::string field_name_;
    SeriesTruncation trunc_;
};

/// Solves every cell of the partition with the trace of f. The parallel
/// policy distributes cells over worker_count() OpenMP threads.
[[nodiscard]] SplineModel fit(const ScalarField& f, Partition partition,
                              const SeriesTruncation& trunc = kCellTruncation,
                              Execution exec = Execution::parallel);

/// r x r lattice of spline values at (j/(r-1), i/(r-1)) in the grid text format.
void write_lattice(std::ostream& out, const SplineModel& model, int r);

} // namespace hspline
