#include "hspline/spline.hpp"

#include <optional>
#include <ostream>

#include "hspline/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hspline {

SplineModel::SplineModel(Partition partition, std::vector<HarmonicCellSolution> solutions,
                         std::string field_name, SeriesTruncation trunc)
    : partition_(std::move(partition)), solutions_(std::move(solutions)), field_name_(std::move(field_name)),
      trunc_(trunc)
{
    if (solutions_.size() != partition_.cells.size()) {
        throw InvalidArgument("SplineModel: one solution per cell required");
    }
}

double SplineModel::evaluate(Point x) const
{
    return solutions_[partition_.locate(x)].eval(x);
}

SplineModel fit(const ScalarField& f, Partition partition, const SeriesTruncation& trunc, Execution exec)
{
    trunc.validate();
    const auto n = static_cast<std::ptrdiff_t>(partition.cells.size());
    std::vector<std::optional<HarmonicCellSolution>> solved(partition.cells.size());

    if (exec == Execution::serial) {
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            solved[i] = solve_cell(f, partition.cells[i].rect, trunc);
        }
    } else {
        std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 64) num_threads(worker_count())
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            try {
                solved[i] = solve_cell(f, partition.cells[i].rect, trunc);
            } catch (...) {
#pragma omp critical(hspline_fit_failure)
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
        if (failure) {
            std::rethrow_exception(failure);
        }
    }

    std::vector<HarmonicCellSolution> solutions;
    solutions.reserve(solved.size());
    for (auto& s : solved) {
        solutions.push_back(std::move(*s));
    }
    return SplineModel(std::move(partition), std::move(solutions), std::string(f.name()), trunc);
}

void write_lattice(std::ostream& out, const SplineModel& model, int r)
{
    if (r < 2) {
        throw InvalidArgument("write_lattice: resolution must be >= 2");
    }
    std::vector<double> values(static_cast<std::size_t>(r) * r);
    auto coord = [r](int i) { return i == r - 1 ? 1.0 : static_cast<double>(i) / (r - 1); };
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < r; ++j) {
            values[static_cast<std::size_t>(i) * r + j] = model.evaluate({coord(j), coord(i)});
        }
    }
    write_grid(out, values, r);
}

} // namespace hspline
