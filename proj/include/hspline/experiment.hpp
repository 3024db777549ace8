#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hspline/functions.hpp"
#include "hspline/geometry.hpp"
#include "hspline/parallel.hpp"
#include "hspline/partition.hpp"
#include "hspline/quadrature.hpp"

namespace hspline {

/// How the intermediate block count m is chosen per budget N.
struct ForcedMRule {
    enum class Kind { none, fixed, power };
    Kind kind = Kind::power;
    int fixed = 1;
    double gamma = 0.25;

    /// m for budget N, or nullopt when choose_m should decide.
    [[nodiscard]] std::optional<int> resolve(long long n) const;
    /// "none", "fixed:<m>" or "power:<gamma>".
    [[nodiscard]] std::string to_string() const;
    [[nodiscard]] static ForcedMRule parse(std::string_view text);
};

struct ExperimentConfig {
    std::string field = "quartic";
    /// When set, the field is read from this grid file instead.
    std::string grid_file;
    std::vector<double> p_list{1.0, 2.0};
    std::vector<long long> n_list{256, 1024, 4096};
    double eps = 0.1;
    ForcedMRule forced_m;
    SeriesTruncation trunc = kCellTruncation;
    SeriesTruncation kernel_trunc = kKernelTruncation;
    QuadratureSpec quad;
    std::string output_dir;
    bool compare_uniform = false;

    /// Throws ConfigError on any violated constraint.
    void validate() const;
};

[[nodiscard]] std::string config_to_json(const ExperimentConfig& cfg);
/// Keys mirror the struct fields; missing keys keep their defaults.
[[nodiscard]] ExperimentConfig config_from_json(std::string_view text);
[[nodiscard]] ExperimentConfig read_config_file(const std::filesystem::path& path);

struct ReportRow {
    std::string kind; // "adaptive" or "uniform"
    double p = 0.0;
    long long n_target = 0;
    std::size_t total_cells = 0;
    int m = 0;
    std::size_t rectangle_count = 0;
    double error = 0.0;
    double n_error = 0.0;
    double constant = 0.0;
    /// N·error / constant; meaningless when exact is set.
    double ratio = 0.0;
    /// Zero constant and error <= kExactThreshold: reported as "exact".
    bool exact = false;
};

inline constexpr double kExactThreshold = 1e-8;

struct ConvergenceReport {
    std::string field;
    std::vector<ReportRow> rows;
    ExperimentConfig config;
    std::string config_hash;
    /// ‖I‖_p used for each p in the config, in p_list order.
    std::vector<double> torsion_norms;
};

[[nodiscard]] FieldPtr resolve_field(const ExperimentConfig& cfg);

/// For every (p, N): build_partition, fit, lp_error, one row. Adds a
/// uniform baseline row per (p, N) when compare_uniform is set. Writes the
/// report and partition dumps when output_dir is non-empty.
[[nodiscard]] ConvergenceReport run_convergence(const ExperimentConfig& cfg,
                                                Execution exec = Execution::parallel);

/// run_convergence with compare_uniform forced on; every N must be a
/// perfect square.
[[nodiscard]] ConvergenceReport run_compare(const ExperimentConfig& cfg, Execution exec = Execution::parallel);

/// CSV body: one header line, then one line per row.
void write_report_csv(std::ostream& out, const ConvergenceReport& report);
/// JSON provenance: config, truncation, quadrature, norms, hash, timestamp.
void write_provenance_json(std::ostream& out, const ConvergenceReport& report, bool with_timestamp = true);
/// Writes convergence.csv and provenance.json under dir.
void write_report_files(const std::filesystem::path& dir, const ConvergenceReport& report);

} // namespace hspline
