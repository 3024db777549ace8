// Batch runner for harmonic-spline convergence experiments.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hspline/error_metrics.hpp"
#include "hspline/errors.hpp"
#include "hspline/experiment.hpp"
#include "hspline/parallel.hpp"
#include "hspline/partition.hpp"
#include "hspline/spline.hpp"

namespace {

using namespace hspline;

// Raw flag storage; only flags given on the command line override the
// config file.
struct Flags {
    std::string config;
    std::string field;
    std::string grid_file;
    std::vector<double> p_list;
    std::vector<long long> n_list;
    double eps = 0.0;
    std::string forced_m;
    int max_mode = 0;
    double tail_tol = 0.0;
    int kernel_max_mode = 0;
    double kernel_tail_tol = 0.0;
    int quad_nodes = 0;
    int quad_lattice = 0;
    std::string output_dir;
    bool compare_uniform = false;
    bool serial = false;

    std::vector<std::pair<std::string, CLI::Option*>> opts;
};

void add_config_flags(CLI::App& app, Flags& f)
{
    auto add = [&](const std::string& name, auto& target, const std::string& help) {
        f.opts.emplace_back(name, app.add_option(name, target, help));
    };
    add("--config", f.config, "JSON config file; explicit flags override it");
    add("--field", f.field, "registry field: quadratic, harmonic, klim, quartic, bump");
    add("--grid-file", f.grid_file, "read the field from an n x n grid file");
    f.opts.emplace_back("--p", app.add_option("--p", f.p_list, "exponents p >= 1")->delimiter(','));
    f.opts.emplace_back("--N", app.add_option("--N", f.n_list, "budgets, strictly increasing")->delimiter(','));
    add("--eps", f.eps, "tolerance for the automatic choice of m");
    add("--forced-m", f.forced_m, "none | fixed:<m> | power:<gamma>");
    add("--max-mode", f.max_mode, "cell series modes");
    add("--tail-tol", f.tail_tol, "cell series tail tolerance");
    add("--kernel-max-mode", f.kernel_max_mode, "kernel / torsion series modes");
    add("--kernel-tail-tol", f.kernel_tail_tol, "kernel / torsion series tail tolerance");
    add("--quad-nodes", f.quad_nodes, "Gauss-Legendre nodes per cell axis");
    add("--quad-lattice", f.quad_lattice, "global quadrature lattice");
    add("--out", f.output_dir, "output directory for reports and dumps");
    f.opts.emplace_back("--compare-uniform", app.add_flag("--compare-uniform", f.compare_uniform,
                                                          "add uniform baseline rows"));
    app.add_flag("--serial", f.serial, "use the serial reference kernels");
}

bool given(const Flags& f, const std::string& name)
{
    for (const auto& [n, opt] : f.opts) {
        if (n == name) {
            return opt->count() > 0;
        }
    }
    return false;
}

ExperimentConfig build_config(const Flags& f)
{
    ExperimentConfig cfg = f.config.empty() ? ExperimentConfig{} : read_config_file(f.config);
    if (given(f, "--field")) {
        cfg.field = f.field;
        cfg.grid_file.clear();
    }
    if (given(f, "--grid-file")) {
        cfg.grid_file = f.grid_file;
    }
    if (given(f, "--p")) {
        cfg.p_list = f.p_list;
    }
    if (given(f, "--N")) {
        cfg.n_list = f.n_list;
    }
    if (given(f, "--eps")) {
        cfg.eps = f.eps;
    }
    if (given(f, "--forced-m")) {
        cfg.forced_m = ForcedMRule::parse(f.forced_m);
    }
    if (given(f, "--max-mode")) {
        cfg.trunc.max_mode = f.max_mode;
    }
    if (given(f, "--tail-tol")) {
        cfg.trunc.tail_tol = f.tail_tol;
    }
    if (given(f, "--kernel-max-mode")) {
        cfg.kernel_trunc.max_mode = f.kernel_max_mode;
    }
    if (given(f, "--kernel-tail-tol")) {
        cfg.kernel_trunc.tail_tol = f.kernel_tail_tol;
    }
    if (given(f, "--quad-nodes")) {
        cfg.quad.nodes_per_cell_axis = f.quad_nodes;
    }
    if (given(f, "--quad-lattice")) {
        cfg.quad.global_lattice = f.quad_lattice;
    }
    if (given(f, "--out")) {
        cfg.output_dir = f.output_dir;
    }
    if (given(f, "--compare-uniform")) {
        cfg.compare_uniform = f.compare_uniform;
    }
    cfg.validate();
    return cfg;
}

Execution exec_of(const Flags& f)
{
    return f.serial ? Execution::serial : Execution::parallel;
}

void print_table(const ConvergenceReport& report)
{
    std::printf("%-9s %4s %10s %10s %4s %6s %14s %14s %14s %10s\n", "kind", "p", "N", "cells", "m", "rects",
                "error", "N*error", "constant", "ratio");
    for (const ReportRow& r : report.rows) {
        char ratio[32];
        if (r.exact) {
            std::snprintf(ratio, sizeof ratio, "exact");
        } else {
            std::snprintf(ratio, sizeof ratio, "%.6f", r.ratio);
        }
        std::printf("%-9s %4g %10lld %10zu %4d %6zu %14.6e %14.6e %14.6e %10s\n", r.kind.c_str(), r.p, r.n_target,
                    r.total_cells, r.m, r.rectangle_count, r.error, r.n_error, r.constant, ratio);
    }
}

// Single (p, N) partition from the config's first entries.
Partition single_partition(const ExperimentConfig& cfg, const ScalarField& f, bool uniform)
{
    const long long n = cfg.n_list.back();
    if (uniform) {
        return uniform_partition(n);
    }
    PartitionOptions opts;
    opts.eps = cfg.eps;
    opts.forced_m = cfg.forced_m.resolve(n);
    return build_partition(f, n, cfg.p_list.front(), opts);
}

// Writes to the named file, or stdout when the name is empty or "-".
template <class Fn>
void with_output(const std::string& path, Fn&& fn)
{
    if (path.empty() || path == "-") {
        fn(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot open " + path + " for writing");
    }
    fn(out);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Harmonic-spline approximation experiments"};
    app.require_subcommand(1);

    Flags conv_flags;
    auto* converge = app.add_subcommand("converge", "sweep N and report N*error against the limit constant");
    add_config_flags(*converge, conv_flags);

    Flags cmp_flags;
    auto* compare = app.add_subcommand("compare", "paired adaptive and uniform rows; N must be perfect squares");
    add_config_flags(*compare, cmp_flags);

    Flags part_flags;
    bool part_uniform = false;
    std::string part_file;
    auto* dump_part = app.add_subcommand("dump-partition", "write the cells of one partition (largest N, first p)");
    add_config_flags(*dump_part, part_flags);
    dump_part->add_flag("--uniform", part_uniform, "uniform partition instead of the adaptive one");
    dump_part->add_option("-o,--output", part_file, "output file (default stdout)");

    Flags spline_flags;
    bool spline_uniform = false;
    int resolution = 101;
    std::string spline_file;
    auto* dump_spline = app.add_subcommand("dump-spline", "write the fitted spline on an r x r lattice");
    add_config_flags(*dump_spline, spline_flags);
    dump_spline->add_flag("--uniform", spline_uniform, "uniform partition instead of the adaptive one");
    dump_spline->add_option("-r,--resolution", resolution, "lattice points per side")->check(CLI::Range(2, 100000));
    dump_spline->add_option("-o,--output", spline_file, "output file (default stdout)");

    std::vector<double> const_p{1.0, 2.0};
    std::string const_field;
    int const_modes = kKernelTruncation.max_mode;
    double const_tol = kKernelTruncation.tail_tol;
    QuadratureSpec const_quad;
    auto* constants = app.add_subcommand("constants", "print the torsion-function norm table");
    constants->add_option("--p", const_p, "exponents p >= 1")->delimiter(',');
    constants->add_option("--field", const_field, "also print the limit constant of this field");
    constants->add_option("--kernel-max-mode", const_modes, "series modes");
    constants->add_option("--kernel-tail-tol", const_tol, "series tail tolerance");
    constants->add_option("--quad-nodes", const_quad.nodes_per_cell_axis, "Gauss-Legendre nodes per panel");
    constants->add_option("--quad-lattice", const_quad.global_lattice, "panels per axis");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (converge->parsed() || compare->parsed()) {
            const Flags& fl = converge->parsed() ? conv_flags : cmp_flags;
            ExperimentConfig cfg = build_config(fl);
            const ConvergenceReport report =
                converge->parsed() ? run_convergence(cfg, exec_of(fl)) : run_compare(cfg, exec_of(fl));
            print_table(report);
            if (!cfg.output_dir.empty()) {
                std::fprintf(stderr, "report written to %s\n", cfg.output_dir.c_str());
            }
        } else if (dump_part->parsed()) {
            const ExperimentConfig cfg = build_config(part_flags);
            const FieldPtr f = resolve_field(cfg);
            const Partition part = single_partition(cfg, *f, part_uniform);
            with_output(part_file, [&](std::ostream& out) { write_partition(out, part); });
        } else if (dump_spline->parsed()) {
            const ExperimentConfig cfg = build_config(spline_flags);
            const FieldPtr f = resolve_field(cfg);
            const SplineModel model =
                fit(*f, single_partition(cfg, *f, spline_uniform), cfg.trunc, exec_of(spline_flags));
            with_output(spline_file, [&](std::ostream& out) { write_lattice(out, model, resolution); });
        } else if (constants->parsed()) {
            const SeriesTruncation trunc{const_modes, const_tol};
            trunc.validate();
            const_quad.validate();
            const FieldPtr f = const_field.empty() ? nullptr : registry_get(const_field);
            std::printf("%6s %22s", "p", "torsion_norm");
            if (f) {
                std::printf(" %22s %22s", "laplacian_quasinorm", "constant");
            }
            std::printf("\n");
            for (double p : const_p) {
                if (!(p >= 1.0)) {
                    throw InvalidArgument("constants: p must be >= 1");
                }
                std::printf("%6g %22.16g", p, cached_torsion_norm(p, trunc, const_quad));
                if (f) {
                    std::printf(" %22.16g %22.16g", laplacian_quasinorm(*f, p, const_quad),
                                asymptotic_constant(*f, p, trunc, const_quad));
                }
                std::printf("\n");
            }
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "hspline: error: %s\n", e.what());
        return 2;
    }
    return 0;
}
