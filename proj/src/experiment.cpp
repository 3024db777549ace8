#include "hspline/experiment.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "hspline/error_metrics.hpp"
#include "hspline/errors.hpp"
#include "hspline/spline.hpp"

namespace hspline {

using nlohmann::json;

namespace {

std::string fnv1a_hex(std::string_view text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string fmt(double v)
{
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, end);
}

bool perfect_square(long long n)
{
    auto r = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(n))));
    return r * r == n;
}

json config_json(const ExperimentConfig& cfg, bool with_output)
{
    json j;
    j["field"] = cfg.field;
    j["grid_file"] = cfg.grid_file;
    j["p_list"] = cfg.p_list;
    j["n_list"] = cfg.n_list;
    j["eps"] = cfg.eps;
    j["forced_m"] = cfg.forced_m.to_string();
    j["trunc"] = {{"max_mode", cfg.trunc.max_mode}, {"tail_tol", cfg.trunc.tail_tol}};
    j["kernel_trunc"] = {{"max_mode", cfg.kernel_trunc.max_mode}, {"tail_tol", cfg.kernel_trunc.tail_tol}};
    j["quad"] = {{"nodes_per_cell_axis", cfg.quad.nodes_per_cell_axis},
                 {"global_lattice", cfg.quad.global_lattice}};
    j["compare_uniform"] = cfg.compare_uniform;
    if (with_output) {
        j["output_dir"] = cfg.output_dir;
    }
    return j;
}

SeriesTruncation trunc_from(const json& j, SeriesTruncation t)
{
    if (j.contains("max_mode")) {
        t.max_mode = j.at("max_mode").get<int>();
    }
    if (j.contains("tail_tol")) {
        t.tail_tol = j.at("tail_tol").get<double>();
    }
    return t;
}

std::string partition_dump_name(const std::string& kind, double p, long long n)
{
    return "partition_" + kind + "_p" + fmt(p) + "_N" + std::to_string(n) + ".txt";
}

} // namespace

std::optional<int> ForcedMRule::resolve(long long n) const
{
    switch (kind) {
    case Kind::none:
        return std::nullopt;
    case Kind::fixed:
        return fixed;
    case Kind::power: {
        // ceil(N^gamma), guarded against pow landing just above an integer.
        const double v = std::pow(static_cast<double>(n), gamma);
        auto m = static_cast<int>(std::ceil(v * (1.0 - 1e-12)));
        return std::max(1, m);
    }
    }
    return std::nullopt;
}

std::string ForcedMRule::to_string() const
{
    switch (kind) {
    case Kind::none:
        return "none";
    case Kind::fixed:
        return "fixed:" + std::to_string(fixed);
    case Kind::power:
        return "power:" + fmt(gamma);
    }
    return "none";
}

ForcedMRule ForcedMRule::parse(std::string_view text)
{
    ForcedMRule r;
    if (text == "none") {
        r.kind = Kind::none;
        return r;
    }
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw ConfigError("forced_m: expected none, fixed:<m> or power:<gamma>, got '" + std::string(text) + "'");
    }
    const auto head = text.substr(0, colon);
    const auto tail = text.substr(colon + 1);
    const char* first = tail.data();
    const char* last = tail.data() + tail.size();
    if (head == "fixed") {
        r.kind = Kind::fixed;
        auto [ptr, ec] = std::from_chars(first, last, r.fixed);
        if (ec != std::errc() || ptr != last) {
            throw ConfigError("forced_m: bad integer in '" + std::string(text) + "'");
        }
    } else if (head == "power") {
        r.kind = Kind::power;
        auto [ptr, ec] = std::from_chars(first, last, r.gamma);
        if (ec != std::errc() || ptr != last) {
            throw ConfigError("forced_m: bad exponent in '" + std::string(text) + "'");
        }
    } else {
        throw ConfigError("forced_m: unknown rule '" + std::string(head) + "'");
    }
    return r;
}

void ExperimentConfig::validate() const
{
    if (field.empty() && grid_file.empty()) {
        throw ConfigError("config: either field or grid_file must be set");
    }
    if (p_list.empty()) {
        throw ConfigError("config: p_list is empty");
    }
    for (double p : p_list) {
        if (!(p >= 1.0) || !std::isfinite(p)) {
            throw ConfigError("config: every p must be a finite value >= 1, got " + fmt(p));
        }
    }
    if (n_list.empty()) {
        throw ConfigError("config: n_list is empty");
    }
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] < 1) {
            throw ConfigError("config: every N must be >= 1");
        }
        if (i > 0 && n_list[i] <= n_list[i - 1]) {
            throw ConfigError("config: n_list must be strictly increasing");
        }
    }
    if (!(eps > 0.0 && eps < 1.0)) {
        throw ConfigError("config: eps must lie in (0, 1)");
    }
    if (forced_m.kind == ForcedMRule::Kind::fixed && forced_m.fixed < 1) {
        throw ConfigError("config: fixed m must be >= 1");
    }
    if (forced_m.kind == ForcedMRule::Kind::power && !(forced_m.gamma > 0.0 && forced_m.gamma < 0.5)) {
        throw ConfigError("config: gamma must lie in (0, 0.5)");
    }
    try {
        trunc.validate();
        kernel_trunc.validate();
        quad.validate();
    } catch (const Error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (compare_uniform) {
        for (long long n : n_list) {
            if (!perfect_square(n)) {
                throw ConfigError("config: N=" + std::to_string(n) + " is not a perfect square (uniform baseline)");
            }
        }
    }
}

std::string config_to_json(const ExperimentConfig& cfg)
{
    return config_json(cfg, true).dump(2);
}

ExperimentConfig config_from_json(std::string_view text)
{
    ExperimentConfig cfg;
    try {
        const json j = json::parse(text);
        if (!j.is_object()) {
            throw ConfigError("config: top level must be an object");
        }
        static const char* const known[] = {"field",        "grid_file", "p_list",     "n_list",
                                            "eps",          "forced_m",  "trunc",      "kernel_trunc",
                                            "quad",         "output_dir", "compare_uniform"};
        for (const auto& [key, value] : j.items()) {
            (void)value;
            bool ok = false;
            for (const char* k : known) {
                ok = ok || key == k;
            }
            if (!ok) {
                throw ConfigError("config: unknown key '" + key + "'");
            }
        }
        if (j.contains("field")) {
            cfg.field = j.at("field").get<std::string>();
        }
        if (j.contains("grid_file")) {
            cfg.grid_file = j.at("grid_file").get<std::string>();
        }
        if (j.contains("p_list")) {
            cfg.p_list = j.at("p_list").get<std::vector<double>>();
        }
        if (j.contains("n_list")) {
            cfg.n_list = j.at("n_list").get<std::vector<long long>>();
        }
        if (j.contains("eps")) {
            cfg.eps = j.at("eps").get<double>();
        }
        if (j.contains("forced_m")) {
            cfg.forced_m = ForcedMRule::parse(j.at("forced_m").get<std::string>());
        }
        if (j.contains("trunc")) {
            cfg.trunc = trunc_from(j.at("trunc"), cfg.trunc);
        }
        if (j.contains("kernel_trunc")) {
            cfg.kernel_trunc = trunc_from(j.at("kernel_trunc"), cfg.kernel_trunc);
        }
        if (j.contains("quad")) {
            const json& q = j.at("quad");
            if (q.contains("nodes_per_cell_axis")) {
                cfg.quad.nodes_per_cell_axis = q.at("nodes_per_cell_axis").get<int>();
            }
            if (q.contains("global_lattice")) {
                cfg.quad.global_lattice = q.at("global_lattice").get<int>();
            }
        }
        if (j.contains("output_dir")) {
            cfg.output_dir = j.at("output_dir").get<std::string>();
        }
        if (j.contains("compare_uniform")) {
            cfg.compare_uniform = j.at("compare_uniform").get<bool>();
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

ExperimentConfig read_config_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

FieldPtr resolve_field(const ExperimentConfig& cfg)
{
    if (!cfg.grid_file.empty()) {
        return read_grid_file(cfg.grid_file);
    }
    return registry_get(cfg.field);
}

namespace {

ReportRow make_row(const std::string& kind, double p, long long n, const Partition& part, double error,
                   double constant)
{
    ReportRow row;
    row.kind = kind;
    row.p = p;
    row.n_target = n;
    row.total_cells = part.total_cells();
    row.m = part.m;
    row.rectangle_count = part.rectangle_count();
    row.error = error;
    row.n_error = static_cast<double>(n) * error;
    row.constant = constant;
    if (constant == 0.0) {
        row.exact = error <= kExactThreshold;
        row.ratio = row.exact ? 0.0 : std::numeric_limits<double>::infinity();
    } else {
        row.ratio = row.n_error / constant;
    }
    return row;
}

void dump_partition(const std::filesystem::path& dir, const std::string& kind, double p, long long n,
                    const Partition& part)
{
    std::ofstream out(dir / partition_dump_name(kind, p, n));
    if (!out) {
        throw ConfigError("cannot write partition dump under " + dir.string());
    }
    write_partition(out, part);
}

} // namespace

ConvergenceReport run_convergence(const ExperimentConfig& cfg, Execution exec)
{
    cfg.validate();
    const FieldPtr f = resolve_field(cfg);

    ConvergenceReport report;
    report.field = cfg.grid_file.empty() ? cfg.field : f->name();
    report.config = cfg;
    report.config_hash = fnv1a_hex(config_json(cfg, false).dump());

    std::filesystem::path dir;
    if (!cfg.output_dir.empty()) {
        dir = cfg.output_dir;
        std::filesystem::create_directories(dir);
    }

    for (double p : cfg.p_list) {
        report.torsion_norms.push_back(cached_torsion_norm(p, cfg.kernel_trunc, cfg.quad));
        const double constant = asymptotic_constant(*f, p, cfg.kernel_trunc, cfg.quad);
        for (long long n : cfg.n_list) {
            PartitionOptions opts;
            opts.eps = cfg.eps;
            opts.forced_m = cfg.forced_m.resolve(n);
            Partition part = build_partition(*f, n, p, opts);
            if (!dir.empty()) {
                dump_partition(dir, "adaptive", p, n, part);
            }
            const SplineModel model = fit(*f, part, cfg.trunc, exec);
            const double err = lp_error(*f, model, p, cfg.quad, exec).total_p_norm;
            report.rows.push_back(make_row("adaptive", p, n, model.partition(), err, constant));

            if (cfg.compare_uniform) {
                Partition uni = uniform_partition(n);
                if (!dir.empty()) {
                    dump_partition(dir, "uniform", p, n, uni);
                }
                const SplineModel umodel = fit(*f, std::move(uni), cfg.trunc, exec);
                const double uerr = lp_error(*f, umodel, p, cfg.quad, exec).total_p_norm;
                report.rows.push_back(make_row("uniform", p, n, umodel.partition(), uerr, constant));
            }
        }
    }
    if (!dir.empty()) {
        write_report_files(dir, report);
    }
    return report;
}

ConvergenceReport run_compare(const ExperimentConfig& cfg, Execution exec)
{
    ExperimentConfig c = cfg;
    c.compare_uniform = true;
    return run_convergence(c, exec);
}

void write_report_csv(std::ostream& out, const ConvergenceReport& report)
{
    out << "kind,p,N_target,total_cells,m,rectangle_count,error,N_error,constant,ratio\n";
    for (const ReportRow& r : report.rows) {
        out << r.kind << ',' << fmt(r.p) << ',' << r.n_target << ',' << r.total_cells << ',' << r.m << ','
            << r.rectangle_count << ',' << fmt(r.error) << ',' << fmt(r.n_error) << ',' << fmt(r.constant) << ','
            << (r.exact ? std::string("exact") : fmt(r.ratio)) << '\n';
    }
}

void write_provenance_json(std::ostream& out, const ConvergenceReport& report, bool with_timestamp)
{
    json j;
    j["field"] = report.field;
    j["config"] = config_json(report.config, false);
    j["config_hash"] = report.config_hash;
    json norms = json::array();
    for (std::size_t i = 0; i < report.torsion_norms.size(); ++i) {
        norms.push_back({{"p", report.config.p_list[i]}, {"torsion_norm", report.torsion_norms[i]}});
    }
    j["torsion_norms"] = norms;
    j["exact_threshold"] = kExactThreshold;
    j["rows"] = report.rows.size();
    if (with_timestamp) {
        const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[32];
        std::tm tm{};
        gmtime_r(&now, &tm);
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        j["timestamp"] = buf;
    }
    out << j.dump(2) << '\n';
}

void write_report_files(const std::filesystem::path& dir, const ConvergenceReport& report)
{
    std::filesystem::create_directories(dir);
    std::ofstream csv(dir / "convergence.csv");
    std::ofstream prov(dir / "provenance.json");
    if (!csv || !prov) {
        throw ConfigError("cannot write report files under " + dir.string());
    }
    write_report_csv(csv, report);
    write_provenance_json(prov, report);
}

} // namespace hspline
