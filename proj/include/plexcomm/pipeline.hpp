#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "plexcomm/community.hpp"
#include "plexcomm/errors.hpp"
#include "plexcomm/ingest.hpp"
#include "plexcomm/io.hpp"
#include "plexcomm/multiplex.hpp"
#include "plexcomm/omega_search.hpp"
#include "plexcomm/partition_metrics.hpp"
#include "plexcomm/synth.hpp"

namespace plexcomm {

// One function per CLI subcommand. Every stage reads and writes files, so a
// run can be resumed, inspected, or re-detected at a manually chosen omega.

namespace detail {

inline std::string file_stem(const std::string& path) {
    std::string stem = std::filesystem::path(path).stem().string();
    // strip a trailing ".layer"/".partition" left by double extensions
    for (const char* suffix : {".layer", ".partition"}) {
        if (stem.size() > std::strlen(suffix) &&
            stem.compare(stem.size() - std::strlen(suffix), std::strlen(suffix), suffix) == 0) {
            stem.resize(stem.size() - std::strlen(suffix));
        }
    }
    return stem;
}

inline void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

// A source file is flow-form when its first non-empty line has 4 fields.
inline bool is_flow_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        return split_csv_line(line).size() == 4;
    }
    throw IoError("'" + path + "': empty file");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// ingest

struct IngestOptions {
    std::vector<std::string> sources;  // long-form or flow-form CSV, auto-detected
    std::string out_dir = ".";
    double significance_level = 0.05;
    int min_overlap = 10;
    bool drop_entity_policy = false;
    bool report_pairs = false;
};

struct IngestResult {
    std::vector<std::string> layer_files;
    std::string multiplex_file;
    std::vector<BuildReport> reports;
    AlignReport align;
};

inline IngestResult run_ingest(const IngestOptions& opt) {
    if (opt.sources.size() < 2) {
        throw ValidationError("ingest: need at least 2 sources");
    }
    detail::ensure_dir(opt.out_dir);

    CorrelationLayerSpec spec;
    spec.significance_level = opt.significance_level;
    spec.min_overlap = opt.min_overlap;
    spec.missing_policy = opt.drop_entity_policy
                              ? CorrelationLayerSpec::MissingPolicy::DropEntity
                              : CorrelationLayerSpec::MissingPolicy::PairwiseComplete;

    IngestResult result;
    std::vector<LayerNetwork> layers;
    for (const std::string& src : opt.sources) {
        const TimeSeriesTable table = detail::is_flow_csv(src)
                                          ? TimeSeriesTable::from_flow_csv_file(src)
                                          : TimeSeriesTable::from_csv_file(src);
        auto [layer, report] = build_layer(table, spec, detail::file_stem(src));
        layers.push_back(std::move(layer));
        result.reports.push_back(std::move(report));
    }

    auto [aligned, align_report] = align_entities(layers);
    result.align = std::move(align_report);

    const std::filesystem::path out(opt.out_dir);
    std::vector<std::string> rel_layer_paths;
    for (std::size_t k = 0; k < aligned.size(); ++k) {
        const std::string rel = aligned[k].name() + ".layer.json";
        const std::string path = (out / rel).string();
        save_layer_json(aligned[k], path);
        save_build_report_json(result.reports[k], opt.report_pairs,
                               (out / (aligned[k].name() + ".report.json")).string());
        result.layer_files.push_back(path);
        rel_layer_paths.push_back(rel);
    }
    save_align_report_json(result.align, (out / "align_report.json").string());
    result.multiplex_file = (out / "multiplex.json").string();
    save_multiplex_json(rel_layer_paths, 0.0, result.multiplex_file);
    return result;
}

// ---------------------------------------------------------------------------
// optimize

struct OptimizeOptions {
    std::string multiplex_file;
    std::string out_dir = ".";
    int grid_points = 101;
    double refine_tol = 1e-4;
    std::string normalization = "supra";  // supra | intra | none
};

struct OptimizeResult {
    OmegaSearchResult search;
    std::string omega_file;
    std::string curve_file;
};

inline OptimizeResult run_optimize(const OptimizeOptions& opt) {
    detail::ensure_dir(opt.out_dir);
    const MultiplexNetwork m = load_multiplex_json(opt.multiplex_file);
    OptimizeResult result;
    result.search = find_omega_star(m, opt.grid_points, opt.refine_tol,
                                    parse_normalization(opt.normalization));
    const std::filesystem::path out(opt.out_dir);
    result.omega_file = (out / "omega.json").string();
    result.curve_file = (out / "omega_curve.csv").string();
    save_omega_json(result.search, opt.grid_points, opt.refine_tol, result.omega_file);
    save_curve_csv(result.search.curve, result.curve_file);
    return result;
}

// ---------------------------------------------------------------------------
// detect

struct DetectOptions {
    std::string multiplex_file;
    std::string omega_spec = "from-optimize";  // float literal or "from-optimize"
    std::string omega_file;                    // defaults to <out_dir>/omega.json
    std::string out_dir = ".";
    std::vector<std::string> formats = {"json", "csv"};  // json, csv, dot, graphml
    std::string normalization = "supra";
};

struct DetectResult {
    double omega_used = 0.0;
    std::vector<Partition> partitions;
    std::vector<ThresholdSweep> sweeps;
    std::vector<std::string> partition_files;
};

inline double resolve_omega(const DetectOptions& opt) {
    if (opt.omega_spec == "from-optimize") {
        const std::string file = opt.omega_file.empty()
                                     ? (std::filesystem::path(opt.out_dir) / "omega.json").string()
                                     : opt.omega_file;
        return load_omega_star(file);
    }
    double omega = 0.0;
    if (!detail::parse_double(opt.omega_spec, omega)) {
        throw ValidationError("detect: --omega must be a number or 'from-optimize', got '" +
                              opt.omega_spec + "'");
    }
    return omega;
}

inline DetectResult run_detect(const DetectOptions& opt) {
    detail::ensure_dir(opt.out_dir);
    const MultiplexNetwork m = load_multiplex_json(opt.multiplex_file);
    DetectResult result;
    result.omega_used = resolve_omega(opt);

    const DistanceSummary d = distance_matrix(multiplex_communicability(
        m.with_omega(result.omega_used), parse_normalization(opt.normalization)));

    const auto wants = [&](const std::string& fmt) {
        return std::find(opt.formats.begin(), opt.formats.end(), fmt) != opt.formats.end();
    };

    const std::filesystem::path out(opt.out_dir);
    for (Eigen::Index a = 0; a < m.h(); ++a) {
        auto [partition, sweep] = detect_layer(d, m.layer(a).name(), a);
        const std::string base = (out / m.layer(a).name()).string();
        if (wants("json")) {
            save_partition_json(partition, m.labels(), result.omega_used,
                                base + ".partition.json");
            result.partition_files.push_back(base + ".partition.json");
        }
        if (wants("csv")) {
            save_partition_csv(partition, m.labels(), base + ".partition.csv");
        }
        save_sweep_csv(sweep, base + ".sweep.csv");
        if (wants("dot") || wants("graphml")) {
            const Eigen::MatrixXi graph = threshold_graph(d.layer_block(a), partition.threshold);
            if (wants("dot")) {
                save_dot(graph, m.labels(), partition.assignment, m.layer(a).name(),
                         base + ".dot");
            }
            if (wants("graphml")) {
                save_graphml(graph, m.labels(), partition.assignment, m.layer(a).name(),
                             base + ".graphml");
            }
        }
        result.partitions.push_back(std::move(partition));
        result.sweeps.push_back(std::move(sweep));
    }
    return result;
}

// ---------------------------------------------------------------------------
// compare

struct CompareOptions {
    std::vector<std::string> partition_files;
    std::string out_file;  // empty: caller prints the CSV
};

struct CompareResult {
    std::vector<std::string> names;
    Eigen::MatrixXd values;
    std::string csv;
};

inline CompareResult run_compare(const CompareOptions& opt) {
    if (opt.partition_files.size() < 2) {
        throw ValidationError("compare: need at least 2 partition files");
    }
    std::vector<LoadedPartition> parts;
    std::vector<std::string> names;
    for (const std::string& file : opt.partition_files) {
        parts.push_back(load_partition_json(file));
        names.push_back(detail::file_stem(file));
    }

    // All partitions must cover the same label set; nodes are aligned by the
    // sorted label order.
    std::vector<std::string> universe;
    for (const auto& community : parts.front().communities) {
        universe.insert(universe.end(), community.begin(), community.end());
    }
    std::sort(universe.begin(), universe.end());
    if (std::adjacent_find(universe.begin(), universe.end()) != universe.end()) {
        throw ValidationError("compare: '" + opt.partition_files.front() +
                              "' assigns a label twice");
    }

    std::vector<std::vector<int>> assignments;
    for (std::size_t k = 0; k < parts.size(); ++k) {
        std::map<std::string, int> membership;
        for (std::size_t c = 0; c < parts[k].communities.size(); ++c) {
            for (const std::string& label : parts[k].communities[c]) {
                if (!membership.emplace(label, static_cast<int>(c)).second) {
                    throw ValidationError("compare: '" + opt.partition_files[k] +
                                          "' assigns label '" + label + "' twice");
                }
            }
        }
        if (membership.size() != universe.size()) {
            throw ValidationError("compare: '" + opt.partition_files[k] +
                                  "' covers a different node set than '" +
                                  opt.partition_files.front() + "'");
        }
        std::vector<int> assignment;
        assignment.reserve(universe.size());
        for (const std::string& label : universe) {
            auto it = membership.find(label);
            if (it == membership.end()) {
                throw ValidationError("compare: '" + opt.partition_files[k] + "' misses label '" +
                                      label + "'");
            }
            assignment.push_back(it->second);
        }
        assignments.push_back(std::move(assignment));
    }

    CompareResult result;
    result.names = std::move(names);
    const Eigen::Index k = static_cast<Eigen::Index>(assignments.size());
    result.values = Eigen::MatrixXd::Ones(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = i + 1; j < k; ++j) {
            const double v = nmi(assignments[static_cast<std::size_t>(i)],
                                 assignments[static_cast<std::size_t>(j)]);
            result.values(i, j) = v;
            result.values(j, i) = v;
        }
    }
    result.csv = nmi_matrix_csv(result.names, result.values);
    if (!opt.out_file.empty()) {
        detail::write_text_file(opt.out_file, result.csv);
    }
    return result;
}

// ---------------------------------------------------------------------------
// export

struct ExportOptions {
    std::string multiplex_file;
    double omega = 0.0;
    std::string out_dir = ".";
    std::vector<std::string> what = {"g", "xi"};  // g, xi, supra
    std::string normalization = "supra";
};

inline std::vector<std::string> run_export(const ExportOptions& opt) {
    detail::ensure_dir(opt.out_dir);
    const MultiplexNetwork m = load_multiplex_json(opt.multiplex_file);
    const std::vector<std::string> headers = supra_headers(m);
    const std::filesystem::path out(opt.out_dir);
    std::vector<std::string> written;

    const auto wants = [&](const std::string& what) {
        return std::find(opt.what.begin(), opt.what.end(), what) != opt.what.end();
    };
    if (wants("supra")) {
        const SupraMatrix s = assemble_supra(m.with_omega(opt.omega));
        const std::string path = (out / "supra.csv").string();
        save_matrix_csv(s.entries, headers, path);
        written.push_back(path);
    }
    if (wants("g") || wants("xi")) {
        const CommunicabilityResult c = multiplex_communicability(
            m.with_omega(opt.omega), parse_normalization(opt.normalization));
        if (wants("g")) {
            const std::string path = (out / "g.csv").string();
            save_matrix_csv(c.g, headers, path);
            written.push_back(path);
        }
        if (wants("xi")) {
            const std::string path = (out / "xi.csv").string();
            save_matrix_csv(distance_matrix(c).xi, headers, path);
            written.push_back(path);
        }
    }
    return written;
}

// ---------------------------------------------------------------------------
// synth

struct SynthOptions {
    std::string kind = "planted";  // planted | timeseries
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    // planted
    PlantedSpec planted;
    // timeseries
    SeriesSpec series;
    int sources = 3;
};

struct SynthResult {
    std::vector<std::string> files;
    std::string multiplex_file;  // planted only
};

inline SynthResult run_synth(const SynthOptions& opt) {
    detail::ensure_dir(opt.out_dir);
    const std::filesystem::path out(opt.out_dir);
    SynthResult result;
    if (opt.kind == "planted") {
        const PlantedMultiplex planted = correlated_planted_multiplex(opt.planted, opt.seed);
        std::vector<std::string> rel;
        for (const LayerNetwork& layer : planted.multiplex.layers()) {
            const std::string name = layer.name() + ".layer.json";
            save_layer_json(layer, (out / name).string());
            rel.push_back(name);
            result.files.push_back((out / name).string());
        }
        result.multiplex_file = (out / "multiplex.json").string();
        save_multiplex_json(rel, planted.multiplex.omega(), result.multiplex_file);

        Partition truth;
        truth.layer = "truth";
        truth.assignment = planted.truth;
        truth.num_communities =
            *std::max_element(planted.truth.begin(), planted.truth.end()) + 1;
        save_partition_json(truth, planted.multiplex.labels(), planted.multiplex.omega(),
                            (out / "truth.partition.json").string());
        result.files.push_back((out / "truth.partition.json").string());
    } else if (opt.kind == "timeseries") {
        for (int s = 0; s < opt.sources; ++s) {
            const TimeSeriesTable table =
                synthetic_series_table(opt.series, opt.seed + static_cast<std::uint64_t>(s));
            const std::string path = (out / ("source" + std::to_string(s) + ".csv")).string();
            detail::write_text_file(path, series_table_to_csv(table));
            result.files.push_back(path);
        }
    } else {
        throw ValidationError("synth: unknown kind '" + opt.kind +
                              "' (expected planted or timeseries)");
    }
    return result;
}

}  // namespace plexcomm
