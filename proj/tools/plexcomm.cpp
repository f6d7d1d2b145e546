#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plexcomm/plexcomm.hpp"

namespace {

std::string trimmed(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    std::size_t e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

// Expands `--config FILE` into ordinary tokens: each `key=value` line becomes
// `--key value` right after the subcommand name, unless the flag was already
// given on the command line (flags override config). Comma lists expand for
// the positional `sources` key.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    std::size_t sub = 1;
    while (sub < args.size() && !args[sub].empty() && args[sub][0] == '-') ++sub;
    if (sub >= args.size()) return args;

    std::string config_file;
    for (std::size_t k = sub + 1; k < args.size(); ++k) {
        if (args[k] == "--config" && k + 1 < args.size()) {
            config_file = args[k + 1];
        } else if (args[k].rfind("--config=", 0) == 0) {
            config_file = args[k].substr(9);
        }
    }
    if (config_file.empty()) return args;

    std::ifstream in(config_file);
    if (!in) throw plexcomm::IoError("cannot open config '" + config_file + "'");

    const auto given = [&](const std::string& flag) {
        for (std::size_t k = sub + 1; k < args.size(); ++k) {
            if (args[k] == flag || args[k].rfind(flag + "=", 0) == 0) return true;
        }
        return false;
    };

    std::vector<std::string> extra;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trimmed(line);
        if (line.empty() || line[0] == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw plexcomm::IoError(config_file + ":" + std::to_string(line_no) +
                                    ": expected key=value");
        }
        const std::string key = trimmed(line.substr(0, eq));
        const std::string value = trimmed(line.substr(eq + 1));
        if (key.empty() || key == "config") {
            throw plexcomm::IoError(config_file + ":" + std::to_string(line_no) +
                                    ": bad key '" + key + "'");
        }
        if (key == "sources" || key == "partitions") {  // positional lists
            std::stringstream ss(value);
            std::string piece;
            while (std::getline(ss, piece, ',')) extra.push_back(trimmed(piece));
            continue;
        }
        if (given("--" + key)) continue;
        extra.push_back("--" + key + "=" + value);
    }
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub) + 1, extra.begin(), extra.end());
    return args;
}

void add_ingest(CLI::App& app, plexcomm::IngestOptions& opt) {
    CLI::App* sub = app.add_subcommand(
        "ingest", "Build correlation layers from time-series CSV sources");
    sub->add_option("sources", opt.sources,
                    "Long-form (entity,date,value) or flow-form (reporter,partner,period,value) "
                    "CSV files, one per layer")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--alpha", opt.significance_level, "Significance level for the Pearson test")
        ->capture_default_str();
    sub->add_option("--min-overlap", opt.min_overlap,
                    "Minimum paired observations per entity pair")
        ->capture_default_str();
    sub->add_flag("--drop-entity", opt.drop_entity_policy,
                  "Drop entities with any missing observation instead of pairwise alignment");
    sub->add_flag("--report-pairs", opt.report_pairs,
                  "Include the per-pair rho/p table in build reports");
    sub->add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--config", "Flat key=value config file; command-line flags win")
        ->option_text("FILE");
}

void add_optimize(CLI::App& app, plexcomm::OptimizeOptions& opt) {
    CLI::App* sub = app.add_subcommand(
        "optimize", "Find the inter-layer intensity minimizing the multiplex total distance");
    sub->add_option("--multiplex", opt.multiplex_file, "Multiplex JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--grid-points", opt.grid_points, "Uniform grid size on [0, 1]")
        ->capture_default_str();
    sub->add_option("--refine-tol", opt.refine_tol, "Golden-section interval tolerance")
        ->capture_default_str();
    sub->add_option("--normalization", opt.normalization,
                    "Strength matrix: supra (full supra-row sums), intra (intra-layer "
                    "strengths), none (raw exponential)")
        ->capture_default_str();
    sub->add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--config", "Flat key=value config file; command-line flags win")
        ->option_text("FILE");
}

void add_detect(CLI::App& app, plexcomm::DetectOptions& opt) {
    CLI::App* sub =
        app.add_subcommand("detect", "Detect communities on each layer at a given omega");
    sub->add_option("--multiplex", opt.multiplex_file, "Multiplex JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--omega", opt.omega_spec, "Inter-layer intensity, or 'from-optimize'")
        ->capture_default_str();
    sub->add_option("--omega-file", opt.omega_file,
                    "omega.json to read with --omega from-optimize (default: <out>/omega.json)");
    sub->add_option("--format", opt.formats, "Export formats: json, csv, dot, graphml")
        ->delimiter(',')
        ->capture_default_str();
    sub->add_option("--normalization", opt.normalization,
                    "Strength matrix: supra, intra or none")
        ->capture_default_str();
    sub->add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--config", "Flat key=value config file; command-line flags win")
        ->option_text("FILE");
}

void add_compare(CLI::App& app, plexcomm::CompareOptions& opt) {
    CLI::App* sub =
        app.add_subcommand("compare", "Pairwise NMI matrix between partition files");
    sub->add_option("partitions", opt.partition_files, "Partition JSON files")
        ->required()
        ->expected(-2)
        ->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out_file, "CSV output file (default: stdout)");
    sub->add_option("--config", "Flat key=value config file; command-line flags win")
        ->option_text("FILE");
}

void add_export(CLI::App& app, plexcomm::ExportOptions& opt) {
    CLI::App* sub = app.add_subcommand(
        "export", "Dump supra, communicability and distance matrices as CSV");
    sub->add_option("--multiplex", opt.multiplex_file, "Multiplex JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--omega", opt.omega, "Inter-layer intensity")->capture_default_str();
    sub->add_option("--what", opt.what, "Matrices to dump: g, xi, supra")
        ->delimiter(',')
        ->capture_default_str();
    sub->add_option("--normalization", opt.normalization,
                    "Strength matrix: supra, intra or none")
        ->capture_default_str();
    sub->add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--config", "Flat key=value config file; command-line flags win")
        ->option_text("FILE");
}

void add_synth(CLI::App& app, plexcomm::SynthOptions& opt) {
    CLI::App* sub = app.add_subcommand("synth", "Generate seeded synthetic inputs");
    sub->add_option("--kind", opt.kind, "planted | timeseries")->capture_default_str();
    sub->add_option("--seed", opt.seed, "RNG seed")->capture_default_str();
    sub->add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
    // planted
    sub->add_option("--n", opt.planted.n, "Nodes per layer")->capture_default_str();
    sub->add_option("--layers", opt.planted.h, "Number of layers")->capture_default_str();
    sub->add_option("--communities", opt.planted.communities, "Planted communities")
        ->capture_default_str();
    sub->add_option("--within-lo", opt.planted.within_lo, "Within-community weight lower bound")
        ->capture_default_str();
    sub->add_option("--within-hi", opt.planted.within_hi, "Within-community weight upper bound")
        ->capture_default_str();
    sub->add_option("--across-lo", opt.planted.across_lo, "Across-community weight lower bound")
        ->capture_default_str();
    sub->add_option("--across-hi", opt.planted.across_hi, "Across-community weight upper bound")
        ->capture_default_str();
    sub->add_option("--dropout", opt.planted.within_dropout,
                    "Fraction of within pairs degraded per layer")
        ->capture_default_str();
    sub->add_option("--omega", opt.planted.omega, "Omega stored on the generated multiplex")
        ->capture_default_str();
    // timeseries
    sub->add_option("--entities", opt.series.entities, "Entities per source")
        ->capture_default_str();
    sub->add_option("--days", opt.series.days, "Observations per entity")->capture_default_str();
    sub->add_option("--groups", opt.series.groups, "Correlated entity groups")
        ->capture_default_str();
    sub->add_option("--noise", opt.series.noise, "Idiosyncratic noise level")
        ->capture_default_str();
    sub->add_option("--missing-rate", opt.series.missing_rate, "Fraction of missing observations")
        ->capture_default_str();
    sub->add_option("--start-date", opt.series.start_date, "First ISO date")
        ->capture_default_str();
    sub->add_option("--sources", opt.sources, "Number of CSV sources")->capture_default_str();
    sub->add_option("--config", "Flat key=value config file; command-line flags win")
        ->option_text("FILE");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Communicability-based community detection on multiplex networks"};
    app.require_subcommand(1);

    plexcomm::IngestOptions ingest_opt;
    plexcomm::OptimizeOptions optimize_opt;
    plexcomm::DetectOptions detect_opt;
    plexcomm::CompareOptions compare_opt;
    plexcomm::ExportOptions export_opt;
    plexcomm::SynthOptions synth_opt;

    add_ingest(app, ingest_opt);
    add_optimize(app, optimize_opt);
    add_detect(app, detect_opt);
    add_compare(app, compare_opt);
    add_export(app, export_opt);
    add_synth(app, synth_opt);

    std::vector<std::string> args;
    try {
        args = expand_config(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "plexcomm: error: " << e.what() << std::endl;
        return 1;
    }
    try {
        // CLI11's vector overload wants reversed args without the program name
        std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (app.got_subcommand("ingest")) {
            const plexcomm::IngestResult r = plexcomm::run_ingest(ingest_opt);
            for (const std::string& f : r.layer_files) std::cout << "wrote " << f << "\n";
            std::cout << "wrote " << r.multiplex_file << "\n";
            std::cout << "aligned entities: " << r.align.kept.size() << "\n";
        } else if (app.got_subcommand("optimize")) {
            const plexcomm::OptimizeResult r = plexcomm::run_optimize(optimize_opt);
            std::cout << "omega_star " << r.search.omega_star << " delta_m "
                      << r.search.delta_m_star << (r.search.boundary ? " (boundary)" : "") << "\n";
            std::cout << "wrote " << r.omega_file << "\n";
            std::cout << "wrote " << r.curve_file << "\n";
        } else if (app.got_subcommand("detect")) {
            const plexcomm::DetectResult r = plexcomm::run_detect(detect_opt);
            for (const plexcomm::Partition& p : r.partitions) {
                std::cout << p.layer << ": " << p.num_communities << " communities, Q = "
                          << p.quality << ", threshold = " << p.threshold << "\n";
            }
        } else if (app.got_subcommand("compare")) {
            const plexcomm::CompareResult r = plexcomm::run_compare(compare_opt);
            if (compare_opt.out_file.empty()) {
                std::cout << r.csv;
            } else {
                std::cout << "wrote " << compare_opt.out_file << "\n";
            }
        } else if (app.got_subcommand("export")) {
            for (const std::string& f : plexcomm::run_export(export_opt)) {
                std::cout << "wrote " << f << "\n";
            }
        } else if (app.got_subcommand("synth")) {
            const plexcomm::SynthResult r = plexcomm::run_synth(synth_opt);
            for (const std::string& f : r.files) std::cout << "wrote " << f << "\n";
            if (!r.multiplex_file.empty()) std::cout << "wrote " << r.multiplex_file << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "plexcomm: error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
