// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances are fixed here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "plexcomm/plexcomm.hpp"

#include "oracles.hpp"

using namespace plexcomm;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2e", v);
    return buf;
}

std::string fixed3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

struct Criterion {
    int id;
    std::string name;
    bool passed;
    std::string detail;
};

std::vector<Criterion> results;

void record(int id, const std::string& name, bool passed, const std::string& detail) {
    results.push_back({id, name, passed, detail});
    std::printf("[%s] criterion %d: %s (%s)\n", passed ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
}

// The shared random suite for criteria 2-4: 50 multiplexes, n <= 10, h in
// {2, 3}, complete weighted layers, omega in (0, 1].
std::vector<MultiplexNetwork> random_suite() {
    std::vector<MultiplexNetwork> suite;
    std::mt19937_64 rng(20200401);
    std::uniform_real_distribution<double> pick_omega(0.05, 1.0);
    for (int k = 0; k < 50; ++k) {
        const int n = 3 + static_cast<int>(rng() % 8);   // 3..10
        const int h = 2 + static_cast<int>(rng() % 2);   // 2..3
        suite.push_back(random_multiplex(n, h, 1.0, pick_omega(rng), rng()));
    }
    return suite;
}

// ---------------------------------------------------------------------------

void criterion_1_matrix_exponential() {
    const auto start = Clock::now();
    std::mt19937_64 rng(101);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 11);  // 2..12
        const Eigen::MatrixXd a = oracle::random_symmetric(n, 4.0, rng);
        const Eigen::MatrixXd g = matrix_exponential_symmetric(a);
        const oracle::Mat taylor = oracle::taylor_expm(oracle::from_eigen(a), 60);
        worst = std::max(worst, oracle::max_abs_diff(taylor, g) / oracle::max_abs(taylor));
    }
    const double elapsed = seconds_since(start);
    record(1, "matrix exponential vs Taylor oracle", worst < 1e-10 && elapsed < 10.0,
           "200 matrices, worst rel err " + sci(worst) + ", " + fixed3(elapsed) + " s");
}

void criterion_2_metric_suite(const std::vector<MultiplexNetwork>& suite,
                              std::vector<DistanceSummary>& distances) {
    const auto start = Clock::now();
    bool ok = true;
    std::string why = "all metric checks hold";
    for (const MultiplexNetwork& m : suite) {
        const DistanceSummary d = distance_matrix(multiplex_communicability(m));
        const Eigen::Index nh = d.size();
        if (d.xi.minCoeff() < 0.0) {
            ok = false;
            why = "negative distance";
        }
        if (d.xi != d.xi.transpose().eval()) {
            ok = false;
            why = "asymmetric distance matrix";
        }
        for (Eigen::Index i = 0; i < nh; ++i) {
            if (d.xi(i, i) != 0.0) {
                ok = false;
                why = "nonzero diagonal";
            }
        }
        const Eigen::MatrixXd root = d.xi.cwiseSqrt();
        for (Eigen::Index i = 0; i < nh && ok; ++i) {
            for (Eigen::Index j = 0; j < nh; ++j) {
                for (Eigen::Index k = 0; k < nh; ++k) {
                    if (root(i, j) + root(j, k) - root(i, k) < -1e-9) {
                        ok = false;
                        why = "triangle inequality violated";
                        break;
                    }
                }
            }
        }
        distances.push_back(d);
    }
    const double elapsed = seconds_since(start);
    record(2, "communicability distance is a metric", ok && elapsed < 30.0,
           "50 multiplexes, " + why + ", " + fixed3(elapsed) + " s");
}

void criterion_3_cohesion_identity(const std::vector<DistanceSummary>& distances) {
    double worst = 0.0;
    for (const DistanceSummary& d : distances) {
        const double total = cohesion_matrix(d).sum();
        worst = std::max(worst, std::abs(total - d.delta_m) / std::abs(d.delta_m));
    }
    record(3, "cohesion grand sum equals delta_m", worst < 1e-9,
           "worst rel gap " + sci(worst) + " over 50 instances");
}

void criterion_4_theorem_1(const std::vector<MultiplexNetwork>& suite) {
    bool positive = true;
    bool stationary = true;
    int interior = 0;
    double worst_gap = 0.0;
    for (const MultiplexNetwork& m : suite) {
        const OmegaSearchResult r = find_omega_star(m, 101, 1e-6);
        for (const auto& [omega, value] : r.curve) {
            if (!(value > 0.0)) positive = false;
        }
        if (r.boundary) continue;
        ++interior;

        const double step = 1e-5;
        const Eigen::MatrixXd g_hi =
            multiplex_communicability(m.with_omega(r.omega_star + step)).g;
        const Eigen::MatrixXd g_lo =
            multiplex_communicability(m.with_omega(r.omega_star - step)).g;
        const Eigen::MatrixXd dg = (g_hi - g_lo) / (2.0 * step);
        const double nh = static_cast<double>(m.n() * m.h());
        const double lhs = nh * dg.trace();
        const double rhs = dg.sum();
        const double gap = std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));
        worst_gap = std::max(worst_gap, gap);
        if (!(gap < 1e-3)) stationary = false;
    }
    record(4, "total distance positive; stationarity identity at interior minimizers",
           positive && stationary && interior > 0,
           std::to_string(interior) + " interior minimizers, worst rel gap " + sci(worst_gap));
}

void criterion_5_decoupling() {
    std::mt19937_64 rng(505);
    bool blocks_ok = true;
    bool partitions_ok = true;
    double worst_block = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 6);
        const int h = 2 + static_cast<int>(rng() % 2);
        const MultiplexNetwork m = random_multiplex(n, h, 1.0, 0.0, rng());

        const CommunicabilityResult c = multiplex_communicability(m);
        const DistanceSummary d = distance_matrix(c);
        for (Eigen::Index a = 0; a < m.h(); ++a) {
            const SupraMatrix mono{m.n(), 1, m.layer(a).weights()};
            const Eigen::MatrixXd g_layer = matrix_exponential_symmetric(strength_normalize(mono));
            const double gap =
                (c.g.block(a * m.n(), a * m.n(), m.n(), m.n()) - g_layer).cwiseAbs().maxCoeff();
            worst_block = std::max(worst_block, gap);
            if (!(gap < 1e-12)) blocks_ok = false;

            const auto [multi, ms] = detect_layer(d, m.layer(a).name(), a);
            const auto [solo, ss] = detect_single_layer(m.layer(a));
            if (multi.assignment != solo.assignment ||
                multi.num_communities != solo.num_communities) {
                partitions_ok = false;
            }
        }
    }

    // the same equivalence through the file-based detect command
    const std::filesystem::path tmp =
        std::filesystem::temp_directory_path() / "plexcomm_acceptance_c5";
    std::filesystem::remove_all(tmp);
    std::filesystem::create_directories(tmp);
    for (int trial = 0; trial < 3; ++trial) {
        const MultiplexNetwork m = random_multiplex(6, 2, 1.0, 0.0, 7000 + trial);
        std::vector<std::string> rel;
        for (const LayerNetwork& layer : m.layers()) {
            save_layer_json(layer, (tmp / (layer.name() + ".layer.json")).string());
            rel.push_back(layer.name() + ".layer.json");
        }
        save_multiplex_json(rel, 0.0, (tmp / "multiplex.json").string());

        DetectOptions opt;
        opt.multiplex_file = (tmp / "multiplex.json").string();
        opt.omega_spec = "0";
        opt.out_dir = (tmp / ("run" + std::to_string(trial))).string();
        const DetectResult result = run_detect(opt);
        for (Eigen::Index a = 0; a < m.h(); ++a) {
            const auto [solo, ss] = detect_single_layer(m.layer(a));
            if (result.partitions[static_cast<std::size_t>(a)].assignment != solo.assignment) {
                partitions_ok = false;
            }
        }
    }
    std::filesystem::remove_all(tmp);

    record(5, "omega 0 decouples layers; detect --omega 0 equals standalone detection",
           blocks_ok && partitions_ok,
           "worst block gap " + sci(worst_block) +
               (partitions_ok ? ", partitions identical" : ", partitions differ"));
}

void criterion_6_planted_recovery() {
    const auto start = Clock::now();
    bool ok = true;
    const std::vector<int> truth = planted_blocks(10, 2);
    for (double omega : {0.05, 0.2}) {
        const MultiplexNetwork m = planted_two_clique_multiplex(10, 2, omega);
        for (Eigen::Index a = 0; a < m.h(); ++a) {
            const auto [partition, sweep] = detect_layer(m, omega, a);
            if (partition.num_communities != 2) ok = false;
            if (std::abs(nmi(partition.assignment, truth) - 1.0) > 1e-12) ok = false;
        }
    }
    const double elapsed = seconds_since(start);
    record(6, "planted two-clique recovery with NMI 1", ok && elapsed < 5.0,
           "omega 0.05 and 0.2, both layers, " + fixed3(elapsed) + " s");
}

void criterion_7_sweep_sufficiency() {
    std::mt19937_64 rng(707);
    bool ok = true;
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 7);  // 4..10
        const MultiplexNetwork m =
            random_multiplex(n, 2, 0.8, 0.05 + 0.9 * (rng() % 100) / 100.0, rng());
        const DistanceSummary d = distance_matrix(multiplex_communicability(m));
        const Eigen::MatrixXd xi = d.layer_block(0);
        const Eigen::MatrixXd gamma = layer_cohesion_matrix(d, 0);
        const auto [partition, sweep] = detect_layer(d, "layer0", 0);

        double candidate_best = 0.0;
        for (double q : sweep.q_values) candidate_best = std::max(candidate_best, q);
        double brute_best = 0.0;
        const double lo = sweep.candidates.front();
        const double hi = sweep.candidates.back();
        for (int k = 0; k < 1000; ++k) {
            const double t = lo + (hi - lo) * static_cast<double>(k) / 999.0;
            const std::vector<int> assignment =
                oracle::components_bfs(threshold_graph(xi, t));
            brute_best = std::max(brute_best, oracle::quality_pair_loop(gamma, assignment));
        }
        if (std::abs(candidate_best - brute_best) > 1e-9) ok = false;
    }
    record(7, "distinct-distance sweep matches a 1000-point uniform sweep", ok,
           "10 instances, n <= 10");
}

void criterion_8_mantegna() {
    bool ok = mantegna_distance(1.0) == 1.0 && mantegna_distance(-1.0) == 0.0 &&
              std::abs(mantegna_distance(0.0) - (1.0 - std::sqrt(2.0) / 2.0)) < 1e-12;
    std::mt19937_64 rng(808);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        double a = u(rng);
        double b = u(rng);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        if (!(mantegna_distance(a) < mantegna_distance(b))) ok = false;
    }
    record(8, "Mantegna endpoints and monotonicity", ok, "d(1)=1, d(-1)=0, d(0)=1-sqrt(2)/2");
}

void criterion_9_nmi() {
    bool ok = true;
    std::mt19937_64 rng(909);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 10);
        const std::vector<int> a = oracle::random_partition(n, 4, rng);
        const std::vector<int> b = oracle::random_partition(n, 4, rng);
        if (nmi(a, a) != 1.0 && n > 1) {
            if (std::abs(nmi(a, a) - 1.0) > 1e-12) ok = false;
        }
        if (nmi(a, b) != nmi(b, a)) ok = false;

        const int kb = *std::max_element(b.begin(), b.end()) + 1;
        std::vector<int> perm(static_cast<std::size_t>(kb));
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<int> relabeled(b.size());
        for (std::size_t v = 0; v < b.size(); ++v) {
            relabeled[v] = perm[static_cast<std::size_t>(b[v])];
        }
        if (std::abs(nmi(a, b) - nmi(a, relabeled)) > 1e-12) ok = false;
    }
    const std::vector<int> singletons{0, 1, 2, 3, 4};
    const std::vector<int> block{0, 0, 0, 0, 0};
    if (nmi(singletons, block) != 0.0) ok = false;
    record(9, "NMI identity, zero, symmetry and relabel invariance", ok,
           "100 random pairs plus fixtures");
}

void criterion_10_paper_scale() {
    // (a) end-to-end pipeline on 49 entities x 3 sources under 2 minutes
    const auto start = Clock::now();
    const std::filesystem::path tmp =
        std::filesystem::temp_directory_path() / "plexcomm_acceptance_c10";
    std::filesystem::remove_all(tmp);
    std::filesystem::create_directories(tmp);

    SynthOptions synth;
    synth.kind = "timeseries";
    synth.out_dir = (tmp / "data").string();
    synth.seed = 42;
    synth.series.entities = 49;
    synth.series.days = 91;
    synth.series.groups = 5;
    synth.series.missing_rate = 0.02;
    synth.sources = 3;
    const SynthResult sources = run_synth(synth);

    IngestOptions ingest;
    ingest.sources = sources.files;
    ingest.out_dir = (tmp / "run").string();
    const IngestResult ingested = run_ingest(ingest);

    OptimizeOptions optimize;
    optimize.multiplex_file = ingested.multiplex_file;
    optimize.out_dir = ingest.out_dir;
    const OptimizeResult optimized = run_optimize(optimize);

    DetectOptions detect;
    detect.multiplex_file = ingested.multiplex_file;
    detect.omega_spec = "from-optimize";
    detect.out_dir = ingest.out_dir;
    const DetectResult detected = run_detect(detect);

    CompareOptions compare;
    compare.partition_files = detected.partition_files;
    compare.out_file = (tmp / "run" / "nmi.csv").string();
    const CompareResult compared = run_compare(compare);

    const double elapsed = seconds_since(start);
    const bool pipeline_ok = elapsed < 120.0 && detected.partitions.size() == 3 &&
                             compared.values.rows() == 3;
    std::filesystem::remove_all(tmp);
    record(10, "end-to-end pipeline on 49x3 nodes", pipeline_ok,
           "ingest+optimize+detect+compare in " + fixed3(elapsed) + " s, omega* = " +
               fixed3(optimized.search.omega_star));

    // (b) correlated planted layers benchmark, intra-layer strength mode:
    // multiplex detection at omega* must match or beat the omega = 0 baseline
    // (communities <=, quality >=) on every layer for >= 90% of 50 seeds
    const auto bench_start = Clock::now();
    int passed = 0;
    for (int seed = 1; seed <= 50; ++seed) {
        PlantedSpec spec;
        spec.n = 16;
        spec.h = 3;
        spec.communities = 4;
        spec.within_dropout = 0.35;
        const auto [m, truth] = correlated_planted_multiplex(spec, seed);
        const OmegaSearchResult search =
            find_omega_star(m, 101, 1e-4, Normalization::IntraLayer);
        const DistanceSummary at_star = distance_matrix(multiplex_communicability(
            m.with_omega(search.omega_star), Normalization::IntraLayer));
        const DistanceSummary at_zero = distance_matrix(
            multiplex_communicability(m.with_omega(0.0), Normalization::IntraLayer));
        bool instance_ok = true;
        for (Eigen::Index a = 0; a < m.h(); ++a) {
            const auto [multi, ms] = detect_layer(at_star, "layer", a);
            const auto [solo, ss] = detect_layer(at_zero, "layer", a);
            if (multi.num_communities > solo.num_communities ||
                multi.quality < solo.quality) {
                instance_ok = false;
            }
        }
        passed += instance_ok;
    }
    record(10, "multiplex cohesion benchmark (intra-layer strengths)", passed >= 45,
           std::to_string(passed) + "/50 seeded instances in " +
               fixed3(seconds_since(bench_start)) + " s");
}

}  // namespace

int main() {
    std::printf("plexcomm acceptance suite\n");

    criterion_1_matrix_exponential();

    const std::vector<MultiplexNetwork> suite = random_suite();
    std::vector<DistanceSummary> distances;
    criterion_2_metric_suite(suite, distances);
    criterion_3_cohesion_identity(distances);
    criterion_4_theorem_1(suite);
    criterion_5_decoupling();
    criterion_6_planted_recovery();
    criterion_7_sweep_sufficiency();
    criterion_8_mantegna();
    criterion_9_nmi();
    criterion_10_paper_scale();

    int failures = 0;
    for (const Criterion& c : results) failures += !c.passed;
    std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failures,
                results.size());
    return failures == 0 ? 0 : 1;
}
