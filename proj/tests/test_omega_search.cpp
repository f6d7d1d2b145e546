#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "plexcomm/communicability.hpp"
#include "plexcomm/omega_search.hpp"
#include "plexcomm/synth.hpp"

#include "oracles.hpp"

using namespace plexcomm;

namespace {

// Both sides of the stationarity identity nh sum_i G'_ii = sum_ij G'_ij, with
// G' estimated by central differences of the full pipeline.
std::pair<double, double> stationarity_sides(const MultiplexNetwork& m, double omega,
                                             double step = 1e-5) {
    const Eigen::MatrixXd g_hi = multiplex_communicability(m.with_omega(omega + step)).g;
    const Eigen::MatrixXd g_lo = multiplex_communicability(m.with_omega(omega - step)).g;
    const Eigen::MatrixXd dg = (g_hi - g_lo) / (2.0 * step);
    const double nh = static_cast<double>(m.n() * m.h());
    return {nh * dg.trace(), dg.sum()};
}

}  // namespace

TEST_CASE("delta_m at omega 0 decomposes into per-layer contributions") {
    std::mt19937_64 rng(3);
    const MultiplexNetwork m = random_multiplex(6, 2, 1.0, 0.0, rng());
    const double full = delta_m_of_omega(m, 0.0);

    // block-diagonal oracle: exp of the omega = 0 supra matrix is the direct
    // sum of the per-layer exponentials, so delta_m splits layer by layer
    const double nh = static_cast<double>(m.n() * m.h());
    double expected = 0.0;
    for (const LayerNetwork& layer : m.layers()) {
        const SupraMatrix mono{layer.size(), 1, layer.weights()};
        const Eigen::MatrixXd g = matrix_exponential_symmetric(strength_normalize(mono));
        expected += 2.0 * (nh * g.trace() - g.sum()) / (nh - 1.0);
    }
    CHECK(full == Catch::Approx(expected).epsilon(1e-12));
}

TEST_CASE("delta_m propagates the zero-strength error at omega 0") {
    const MultiplexNetwork zero = random_multiplex(3, 2, 0.0, 0.0, 1);  // all-zero layers
    CHECK_THROWS_AS(delta_m_of_omega(zero, 0.0), ZeroStrengthError);
    CHECK_NOTHROW(delta_m_of_omega(zero, 0.1));
    CHECK_THROWS_AS(delta_m_of_omega(zero, 1.5), ValidationError);
}

TEST_CASE("delta_m is deterministic") {
    const MultiplexNetwork m = random_multiplex(5, 3, 0.7, 0.0, 77);
    const double a = delta_m_of_omega(m, 0.37);
    const double b = delta_m_of_omega(m, 0.37);
    CHECK(a == b);  // bit-for-bit
}

TEST_CASE("find_omega_star contract on identical layers") {
    std::mt19937_64 rng(13);
    const LayerNetwork layer = random_layer(6, 1.0, "base", rng);
    const MultiplexNetwork m({layer, LayerNetwork("copy", layer.labels(), layer.weights())}, 0.0);
    const OmegaSearchResult r = find_omega_star(m, 51, 1e-4);

    CHECK(r.curve.size() == 51);
    CHECK(r.omega_star >= 0.0);
    CHECK(r.omega_star <= 1.0);
    for (const auto& [omega, value] : r.curve) {
        CHECK(r.delta_m_star <= value);
        CHECK(value > 0.0);  // positivity along the curve
    }
    CHECK_THROWS_AS(find_omega_star(m, 2, 1e-4), ValidationError);
}

TEST_CASE("find_omega_star matches a dense-grid brute force on a toy multiplex") {
    Eigen::MatrixXd wa(3, 3), wb(3, 3);
    wa << 0.0, 0.9, 0.1, 0.9, 0.0, 0.2, 0.1, 0.2, 0.0;
    wb << 0.0, 0.2, 0.8, 0.2, 0.0, 0.7, 0.8, 0.7, 0.0;
    const std::vector<std::string> labels{"A", "B", "C"};
    const MultiplexNetwork m({LayerNetwork("a", labels, wa), LayerNetwork("b", labels, wb)}, 0.0);

    const OmegaSearchResult r = find_omega_star(m, 101, 1e-5);

    // brute force on a 10001-point uniform grid
    double best_omega = 0.0;
    double best_value = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 10000; ++k) {
        const double omega = static_cast<double>(k) / 10000.0;
        const double value = delta_m_of_omega(m, omega);
        if (value < best_value) {
            best_value = value;
            best_omega = omega;
        }
    }
    INFO("grid best omega " << best_omega << ", refined " << r.omega_star);
    CHECK(std::abs(r.omega_star - best_omega) < 2e-4);
    CHECK(r.delta_m_star <= best_value + 1e-12);
}

TEST_CASE("stationarity identity holds at interior minimizers") {
    int interior_found = 0;
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        PlantedSpec spec;
        spec.n = 8;
        spec.h = 2;
        spec.communities = 2;
        spec.within_dropout = 0.25;
        const MultiplexNetwork m = correlated_planted_multiplex(spec, seed).multiplex;
        const OmegaSearchResult r = find_omega_star(m, 101, 1e-6);
        if (r.boundary) continue;
        ++interior_found;
        const auto [lhs, rhs] = stationarity_sides(m, r.omega_star);
        const double gap = std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));
        INFO("seed " << seed << " omega* " << r.omega_star << " lhs " << lhs << " rhs " << rhs);
        CHECK(gap < 1e-3);
        CHECK(std::isfinite(r.stationarity_residual));
    }
    INFO("interior minimizers found: " << interior_found);
    CHECK(interior_found > 0);
}

TEST_CASE("delta_m is continuous in omega") {
    const MultiplexNetwork m = random_multiplex(5, 2, 0.8, 0.0, 321);
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> pick(0.1, 0.9);
    for (int trial = 0; trial < 5; ++trial) {
        const double omega = pick(rng);
        const double base = delta_m_of_omega(m, omega);
        double delta = 1e-2;
        double previous = std::abs(delta_m_of_omega(m, omega + delta) - base);
        const double first = previous;
        for (int halving = 0; halving < 6; ++halving) {
            delta *= 0.5;
            const double current = std::abs(delta_m_of_omega(m, omega + delta) - base);
            CHECK(current <= previous + 1e-12);
            previous = current;
        }
        CHECK(previous <= 0.1 * first + 1e-12);
    }
}

TEST_CASE("infeasible omega 0 shifts the search domain") {
    // node 2 is isolated in layer b, so omega = 0 cannot be normalized
    Eigen::MatrixXd wa(3, 3), wb(3, 3);
    wa << 0.0, 0.5, 0.4, 0.5, 0.0, 0.6, 0.4, 0.6, 0.0;
    wb << 0.0, 0.5, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0;
    const std::vector<std::string> labels{"A", "B", "C"};
    const MultiplexNetwork m({LayerNetwork("a", labels, wa), LayerNetwork("b", labels, wb)}, 0.0);

    CHECK(m.has_isolated_node());
    CHECK_THROWS_AS(delta_m_of_omega(m, 0.0), ZeroStrengthError);

    const OmegaSearchResult r = find_omega_star(m, 41, 1e-4);
    CHECK(r.domain_min == 1e-6);
    CHECK(r.curve.front().first == 1e-6);
    CHECK(r.curve.back().first == 1.0);
    CHECK(r.omega_star >= r.domain_min);
}
