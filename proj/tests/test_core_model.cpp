#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "plexcomm/layer.hpp"
#include "plexcomm/multiplex.hpp"
#include "plexcomm/synth.hpp"

using namespace plexcomm;

namespace {

LayerNetwork zero_layer(int n, const std::string& name) {
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) labels.push_back("N" + std::to_string(i));
    return LayerNetwork(name, labels, Eigen::MatrixXd::Zero(n, n));
}

}  // namespace

TEST_CASE("layer validation") {
    std::vector<std::string> ab{"A", "B"};

    CHECK_THROWS_AS(LayerNetwork("bad", ab, Eigen::MatrixXd::Zero(2, 3)), ValidationError);
    CHECK_THROWS_AS(LayerNetwork("bad", {"A"}, Eigen::MatrixXd::Zero(2, 2)), ValidationError);
    CHECK_THROWS_AS(LayerNetwork("bad", {"A", "A"}, Eigen::MatrixXd::Zero(2, 2)),
                    ValidationError);

    Eigen::MatrixXd asym(2, 2);
    asym << 0.0, 0.3, 0.4, 0.0;
    CHECK_THROWS_AS(LayerNetwork("bad", ab, asym), ValidationError);

    Eigen::MatrixXd diag(2, 2);
    diag << 0.5, 0.0, 0.0, 0.0;
    CHECK_THROWS_AS(LayerNetwork("bad", ab, diag), ValidationError);

    Eigen::MatrixXd range(2, 2);
    range << 0.0, 1.5, 1.5, 0.0;
    CHECK_THROWS_AS(LayerNetwork("bad", ab, range), ValidationError);

    Eigen::MatrixXd ok(2, 2);
    ok << 0.0, 0.7, 0.7, 0.0;
    const LayerNetwork layer("ok", ab, ok);
    CHECK(layer.size() == 2);
    CHECK(layer.strength(0) == 0.7);
    CHECK(layer.id_of("B") == 1);
    CHECK_THROWS_AS(layer.id_of("C"), ValidationError);
}

TEST_CASE("multiplex validation") {
    CHECK_THROWS_AS(MultiplexNetwork({zero_layer(2, "a")}, 0.0), ValidationError);
    CHECK_THROWS_AS(MultiplexNetwork({zero_layer(2, "a"), zero_layer(3, "b")}, 0.0),
                    ValidationError);
    CHECK_THROWS_AS(MultiplexNetwork({zero_layer(2, "a"), zero_layer(2, "b")}, 1.5),
                    ValidationError);

    // same n but different label order
    std::vector<std::string> reversed{"N1", "N0"};
    LayerNetwork swapped("b", reversed, Eigen::MatrixXd::Zero(2, 2));
    CHECK_THROWS_AS(MultiplexNetwork({zero_layer(2, "a"), swapped}, 0.0), ValidationError);
}

TEST_CASE("supra assembly: zero layers, omega 0") {
    const MultiplexNetwork m({zero_layer(2, "a"), zero_layer(2, "b")}, 0.0);
    const SupraMatrix s = assemble_supra(m);
    CHECK(s.size() == 4);
    CHECK(s.entries.isZero(0.0));
}

TEST_CASE("supra assembly: identity coupling structure") {
    const MultiplexNetwork m({zero_layer(2, "a"), zero_layer(2, "b")}, 0.5);
    const SupraMatrix s = assemble_supra(m);
    for (Eigen::Index i = 0; i < 4; ++i) {
        for (Eigen::Index j = 0; j < 4; ++j) {
            const double expected = (std::abs(i - j) == 2) ? 0.5 : 0.0;
            CHECK(s.entries(i, j) == expected);
        }
    }
}

TEST_CASE("supra assembly: all layer pairs coupled") {
    const MultiplexNetwork m({zero_layer(1, "a"), zero_layer(1, "b"), zero_layer(1, "c")}, 0.3);
    const SupraMatrix s = assemble_supra(m);
    CHECK(s.size() == 3);
    for (Eigen::Index i = 0; i < 3; ++i) {
        for (Eigen::Index j = 0; j < 3; ++j) {
            CHECK(s.entries(i, j) == (i == j ? 0.0 : 0.3));
        }
    }
}

TEST_CASE("flat index and its inverse") {
    CHECK(flat_index(0, 0, 49, 3) == 0);
    CHECK(flat_index(1, 0, 49, 3) == 49);
    CHECK(flat_index(2, 48, 49, 3) == 146);
    CHECK_THROWS_AS(flat_index(3, 0, 49, 3), std::out_of_range);
    CHECK_THROWS_AS(flat_index(0, 49, 49, 3), std::out_of_range);
    CHECK_THROWS_AS(flat_index(-1, 0, 49, 3), std::out_of_range);
    CHECK_THROWS_AS(unflatten(147, 49, 3), std::out_of_range);

    std::mt19937_64 rng(7);
    std::uniform_int_distribution<Eigen::Index> pick_n(1, 12), pick_h(2, 5);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index n = pick_n(rng);
        const Eigen::Index h = pick_h(rng);
        std::uniform_int_distribution<Eigen::Index> pick_layer(0, h - 1), pick_node(0, n - 1);
        const Eigen::Index layer = pick_layer(rng);
        const Eigen::Index node = pick_node(rng);
        const auto [l2, n2] = unflatten(flat_index(layer, node, n, h), n, h);
        CHECK(l2 == layer);
        CHECK(n2 == node);
    }
}

TEST_CASE("supra properties on random multiplexes") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> pick_omega(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 7);
        const int h = 2 + static_cast<int>(rng() % 2);
        const double omega = pick_omega(rng);
        const MultiplexNetwork m = random_multiplex(n, h, 0.5, omega, rng());
        const SupraMatrix s = assemble_supra(m);

        CHECK(s.entries == s.entries.transpose().eval());
        CHECK(s.entries.diagonal().isZero(0.0));

        // each diagonal block is the layer, each off block omega * I
        for (Eigen::Index a = 0; a < m.h(); ++a) {
            CHECK(s.entries.block(a * n, a * n, n, n) == m.layer(a).weights());
            for (Eigen::Index b = 0; b < m.h(); ++b) {
                if (a == b) continue;
                const Eigen::MatrixXd block = s.entries.block(a * n, b * n, n, n);
                CHECK(block == Eigen::MatrixXd(Eigen::MatrixXd::Identity(n, n) * omega));
            }
        }

        // replica coupling floor on row strengths
        if (omega > 0.0) {
            const double min_strength = s.entries.rowwise().sum().minCoeff();
            CHECK(min_strength >= (h - 1) * omega - 1e-12);
        }
    }
}

TEST_CASE("omega 0 gives a block-diagonal supra matrix") {
    const MultiplexNetwork m = random_multiplex(5, 3, 0.7, 0.0, 123);
    const SupraMatrix s = assemble_supra(m);
    for (Eigen::Index a = 0; a < 3; ++a) {
        for (Eigen::Index b = 0; b < 3; ++b) {
            if (a != b) CHECK(s.entries.block(a * 5, b * 5, 5, 5).isZero(0.0));
        }
    }
}
