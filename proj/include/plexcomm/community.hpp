#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "plexcomm/communicability.hpp"
#include "plexcomm/errors.hpp"
#include "plexcomm/multiplex.hpp"

namespace plexcomm {

// Per-layer community detection: threshold the layer's communicability
// distances, take connected components of the thresholded graph, and pick the
// threshold maximizing the cohesion quality
//
//   Q = sum over unordered same-community pairs (i, j) of gamma_ij.
//
// Q is piecewise constant in the threshold and changes only when it crosses
// an observed distance, so sweeping the distinct distance values is lossless.

struct Partition {
    std::string layer;
    std::vector<int> assignment;  // node -> community id, ids 0..k-1 by smallest member
    double threshold = 0.0;       // distance threshold that produced it
    double quality = 0.0;
    int num_communities = 0;
};

struct ThresholdSweep {
    std::vector<double> candidates;               // sorted distinct off-diagonal distances
    std::vector<double> q_values;                 // Q per candidate
    std::vector<std::vector<int>> partitions;     // assignment per candidate
};

namespace detail {

struct UnionFind {
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);  // keep the smallest index as root
        parent[static_cast<std::size_t>(b)] = a;
    }
    std::vector<int> parent;
};

// Community ids numbered by first appearance in node order, so community 0
// always contains node 0.
inline std::vector<int> canonical_labels(UnionFind& uf, int n) {
    std::vector<int> label(static_cast<std::size_t>(n), -1);
    std::vector<int> out(static_cast<std::size_t>(n));
    int next = 0;
    for (int v = 0; v < n; ++v) {
        const int root = uf.find(v);
        if (label[static_cast<std::size_t>(root)] < 0) label[static_cast<std::size_t>(root)] = next++;
        out[static_cast<std::size_t>(v)] = label[static_cast<std::size_t>(root)];
    }
    return out;
}

}  // namespace detail

// m[i][j] = 1 iff i != j and xi[i][j] <= threshold.
inline Eigen::MatrixXi threshold_graph(const Eigen::MatrixXd& xi_layer, double threshold) {
    const Eigen::Index n = xi_layer.rows();
    if (xi_layer.cols() != n) {
        throw ValidationError("threshold_graph: distance matrix must be square");
    }
    Eigen::MatrixXi m = Eigen::MatrixXi::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i != j && xi_layer(i, j) <= threshold) m(i, j) = 1;
        }
    }
    return m;
}

// Connected components of a binary adjacency matrix; ids ordered by smallest
// member node index.
inline std::vector<int> communities_from_threshold(const Eigen::MatrixXi& m_alpha) {
    const int n = static_cast<int>(m_alpha.rows());
    if (m_alpha.cols() != m_alpha.rows()) {
        throw ValidationError("communities_from_threshold: adjacency must be square");
    }
    detail::UnionFind uf(n);
    for (int j = 0; j < n; ++j) {
        for (int i = j + 1; i < n; ++i) {
            if (m_alpha(i, j) != 0) uf.unite(i, j);
        }
    }
    return detail::canonical_labels(uf, n);
}

// Q = sum over unordered pairs in the same community of gamma_ij; the
// all-singletons assignment scores 0.
inline double quality(const Eigen::MatrixXd& gamma_layer, const std::vector<int>& assignment) {
    const Eigen::Index n = gamma_layer.rows();
    if (gamma_layer.cols() != n || static_cast<Eigen::Index>(assignment.size()) != n) {
        throw ValidationError("quality: assignment/gamma dimension mismatch");
    }
    double q = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = j + 1; i < n; ++i) {
            if (assignment[static_cast<std::size_t>(i)] == assignment[static_cast<std::size_t>(j)]) {
                q += gamma_layer(i, j);
            }
        }
    }
    return q;
}

// Sweep every distinct off-diagonal distance as a threshold, merging pairs
// incrementally (union-find), and score each candidate partition. The
// degenerate below-minimum threshold (all singletons, Q = 0) competes too;
// ties resolve to the smallest threshold, i.e. the finest partition.
inline std::pair<Partition, ThresholdSweep> sweep_thresholds(const Eigen::MatrixXd& xi_layer,
                                                             const Eigen::MatrixXd& gamma_layer,
                                                             const std::string& layer_name) {
    const int n = static_cast<int>(xi_layer.rows());
    if (xi_layer.cols() != n || gamma_layer.rows() != n || gamma_layer.cols() != n) {
        throw ValidationError("sweep_thresholds: dimension mismatch");
    }
    if (n < 1) throw ValidationError("sweep_thresholds: empty layer");

    struct Pair {
        double xi;
        int i, j;
    };
    std::vector<Pair> pairs;
    pairs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2);
    for (int j = 0; j < n; ++j) {
        for (int i = j + 1; i < n; ++i) pairs.push_back({xi_layer(i, j), i, j});
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.xi != b.xi) return a.xi < b.xi;
        return std::tie(a.j, a.i) < std::tie(b.j, b.i);
    });

    ThresholdSweep sweep;
    for (const Pair& p : pairs) {
        if (sweep.candidates.empty() || sweep.candidates.back() != p.xi) {
            sweep.candidates.push_back(p.xi);
        }
    }

    Partition best;
    best.layer = layer_name;
    best.assignment.resize(static_cast<std::size_t>(n));
    std::iota(best.assignment.begin(), best.assignment.end(), 0);
    best.quality = 0.0;
    best.num_communities = n;
    // No threshold produces the all-singletons partition when some distance is
    // exactly 0; report -1 in that case, otherwise 0.
    best.threshold = (!sweep.candidates.empty() && sweep.candidates.front() <= 0.0) ? -1.0 : 0.0;

    detail::UnionFind uf(n);
    std::size_t next_pair = 0;
    for (double candidate : sweep.candidates) {
        while (next_pair < pairs.size() && pairs[next_pair].xi <= candidate) {
            uf.unite(pairs[next_pair].i, pairs[next_pair].j);
            ++next_pair;
        }
        std::vector<int> assignment = detail::canonical_labels(uf, n);
        const double q = quality(gamma_layer, assignment);
        sweep.q_values.push_back(q);
        sweep.partitions.push_back(assignment);
        if (q > best.quality) {
            best.quality = q;
            best.threshold = candidate;
            best.assignment = std::move(assignment);
            best.num_communities = *std::max_element(best.assignment.begin(),
                                                     best.assignment.end()) + 1;
        }
    }
    return {std::move(best), std::move(sweep)};
}

// Detection for layer alpha of a multiplex whose communicability was computed
// at omega*: distances and layer-scoped cohesion both come from the full
// multiplex, so inter-layer walks inform the per-layer partition.
inline std::pair<Partition, ThresholdSweep> detect_layer(const DistanceSummary& d,
                                                         const std::string& layer_name,
                                                         Eigen::Index alpha) {
    const Eigen::MatrixXd xi = d.layer_block(alpha);
    const Eigen::MatrixXd gamma = layer_cohesion_matrix(d, alpha);
    return sweep_thresholds(xi, gamma, layer_name);
}

inline std::pair<Partition, ThresholdSweep> detect_layer(const MultiplexNetwork& m,
                                                         double omega_star, Eigen::Index alpha,
                                                         Normalization mode = Normalization::SupraRow) {
    const DistanceSummary d =
        distance_matrix(multiplex_communicability(m.with_omega(omega_star), mode));
    return detect_layer(d, m.layer(alpha).name(), alpha);
}

// Standalone monoplex detection on one layer: normalize the layer itself,
// exponentiate, sweep. Equivalent to the multiplex run with omega = 0.
inline std::pair<Partition, ThresholdSweep> detect_single_layer(const LayerNetwork& layer,
                                                                bool normalize = true) {
    SupraMatrix s{layer.size(), 1, layer.weights()};
    Eigen::MatrixXd g;
    if (normalize) {
        for (Eigen::Index i = 0; i < layer.size(); ++i) {
            if (layer.strength(i) == 0.0) {
                throw ZeroStrengthError("zero strength: node '" + layer.labels()[std::size_t(i)] +
                                            "' is isolated in layer '" + layer.name() + "'",
                                        0, i);
            }
        }
        g = matrix_exponential_symmetric(strength_normalize(s));
    } else {
        g = matrix_exponential_symmetric(s.entries);
    }
    const DistanceSummary d = distance_matrix(CommunicabilityResult{g, 0.0, normalize, s.n, s.h});
    return detect_layer(d, layer.name(), 0);
}

}  // namespace plexcomm
