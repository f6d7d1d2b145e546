#pragma once

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "plexcomm/errors.hpp"
#include "plexcomm/multiplex.hpp"

namespace plexcomm {

// Communicability analysis of a (supra-)adjacency matrix.
//
//   G            = exp(S)                      walk-weighted communicability
//   xi_ij        = G_ii + G_jj - 2 G_ij        squared communicability distance
//   xi_bar_i     = sum_{k != i} xi_ik / (N-1)  node average, N = nh
//   xi_bar       = sum_i xi_bar_i / N          network average
//   delta_m      = N * xi_bar                  multiplex total distance
//   gamma_ij     = (xi_bar_j - xi_bar) - (xi_ij - xi_bar_i)   cohesion
//
// For weighted input S is first normalized as D^{-1/2} W D^{-1/2} with D the
// diagonal of full supra-row strengths, which keeps the spectrum in [-1, 1].
// xi is a squared Euclidean distance between rows of exp(S/2), so sqrt(xi)
// is a genuine metric.

// How the strength matrix S in S^{-1/2} W S^{-1/2} is built. SupraRow uses
// full supra-row sums (intra-layer strength plus (h-1)*omega), which stay
// strictly positive for every omega > 0. IntraLayer uses each node's strength
// within its own layer only; it leaves the intra-layer blocks untouched as
// omega grows, but is undefined whenever a layer contains an isolated node.
// None skips normalization (the raw-exponential path for binary input).
enum class Normalization { SupraRow, IntraLayer, None };

inline Normalization parse_normalization(const std::string& name) {
    if (name == "supra") return Normalization::SupraRow;
    if (name == "intra") return Normalization::IntraLayer;
    if (name == "none") return Normalization::None;
    throw ValidationError("unknown normalization '" + name + "' (expected supra, intra or none)");
}

namespace detail {

inline Eigen::MatrixXd normalize_by_strengths(const SupraMatrix& s,
                                              const Eigen::VectorXd& strength) {
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        if (strength(k) <= 0.0) {
            const auto [layer, node] = unflatten(k, s.n, s.h);
            throw ZeroStrengthError("zero strength: node " + std::to_string(node) + " of layer " +
                                        std::to_string(layer) +
                                        " has no connections; normalization undefined",
                                    layer, node);
        }
    }
    const Eigen::VectorXd inv_sqrt = strength.array().rsqrt();
    return inv_sqrt.asDiagonal() * s.entries * inv_sqrt.asDiagonal();
}

}  // namespace detail

// D^{-1/2} s D^{-1/2} with D[k][k] = full supra-row strength of k. Throws
// ZeroStrengthError naming the offending node/layer when some row sums to
// zero, which can only happen at omega = 0 with a node isolated inside its
// layer.
inline Eigen::MatrixXd strength_normalize(const SupraMatrix& s) {
    return detail::normalize_by_strengths(s, s.entries.rowwise().sum());
}

// Intra-layer strengths of every replica, in supra order.
inline Eigen::VectorXd intra_layer_strengths(const MultiplexNetwork& m) {
    Eigen::VectorXd strength(m.n() * m.h());
    for (Eigen::Index a = 0; a < m.h(); ++a) {
        strength.segment(a * m.n(), m.n()) = m.layer(a).weights().rowwise().sum();
    }
    return strength;
}

// exp(s) for symmetric s via eigendecomposition s = U diag(l) U^T, so
// exp(s) = U diag(exp(l)) U^T. The result is re-symmetrized as (R + R^T)/2
// to remove round-off asymmetry.
inline Eigen::MatrixXd matrix_exponential_symmetric(const Eigen::MatrixXd& s) {
    if (!s.allFinite()) {
        throw ValidationError("matrix exponential: input has non-finite entries");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s);
    if (solver.info() != Eigen::Success) {
        throw Error("matrix exponential: eigendecomposition failed");
    }
    const Eigen::MatrixXd& u = solver.eigenvectors();
    const Eigen::VectorXd exp_l = solver.eigenvalues().array().exp();
    Eigen::MatrixXd r = u * exp_l.asDiagonal() * u.transpose();
    return 0.5 * (r + r.transpose());
}

// The nh x nh communicability matrix G(omega) together with the omega it was
// evaluated at and whether strength normalization was applied.
struct CommunicabilityResult {
    Eigen::MatrixXd g;
    double omega = 0.0;
    bool normalized = true;
    Eigen::Index n = 0;
    Eigen::Index h = 0;

    Eigen::Index size() const noexcept { return n * h; }
};

// Full pipeline: assemble the supra matrix at m.omega(), normalize per the
// requested mode, exponentiate.
inline CommunicabilityResult multiplex_communicability(
    const MultiplexNetwork& m, Normalization mode = Normalization::SupraRow) {
    const SupraMatrix s = assemble_supra(m);
    if (mode == Normalization::None) {
        return {matrix_exponential_symmetric(s.entries), m.omega(), false, s.n, s.h};
    }
    if (mode == Normalization::IntraLayer || m.omega() == 0.0) {
        // Name the node by label before the generic normalization guard fires.
        for (Eigen::Index a = 0; a < m.h(); ++a) {
            const LayerNetwork& l = m.layer(a);
            for (Eigen::Index i = 0; i < m.n(); ++i) {
                if (l.strength(i) == 0.0) {
                    throw ZeroStrengthError(
                        "zero strength: node '" + m.labels()[std::size_t(i)] +
                            "' is isolated in layer '" + l.name() + "'",
                        a, i);
                }
            }
        }
    }
    const Eigen::MatrixXd normalized =
        mode == Normalization::IntraLayer
            ? detail::normalize_by_strengths(s, intra_layer_strengths(m))
            : strength_normalize(s);
    return {matrix_exponential_symmetric(normalized), m.omega(), true, s.n, s.h};
}

// Pairwise distances xi, their node and network averages, and the multiplex
// total distance delta_m.
struct DistanceSummary {
    Eigen::MatrixXd xi;           // nh x nh, symmetric, zero diagonal
    Eigen::VectorXd xi_bar_node;  // per-node average, divisor nh - 1
    double xi_bar = 0.0;
    double delta_m = 0.0;
    Eigen::Index n = 0;
    Eigen::Index h = 0;

    Eigen::Index size() const noexcept { return n * h; }

    // View of the (alpha, alpha) block: distances between nodes of one layer
    // (still informed by inter-layer walks through g).
    Eigen::Block<const Eigen::MatrixXd> layer_block(Eigen::Index alpha) const {
        return xi.block(alpha * n, alpha * n, n, n);
    }
};

inline DistanceSummary distance_matrix(const CommunicabilityResult& c) {
    const Eigen::Index size = c.size();
    if (size < 2) {
        throw ValidationError("distance_matrix: need at least 2 supra nodes");
    }
    DistanceSummary d;
    d.n = c.n;
    d.h = c.h;
    const Eigen::VectorXd diag = c.g.diagonal();
    d.xi = (diag.replicate(1, size) + diag.transpose().replicate(size, 1) - 2.0 * c.g)
               .cwiseMax(0.0);  // clamp round-off negatives; exact value is >= 0
    d.xi.diagonal().setZero();
    d.xi_bar_node = d.xi.rowwise().sum() / static_cast<double>(size - 1);
    d.xi_bar = d.xi_bar_node.mean();
    // Closed form: delta_m = 2 (N tr g - sum g) / (N - 1); equals N * xi_bar.
    d.delta_m = 2.0 * (static_cast<double>(size) * c.g.trace() - c.g.sum()) /
                static_cast<double>(size - 1);
    return d;
}

// Cohesion over the whole multiplex. gamma is symmetric and its grand sum
// (all ordered pairs, diagonal included) equals delta_m.
inline Eigen::MatrixXd cohesion_matrix(const DistanceSummary& d) {
    const Eigen::Index size = d.size();
    return d.xi_bar_node.replicate(1, size) + d.xi_bar_node.transpose().replicate(size, 1) -
           Eigen::MatrixXd::Constant(size, size, d.xi_bar) - d.xi;
}

// Cohesion restricted to one layer: distances come from the full multiplex
// communicability, but the averages are recomputed over that layer's n nodes
// only (divisors n - 1 and n (n - 1)).
inline Eigen::MatrixXd layer_cohesion_matrix(const DistanceSummary& d, Eigen::Index alpha) {
    if (alpha < 0 || alpha >= d.h) {
        throw std::out_of_range("layer_cohesion_matrix: layer " + std::to_string(alpha) +
                                " out of range [0, " + std::to_string(d.h) + ")");
    }
    const Eigen::Index n = d.n;
    if (n < 2) {
        throw ValidationError("layer_cohesion_matrix: need at least 2 nodes per layer");
    }
    const Eigen::MatrixXd xi = d.layer_block(alpha);
    const Eigen::VectorXd node_avg = xi.rowwise().sum() / static_cast<double>(n - 1);
    const double layer_avg = xi.sum() / static_cast<double>(n * (n - 1));
    return node_avg.replicate(1, n) + node_avg.transpose().replicate(n, 1) -
           Eigen::MatrixXd::Constant(n, n, layer_avg) - xi;
}

}  // namespace plexcomm
