#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "plexcomm/errors.hpp"
#include "plexcomm/layer.hpp"

namespace plexcomm {

// h >= 2 layers over one shared node set plus the inter-layer intensity
// omega in [0, 1]. Every replica of node i is coupled to every other replica
// of node i with weight omega.
//
// Immutable after construction.
class MultiplexNetwork {
public:
    MultiplexNetwork(std::vector<LayerNetwork> layers, double omega)
        : layers_(std::move(layers)), omega_(omega) {
        if (layers_.size() < 2) {
            throw ValidationError("multiplex needs at least 2 layers, got " +
                                  std::to_string(layers_.size()));
        }
        if (!(omega_ >= 0.0 && omega_ <= 1.0)) {
            throw ValidationError("omega must lie in [0, 1], got " + std::to_string(omega_));
        }
        const LayerNetwork& first = layers_.front();
        for (const LayerNetwork& l : layers_) {
            if (l.size() != first.size()) {
                throw ValidationError("layer '" + l.name() + "' has " + std::to_string(l.size()) +
                                      " nodes, expected " + std::to_string(first.size()));
            }
            if (l.labels() != first.labels()) {
                throw ValidationError("layer '" + l.name() +
                                      "' does not share the label order of layer '" +
                                      first.name() + "'");
            }
        }
    }

    Eigen::Index h() const noexcept { return static_cast<Eigen::Index>(layers_.size()); }
    Eigen::Index n() const noexcept { return layers_.front().size(); }
    double omega() const noexcept { return omega_; }

    const std::vector<LayerNetwork>& layers() const noexcept { return layers_; }
    const LayerNetwork& layer(Eigen::Index alpha) const {
        if (alpha < 0 || alpha >= h()) {
            throw std::out_of_range("layer index " + std::to_string(alpha) + " out of range [0, " +
                                    std::to_string(h()) + ")");
        }
        return layers_[static_cast<std::size_t>(alpha)];
    }

    const std::vector<std::string>& labels() const noexcept { return layers_.front().labels(); }

    MultiplexNetwork with_omega(double omega) const { return MultiplexNetwork(layers_, omega); }

    // True if some node has zero strength inside some layer; at omega = 0 such
    // a node makes the strength normalization undefined.
    bool has_isolated_node() const {
        for (const LayerNetwork& l : layers_) {
            if (l.has_isolated_node()) return true;
        }
        return false;
    }

    bool is_binary() const {
        for (const LayerNetwork& l : layers_) {
            if (!l.is_binary()) return false;
        }
        return true;
    }

private:
    std::vector<LayerNetwork> layers_;
    double omega_;
};

// Flat supra index: node i of layer alpha sits at alpha*n + i, so each layer
// occupies one contiguous diagonal block.
inline Eigen::Index flat_index(Eigen::Index layer, Eigen::Index node, Eigen::Index n,
                               Eigen::Index h) {
    if (layer < 0 || layer >= h) {
        throw std::out_of_range("flat_index: layer " + std::to_string(layer) +
                                " out of range [0, " + std::to_string(h) + ")");
    }
    if (node < 0 || node >= n) {
        throw std::out_of_range("flat_index: node " + std::to_string(node) + " out of range [0, " +
                                std::to_string(n) + ")");
    }
    return layer * n + node;
}

// Exact inverse of flat_index.
inline std::pair<Eigen::Index, Eigen::Index> unflatten(Eigen::Index k, Eigen::Index n,
                                                       Eigen::Index h) {
    if (k < 0 || k >= n * h) {
        throw std::out_of_range("unflatten: index " + std::to_string(k) + " out of range [0, " +
                                std::to_string(n * h) + ")");
    }
    return {k / n, k % n};
}

// The nh x nh supra-adjacency matrix: diagonal blocks are the layer weight
// matrices, block (alpha, beta) with alpha != beta is omega * I.
struct SupraMatrix {
    Eigen::Index n = 0;
    Eigen::Index h = 0;
    Eigen::MatrixXd entries;

    Eigen::Index size() const noexcept { return n * h; }
};

inline SupraMatrix assemble_supra(const MultiplexNetwork& m) {
    const Eigen::Index n = m.n();
    const Eigen::Index h = m.h();
    SupraMatrix s{n, h, Eigen::MatrixXd::Zero(n * h, n * h)};
    for (Eigen::Index a = 0; a < h; ++a) {
        s.entries.block(a * n, a * n, n, n) = m.layer(a).weights();
        for (Eigen::Index b = 0; b < h; ++b) {
            if (a == b) continue;
            s.entries.block(a * n, b * n, n, n).diagonal().setConstant(m.omega());
        }
    }
    return s;
}

}  // namespace plexcomm
