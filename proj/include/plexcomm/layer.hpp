#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "plexcomm/errors.hpp"

namespace plexcomm {

// One weighted, undirected layer: a symmetric n x n weight matrix with zero
// diagonal and entries in [0, 1]. Node identity is positional; labels provide
// the id <-> label bijection shared by every layer of a multiplex.
//
// Immutable after construction.
class LayerNetwork {
public:
    LayerNetwork(std::string name, std::vector<std::string> labels, Eigen::MatrixXd weights)
        : name_(std::move(name)), labels_(std::move(labels)), weights_(std::move(weights)) {
        validate();
        for (Eigen::Index i = 0; i < size(); ++i) {
            index_.emplace(labels_[static_cast<std::size_t>(i)], i);
        }
    }

    const std::string& name() const noexcept { return name_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const Eigen::MatrixXd& weights() const noexcept { return weights_; }

    Eigen::Index size() const noexcept { return weights_.rows(); }

    // Intra-layer strength: row sum of the weight matrix.
    double strength(Eigen::Index node) const {
        if (node < 0 || node >= size()) {
            throw std::out_of_range("LayerNetwork::strength: node " + std::to_string(node) +
                                    " out of range [0, " + std::to_string(size()) + ")");
        }
        return weights_.row(node).sum();
    }

    bool has_isolated_node() const {
        for (Eigen::Index i = 0; i < size(); ++i) {
            if (weights_.row(i).sum() == 0.0) return true;
        }
        return false;
    }

    Eigen::Index id_of(const std::string& label) const {
        auto it = index_.find(label);
        if (it == index_.end()) {
            throw ValidationError("LayerNetwork '" + name_ + "': unknown label '" + label + "'");
        }
        return it->second;
    }

    bool is_binary() const {
        for (Eigen::Index j = 0; j < size(); ++j) {
            for (Eigen::Index i = 0; i < size(); ++i) {
                const double w = weights_(i, j);
                if (w != 0.0 && w != 1.0) return false;
            }
        }
        return true;
    }

private:
    void validate() const {
        const Eigen::Index n = weights_.rows();
        if (weights_.cols() != n) {
            throw ValidationError("layer '" + name_ + "': weight matrix must be square, got " +
                                  std::to_string(n) + "x" + std::to_string(weights_.cols()));
        }
        if (static_cast<Eigen::Index>(labels_.size()) != n) {
            throw ValidationError("layer '" + name_ + "': " + std::to_string(labels_.size()) +
                                  " labels for " + std::to_string(n) + " nodes");
        }
        std::unordered_map<std::string, std::size_t> seen;
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            auto [it, inserted] = seen.emplace(labels_[i], i);
            if (!inserted) {
                throw ValidationError("layer '" + name_ + "': duplicate label '" + labels_[i] + "'");
            }
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            for (Eigen::Index i = 0; i < n; ++i) {
                const double w = weights_(i, j);
                if (!std::isfinite(w) || w < 0.0 || w > 1.0) {
                    throw ValidationError("layer '" + name_ + "': weight (" + std::to_string(i) +
                                          "," + std::to_string(j) + ") = " + std::to_string(w) +
                                          " outside [0, 1]");
                }
                if (w != weights_(j, i)) {
                    throw ValidationError("layer '" + name_ + "': weights not symmetric at (" +
                                          std::to_string(i) + "," + std::to_string(j) + ")");
                }
            }
            if (weights_(j, j) != 0.0) {
                throw ValidationError("layer '" + name_ + "': nonzero diagonal at node " +
                                      std::to_string(j));
            }
        }
    }

    std::string name_;
    std::vector<std::string> labels_;
    Eigen::MatrixXd weights_;
    std::unordered_map<std::string, Eigen::Index> index_;
};

}  // namespace plexcomm
