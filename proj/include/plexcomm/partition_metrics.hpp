#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "plexcomm/errors.hpp"

namespace plexcomm {

// Normalized mutual information between two partitions of the same node set,
// from the contingency table of community co-occurrence counts (natural log):
//
//   NMI = 2 I(A; B) / (H(A) + H(B))
//
// 1 for identical partitions up to relabeling, 0 for independent ones. When
// both partitions are the single all-nodes community (both entropies zero),
// NMI is 1 by convention.
inline double nmi(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) {
        throw ValidationError("nmi: partitions cover different node sets (" +
                              std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                              " nodes)");
    }
    if (a.empty()) throw ValidationError("nmi: empty partitions");
    if (std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end())) {
        return nmi(b, a);  // canonical argument order makes symmetry exact
    }
    const double n = static_cast<double>(a.size());

    const int ka = *std::max_element(a.begin(), a.end()) + 1;
    const int kb = *std::max_element(b.begin(), b.end()) + 1;
    if (*std::min_element(a.begin(), a.end()) < 0 || *std::min_element(b.begin(), b.end()) < 0) {
        throw ValidationError("nmi: community ids must be non-negative");
    }

    std::vector<double> joint(static_cast<std::size_t>(ka) * static_cast<std::size_t>(kb), 0.0);
    std::vector<double> ca(static_cast<std::size_t>(ka), 0.0);
    std::vector<double> cb(static_cast<std::size_t>(kb), 0.0);
    for (std::size_t v = 0; v < a.size(); ++v) {
        joint[static_cast<std::size_t>(a[v]) * static_cast<std::size_t>(kb) +
              static_cast<std::size_t>(b[v])] += 1.0;
        ca[static_cast<std::size_t>(a[v])] += 1.0;
        cb[static_cast<std::size_t>(b[v])] += 1.0;
    }

    double h_a = 0.0;
    for (double c : ca) {
        if (c > 0.0) h_a -= (c / n) * std::log(c / n);
    }
    double h_b = 0.0;
    for (double c : cb) {
        if (c > 0.0) h_b -= (c / n) * std::log(c / n);
    }
    if (h_a + h_b == 0.0) return 1.0;  // both partitions trivial

    double mi = 0.0;
    for (int i = 0; i < ka; ++i) {
        for (int j = 0; j < kb; ++j) {
            const double nij = joint[static_cast<std::size_t>(i) * static_cast<std::size_t>(kb) +
                                     static_cast<std::size_t>(j)];
            if (nij > 0.0) {
                mi += (nij / n) * std::log(n * nij / (ca[static_cast<std::size_t>(i)] *
                                                      cb[static_cast<std::size_t>(j)]));
            }
        }
    }
    return 2.0 * mi / (h_a + h_b);
}

}  // namespace plexcomm
