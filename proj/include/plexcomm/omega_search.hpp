#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "plexcomm/communicability.hpp"
#include "plexcomm/errors.hpp"
#include "plexcomm/multiplex.hpp"
#include "plexcomm/parallel.hpp"

namespace plexcomm {

// Search for the inter-layer intensity omega* minimizing the multiplex total
// distance delta_m(omega) on [0, 1]. delta_m is continuous but not proven
// unimodal, so a coarse uniform grid guards against multiple local minima and
// golden-section search refines the best bracket.

struct OmegaSearchResult {
    double omega_star = 0.0;
    double delta_m_star = 0.0;
    std::vector<std::pair<double, double>> curve;  // grid samples (omega, delta_m)
    bool boundary = false;                         // omega* at a domain endpoint
    // |central difference of delta_m at omega*| with step 1e-5; NaN when the
    // stencil would leave the domain. Meaningful only for interior minimizers.
    double stationarity_residual = std::numeric_limits<double>::quiet_NaN();
    double domain_min = 0.0;  // 0, or the epsilon fallback when omega = 0 is infeasible
};

// delta_m(omega): assemble -> normalize (if requested) -> exp -> total distance.
// Deterministic for fixed input; propagates ZeroStrengthError at omega = 0
// when some node is isolated inside its layer.
inline double delta_m_of_omega(const MultiplexNetwork& m, double omega,
                               Normalization mode = Normalization::SupraRow) {
    if (!(omega >= 0.0 && omega <= 1.0)) {
        throw ValidationError("delta_m_of_omega: omega must lie in [0, 1], got " +
                              std::to_string(omega));
    }
    return distance_matrix(multiplex_communicability(m.with_omega(omega), mode)).delta_m;
}

namespace detail {

inline constexpr double kGoldenRatio = 0.6180339887498949;  // (sqrt(5) - 1) / 2
inline constexpr double kOmegaZeroFallback = 1e-6;
inline constexpr double kStationarityStep = 1e-5;

// Golden-section minimization on [lo, hi] until hi - lo < tol. Returns every
// evaluated sample so the caller can keep the overall best.
template <typename F>
std::vector<std::pair<double, double>> golden_section_samples(F&& f, double lo, double hi,
                                                              double tol) {
    std::vector<std::pair<double, double>> samples;
    double x1 = hi - kGoldenRatio * (hi - lo);
    double x2 = lo + kGoldenRatio * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    samples.emplace_back(x1, f1);
    samples.emplace_back(x2, f2);
    while (hi - lo > tol) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kGoldenRatio * (hi - lo);
            f1 = f(x1);
            samples.emplace_back(x1, f1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kGoldenRatio * (hi - lo);
            f2 = f(x2);
            samples.emplace_back(x2, f2);
        }
    }
    return samples;
}

}  // namespace detail

// Grid scan plus golden-section refinement. The grid spans [domain_min, 1]
// where domain_min is 0, or 1e-6 when omega = 0 is infeasible (isolated node
// under normalization). Ties on the grid refine around the smallest omega.
inline OmegaSearchResult find_omega_star(const MultiplexNetwork& m, int grid_points = 101,
                                         double refine_tol = 1e-4,
                                         Normalization mode = Normalization::SupraRow) {
    if (grid_points < 3) {
        throw ValidationError("find_omega_star: need at least 3 grid points, got " +
                              std::to_string(grid_points));
    }
    if (!(refine_tol > 0.0)) {
        throw ValidationError("find_omega_star: refine_tol must be positive");
    }

    OmegaSearchResult result;
    result.domain_min = (mode == Normalization::SupraRow && m.has_isolated_node())
                            ? detail::kOmegaZeroFallback
                            : 0.0;

    const auto objective = [&](double omega) { return delta_m_of_omega(m, omega, mode); };

    // Grid evaluations are independent; run them concurrently and merge by index.
    const std::size_t count = static_cast<std::size_t>(grid_points);
    result.curve.assign(count, {0.0, 0.0});
    const double span = 1.0 - result.domain_min;
    detail::parallel_for(count, [&](std::size_t k) {
        const double omega =
            (k + 1 == count) ? 1.0
                             : result.domain_min + span * static_cast<double>(k) /
                                                       static_cast<double>(count - 1);
        result.curve[k] = {omega, objective(omega)};
    });

    std::size_t best = 0;
    for (std::size_t k = 1; k < count; ++k) {
        if (result.curve[k].second < result.curve[best].second) best = k;
    }

    const double lo = (best == 0) ? result.curve[0].first : result.curve[best - 1].first;
    const double hi = (best + 1 == count) ? result.curve[count - 1].first
                                          : result.curve[best + 1].first;
    result.omega_star = result.curve[best].first;
    result.delta_m_star = result.curve[best].second;
    if (hi - lo > refine_tol) {
        for (const auto& [x, fx] : detail::golden_section_samples(objective, lo, hi, refine_tol)) {
            if (fx < result.delta_m_star) {
                result.omega_star = x;
                result.delta_m_star = fx;
            }
        }
    }

    result.boundary = (result.omega_star - result.domain_min <= refine_tol) ||
                      (1.0 - result.omega_star <= refine_tol);

    const double step = detail::kStationarityStep;
    if (result.omega_star - step >= result.domain_min && result.omega_star + step <= 1.0) {
        result.stationarity_residual =
            std::abs((objective(result.omega_star + step) - objective(result.omega_star - step)) /
                     (2.0 * step));
    }
    return result;
}

}  // namespace plexcomm
