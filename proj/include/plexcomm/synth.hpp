#pragma once

#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "plexcomm/ingest.hpp"
#include "plexcomm/layer.hpp"
#include "plexcomm/multiplex.hpp"

namespace plexcomm {

// Seeded synthetic inputs: random multiplexes for property suites, planted
// community structures for recovery benchmarks, and group-correlated time
// series for exercising the ingest pipeline.

namespace detail {

inline std::vector<std::string> numbered_labels(int n, const std::string& prefix) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%s%03d", prefix.c_str(), i);
        labels.emplace_back(buf);
    }
    return labels;
}

}  // namespace detail

// Contiguous planted blocks of near-equal size; block ids ascending with the
// node index, so the assignment is already in canonical label order.
inline std::vector<int> planted_blocks(int n, int k) {
    std::vector<int> truth(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        truth[static_cast<std::size_t>(v)] = std::min(k - 1, v * k / n);
    }
    return truth;
}

// Weighted layer with i.i.d. edges: present with probability `density`,
// weight uniform in (0, 1).
inline LayerNetwork random_layer(int n, double density, const std::string& name,
                                 std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = j + 1; i < n; ++i) {
            if (unit(rng) < density) {
                const double v = unit(rng);
                w(i, j) = v;
                w(j, i) = v;
            }
        }
    }
    return LayerNetwork(name, detail::numbered_labels(n, "N"), std::move(w));
}

inline MultiplexNetwork random_multiplex(int n, int h, double density, double omega,
                                         std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<LayerNetwork> layers;
    layers.reserve(static_cast<std::size_t>(h));
    for (int a = 0; a < h; ++a) {
        layers.push_back(random_layer(n, density, "layer" + std::to_string(a), rng));
    }
    return MultiplexNetwork(std::move(layers), omega);
}

// Two cliques per layer: weight 1 inside each half, 0 across. The planted
// truth is planted_blocks(n, 2).
inline MultiplexNetwork planted_two_clique_multiplex(int n, int h, double omega) {
    const std::vector<int> truth = planted_blocks(n, 2);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = j + 1; i < n; ++i) {
            if (truth[static_cast<std::size_t>(i)] == truth[static_cast<std::size_t>(j)]) {
                w(i, j) = 1.0;
                w(j, i) = 1.0;
            }
        }
    }
    const std::vector<std::string> labels = detail::numbered_labels(n, "N");
    std::vector<LayerNetwork> layers;
    layers.reserve(static_cast<std::size_t>(h));
    for (int a = 0; a < h; ++a) {
        layers.emplace_back("layer" + std::to_string(a), labels, w);
    }
    return MultiplexNetwork(std::move(layers), omega);
}

// Correlated planted layers: every layer carries the same planted partition,
// with independent noise per layer. A `within_dropout` fraction of the
// within-community pairs of each layer is degraded to the across-community
// weight range, so a single layer sees a fragmented picture of the common
// structure while the stack of layers sees it whole.
struct PlantedSpec {
    int n = 12;
    int h = 3;
    int communities = 3;
    double within_lo = 0.6;
    double within_hi = 0.9;
    double across_lo = 0.05;
    double across_hi = 0.25;
    double within_dropout = 0.3;
    double omega = 0.0;  // omega stored on the returned multiplex
};

struct PlantedMultiplex {
    MultiplexNetwork multiplex;
    std::vector<int> truth;
};

inline PlantedMultiplex correlated_planted_multiplex(const PlantedSpec& spec, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> within(spec.within_lo, spec.within_hi);
    std::uniform_real_distribution<double> across(spec.across_lo, spec.across_hi);

    const std::vector<int> truth = planted_blocks(spec.n, spec.communities);
    const std::vector<std::string> labels = detail::numbered_labels(spec.n, "N");

    std::vector<LayerNetwork> layers;
    layers.reserve(static_cast<std::size_t>(spec.h));
    for (int a = 0; a < spec.h; ++a) {
        Eigen::MatrixXd w = Eigen::MatrixXd::Zero(spec.n, spec.n);
        for (int j = 0; j < spec.n; ++j) {
            for (int i = j + 1; i < spec.n; ++i) {
                const bool same =
                    truth[static_cast<std::size_t>(i)] == truth[static_cast<std::size_t>(j)];
                double v;
                if (same && unit(rng) >= spec.within_dropout) {
                    v = within(rng);
                } else {
                    v = across(rng);
                }
                w(i, j) = v;
                w(j, i) = v;
            }
        }
        layers.emplace_back("layer" + std::to_string(a), labels, std::move(w));
    }
    return {MultiplexNetwork(std::move(layers), spec.omega), truth};
}

// ---------------------------------------------------------------------------
// Synthetic time series for the ingest pipeline

struct SeriesSpec {
    int entities = 49;
    int days = 91;
    int groups = 4;
    double noise = 0.6;          // idiosyncratic noise on top of the group driver
    double missing_rate = 0.0;   // fraction of observations dropped at random
    std::string start_date = "2020-04-01";
};

namespace detail {

// start_date plus `offset` days, ISO formatted. Gregorian arithmetic through
// a day-number round trip.
inline std::string shift_iso_date(const std::string& start, int offset) {
    int y = 0, m = 0, d = 0;
    if (std::sscanf(start.c_str(), "%d-%d-%d", &y, &m, &d) != 3) {
        throw ValidationError("bad ISO date '" + start + "'");
    }
    // Days-from-civil / civil-from-days (Howard Hinnant's algorithms).
    auto to_days = [](int yy, int mm, int dd) {
        yy -= mm <= 2;
        const int era = (yy >= 0 ? yy : yy - 399) / 400;
        const unsigned yoe = static_cast<unsigned>(yy - era * 400);
        const unsigned doy = (153u * static_cast<unsigned>(mm + (mm > 2 ? -3 : 9)) + 2u) / 5u +
                             static_cast<unsigned>(dd) - 1u;
        const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
        return era * 146097 + static_cast<int>(doe) - 719468;
    };
    auto from_days = [](int z, int& yy, int& mm, int& dd) {
        z += 719468;
        const int era = (z >= 0 ? z : z - 146096) / 146097;
        const unsigned doe = static_cast<unsigned>(z - era * 146097);
        const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
        const int y0 = static_cast<int>(yoe) + era * 400;
        const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
        const unsigned mp = (5 * doy + 2) / 153;
        dd = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
        mm = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
        yy = y0 + (mm <= 2);
    };
    int yy, mm, dd;
    from_days(to_days(y, m, d) + offset, yy, mm, dd);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", yy, mm, dd);
    return buf;
}

}  // namespace detail

// Entities follow a per-group AR(1) driver plus idiosyncratic noise, so
// within-group correlations are strong and across-group ones weak.
inline TimeSeriesTable synthetic_series_table(const SeriesSpec& spec, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Eigen::MatrixXd drivers(spec.days, spec.groups);
    for (int g = 0; g < spec.groups; ++g) {
        double x = gauss(rng);
        for (int t = 0; t < spec.days; ++t) {
            x = 0.8 * x + gauss(rng);
            drivers(t, g) = x;
        }
    }

    const std::vector<int> group = planted_blocks(spec.entities, spec.groups);
    Eigen::MatrixXd values(spec.days, spec.entities);
    for (int e = 0; e < spec.entities; ++e) {
        for (int t = 0; t < spec.days; ++t) {
            double v = drivers(t, group[static_cast<std::size_t>(e)]) + spec.noise * gauss(rng);
            if (spec.missing_rate > 0.0 && unit(rng) < spec.missing_rate) {
                v = std::numeric_limits<double>::quiet_NaN();
            }
            values(t, e) = v;
        }
    }

    std::vector<std::string> dates;
    dates.reserve(static_cast<std::size_t>(spec.days));
    for (int t = 0; t < spec.days; ++t) {
        dates.push_back(detail::shift_iso_date(spec.start_date, t));
    }
    return TimeSeriesTable(detail::numbered_labels(spec.entities, "E"), std::move(dates),
                           std::move(values));
}

// Long-form CSV (entity,date,value); missing observations get an empty field.
inline std::string series_table_to_csv(const TimeSeriesTable& table) {
    std::string out = "entity,date,value\n";
    for (std::size_t e = 0; e < table.entities().size(); ++e) {
        for (std::size_t t = 0; t < table.dates().size(); ++t) {
            const double v =
                table.values()(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(e));
            out += table.entities()[e] + "," + table.dates()[t] + ",";
            if (std::isfinite(v)) {
                char buf[40];
                std::snprintf(buf, sizeof(buf), "%.17g", v);
                out += buf;
            }
            out += "\n";
        }
    }
    return out;
}

}  // namespace plexcomm
