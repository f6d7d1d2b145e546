#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>

#include "plexcomm/errors.hpp"
#include "plexcomm/layer.hpp"
#include "plexcomm/multiplex.hpp"
#include "plexcomm/parallel.hpp"

namespace plexcomm {

// Correlation-layer construction: per-entity time series -> pairwise Pearson
// correlation with a two-sided t-test -> significant pairs weighted by the
// Mantegna map d = 1 - sqrt(2 (1 - rho)) / 2, which sends [-1, 1] to [0, 1]
// monotonically. Non-significant pairs get weight 0 (absent edge).

// Entity series on a shared, strictly increasing date index. NaN marks
// missing observations.
class TimeSeriesTable {
public:
    TimeSeriesTable(std::vector<std::string> entities, std::vector<std::string> dates,
                    Eigen::MatrixXd values)
        : entities_(std::move(entities)), dates_(std::move(dates)), values_(std::move(values)) {
        if (values_.rows() != static_cast<Eigen::Index>(dates_.size()) ||
            values_.cols() != static_cast<Eigen::Index>(entities_.size())) {
            throw ValidationError("time series table: value matrix shape does not match index");
        }
        for (std::size_t t = 1; t < dates_.size(); ++t) {
            if (!(dates_[t - 1] < dates_[t])) {
                throw ValidationError("time series table: date index not strictly increasing at '" +
                                      dates_[t] + "'");
            }
        }
    }

    const std::vector<std::string>& entities() const noexcept { return entities_; }
    const std::vector<std::string>& dates() const noexcept { return dates_; }
    const Eigen::MatrixXd& values() const noexcept { return values_; }

    Eigen::VectorXd series(Eigen::Index entity) const { return values_.col(entity); }

    // Long form: entity,date,value with ISO dates; an empty value field means
    // missing. A header row is skipped when its value field is not numeric.
    static TimeSeriesTable from_csv(std::istream& in, const std::string& origin = "<stream>");
    static TimeSeriesTable from_csv_file(const std::string& path);

    // Pairwise flow form: reporter,partner,period,value. Flows are aggregated
    // to per-reporter totals per period before correlation.
    static TimeSeriesTable from_flow_csv(std::istream& in, const std::string& origin = "<stream>");
    static TimeSeriesTable from_flow_csv_file(const std::string& path);

private:
    std::vector<std::string> entities_;
    std::vector<std::string> dates_;
    Eigen::MatrixXd values_;
};

struct CorrelationLayerSpec {
    enum class MissingPolicy { PairwiseComplete, DropEntity };

    double significance_level = 0.05;
    int min_overlap = 10;
    MissingPolicy missing_policy = MissingPolicy::PairwiseComplete;
};

struct PearsonResult {
    double rho = 0.0;
    double p = 1.0;
    int n_obs = 0;
};

// Pearson correlation on the pairwise-complete observations of x and y, with
// the two-sided p-value of t = rho sqrt((n-2)/(1-rho^2)) on n-2 degrees of
// freedom. Requires n >= 3 overlapping observations and non-constant aligned
// series.
inline PearsonResult pearson_with_pvalue(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    if (x.size() != y.size()) {
        throw ValidationError("pearson_with_pvalue: series lengths differ");
    }
    double sx = 0.0, sy = 0.0;
    int n = 0;
    for (Eigen::Index t = 0; t < x.size(); ++t) {
        if (std::isfinite(x(t)) && std::isfinite(y(t))) {
            sx += x(t);
            sy += y(t);
            ++n;
        }
    }
    if (n < 3) {
        throw InsufficientOverlapError("pearson: only " + std::to_string(n) +
                                       " paired observations, need at least 3");
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (Eigen::Index t = 0; t < x.size(); ++t) {
        if (std::isfinite(x(t)) && std::isfinite(y(t))) {
            const double dx = x(t) - mx;
            const double dy = y(t) - my;
            sxx += dx * dx;
            syy += dy * dy;
            sxy += dx * dy;
        }
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw ConstantSeriesError("pearson: a series is constant on the paired observations");
    }
    double rho = sxy / std::sqrt(sxx * syy);
    rho = std::clamp(rho, -1.0, 1.0);

    double p = 0.0;
    const double one_minus_r2 = (1.0 - rho) * (1.0 + rho);
    if (one_minus_r2 > 0.0) {
        const double t_stat = rho * std::sqrt(static_cast<double>(n - 2) / one_minus_r2);
        const boost::math::students_t_distribution<double> dist(static_cast<double>(n - 2));
        p = 2.0 * boost::math::cdf(dist, -std::abs(t_stat));
    }
    return {rho, p, n};
}

// d = 1 - sqrt(2 (1 - rho)) / 2. Strictly increasing; d(-1) = 0, d(1) = 1.
inline double mantegna_distance(double rho) {
    if (!(rho >= -1.0 && rho <= 1.0)) {
        throw std::domain_error("mantegna_distance: correlation " + std::to_string(rho) +
                                " outside [-1, 1]");
    }
    return 1.0 - 0.5 * std::sqrt(2.0 * (1.0 - rho));
}

struct PairStat {
    enum class Status { Ok, InsufficientOverlap, ConstantSeries };

    int i = 0;
    int j = 0;
    double rho = std::numeric_limits<double>::quiet_NaN();
    double p = std::numeric_limits<double>::quiet_NaN();
    int n_obs = 0;
    Status status = Status::Ok;
    bool significant = false;
    double weight = 0.0;
};

struct BuildReport {
    std::string layer;
    std::vector<std::string> dropped_entities;  // whole series missing (or any gap
                                                // under the drop-entity policy)
    long significant_pairs = 0;
    long non_significant_pairs = 0;  // tested, p >= significance level
    long insufficient_overlap_pairs = 0;
    long constant_pairs = 0;
    double density = 0.0;  // fraction of node pairs with an edge
    double mean_significant_rho = std::numeric_limits<double>::quiet_NaN();
    std::vector<PairStat> pairs;
};

// Builds one correlation layer. Entities whose series is entirely missing are
// dropped and reported; every remaining pair is tested and weighted by the
// Mantegna distance when significant, 0 otherwise.
inline std::pair<LayerNetwork, BuildReport> build_layer(const TimeSeriesTable& table,
                                                        const CorrelationLayerSpec& spec,
                                                        const std::string& name) {
    if (!(spec.significance_level > 0.0 && spec.significance_level < 1.0)) {
        throw ValidationError("build_layer: significance level must lie in (0, 1)");
    }

    BuildReport report;
    report.layer = name;

    std::vector<Eigen::Index> kept;
    for (Eigen::Index e = 0; e < static_cast<Eigen::Index>(table.entities().size()); ++e) {
        const Eigen::VectorXd col = table.values().col(e);
        const Eigen::Index observed = (col.array().isFinite()).count();
        const bool drop = (observed == 0) ||
                          (spec.missing_policy == CorrelationLayerSpec::MissingPolicy::DropEntity &&
                           observed < col.size());
        if (drop) {
            report.dropped_entities.push_back(table.entities()[static_cast<std::size_t>(e)]);
        } else {
            kept.push_back(e);
        }
    }
    const int m = static_cast<int>(kept.size());
    if (m < 2) {
        throw ValidationError("build_layer '" + name + "': fewer than 2 usable entities");
    }

    std::vector<std::string> labels;
    labels.reserve(kept.size());
    for (Eigen::Index e : kept) labels.push_back(table.entities()[static_cast<std::size_t>(e)]);

    const std::size_t n_pairs = static_cast<std::size_t>(m) * (m - 1) / 2;
    report.pairs.resize(n_pairs);

    // Pair evaluations are independent; merge is by pair index.
    detail::parallel_for(n_pairs, [&](std::size_t flat) {
        // Unrank the pair (i < j) from its position in column-major i<j order.
        std::size_t r = flat;
        int j = 1;
        while (r >= static_cast<std::size_t>(j)) {
            r -= static_cast<std::size_t>(j);
            ++j;
        }
        const int i = static_cast<int>(r);

        PairStat& ps = report.pairs[flat];
        ps.i = i;
        ps.j = j;
        const Eigen::VectorXd x = table.values().col(kept[static_cast<std::size_t>(i)]);
        const Eigen::VectorXd y = table.values().col(kept[static_cast<std::size_t>(j)]);
        try {
            int overlap = 0;
            for (Eigen::Index t = 0; t < x.size(); ++t) {
                if (std::isfinite(x(t)) && std::isfinite(y(t))) ++overlap;
            }
            if (overlap < spec.min_overlap) {
                throw InsufficientOverlapError("pair overlap " + std::to_string(overlap) +
                                               " below minimum " +
                                               std::to_string(spec.min_overlap));
            }
            const PearsonResult pr = pearson_with_pvalue(x, y);
            ps.rho = pr.rho;
            ps.p = pr.p;
            ps.n_obs = pr.n_obs;
            ps.significant = pr.p < spec.significance_level;
            ps.weight = ps.significant ? mantegna_distance(pr.rho) : 0.0;
        } catch (const InsufficientOverlapError&) {
            ps.status = PairStat::Status::InsufficientOverlap;
        } catch (const ConstantSeriesError&) {
            ps.status = PairStat::Status::ConstantSeries;
        }
    });

    Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(m, m);
    double rho_sum = 0.0;
    for (const PairStat& ps : report.pairs) {
        switch (ps.status) {
            case PairStat::Status::InsufficientOverlap:
                ++report.insufficient_overlap_pairs;
                break;
            case PairStat::Status::ConstantSeries:
                ++report.constant_pairs;
                break;
            case PairStat::Status::Ok:
                if (ps.significant) {
                    ++report.significant_pairs;
                    rho_sum += ps.rho;
                    weights(ps.i, ps.j) = ps.weight;
                    weights(ps.j, ps.i) = ps.weight;
                } else {
                    ++report.non_significant_pairs;
                }
                break;
        }
    }
    report.density = static_cast<double>(report.significant_pairs) / static_cast<double>(n_pairs);
    if (report.significant_pairs > 0) {
        report.mean_significant_rho = rho_sum / static_cast<double>(report.significant_pairs);
    }
    return {LayerNetwork(name, std::move(labels), std::move(weights)), std::move(report)};
}

struct AlignReport {
    std::vector<std::string> kept;  // shared label order after alignment
    std::vector<std::pair<std::string, std::vector<std::string>>> excluded;  // per layer
};

// Restricts all layers to the intersection of their entity sets, in the order
// the first layer lists them. Entities missing from any layer are excluded
// everywhere and reported per layer.
inline std::pair<std::vector<LayerNetwork>, AlignReport> align_entities(
    const std::vector<LayerNetwork>& layers) {
    if (layers.size() < 2) {
        throw ValidationError("align_entities: need at least 2 layers");
    }
    std::set<std::string> common(layers.front().labels().begin(), layers.front().labels().end());
    for (const LayerNetwork& l : layers) {
        std::set<std::string> here(l.labels().begin(), l.labels().end());
        std::set<std::string> keep;
        std::set_intersection(common.begin(), common.end(), here.begin(), here.end(),
                              std::inserter(keep, keep.begin()));
        common = std::move(keep);
    }
    if (common.empty()) {
        throw ValidationError("align_entities: no entity is present in every layer");
    }

    AlignReport report;
    for (const std::string& label : layers.front().labels()) {
        if (common.count(label)) report.kept.push_back(label);
    }

    std::vector<LayerNetwork> aligned;
    aligned.reserve(layers.size());
    for (const LayerNetwork& l : layers) {
        std::vector<std::string> excluded;
        for (const std::string& label : l.labels()) {
            if (!common.count(label)) excluded.push_back(label);
        }
        report.excluded.emplace_back(l.name(), std::move(excluded));

        std::vector<Eigen::Index> idx;
        idx.reserve(report.kept.size());
        for (const std::string& label : report.kept) idx.push_back(l.id_of(label));
        Eigen::MatrixXd w(idx.size(), idx.size());
        for (std::size_t b = 0; b < idx.size(); ++b) {
            for (std::size_t a = 0; a < idx.size(); ++a) {
                w(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                    l.weights()(idx[a], idx[b]);
            }
        }
        aligned.emplace_back(l.name(), report.kept, std::move(w));
    }
    return {std::move(aligned), std::move(report)};
}

// ---------------------------------------------------------------------------
// CSV parsing

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
        std::size_t start = 0;
        while (start < field.size() && field[start] == ' ') ++start;
        fields.push_back(field.substr(start));
    }
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

inline bool parse_double(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

struct RecordAccumulator {
    std::vector<std::string> entities;
    std::map<std::string, Eigen::Index> entity_index;
    std::set<std::string> dates;
    // (entity, date) -> value; NaN marks an explicit missing marker.
    std::map<std::pair<std::string, std::string>, double> cells;

    void add(const std::string& entity, const std::string& date, double value, bool accumulate,
             const std::string& origin, std::size_t line_no) {
        if (entity_index.emplace(entity, static_cast<Eigen::Index>(entities.size())).second) {
            entities.push_back(entity);
        }
        dates.insert(date);
        auto key = std::make_pair(entity, date);
        auto it = cells.find(key);
        if (it == cells.end()) {
            cells.emplace(std::move(key), value);
        } else if (accumulate) {
            if (std::isfinite(value)) {
                it->second = std::isfinite(it->second) ? it->second + value : value;
            }
        } else {
            throw IoError(origin + ":" + std::to_string(line_no) + ": duplicate observation for '" +
                          entity + "' on " + date);
        }
    }

    TimeSeriesTable finish() const {
        std::vector<std::string> date_index(dates.begin(), dates.end());
        Eigen::MatrixXd values = Eigen::MatrixXd::Constant(
            static_cast<Eigen::Index>(date_index.size()),
            static_cast<Eigen::Index>(entities.size()), std::numeric_limits<double>::quiet_NaN());
        std::map<std::string, Eigen::Index> date_pos;
        for (std::size_t t = 0; t < date_index.size(); ++t) {
            date_pos.emplace(date_index[t], static_cast<Eigen::Index>(t));
        }
        for (const auto& [key, value] : cells) {
            values(date_pos.at(key.second), entity_index.at(key.first)) = value;
        }
        return TimeSeriesTable(entities, std::move(date_index), std::move(values));
    }
};

}  // namespace detail

inline TimeSeriesTable TimeSeriesTable::from_csv(std::istream& in, const std::string& origin) {
    detail::RecordAccumulator acc;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> f = detail::split_csv_line(line);
        if (f.size() != 3) {
            throw IoError(origin + ":" + std::to_string(line_no) +
                          ": expected 3 fields (entity,date,value), got " +
                          std::to_string(f.size()));
        }
        double value = std::numeric_limits<double>::quiet_NaN();
        if (!f[2].empty() && !detail::parse_double(f[2], value)) {
            if (line_no == 1) continue;  // header row
            throw IoError(origin + ":" + std::to_string(line_no) + ": bad value '" + f[2] + "'");
        }
        acc.add(f[0], f[1], value, /*accumulate=*/false, origin, line_no);
    }
    if (acc.entities.empty()) {
        throw IoError(origin + ": no records");
    }
    return acc.finish();
}

inline TimeSeriesTable TimeSeriesTable::from_flow_csv(std::istream& in,
                                                      const std::string& origin) {
    detail::RecordAccumulator acc;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> f = detail::split_csv_line(line);
        if (f.size() != 4) {
            throw IoError(origin + ":" + std::to_string(line_no) +
                          ": expected 4 fields (reporter,partner,period,value), got " +
                          std::to_string(f.size()));
        }
        double value = std::numeric_limits<double>::quiet_NaN();
        if (!f[3].empty() && !detail::parse_double(f[3], value)) {
            if (line_no == 1) continue;  // header row
            throw IoError(origin + ":" + std::to_string(line_no) + ": bad value '" + f[3] + "'");
        }
        acc.add(f[0], f[2], value, /*accumulate=*/true, origin, line_no);
    }
    if (acc.entities.empty()) {
        throw IoError(origin + ": no records");
    }
    return acc.finish();
}

inline TimeSeriesTable TimeSeriesTable::from_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return from_csv(in, path);
}

inline TimeSeriesTable TimeSeriesTable::from_flow_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return from_flow_csv(in, path);
}

}  // namespace plexcomm
