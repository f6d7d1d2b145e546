#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "plexcomm/community.hpp"
#include "plexcomm/errors.hpp"
#include "plexcomm/ingest.hpp"
#include "plexcomm/layer.hpp"
#include "plexcomm/multiplex.hpp"
#include "plexcomm/omega_search.hpp"

namespace plexcomm {

// File formats:
//   layer JSON      {"name": str, "labels": [str], "weights": [[float]]}
//   multiplex JSON  {"layers": [path], "omega": float}, paths relative to the file
//   partition JSON  {"layer": str, "omega_star": float, "threshold": float,
//                    "quality": float, "communities": [[label, ...], ...]}
//   curve CSV       omega,delta_m
// CSV floats are written with 17 significant digits so runs are reproducible
// byte for byte; JSON numbers use the shortest round-trip representation.

namespace detail {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("'" + path + "': " + e.what());
    }
    return j;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << content;
    if (!out) throw IoError("write failed for '" + path + "'");
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Layer and multiplex files

inline void save_layer_json(const LayerNetwork& layer, const std::string& path) {
    nlohmann::json j;
    j["name"] = layer.name();
    j["labels"] = layer.labels();
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(layer.size()));
    for (Eigen::Index i = 0; i < layer.size(); ++i) {
        rows[static_cast<std::size_t>(i)].assign(layer.weights().row(i).begin(),
                                                 layer.weights().row(i).end());
    }
    j["weights"] = rows;
    detail::write_text_file(path, j.dump(2) + "\n");
}

inline LayerNetwork load_layer_json(const std::string& path) {
    const nlohmann::json j = detail::read_json_file(path);
    if (!j.is_object() || !j.contains("name") || !j.contains("labels") || !j.contains("weights")) {
        throw IoError("'" + path + "': layer file needs name, labels and weights");
    }
    try {
        const auto labels = j.at("labels").get<std::vector<std::string>>();
        const auto rows = j.at("weights").get<std::vector<std::vector<double>>>();
        const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
        Eigen::MatrixXd w(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != n) {
                throw IoError("'" + path + "': weights row " + std::to_string(i) +
                              " is not length " + std::to_string(n));
            }
            for (Eigen::Index k = 0; k < n; ++k) {
                w(i, k) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
            }
        }
        return LayerNetwork(j.at("name").get<std::string>(), labels, std::move(w));
    } catch (const nlohmann::json::exception& e) {
        throw IoError("'" + path + "': " + e.what());
    }
}

inline void save_multiplex_json(const std::vector<std::string>& layer_paths, double omega,
                                const std::string& path) {
    nlohmann::json j;
    j["layers"] = layer_paths;
    j["omega"] = omega;
    detail::write_text_file(path, j.dump(2) + "\n");
}

inline MultiplexNetwork load_multiplex_json(const std::string& path) {
    const nlohmann::json j = detail::read_json_file(path);
    if (!j.is_object() || !j.contains("layers") || !j.contains("omega")) {
        throw IoError("'" + path + "': multiplex file needs layers and omega");
    }
    std::vector<LayerNetwork> layers;
    try {
        const std::filesystem::path base = std::filesystem::path(path).parent_path();
        for (const auto& entry : j.at("layers")) {
            std::filesystem::path p = entry.get<std::string>();
            if (p.is_relative()) p = base / p;
            layers.push_back(load_layer_json(p.string()));
        }
        return MultiplexNetwork(std::move(layers), j.at("omega").get<double>());
    } catch (const nlohmann::json::exception& e) {
        throw IoError("'" + path + "': " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Partitions

inline nlohmann::json partition_to_json(const Partition& p, const std::vector<std::string>& labels,
                                        double omega_star) {
    std::vector<std::vector<std::string>> communities(
        static_cast<std::size_t>(p.num_communities));
    for (std::size_t v = 0; v < p.assignment.size(); ++v) {
        communities[static_cast<std::size_t>(p.assignment[v])].push_back(labels[v]);
    }
    nlohmann::json j;
    j["layer"] = p.layer;
    j["omega_star"] = omega_star;
    j["threshold"] = p.threshold;
    j["quality"] = p.quality;
    j["communities"] = communities;
    return j;
}

inline void save_partition_json(const Partition& p, const std::vector<std::string>& labels,
                                double omega_star, const std::string& path) {
    detail::write_text_file(path, partition_to_json(p, labels, omega_star).dump(2) + "\n");
}

struct LoadedPartition {
    std::string layer;
    double omega_star = 0.0;
    double threshold = 0.0;
    double quality = 0.0;
    std::vector<std::vector<std::string>> communities;
};

inline LoadedPartition load_partition_json(const std::string& path) {
    const nlohmann::json j = detail::read_json_file(path);
    for (const char* key : {"layer", "omega_star", "threshold", "quality", "communities"}) {
        if (!j.contains(key)) {
            throw IoError("'" + path + "': partition file is missing '" + std::string(key) + "'");
        }
    }
    try {
        LoadedPartition p;
        p.layer = j.at("layer").get<std::string>();
        p.omega_star = j.at("omega_star").get<double>();
        p.threshold = j.at("threshold").get<double>();
        p.quality = j.at("quality").get<double>();
        p.communities = j.at("communities").get<std::vector<std::vector<std::string>>>();
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("'" + path + "': " + e.what());
    }
}

inline void save_partition_csv(const Partition& p, const std::vector<std::string>& labels,
                               const std::string& path) {
    std::string out = "label,community_id\n";
    for (std::size_t v = 0; v < p.assignment.size(); ++v) {
        out += labels[v] + "," + std::to_string(p.assignment[v]) + "\n";
    }
    detail::write_text_file(path, out);
}

inline void save_sweep_csv(const ThresholdSweep& sweep, const std::string& path) {
    std::string out = "threshold,q\n";
    for (std::size_t k = 0; k < sweep.candidates.size(); ++k) {
        out += detail::fmt17(sweep.candidates[k]) + "," + detail::fmt17(sweep.q_values[k]) + "\n";
    }
    detail::write_text_file(path, out);
}

// ---------------------------------------------------------------------------
// Omega search artifacts

inline void save_curve_csv(const std::vector<std::pair<double, double>>& curve,
                           const std::string& path) {
    std::string out = "omega,delta_m\n";
    for (const auto& [omega, delta_m] : curve) {
        out += detail::fmt17(omega) + "," + detail::fmt17(delta_m) + "\n";
    }
    detail::write_text_file(path, out);
}

inline void save_omega_json(const OmegaSearchResult& r, int grid_points, double refine_tol,
                            const std::string& path) {
    nlohmann::json j;
    j["omega_star"] = r.omega_star;
    j["delta_m_star"] = r.delta_m_star;
    j["boundary"] = r.boundary;
    j["domain_min"] = r.domain_min;
    j["grid_points"] = grid_points;
    j["refine_tol"] = refine_tol;
    if (std::isfinite(r.stationarity_residual)) {
        j["stationarity_residual"] = r.stationarity_residual;
    } else {
        j["stationarity_residual"] = nullptr;
    }
    detail::write_text_file(path, j.dump(2) + "\n");
}

inline double load_omega_star(const std::string& path) {
    const nlohmann::json j = detail::read_json_file(path);
    if (!j.contains("omega_star")) {
        throw IoError("'" + path + "': missing 'omega_star'");
    }
    return j.at("omega_star").get<double>();
}

// ---------------------------------------------------------------------------
// Matrix dumps and NMI tables

// headers[k] should read "layer:label" for supra-indexed matrices.
inline void save_matrix_csv(const Eigen::MatrixXd& m, const std::vector<std::string>& headers,
                            const std::string& path) {
    std::string out;
    for (const std::string& hdr : headers) out += "," + hdr;
    out += "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out += headers[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < m.cols(); ++j) out += "," + detail::fmt17(m(i, j));
        out += "\n";
    }
    detail::write_text_file(path, out);
}

inline std::vector<std::string> supra_headers(const MultiplexNetwork& m) {
    std::vector<std::string> headers;
    headers.reserve(static_cast<std::size_t>(m.n() * m.h()));
    for (Eigen::Index a = 0; a < m.h(); ++a) {
        for (Eigen::Index i = 0; i < m.n(); ++i) {
            headers.push_back(m.layer(a).name() + ":" + m.labels()[static_cast<std::size_t>(i)]);
        }
    }
    return headers;
}

inline std::string nmi_matrix_csv(const std::vector<std::string>& names,
                                  const Eigen::MatrixXd& values) {
    std::string out;
    for (const std::string& name : names) out += "," + name;
    out += "\n";
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        out += names[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < values.cols(); ++j) out += "," + detail::fmt17(values(i, j));
        out += "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Graph exports of the thresholded layer graph with community coloring

inline void save_dot(const Eigen::MatrixXi& m_alpha, const std::vector<std::string>& labels,
                     const std::vector<int>& assignment, const std::string& graph_name,
                     const std::string& path) {
    const Eigen::Index n = m_alpha.rows();
    std::string out = "graph \"" + graph_name + "\" {\n  node [style=filled, colorscheme=set312];\n";
    for (Eigen::Index v = 0; v < n; ++v) {
        const int c = assignment[static_cast<std::size_t>(v)];
        out += "  \"" + labels[static_cast<std::size_t>(v)] + "\" [community=" + std::to_string(c) +
               ", fillcolor=" + std::to_string(c % 12 + 1) + "];\n";
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = j + 1; i < n; ++i) {
            if (m_alpha(i, j) != 0) {
                out += "  \"" + labels[static_cast<std::size_t>(j)] + "\" -- \"" +
                       labels[static_cast<std::size_t>(i)] + "\";\n";
            }
        }
    }
    out += "}\n";
    detail::write_text_file(path, out);
}

inline void save_graphml(const Eigen::MatrixXi& m_alpha, const std::vector<std::string>& labels,
                         const std::vector<int>& assignment, const std::string& graph_name,
                         const std::string& path) {
    const Eigen::Index n = m_alpha.rows();
    std::string out =
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
        "  <key id=\"community\" for=\"node\" attr.name=\"community\" attr.type=\"int\"/>\n"
        "  <graph id=\"" +
        detail::xml_escape(graph_name) + "\" edgedefault=\"undirected\">\n";
    for (Eigen::Index v = 0; v < n; ++v) {
        out += "    <node id=\"n" + std::to_string(v) + "\"><data key=\"label\">" +
               detail::xml_escape(labels[static_cast<std::size_t>(v)]) +
               "</data><data key=\"community\">" +
               std::to_string(assignment[static_cast<std::size_t>(v)]) + "</data></node>\n";
    }
    std::size_t e = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = j + 1; i < n; ++i) {
            if (m_alpha(i, j) != 0) {
                out += "    <edge id=\"e" + std::to_string(e++) + "\" source=\"n" +
                       std::to_string(j) + "\" target=\"n" + std::to_string(i) + "\"/>\n";
            }
        }
    }
    out += "  </graph>\n</graphml>\n";
    detail::write_text_file(path, out);
}

// ---------------------------------------------------------------------------
// Ingest reports

inline nlohmann::json build_report_to_json(const BuildReport& r, bool include_pairs) {
    nlohmann::json j;
    j["layer"] = r.layer;
    j["dropped_entities"] = r.dropped_entities;
    j["significant_pairs"] = r.significant_pairs;
    j["non_significant_pairs"] = r.non_significant_pairs;
    j["insufficient_overlap_pairs"] = r.insufficient_overlap_pairs;
    j["constant_pairs"] = r.constant_pairs;
    j["density"] = r.density;
    if (std::isfinite(r.mean_significant_rho)) {
        j["mean_significant_rho"] = r.mean_significant_rho;
    } else {
        j["mean_significant_rho"] = nullptr;
    }
    if (include_pairs) {
        nlohmann::json pairs = nlohmann::json::array();
        for (const PairStat& ps : r.pairs) {
            nlohmann::json pj;
            pj["i"] = ps.i;
            pj["j"] = ps.j;
            pj["n_obs"] = ps.n_obs;
            switch (ps.status) {
                case PairStat::Status::Ok:
                    pj["rho"] = ps.rho;
                    pj["p"] = ps.p;
                    pj["significant"] = ps.significant;
                    pj["weight"] = ps.weight;
                    break;
                case PairStat::Status::InsufficientOverlap:
                    pj["status"] = "insufficient_overlap";
                    break;
                case PairStat::Status::ConstantSeries:
                    pj["status"] = "constant_series";
                    break;
            }
            pairs.push_back(std::move(pj));
        }
        j["pairs"] = std::move(pairs);
    }
    return j;
}

inline void save_build_report_json(const BuildReport& r, bool include_pairs,
                                   const std::string& path) {
    detail::write_text_file(path, build_report_to_json(r, include_pairs).dump(2) + "\n");
}

inline void save_align_report_json(const AlignReport& r, const std::string& path) {
    nlohmann::json j;
    j["kept"] = r.kept;
    nlohmann::json excluded = nlohmann::json::object();
    for (const auto& [layer, labels] : r.excluded) excluded[layer] = labels;
    j["excluded_per_layer"] = std::move(excluded);
    detail::write_text_file(path, j.dump(2) + "\n");
}

}  // namespace plexcomm
