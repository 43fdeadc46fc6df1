#include "egolayers/layers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace egolayers {

LayerAssignment assign_layers(const Clustering& clustering, const EgoNetwork& ego) {
    const std::size_t n = ego.alters.size();
    if (clustering.assignments.size() != n) {
        throw std::invalid_argument("clustering was not produced from this ego's weights");
    }
    const int k = clustering.k;

    struct Group {
        std::vector<std::size_t> members;
        double freq_sum = 0.0;
    };
    std::vector<Group> groups(k);
    for (std::size_t i = 0; i < n; ++i) {
        const int c = clustering.assignments[i];
        groups[c].members.push_back(i);
        groups[c].freq_sum += ego.alters[i].second;
    }
    for (const auto& g : groups) {
        if (g.members.empty()) throw std::invalid_argument("every cluster must be nonempty");
    }

    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return groups[a].freq_sum / groups[a].members.size() >
               groups[b].freq_sum / groups[b].members.size();
    });

    LayerAssignment out;
    out.ego_id = ego.ego_id;
    out.k = k;
    out.layers.resize(k);
    for (int l = 0; l < k; ++l) {
        const Group& g = groups[order[l]];
        Layer& layer = out.layers[l];
        layer.size = static_cast<int>(g.members.size());
        layer.mean_frequency = g.freq_sum / static_cast<double>(g.members.size());
        layer.alter_ids.reserve(g.members.size());
        for (const std::size_t i : g.members) layer.alter_ids.push_back(ego.alters[i].first);
    }
    for (int l = 1; l < k; ++l) {
        if (!(out.layers[l - 1].mean_frequency > out.layers[l].mean_frequency)) {
            throw InvariantError("tied layer mean frequencies for ego '" + ego.ego_id +
                                 "'; optimal clustering cannot produce this");
        }
    }
    return out;
}

PopulationAccumulator::PopulationAccumulator(Direction direction, std::vector<int> fixed_ks,
                                             bool restrict_to_matching)
    : direction_(direction),
      fixed_ks_(std::move(fixed_ks)),
      restrict_to_matching_(restrict_to_matching) {
    std::sort(fixed_ks_.begin(), fixed_ks_.end());
    fixed_ks_.erase(std::unique(fixed_ks_.begin(), fixed_ks_.end()), fixed_ks_.end());
    for (const int k : fixed_ks_) layer_moments_[k].resize(k);
}

void PopulationAccumulator::add(const ClusteringResult& result) {
    if (result.direction != direction_) {
        throw std::invalid_argument("all results in a population must share one direction");
    }
    ++ego_count_;
    optimal_k_sum_ += result.optimal_k;
    ++k_histogram_[result.optimal_k];
    if (result.optimal_k >= 2 && result.silhouette_at_optimal) {
        silhouette_sum_ += *result.silhouette_at_optimal;
        ++silhouette_count_;
    }
    for (const int k : fixed_ks_) {
        if (restrict_to_matching_ && result.optimal_k != k) continue;
        const auto it = result.clusterings_at_fixed.find(k);
        if (it == result.clusterings_at_fixed.end()) continue;  // degenerate ego at this k
        const Clustering& c = it->second;
        const auto sizes = c.sizes();
        auto& moments = layer_moments_[k];
        for (int l = 0; l < k; ++l) {
            const double size = static_cast<double>(sizes[l]);
            const double freq = c.centroids[l];  // centroid = mean member frequency
            moments[l].n += 1;
            moments[l].size_sum += size;
            moments[l].size_sq += size * size;
            moments[l].freq_sum += freq;
            moments[l].freq_sq += freq * freq;
        }
    }
}

void PopulationAccumulator::merge(const PopulationAccumulator& other) {
    if (other.direction_ != direction_ || other.fixed_ks_ != fixed_ks_ ||
        other.restrict_to_matching_ != restrict_to_matching_) {
        throw std::invalid_argument("cannot merge accumulators with different settings");
    }
    ego_count_ += other.ego_count_;
    optimal_k_sum_ += other.optimal_k_sum_;
    for (const auto& [k, n] : other.k_histogram_) k_histogram_[k] += n;
    silhouette_sum_ += other.silhouette_sum_;
    silhouette_count_ += other.silhouette_count_;
    for (const auto& [k, ms] : other.layer_moments_) {
        auto& mine = layer_moments_[k];
        for (std::size_t l = 0; l < ms.size(); ++l) {
            mine[l].n += ms[l].n;
            mine[l].size_sum += ms[l].size_sum;
            mine[l].size_sq += ms[l].size_sq;
            mine[l].freq_sum += ms[l].freq_sum;
            mine[l].freq_sq += ms[l].freq_sq;
        }
    }
}

PopulationSummary PopulationAccumulator::finish() const {
    if (ego_count_ == 0) throw DataError("empty population: no ego networks were analyzed");

    PopulationSummary s;
    s.direction = direction_;
    s.ego_count = ego_count_;

    const int k_min = k_histogram_.begin()->first;
    const int k_max = k_histogram_.rbegin()->first;
    for (int k = k_min; k <= k_max; ++k) {
        const auto it = k_histogram_.find(k);
        const std::int64_t count = it == k_histogram_.end() ? 0 : it->second;
        s.p_of_x[k] = static_cast<double>(count) / static_cast<double>(ego_count_);
    }
    s.mean_optimal_k = static_cast<double>(optimal_k_sum_) / static_cast<double>(ego_count_);
    s.k_star = select_k_star(s.p_of_x);
    if (silhouette_count_ > 0) {
        s.mean_silhouette = silhouette_sum_ / static_cast<double>(silhouette_count_);
    }

    for (const auto& [k, moments] : layer_moments_) {
        auto& table = s.layer_tables[k];
        table.resize(k);
        for (int l = 0; l < k; ++l) {
            const Moments& m = moments[l];
            LayerTableCell& cell = table[l];
            cell.ego_count = m.n;
            if (m.n == 0) continue;
            const double n = static_cast<double>(m.n);
            cell.size_mean = m.size_sum / n;
            cell.size_sd = std::sqrt(std::max(0.0, m.size_sq / n - cell.size_mean * cell.size_mean));
            cell.freq_mean = m.freq_sum / n;
            cell.freq_sd = std::sqrt(std::max(0.0, m.freq_sq / n - cell.freq_mean * cell.freq_mean));
        }
    }
    return s;
}

std::vector<int> select_k_star(const std::map<int, double>& p_of_x, double mass_threshold) {
    if (p_of_x.empty()) return {};
    const int k_min = p_of_x.begin()->first;
    const int k_max = p_of_x.rbegin()->first;
    auto mass_at = [&](int k) {
        const auto it = p_of_x.find(k);
        return it == p_of_x.end() ? 0.0 : it->second;
    };
    const int range = k_max - k_min + 1;
    for (int len = 1; len <= range; ++len) {
        double best_mass = -1.0;
        int best_start = 0;
        for (int start = k_min; start + len - 1 <= k_max; ++start) {
            double mass = 0.0;
            for (int k = start; k < start + len; ++k) mass += mass_at(k);
            if (mass >= mass_threshold && mass > best_mass + 1e-15) {
                best_mass = mass;
                best_start = start;
            }
        }
        if (best_mass >= 0.0) {
            std::vector<int> out(len);
            std::iota(out.begin(), out.end(), best_start);
            return out;
        }
    }
    // Unreachable when p_of_x sums to ~1, but stay safe for partial inputs.
    std::vector<int> out(range);
    std::iota(out.begin(), out.end(), k_min);
    return out;
}

PopulationSummary population_summary(const std::vector<ClusteringResult>& results,
                                     const std::vector<int>& fixed_ks,
                                     bool restrict_to_matching) {
    if (results.empty()) throw DataError("empty population: no ego networks were analyzed");
    PopulationAccumulator acc(results.front().direction, fixed_ks, restrict_to_matching);
    for (const auto& r : results) acc.add(r);
    return acc.finish();
}

std::string PopulationSummary::to_json(int indent) const {
    nlohmann::json j;
    j["direction"] = egolayers::to_string(direction);
    j["ego_count"] = ego_count;
    nlohmann::json px = nlohmann::json::object();
    for (const auto& [k, p] : p_of_x) px[std::to_string(k)] = p;
    j["p_of_x"] = px;
    j["mean_optimal_k"] = mean_optimal_k;
    j["k_star"] = k_star;
    if (mean_silhouette) {
        j["mean_silhouette"] = *mean_silhouette;
    } else {
        j["mean_silhouette"] = nullptr;
    }
    nlohmann::json tables = nlohmann::json::object();
    for (const auto& [k, table] : layer_tables) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& cell : table) {
            rows.push_back({{"ego_count", cell.ego_count},
                            {"size_mean", cell.size_mean},
                            {"size_sd", cell.size_sd},
                            {"frequency_mean", cell.freq_mean},
                            {"frequency_sd", cell.freq_sd}});
        }
        tables[std::to_string(k)] = rows;
    }
    j["layer_tables"] = tables;
    return j.dump(indent);
}

std::string PopulationSummary::to_text() const {
    std::ostringstream out;
    char buf[128];
    out << "Population summary (" << egolayers::to_string(direction) << ")\n";
    out << "  egos analyzed:   " << ego_count << "\n";
    std::snprintf(buf, sizeof(buf), "%.4f", mean_optimal_k);
    out << "  mean optimal k:  " << buf << "\n";
    if (mean_silhouette) {
        std::snprintf(buf, sizeof(buf), "%.4f", *mean_silhouette);
        out << "  mean silhouette: " << buf << "\n";
    } else {
        out << "  mean silhouette: n/a\n";
    }
    out << "  k*:              {";
    for (std::size_t i = 0; i < k_star.size(); ++i) out << (i ? ", " : "") << k_star[i];
    out << "}\n\n";

    out << "  p(x):\n";
    for (const auto& [k, p] : p_of_x) {
        std::snprintf(buf, sizeof(buf), "    %2d  %.4f\n", k, p);
        out << buf;
    }

    for (const auto& [k, table] : layer_tables) {
        out << "\n  Layer table at k = " << k << " ("
            << (table.empty() ? 0 : table.front().ego_count) << " egos)\n";
        out << "    Layer              ";
        for (int l = 0; l < k; ++l) {
            std::snprintf(buf, sizeof(buf), "%18d", l);
            out << buf;
        }
        out << "\n    Number of alters   ";
        for (const auto& cell : table) {
            std::snprintf(buf, sizeof(buf), "%9.2f \xc2\xb1 %-6.2f", cell.size_mean, cell.size_sd);
            out << buf;
        }
        out << "\n    Contact frequency  ";
        for (const auto& cell : table) {
            std::snprintf(buf, sizeof(buf), "%9.2f \xc2\xb1 %-6.2f", cell.freq_mean, cell.freq_sd);
            out << buf;
        }
        out << "\n";
    }
    return out.str();
}

std::string PopulationSummary::p_of_x_csv() const {
    std::ostringstream out;
    out << "k,proportion\n";
    char buf[64];
    for (const auto& [k, p] : p_of_x) {
        std::snprintf(buf, sizeof(buf), "%d,%.9f\n", k, p);
        out << buf;
    }
    return out.str();
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (const char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

std::string layer_fill_color(int layer, int k) {
    // Darkest for layer 0, lightening toward the outermost layer.
    const int intensity = k <= 1 ? 0 : (204 * layer) / (k - 1);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", intensity, intensity, intensity);
    return buf;
}

}  // namespace

std::string export_ego_dot(const LayerAssignment& assignment, const EgoNetwork& ego) {
    std::unordered_map<std::string, int> layer_of;
    for (int l = 0; l < assignment.k; ++l) {
        for (const auto& id : assignment.layers[l].alter_ids) layer_of[id] = l;
    }
    double max_freq = 0.0;
    for (const auto& [id, f] : ego.alters) max_freq = std::max(max_freq, f);
    const double pen_scale = max_freq > 0.0 ? 6.0 / max_freq : 1.0;

    std::ostringstream out;
    out << "digraph ego_network {\n";
    out << "  graph [outputorder=edgesfirst];\n";
    out << "  node [style=filled, fontname=\"Helvetica\"];\n";
    out << "  \"" << dot_escape(ego.ego_id)
        << "\" [shape=doublecircle, fillcolor=\"#d62728\", fontcolor=white];\n";
    char buf[64];
    for (const auto& [alter, freq] : ego.alters) {
        const int layer = layer_of.at(alter);
        const std::string fill = layer_fill_color(layer, assignment.k);
        const bool dark = assignment.k <= 1 || (204 * layer) / (assignment.k - 1) < 128;
        out << "  \"" << dot_escape(alter) << "\" [fillcolor=\"" << fill << "\", fontcolor="
            << (dark ? "white" : "black") << ", tooltip=\"layer " << layer << "\"];\n";
    }
    for (const auto& [alter, freq] : ego.alters) {
        std::snprintf(buf, sizeof(buf), "%.3f", std::max(0.05, freq * pen_scale));
        const std::string a = "\"" + dot_escape(ego.ego_id) + "\"";
        const std::string b = "\"" + dot_escape(alter) + "\"";
        out << "  " << (ego.direction == Direction::outgoing ? a : b) << " -> "
            << (ego.direction == Direction::outgoing ? b : a) << " [penwidth=" << buf << "];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace egolayers
