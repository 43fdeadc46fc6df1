#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "egolayers/types.hpp"

namespace egolayers {

/// One ego's weight vector: alters with contact frequencies, descending by
/// frequency (ties broken by alter id ascending).
struct EgoNetwork {
    std::string ego_id;
    Direction direction = Direction::outgoing;
    std::vector<std::pair<std::string, double>> alters;

    int degree() const { return static_cast<int>(alters.size()); }
    std::vector<double> frequencies() const;
};

struct InclusionCriteria {
    double min_monthly_rate = 10.0;  // events per month, giving or receiving
    int min_connections = 25;
};

// Immutable directed graph over filtered relationships, indexed both ways.
// Node indices are assigned in sorted-id order, so iteration is canonical.
// Read-only access (extraction, selection) is safe from many threads.
class InteractionGraph {
  public:
    struct Edge {
        std::uint32_t peer = 0;
        std::int64_t count = 0;
        std::int64_t first_ts = 0;
        std::int64_t last_ts = 0;
        double frequency = 0.0;
    };

    static InteractionGraph assemble(const std::vector<Relationship>& relationships,
                                     double days_per_month = kDefaultDaysPerMonth);

    std::size_t node_count() const { return ids_.size(); }
    std::size_t edge_count() const { return out_edges_.size(); }
    std::int64_t self_edges_dropped() const { return self_edges_; }
    double days_per_month() const { return days_per_month_; }

    const std::vector<std::string>& node_ids() const { return ids_; }
    std::optional<std::uint32_t> find_node(const std::string& id) const;

    std::span<const Edge> edges(std::uint32_t node, Direction dir) const;

    /// Throws DataError for an unknown ego id.
    EgoNetwork extract_ego_network(const std::string& ego_id, Direction dir) const;
    EgoNetwork extract_ego_network(std::uint32_t node, Direction dir) const;

    /// Node indices (ascending) of egos meeting both inclusion criteria.
    std::vector<std::uint32_t> select_active_nodes(Direction dir,
                                                   const InclusionCriteria& criteria) const;
    std::vector<std::string> select_active_egos(Direction dir,
                                                const InclusionCriteria& criteria) const;

    /// Edges back in canonical (source, target) order.
    std::vector<Relationship> to_relationships() const;

    // Versioned binary snapshot (magic header, node table, edge arrays).
    void save_snapshot(std::ostream& out) const;
    static InteractionGraph load_snapshot(std::istream& in);

  private:
    std::vector<std::string> ids_;
    std::unordered_map<std::string, std::uint32_t> index_;
    std::vector<std::uint64_t> out_offsets_, in_offsets_;  // size node_count()+1
    std::vector<Edge> out_edges_, in_edges_;
    std::int64_t self_edges_ = 0;
    double days_per_month_ = kDefaultDaysPerMonth;

    void build_index();
};

}  // namespace egolayers
