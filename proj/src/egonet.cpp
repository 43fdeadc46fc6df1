#include "egolayers/egonet.hpp"

#include <algorithm>
#include <cstring>
#include <istream>
#include <ostream>

namespace egolayers {

std::vector<double> EgoNetwork::frequencies() const {
    std::vector<double> out;
    out.reserve(alters.size());
    for (const auto& [id, f] : alters) out.push_back(f);
    return out;
}

InteractionGraph InteractionGraph::assemble(const std::vector<Relationship>& relationships,
                                            double days_per_month) {
    InteractionGraph g;
    g.days_per_month_ = days_per_month;

    std::vector<std::string> ids;
    ids.reserve(relationships.size() * 2);
    for (const auto& r : relationships) {
        if (r.source_id == r.target_id) {
            ++g.self_edges_;
            continue;
        }
        ids.push_back(r.source_id);
        ids.push_back(r.target_id);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    g.ids_ = std::move(ids);
    g.build_index();

    const std::size_t n = g.ids_.size();
    std::vector<std::uint64_t> out_deg(n, 0), in_deg(n, 0);
    for (const auto& r : relationships) {
        if (r.source_id == r.target_id) continue;
        ++out_deg[g.index_.at(r.source_id)];
        ++in_deg[g.index_.at(r.target_id)];
    }
    g.out_offsets_.assign(n + 1, 0);
    g.in_offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        g.out_offsets_[i + 1] = g.out_offsets_[i] + out_deg[i];
        g.in_offsets_[i + 1] = g.in_offsets_[i] + in_deg[i];
    }
    g.out_edges_.resize(g.out_offsets_[n]);
    g.in_edges_.resize(g.in_offsets_[n]);

    std::vector<std::uint64_t> out_pos(g.out_offsets_.begin(), g.out_offsets_.end() - 1);
    std::vector<std::uint64_t> in_pos(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
    for (const auto& r : relationships) {
        if (r.source_id == r.target_id) continue;
        const std::uint32_t s = g.index_.at(r.source_id);
        const std::uint32_t t = g.index_.at(r.target_id);
        g.out_edges_[out_pos[s]++] = {t, r.event_count, r.first_ts, r.last_ts, r.contact_frequency};
        g.in_edges_[in_pos[t]++] = {s, r.event_count, r.first_ts, r.last_ts, r.contact_frequency};
    }
    // Canonical peer order within every span.
    auto by_peer = [](const Edge& a, const Edge& b) { return a.peer < b.peer; };
    for (std::size_t i = 0; i < n; ++i) {
        std::sort(g.out_edges_.begin() + g.out_offsets_[i],
                  g.out_edges_.begin() + g.out_offsets_[i + 1], by_peer);
        std::sort(g.in_edges_.begin() + g.in_offsets_[i],
                  g.in_edges_.begin() + g.in_offsets_[i + 1], by_peer);
    }
    return g;
}

void InteractionGraph::build_index() {
    index_.clear();
    index_.reserve(ids_.size());
    for (std::uint32_t i = 0; i < ids_.size(); ++i) index_[ids_[i]] = i;
}

std::optional<std::uint32_t> InteractionGraph::find_node(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::span<const InteractionGraph::Edge> InteractionGraph::edges(std::uint32_t node,
                                                                Direction dir) const {
    const auto& offsets = dir == Direction::outgoing ? out_offsets_ : in_offsets_;
    const auto& store = dir == Direction::outgoing ? out_edges_ : in_edges_;
    return {store.data() + offsets[node], store.data() + offsets[node + 1]};
}

EgoNetwork InteractionGraph::extract_ego_network(std::uint32_t node, Direction dir) const {
    EgoNetwork ego;
    ego.ego_id = ids_[node];
    ego.direction = dir;
    const auto span = edges(node, dir);
    ego.alters.reserve(span.size());
    for (const auto& e : span) ego.alters.emplace_back(ids_[e.peer], e.frequency);
    std::sort(ego.alters.begin(), ego.alters.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return ego;
}

EgoNetwork InteractionGraph::extract_ego_network(const std::string& ego_id, Direction dir) const {
    const auto node = find_node(ego_id);
    if (!node) throw DataError("unknown ego id: '" + ego_id + "'");
    return extract_ego_network(*node, dir);
}

std::vector<std::uint32_t> InteractionGraph::select_active_nodes(
    Direction dir, const InclusionCriteria& criteria) const {
    const double seconds_per_month = days_per_month_ * static_cast<double>(kSecondsPerDay);
    std::vector<std::uint32_t> selected;
    for (std::uint32_t node = 0; node < ids_.size(); ++node) {
        const auto span = edges(node, dir);
        if (static_cast<int>(span.size()) < criteria.min_connections || span.empty()) continue;
        std::int64_t events = 0;
        std::int64_t first = span.front().first_ts;
        std::int64_t last = span.front().last_ts;
        for (const auto& e : span) {
            events += e.count;
            first = std::min(first, e.first_ts);
            last = std::max(last, e.last_ts);
        }
        const double span_months =
            std::max(1.0, static_cast<double>(last - first) / seconds_per_month);
        if (static_cast<double>(events) / span_months >= criteria.min_monthly_rate) {
            selected.push_back(node);
        }
    }
    return selected;
}

std::vector<std::string> InteractionGraph::select_active_egos(
    Direction dir, const InclusionCriteria& criteria) const {
    std::vector<std::string> out;
    for (const auto node : select_active_nodes(dir, criteria)) out.push_back(ids_[node]);
    return out;
}

std::vector<Relationship> InteractionGraph::to_relationships() const {
    std::vector<Relationship> out;
    out.reserve(out_edges_.size());
    for (std::uint32_t node = 0; node < ids_.size(); ++node) {
        for (const auto& e : edges(node, Direction::outgoing)) {
            Relationship r;
            r.source_id = ids_[node];
            r.target_id = ids_[e.peer];
            r.event_count = e.count;
            r.first_ts = e.first_ts;
            r.last_ts = e.last_ts;
            r.duration_months = months_between(r.first_ts, r.last_ts, days_per_month_);
            r.contact_frequency = e.frequency;
            out.push_back(std::move(r));
        }
    }
    std::sort(out.begin(), out.end(), [](const Relationship& a, const Relationship& b) {
        if (a.source_id != b.source_id) return a.source_id < b.source_id;
        return a.target_id < b.target_id;
    });
    return out;
}

namespace {

constexpr char kMagic[4] = {'E', 'G', 'L', 'Y'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_le(std::ostream& out, T value) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &value, sizeof(T));
#if defined(__BYTE_ORDER__) && __BYTE_ORDER__ == __ORDER_BIG_ENDIAN__
    std::reverse(buf, buf + sizeof(T));
#endif
    out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
    unsigned char buf[sizeof(T)];
    in.read(reinterpret_cast<char*>(buf), sizeof(T));
    if (!in) throw DataError("graph snapshot truncated");
#if defined(__BYTE_ORDER__) && __BYTE_ORDER__ == __ORDER_BIG_ENDIAN__
    std::reverse(buf, buf + sizeof(T));
#endif
    T value;
    std::memcpy(&value, buf, sizeof(T));
    return value;
}

}  // namespace

void InteractionGraph::save_snapshot(std::ostream& out) const {
    out.write(kMagic, 4);
    write_le<std::uint32_t>(out, kVersion);
    write_le<double>(out, days_per_month_);
    write_le<std::uint64_t>(out, ids_.size());
    write_le<std::uint64_t>(out, out_edges_.size());
    write_le<std::int64_t>(out, self_edges_);
    for (const auto& id : ids_) {
        write_le<std::uint32_t>(out, static_cast<std::uint32_t>(id.size()));
        out.write(id.data(), static_cast<std::streamsize>(id.size()));
    }
    for (std::uint32_t node = 0; node < ids_.size(); ++node) {
        for (const auto& e : edges(node, Direction::outgoing)) {
            write_le<std::uint32_t>(out, node);
            write_le<std::uint32_t>(out, e.peer);
            write_le<std::int64_t>(out, e.count);
            write_le<std::int64_t>(out, e.first_ts);
            write_le<std::int64_t>(out, e.last_ts);
            write_le<double>(out, e.frequency);
        }
    }
    if (!out) throw DataError("failed to write graph snapshot");
}

InteractionGraph InteractionGraph::load_snapshot(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw DataError("not a graph snapshot (bad magic)");
    }
    const auto version = read_le<std::uint32_t>(in);
    if (version != kVersion) {
        throw DataError("unsupported graph snapshot version " + std::to_string(version));
    }
    InteractionGraph g;
    g.days_per_month_ = read_le<double>(in);
    const auto node_count = read_le<std::uint64_t>(in);
    const auto edge_count = read_le<std::uint64_t>(in);
    g.self_edges_ = read_le<std::int64_t>(in);
    g.ids_.reserve(node_count);
    for (std::uint64_t i = 0; i < node_count; ++i) {
        const auto len = read_le<std::uint32_t>(in);
        std::string id(len, '\0');
        in.read(id.data(), len);
        if (!in) throw DataError("graph snapshot truncated");
        g.ids_.push_back(std::move(id));
    }
    g.build_index();

    struct Raw {
        std::uint32_t src, dst;
        Edge edge;
    };
    std::vector<Raw> raw;
    raw.reserve(edge_count);
    std::vector<std::uint64_t> out_deg(node_count, 0), in_deg(node_count, 0);
    for (std::uint64_t i = 0; i < edge_count; ++i) {
        Raw r;
        r.src = read_le<std::uint32_t>(in);
        r.dst = read_le<std::uint32_t>(in);
        r.edge.count = read_le<std::int64_t>(in);
        r.edge.first_ts = read_le<std::int64_t>(in);
        r.edge.last_ts = read_le<std::int64_t>(in);
        r.edge.frequency = read_le<double>(in);
        if (r.src >= node_count || r.dst >= node_count) {
            throw DataError("graph snapshot has out-of-range node index");
        }
        ++out_deg[r.src];
        ++in_deg[r.dst];
        raw.push_back(r);
    }
    g.out_offsets_.assign(node_count + 1, 0);
    g.in_offsets_.assign(node_count + 1, 0);
    for (std::uint64_t i = 0; i < node_count; ++i) {
        g.out_offsets_[i + 1] = g.out_offsets_[i] + out_deg[i];
        g.in_offsets_[i + 1] = g.in_offsets_[i] + in_deg[i];
    }
    g.out_edges_.resize(edge_count);
    g.in_edges_.resize(edge_count);
    std::vector<std::uint64_t> out_pos(g.out_offsets_.begin(), g.out_offsets_.end() - 1);
    std::vector<std::uint64_t> in_pos(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
    for (const auto& r : raw) {
        Edge out_e = r.edge;
        out_e.peer = r.dst;
        g.out_edges_[out_pos[r.src]++] = out_e;
        Edge in_e = r.edge;
        in_e.peer = r.src;
        g.in_edges_[in_pos[r.dst]++] = in_e;
    }
    auto by_peer = [](const Edge& a, const Edge& b) { return a.peer < b.peer; };
    for (std::uint64_t i = 0; i < node_count; ++i) {
        std::sort(g.out_edges_.begin() + g.out_offsets_[i],
                  g.out_edges_.begin() + g.out_offsets_[i + 1], by_peer);
        std::sort(g.in_edges_.begin() + g.in_offsets_[i],
                  g.in_edges_.begin() + g.in_offsets_[i + 1], by_peer);
    }
    return g;
}

}  // namespace egolayers
