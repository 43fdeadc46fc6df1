#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "egolayers/egonet.hpp"
#include "egolayers/rng.hpp"

using namespace egolayers;

namespace {

Relationship rel(const std::string& s, const std::string& t, std::int64_t count,
                 std::int64_t first, std::int64_t last) {
    Relationship r;
    r.source_id = s;
    r.target_id = t;
    r.event_count = count;
    r.first_ts = first;
    r.last_ts = last;
    r.duration_months = months_between(first, last);
    r.contact_frequency =
        r.duration_months > 0 ? static_cast<double>(count) / r.duration_months : 0.0;
    return r;
}

constexpr std::int64_t kMonth = 2630016;  // 30.44 days in seconds

}  // namespace

TEST_CASE("assemble: nodes, edges, self-edges") {
    const std::vector<Relationship> rels{
        rel("a", "b", 3, 0, 3 * kMonth),
        rel("b", "c", 2, 0, 2 * kMonth),
        rel("d", "a", 5, 0, 5 * kMonth),
        rel("c", "c", 9, 0, 9 * kMonth),  // self-edge
    };
    const auto g = InteractionGraph::assemble(rels);
    CHECK(g.node_count() == 4);
    CHECK(g.edge_count() == 3);
    CHECK(g.self_edges_dropped() == 1);
    CHECK(g.find_node("a").has_value());
    CHECK_FALSE(g.find_node("zz").has_value());
}

TEST_CASE("extract: descending frequency with id tie-break") {
    const std::vector<Relationship> rels{
        rel("e", "x", 2, 0, 1 * kMonth),   // freq 2.0
        rel("e", "y", 15, 0, 2 * kMonth),  // freq 7.5
        rel("e", "z", 3, 0, 3 * kMonth),   // freq 1.0
        rel("e", "w", 2, 0, 1 * kMonth),   // freq 2.0, ties with x
    };
    const auto g = InteractionGraph::assemble(rels);
    const auto ego = g.extract_ego_network("e", Direction::outgoing);
    CHECK(ego.degree() == 4);
    CHECK(ego.alters[0].first == "y");
    CHECK(ego.alters[0].second == doctest::Approx(7.5));
    CHECK(ego.alters[1].first == "w");  // tie resolved by id
    CHECK(ego.alters[2].first == "x");
    CHECK(ego.alters[3].first == "z");

    const auto incoming = g.extract_ego_network("e", Direction::incoming);
    CHECK(incoming.degree() == 0);
    CHECK(incoming.alters.empty());

    CHECK_THROWS_AS(g.extract_ego_network("missing", Direction::outgoing), DataError);
}

TEST_CASE("select_active_egos: rate and degree thresholds") {
    std::vector<Relationship> rels;
    // ego "hub": 30 connections, 400 events over 36.5 months -> rate 10.96
    const std::int64_t span = static_cast<std::int64_t>(36.5 * 30.44 * 86400);
    for (int i = 0; i < 30; ++i) {
        const std::int64_t count = i < 10 ? 14 : 13;  // 10*14 + 20*13 = 400
        rels.push_back(rel("hub", "h" + std::to_string(i), count, 0, span));
    }
    // ego "slow": 30 connections but rate ~4.1/month
    for (int i = 0; i < 30; ++i) {
        rels.push_back(rel("slow", "s" + std::to_string(i), 5, 0, span));
    }
    // ego "busy": rate 50/month but only 24 connections
    for (int i = 0; i < 24; ++i) {
        rels.push_back(rel("busy", "b" + std::to_string(i), 76, 0, span));
    }
    const auto g = InteractionGraph::assemble(rels);
    const auto active = g.select_active_egos(Direction::outgoing, {});
    CHECK(active == std::vector<std::string>{"hub"});
    // Loosening one threshold at a time admits each excluded ego.
    CHECK(g.select_active_egos(Direction::outgoing, {4.0, 25}) ==
          std::vector<std::string>{"hub", "slow"});
    CHECK(g.select_active_egos(Direction::outgoing, {10.0, 24}) ==
          std::vector<std::string>{"busy", "hub"});
}

TEST_CASE("select_active_egos is monotone in both thresholds") {
    DeterministicRng rng(29);
    std::vector<Relationship> rels;
    for (int e = 0; e < 12; ++e) {
        const std::string ego = "e" + std::to_string(e);
        const int degree = 1 + static_cast<int>(rng.below(12));
        for (int i = 0; i < degree; ++i) {
            rels.push_back(rel(ego, ego + "_t" + std::to_string(i),
                               2 + static_cast<std::int64_t>(rng.below(40)), 0,
                               kMonth * (1 + static_cast<std::int64_t>(rng.below(12)))));
        }
    }
    const auto g = InteractionGraph::assemble(rels);
    const InclusionCriteria base{2.0, 3};
    const auto selected = g.select_active_egos(Direction::outgoing, base);
    for (const auto& tighter :
         {InclusionCriteria{4.0, 3}, InclusionCriteria{2.0, 6}, InclusionCriteria{8.0, 8}}) {
        const auto sub = g.select_active_egos(Direction::outgoing, tighter);
        for (const auto& id : sub) {
            CHECK(std::find(selected.begin(), selected.end(), id) != selected.end());
        }
        CHECK(sub.size() <= selected.size());
    }
}

TEST_CASE("direction symmetry: reversing edges swaps the analysis") {
    DeterministicRng rng(59);
    std::vector<Relationship> forward, reversed;
    for (int i = 0; i < 40; ++i) {
        const std::string s = "u" + std::to_string(rng.below(8));
        const std::string t = "v" + std::to_string(rng.below(8));
        const auto count = 2 + static_cast<std::int64_t>(rng.below(30));
        const auto months = 1 + static_cast<std::int64_t>(rng.below(24));
        forward.push_back(rel(s, t, count, 0, months * kMonth));
        reversed.push_back(rel(t, s, count, 0, months * kMonth));
    }
    const auto gf = InteractionGraph::assemble(forward);
    const auto gr = InteractionGraph::assemble(reversed);
    REQUIRE(gf.node_count() == gr.node_count());
    for (const auto& id : gf.node_ids()) {
        const auto a = gf.extract_ego_network(id, Direction::outgoing);
        const auto b = gr.extract_ego_network(id, Direction::incoming);
        CHECK(a.alters == b.alters);
        const auto c = gf.extract_ego_network(id, Direction::incoming);
        const auto d = gr.extract_ego_network(id, Direction::outgoing);
        CHECK(c.alters == d.alters);
    }
    CHECK(gf.select_active_egos(Direction::outgoing, {1.0, 2}) ==
          gr.select_active_egos(Direction::incoming, {1.0, 2}));
}

TEST_CASE("extraction is pure") {
    const std::vector<Relationship> rels{
        rel("e", "x", 4, 0, 2 * kMonth),
        rel("e", "y", 9, 0, 3 * kMonth),
    };
    const auto g = InteractionGraph::assemble(rels);
    const auto a = g.extract_ego_network("e", Direction::outgoing);
    const auto b = g.extract_ego_network("e", Direction::outgoing);
    CHECK(a.alters == b.alters);
    CHECK(a.ego_id == b.ego_id);
}

TEST_CASE("snapshot round trip") {
    DeterministicRng rng(61);
    std::vector<Relationship> rels;
    for (int i = 0; i < 60; ++i) {
        rels.push_back(rel("n" + std::to_string(rng.below(10)), "n" + std::to_string(rng.below(10)),
                           2 + static_cast<std::int64_t>(rng.below(50)),
                           1500000000 + static_cast<std::int64_t>(rng.below(1000000)),
                           1600000000 + static_cast<std::int64_t>(rng.below(1000000))));
    }
    const auto g = InteractionGraph::assemble(rels);

    std::ostringstream out(std::ios::binary);
    g.save_snapshot(out);
    std::istringstream in(out.str(), std::ios::binary);
    const auto loaded = InteractionGraph::load_snapshot(in);

    CHECK(loaded.node_count() == g.node_count());
    CHECK(loaded.edge_count() == g.edge_count());
    CHECK(loaded.self_edges_dropped() == g.self_edges_dropped());
    CHECK(loaded.node_ids() == g.node_ids());
    CHECK(loaded.days_per_month() == g.days_per_month());
    for (const auto& id : g.node_ids()) {
        for (const auto dir : {Direction::outgoing, Direction::incoming}) {
            const auto a = g.extract_ego_network(id, dir);
            const auto b = loaded.extract_ego_network(id, dir);
            CHECK(a.alters == b.alters);  // frequencies bit-identical
        }
    }

    // Round trip through the relationship export as well.
    const auto exported = loaded.to_relationships();
    const auto g2 = InteractionGraph::assemble(exported);
    CHECK(g2.node_ids() == g.node_ids());
    CHECK(g2.edge_count() == g.edge_count());

    std::istringstream bad("NOPE", std::ios::binary);
    CHECK_THROWS_AS(InteractionGraph::load_snapshot(bad), DataError);
}
