#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "egolayers/cluster.hpp"
#include "egolayers/ingest.hpp"
#include "egolayers/reviewtypes.hpp"
#include "egolayers/synth.hpp"

using namespace egolayers;

TEST_CASE("generate_ego: zero-variance layer is exact") {
    LayerSpec spec;
    spec.alter_count_mean = 10;
    spec.alter_count_dispersion = 0;
    spec.frequency_mean = 5.0;
    spec.frequency_sd = 0.0;
    const auto [ego, planted] = generate_ego({spec}, 123, "z");
    CHECK(ego.degree() == 10);
    CHECK(planted.true_k == 1);
    CHECK(planted.alters.size() == 10);
    for (const auto& [id, f] : ego.alters) CHECK(f == 5.0);
    for (const auto& a : planted.alters) {
        CHECK(a.layer == 0);
        CHECK(a.frequency == 5.0);
    }
}

TEST_CASE("generate_ego: ledger covers every alter exactly once") {
    const auto layers = presets::reviewer_three_layer();
    const auto [ego, planted] = generate_ego(layers, 42, "e42");
    CHECK(ego.ego_id == "e42");
    CHECK(planted.alters.size() == ego.alters.size());
    CHECK(ego.degree() >= 3);
    std::set<std::string> ids;
    for (const auto& a : planted.alters) {
        CHECK(ids.insert(a.alter_id).second);  // unique
        CHECK(a.layer >= 0);
        CHECK(a.layer < 3);
        CHECK(a.frequency > 0.05);
    }
    // Same seed, same output; different seed, different frequencies.
    const auto [ego2, planted2] = generate_ego(layers, 42, "e42");
    CHECK(ego2.alters == ego.alters);
    const auto [ego3, planted3] = generate_ego(layers, 43, "e42");
    CHECK(ego3.alters != ego.alters);
}

TEST_CASE("generate_ego: planted three-layer structure is recovered") {
    const auto layers = presets::reviewer_three_layer();
    const auto [ego, planted] = generate_ego(layers, 42, "e42");
    const auto result = analyze_ego(ego);
    REQUIRE(result.has_value());
    CHECK(result->optimal_k == 3);
}

TEST_CASE("generate_ego: identical zero-variance layers collapse to k=1") {
    LayerSpec a;
    a.alter_count_mean = 6;
    a.frequency_mean = 3.0;
    LayerSpec b = a;  // same mean, zero sd: unrecoverable planting
    const auto [ego, planted] = generate_ego({a, b}, 7, "flat");
    CHECK(planted.true_k == 2);
    const auto result = analyze_ego(ego);
    REQUIRE(result.has_value());
    CHECK(result->optimal_k == 1);
}

TEST_CASE("LayerSpec validation") {
    LayerSpec s;
    s.alter_count_mean = 5;
    s.frequency_mean = 2.0;
    s.frequency_sd = 0.3;
    CHECK_NOTHROW(s.validate());
    LayerSpec bad = s;
    bad.frequency_sd = 0.7;  // mean - 3 sd <= 0
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = s;
    bad.alter_count_mean = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = s;
    bad.frequency_mean = 0.04;  // below the positivity floor
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = s;
    bad.update_prob = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK_THROWS_AS(generate_ego({}, 1), std::invalid_argument);
}

TEST_CASE("lognormal frequency model: heavy tail with matched mean") {
    LayerSpec spec;
    spec.alter_count_mean = 4000;
    spec.alter_count_dispersion = 0;
    spec.frequency_mean = 2.0;
    spec.frequency_sd = 3.0;  // heavier than the mean: fine for lognormal
    spec.frequency_model = FrequencyModel::log_normal;
    CHECK_NOTHROW(spec.validate());
    const auto [ego, planted] = generate_ego({spec}, 99, "ln");
    double sum = 0.0, mx = 0.0;
    for (const auto& [id, f] : ego.alters) {
        CHECK(f > 0.05);
        sum += f;
        mx = std::max(mx, f);
    }
    const double mean = sum / ego.degree();
    CHECK(mean == doctest::Approx(2.0).epsilon(0.15));
    CHECK(mx > 8.0);  // heavy tail reaches far beyond the mean
}

namespace {

struct LogOutputs {
    std::string events, labels, ledger;
    EventLogTotals totals;
};

LogOutputs run_log(const std::vector<MixtureComponent>& mixture, std::uint64_t seed) {
    EventLogOptions options;
    options.seed = seed;
    std::ostringstream ev, lb, lg;
    const auto totals = generate_event_log(mixture, options, ev, lb, lg);
    return {ev.str(), lb.str(), lg.str(), totals};
}

}  // namespace

TEST_CASE("generate_event_log: determinism and exact quantization") {
    LayerSpec spec;
    spec.alter_count_mean = 3;
    spec.alter_count_dispersion = 0;
    spec.frequency_mean = 2.0;
    spec.frequency_sd = 0.0;
    spec.update_prob = 0.5;
    const std::vector<MixtureComponent> mixture{{4, {spec}}};

    const auto a = run_log(mixture, 11);
    const auto b = run_log(mixture, 11);
    CHECK(a.events == b.events);
    CHECK(a.labels == b.labels);
    CHECK(a.ledger == b.ledger);
    // Zero-variance structure is seed-independent; the label draws are not.
    const auto c = run_log(mixture, 12);
    CHECK(c.events == a.events);
    CHECK(c.labels != a.labels);

    // frequency 2.0 over a 12-month span: exactly 24 events per alter
    CHECK(a.totals.egos == 4);
    CHECK(a.totals.alters == 12);
    CHECK(a.totals.events == 12 * 24);

    // Round trip through ingest recovers the planted frequency exactly.
    std::istringstream in(a.events);
    IngestConfig cfg;
    const auto [events, stats] = parse_events(in, cfg);
    CHECK(stats.accepted == a.totals.events);
    const auto rels = filter_relationships(build_relationships(events));
    CHECK(rels.size() == 12);
    for (const auto& r : rels) {
        CHECK(r.event_count == 24);
        CHECK(r.contact_frequency == doctest::Approx(2.0).epsilon(1e-9));
    }
}

TEST_CASE("generate_event_log: round-trip fidelity within the rounding bound") {
    const std::vector<MixtureComponent> mixture{{30, presets::reviewer_two_layer()}};
    const auto out = run_log(mixture, 5);

    // Ledger: one line per ego with planted frequencies.
    std::istringstream ledger(out.ledger);
    std::map<std::string, std::map<std::string, double>> planted;  // ego -> alter -> freq
    std::string line;
    while (std::getline(ledger, line)) {
        const auto j = nlohmann::json::parse(line);
        for (const auto& alter : j.at("alters")) {
            planted[j.at("ego_id")][alter.at("id")] = alter.at("frequency").get<double>();
        }
    }
    CHECK(planted.size() == 30);

    std::istringstream in(out.events);
    IngestConfig cfg;
    const auto [events, stats] = parse_events(in, cfg);
    const auto rels = filter_relationships(build_relationships(events));
    std::size_t checked = 0;
    for (const auto& r : rels) {
        const double want = planted.at(r.source_id).at(r.target_id);
        // quantization bound: 1/24 events/month for a 12-month span
        CHECK(std::abs(r.contact_frequency - want) <= 1.0 / 24.0 + 1e-9);
        ++checked;
    }
    std::size_t total_alters = 0;
    for (const auto& [ego, alters] : planted) total_alters += alters.size();
    CHECK(checked == total_alters);

    // Labels line up one-to-one with event ids.
    std::istringstream labels_in(out.labels);
    const auto loaded = load_labels(labels_in);
    CHECK(loaded.duplicate_warnings == 0);
    CHECK(loaded.malformed_dropped == 0);
    CHECK(static_cast<std::int64_t>(loaded.labels.size()) == out.totals.events);
    for (const auto& ev : events) CHECK(loaded.labels.count(ev.event_id) == 1);
}
