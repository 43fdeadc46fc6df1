#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "egolayers/ingest.hpp"
#include "egolayers/layers.hpp"
#include "egolayers/types.hpp"

namespace egolayers {

// Keyword lexicons for the fallback classifier. This is a demo-grade
// heuristic for corpora without supplied labels; real runs should load
// externally classified labels instead.
struct LexiconConfig {
    std::vector<std::string> update_patterns;
    std::vector<std::string> targeted_patterns;
    bool chapter_number_rule = true;  // "chapter <n>" followed by commentary

    static LexiconConfig defaults();
};

/// Case-insensitive substring rules over the review text.
ReviewLabel classify_review_heuristic(std::string_view text,
                                      const LexiconConfig& lexicons = LexiconConfig::defaults());

struct LabelLoadResult {
    std::unordered_map<std::int64_t, ReviewLabel> labels;
    std::int64_t duplicate_warnings = 0;  // duplicate event_id, last wins
    std::int64_t malformed_dropped = 0;
};

// Label file: delimited text with header event_id,update_encouragement,targeted
// (booleans as 0/1 or true/false). Malformed records follow the ingest policy.
LabelLoadResult load_labels(std::istream& in, char delimiter = ',',
                            ParsePolicy policy = ParsePolicy::skip_and_count);

struct LayerCell {
    std::int64_t total = 0;  // labeled events attributed to this layer
    std::int64_t update_count = 0;
    std::int64_t targeted_count = 0;

    std::optional<double> update_pct() const;
    std::optional<double> targeted_pct() const;
};

struct LayerCrosstab {
    int k = 0;
    Direction direction = Direction::outgoing;
    std::vector<LayerCell> layers;
    std::int64_t unlabeled = 0;   // attributed to a layer but carrying no label
    std::int64_t unassigned = 0;  // no (ego, alter) layer assignment

    std::int64_t attributed_total() const;
    std::string to_json(int indent = 2) const;
    std::string to_text() const;
};

enum class UnlabeledPolicy {
    exclude,         // unlabeled events leave both numerator and denominator
    in_denominator,  // unlabeled events count toward layer totals
};

// Streaming crosstab: register the per-ego layer assignments (all at one
// fixed k), then feed events. Mergeable across shards.
class CrosstabBuilder {
  public:
    CrosstabBuilder(int k, Direction direction,
                    UnlabeledPolicy policy = UnlabeledPolicy::exclude);

    void add_assignment(const LayerAssignment& assignment);
    /// label: resolved label for this event, or nullopt when unlabeled.
    void add_event(const InteractionEvent& event, const std::optional<ReviewLabel>& label);
    void merge(const CrosstabBuilder& other);
    LayerCrosstab finish() const;

  private:
    int k_;
    Direction direction_;
    UnlabeledPolicy policy_;
    std::unordered_map<std::string, int> layer_of_;  // ego \x1f alter -> layer
    LayerCrosstab tab_;
};

// Each event is attributed to the layer its (ego, alter) relationship
// occupies at the assignments' fixed k. Labels resolve from the map by
// event_id, falling back to the event's inline label.
LayerCrosstab layer_review_crosstab(const std::vector<InteractionEvent>& events,
                                    const std::unordered_map<std::int64_t, ReviewLabel>& labels,
                                    const std::vector<LayerAssignment>& assignments,
                                    Direction direction,
                                    UnlabeledPolicy policy = UnlabeledPolicy::exclude);

}  // namespace egolayers
