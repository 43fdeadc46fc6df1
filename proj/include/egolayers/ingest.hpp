#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "egolayers/timeutil.hpp"
#include "egolayers/types.hpp"

namespace egolayers {

enum class InputFormat { csv, jsonl };

/// How a malformed record is handled.
enum class ParsePolicy { skip_and_count, strict };

struct FieldNames {
    std::string id = "id";  // optional column; ordinal fallback when absent
    std::string source = "source";
    std::string target = "target";
    std::string timestamp = "timestamp";
    std::string text = "text";
    std::string anonymous = "anonymous";
    std::string label_update = "label_update";
    std::string label_targeted = "label_targeted";
};

struct IngestConfig {
    InputFormat format = InputFormat::csv;
    char delimiter = ',';
    bool header = true;  // csv only; when false, fields are 0-based column indices
    std::unordered_map<std::string, int> column_indices;  // header=false: field name -> column
    TimestampFormat timestamp_format = TimestampFormat::automatic;
    FieldNames fields;
    ParsePolicy policy = ParsePolicy::skip_and_count;
    double days_per_month = kDefaultDaysPerMonth;
};

struct IngestStats {
    std::int64_t total_records = 0;
    std::int64_t accepted = 0;
    std::int64_t anonymous_dropped = 0;
    std::int64_t malformed_dropped = 0;

    std::string to_json() const;
    bool operator==(const IngestStats&) const = default;
};

// Streaming parse: invokes sink once per accepted event. Anonymous events are
// dropped here and never forwarded; malformed records are skipped and counted
// (or throw DataError under strict policy).
IngestStats for_each_event(std::istream& in, const IngestConfig& config,
                           const std::function<void(InteractionEvent&&)>& sink);

std::pair<std::vector<InteractionEvent>, IngestStats> parse_events(std::istream& in,
                                                                   const IngestConfig& config);

// Order-independent aggregation of events into directed relationships.
// Shardable: feed disjoint event subsets to several accumulators and merge.
class RelationshipAccumulator {
  public:
    explicit RelationshipAccumulator(double days_per_month = kDefaultDaysPerMonth);

    void add(const InteractionEvent& event);
    void merge(RelationshipAccumulator&& other);

    /// Relationships in canonical (source, target) order. Consumes the accumulator.
    std::vector<Relationship> finish() &&;

    std::int64_t total_events() const { return total_events_; }

  private:
    struct PairAgg {
        std::int64_t count = 0;
        std::int64_t first_ts = 0;
        std::int64_t last_ts = 0;
    };
    std::unordered_map<std::string, PairAgg> pairs_;  // key: source \x1f target
    double days_per_month_;
    std::int64_t total_events_ = 0;
};

std::vector<Relationship> build_relationships(const std::vector<InteractionEvent>& events,
                                              double days_per_month = kDefaultDaysPerMonth);

/// Keeps relationships with event_count >= 2 and duration_months >= 1.
std::vector<Relationship> filter_relationships(std::vector<Relationship> relationships);

// Edge-list file format: header + one line per relationship
//   source,target,event_count,first_ts,last_ts,contact_frequency
// Timestamps ISO-8601, frequency printed with 6 decimal digits. The reader
// recomputes duration and frequency from the exact fields, so written values
// round-trip bit-for-bit.
void write_edge_list(std::ostream& out, const std::vector<Relationship>& relationships);
std::vector<Relationship> read_edge_list(std::istream& in,
                                         double days_per_month = kDefaultDaysPerMonth);

/// RFC4180-style split of a single line (quoted fields, "" escapes).
std::vector<std::string> split_delimited(const std::string& line, char delimiter);

}  // namespace egolayers
