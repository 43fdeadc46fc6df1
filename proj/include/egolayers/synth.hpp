#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "egolayers/egonet.hpp"
#include "egolayers/types.hpp"

namespace egolayers {

enum class FrequencyModel {
    gaussian_truncated,  // default: controllable separation
    log_normal,          // heavy-tail stress mode, matched mean/sd
};

struct LayerSpec {
    double alter_count_mean = 1.0;
    double alter_count_dispersion = 0.0;
    double frequency_mean = 1.0;
    double frequency_sd = 0.0;
    double update_prob = 0.0;
    double targeted_prob = 0.0;
    FrequencyModel frequency_model = FrequencyModel::gaussian_truncated;

    /// Throws std::invalid_argument on out-of-range parameters.
    void validate() const;
};

struct PlantedAlter {
    std::string alter_id;
    int layer = 0;
    double frequency = 0.0;  // as drawn, before event quantization
};

struct PlantedEgo {
    std::string ego_id;
    int true_k = 0;
    std::vector<PlantedAlter> alters;  // generation order: layer, then ordinal
};

// Deterministic for a given seed: per layer, alter count is a rounded
// Gaussian floored at 1 and frequencies are drawn from the layer's model,
// truncated to > 0.05.
std::pair<EgoNetwork, PlantedEgo> generate_ego(const std::vector<LayerSpec>& layers,
                                               std::uint64_t seed,
                                               const std::string& ego_id = std::string(),
                                               Direction direction = Direction::outgoing);

struct MixtureComponent {
    std::int64_t ego_count = 0;
    std::vector<LayerSpec> layers;
};

struct EventLogOptions {
    std::uint64_t seed = 0;
    Direction direction = Direction::outgoing;
    std::int64_t span_start_ts = 1420070400;  // 2015-01-01T00:00:00Z
    double days_per_month = kDefaultDaysPerMonth;
    double span_months = 12.0;
    std::string ego_prefix = "ego";
};

struct EventLogTotals {
    std::int64_t egos = 0;
    std::int64_t alters = 0;
    std::int64_t events = 0;
};

// Emits raw event records (csv: id,source,target,timestamp), a label file
// (event_id,update_encouragement,targeted) and a line-JSON ledger of planted
// structure. Per-relationship event count = max(2, round(frequency * span)),
// timestamps evenly spaced across the span, so ingest recovers the planted
// frequency within 1/(2*span) events/month. Output order is canonical
// (ego index, alter index, event index); per-ego seeds are split from the
// master seed, so output is byte-identical for a given configuration.
EventLogTotals generate_event_log(const std::vector<MixtureComponent>& mixture,
                                  const EventLogOptions& options, std::ostream& events_out,
                                  std::ostream& labels_out, std::ostream& ledger_out);

// Built-in layer parameterizations: published layer means from a large
// fanfiction reviewing corpus (reviewer- and author-as-ego, at k = 2 and 3),
// with dispersion set to cv * mean for controlled separation. The reviewer
// three-layer preset carries that study's per-layer review-type proportions.
namespace presets {
std::vector<LayerSpec> reviewer_two_layer(double cv = 0.2);
std::vector<LayerSpec> reviewer_three_layer(double cv = 0.2);
std::vector<LayerSpec> author_two_layer(double cv = 0.2);
std::vector<LayerSpec> author_three_layer(double cv = 0.2);
}  // namespace presets

}  // namespace egolayers
