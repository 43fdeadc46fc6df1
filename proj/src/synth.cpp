#include "egolayers/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "egolayers/reference.hpp"
#include "egolayers/rng.hpp"
#include "egolayers/timeutil.hpp"

namespace egolayers {

namespace {

constexpr double kFrequencyFloor = 0.05;

double draw_frequency(DeterministicRng& rng, const LayerSpec& spec) {
    for (int attempt = 0; attempt < 100000; ++attempt) {
        double f;
        if (spec.frequency_model == FrequencyModel::gaussian_truncated) {
            f = rng.normal(spec.frequency_mean, spec.frequency_sd);
        } else {
            // Log-normal matched to the requested mean and sd.
            const double m = spec.frequency_mean;
            const double s = spec.frequency_sd;
            const double sigma2 = std::log(1.0 + (s * s) / (m * m));
            const double mu = std::log(m) - 0.5 * sigma2;
            f = std::exp(rng.normal(mu, std::sqrt(sigma2)));
        }
        if (f > kFrequencyFloor) return f;
    }
    throw std::invalid_argument("frequency draws keep falling below the positivity floor");
}

}  // namespace

void LayerSpec::validate() const {
    if (!(alter_count_mean > 0.0)) {
        throw std::invalid_argument("alter_count_mean must be positive");
    }
    if (alter_count_dispersion < 0.0) {
        throw std::invalid_argument("alter_count_dispersion must be nonnegative");
    }
    if (!(frequency_mean > kFrequencyFloor)) {
        throw std::invalid_argument("frequency_mean must exceed the 0.05 positivity floor");
    }
    if (frequency_sd < 0.0) throw std::invalid_argument("frequency_sd must be nonnegative");
    if (frequency_model == FrequencyModel::gaussian_truncated &&
        !(frequency_mean - 3.0 * frequency_sd > 0.0)) {
        throw std::invalid_argument("frequency_mean - 3*frequency_sd must stay positive");
    }
    if (update_prob < 0.0 || update_prob > 1.0 || targeted_prob < 0.0 || targeted_prob > 1.0) {
        throw std::invalid_argument("label probabilities must lie in [0, 1]");
    }
}

std::pair<EgoNetwork, PlantedEgo> generate_ego(const std::vector<LayerSpec>& layers,
                                               std::uint64_t seed, const std::string& ego_id,
                                               Direction direction) {
    if (layers.empty()) throw std::invalid_argument("at least one layer spec is required");
    for (const auto& spec : layers) spec.validate();

    DeterministicRng rng(seed);
    PlantedEgo planted;
    planted.ego_id = ego_id.empty() ? "ego" + std::to_string(seed) : ego_id;
    planted.true_k = static_cast<int>(layers.size());

    char buf[32];
    int ordinal = 0;
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const LayerSpec& spec = layers[l];
        const long drawn = std::lround(rng.normal(spec.alter_count_mean, spec.alter_count_dispersion));
        const long count = std::max(1L, drawn);
        for (long i = 0; i < count; ++i) {
            std::snprintf(buf, sizeof(buf), "_a%04d", ordinal++);
            planted.alters.push_back(
                {planted.ego_id + buf, static_cast<int>(l), draw_frequency(rng, spec)});
        }
    }

    EgoNetwork ego;
    ego.ego_id = planted.ego_id;
    ego.direction = direction;
    ego.alters.reserve(planted.alters.size());
    for (const auto& a : planted.alters) ego.alters.emplace_back(a.alter_id, a.frequency);
    std::sort(ego.alters.begin(), ego.alters.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return {std::move(ego), std::move(planted)};
}

EventLogTotals generate_event_log(const std::vector<MixtureComponent>& mixture,
                                  const EventLogOptions& options, std::ostream& events_out,
                                  std::ostream& labels_out, std::ostream& ledger_out) {
    if (mixture.empty()) throw std::invalid_argument("mixture must have at least one component");
    std::int64_t total_egos = 0;
    for (const auto& comp : mixture) {
        if (comp.ego_count <= 0) {
            throw std::invalid_argument("every mixture component needs a positive ego count");
        }
        if (comp.layers.empty()) {
            throw std::invalid_argument("every mixture component needs at least one layer");
        }
        for (const auto& spec : comp.layers) spec.validate();
        total_egos += comp.ego_count;
    }
    if (!(options.span_months > 0.0) || !(options.days_per_month > 0.0)) {
        throw std::invalid_argument("span_months and days_per_month must be positive");
    }

    const std::int64_t span_seconds = std::llround(
        options.span_months * options.days_per_month * static_cast<double>(kSecondsPerDay));
    const std::uint64_t master = splitmix64(options.seed);

    events_out << "id,source,target,timestamp\n";
    labels_out << "event_id,update_encouragement,targeted\n";

    EventLogTotals totals;
    std::int64_t event_id = 0;
    std::int64_t ego_index = 0;
    char idbuf[32];

    for (const auto& comp : mixture) {
        for (std::int64_t e = 0; e < comp.ego_count; ++e, ++ego_index) {
            std::snprintf(idbuf, sizeof(idbuf), "%07lld", static_cast<long long>(ego_index));
            const std::string ego_id = options.ego_prefix + idbuf;
            const std::uint64_t structure_seed = splitmix64(master + static_cast<std::uint64_t>(ego_index));
            auto [ego, planted] = generate_ego(comp.layers, structure_seed, ego_id, options.direction);
            DeterministicRng label_rng(splitmix64(structure_seed ^ 0x6c61626c65726e67ULL));

            nlohmann::json ledger;
            ledger["ego_id"] = planted.ego_id;
            ledger["true_k"] = planted.true_k;
            nlohmann::json alters = nlohmann::json::array();

            for (const auto& alter : planted.alters) {
                const std::int64_t count =
                    std::max<std::int64_t>(2, std::llround(alter.frequency * options.span_months));
                const LayerSpec& spec = comp.layers[alter.layer];

                for (std::int64_t j = 0; j < count; ++j) {
                    const std::int64_t ts =
                        options.span_start_ts +
                        std::llround(static_cast<double>(j) * static_cast<double>(span_seconds) /
                                     static_cast<double>(count - 1));
                    const std::string& src =
                        options.direction == Direction::outgoing ? planted.ego_id : alter.alter_id;
                    const std::string& dst =
                        options.direction == Direction::outgoing ? alter.alter_id : planted.ego_id;
                    events_out << event_id << ',' << src << ',' << dst << ','
                               << format_iso8601(ts) << '\n';
                    labels_out << event_id << ',' << (label_rng.bernoulli(spec.update_prob) ? 1 : 0)
                               << ',' << (label_rng.bernoulli(spec.targeted_prob) ? 1 : 0) << '\n';
                    ++event_id;
                    ++totals.events;
                }

                alters.push_back({{"id", alter.alter_id},
                                  {"layer", alter.layer},
                                  {"frequency", alter.frequency},
                                  {"event_count", count},
                                  {"quantized_frequency",
                                   static_cast<double>(count) / options.span_months}});
                ++totals.alters;
            }
            ledger["alters"] = std::move(alters);
            ledger_out << ledger.dump() << '\n';
        }
    }
    totals.egos = total_egos;
    if (!events_out || !labels_out || !ledger_out) {
        throw DataError("failed while writing synthetic outputs");
    }
    return totals;
}

namespace presets {

namespace {

std::vector<LayerSpec> build(const double* alter_means, const double* freq_means, std::size_t k,
                             double cv, const double* update = nullptr,
                             const double* targeted = nullptr) {
    std::vector<LayerSpec> out(k);
    for (std::size_t l = 0; l < k; ++l) {
        out[l].alter_count_mean = alter_means[l];
        out[l].alter_count_dispersion = cv * alter_means[l];
        out[l].frequency_mean = freq_means[l];
        out[l].frequency_sd = cv * freq_means[l];
        if (update) out[l].update_prob = update[l];
        if (targeted) out[l].targeted_prob = targeted[l];
    }
    return out;
}

}  // namespace

std::vector<LayerSpec> reviewer_two_layer(double cv) {
    return build(reference::kReviewerK2AlterMean.data(), reference::kReviewerK2FreqMean.data(), 2,
                 cv);
}

std::vector<LayerSpec> reviewer_three_layer(double cv) {
    return build(reference::kReviewerK3AlterMean.data(), reference::kReviewerK3FreqMean.data(), 3,
                 cv, reference::kUpdateShareByLayer.data(), reference::kTargetedShareByLayer.data());
}

std::vector<LayerSpec> author_two_layer(double cv) {
    return build(reference::kAuthorK2AlterMean.data(), reference::kAuthorK2FreqMean.data(), 2, cv);
}

std::vector<LayerSpec> author_three_layer(double cv) {
    return build(reference::kAuthorK3AlterMean.data(), reference::kAuthorK3FreqMean.data(), 3, cv);
}

}  // namespace presets

}  // namespace egolayers
