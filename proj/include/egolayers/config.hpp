#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "egolayers/cluster.hpp"
#include "egolayers/egonet.hpp"
#include "egolayers/ingest.hpp"
#include "egolayers/synth.hpp"

namespace egolayers {

enum class LabelSource { none, file, heuristic };

struct SynthConfig {
    std::vector<MixtureComponent> mixture;
    Direction direction = Direction::outgoing;
    double span_months = 12.0;
    std::int64_t span_start_ts = 1420070400;
    std::string ego_prefix = "ego";
};

// One config file drives every subcommand; flags may override single keys.
// Unknown keys are rejected so typos never silently fall back to defaults.
struct RunConfig {
    struct Input {
        std::string path;
        InputFormat format = InputFormat::csv;
        char delimiter = ',';
        bool header = true;
        std::unordered_map<std::string, int> column_indices;
        TimestampFormat timestamp_format = TimestampFormat::automatic;
        FieldNames fields;
        ParsePolicy policy = ParsePolicy::skip_and_count;
    };

    Input input;
    double days_per_month = kDefaultDaysPerMonth;
    InclusionCriteria criteria;
    int k_max = kDefaultKMax;
    ElbowParams elbow;
    std::vector<int> fixed_ks = {2, 3};
    std::vector<Direction> directions = {Direction::outgoing, Direction::incoming};
    bool restrict_to_matching = false;
    LabelSource label_source = LabelSource::none;
    std::string label_path;
    int crosstab_k = 3;
    Direction crosstab_direction = Direction::outgoing;
    std::string edge_list;  // defaults to <output_dir>/edges.csv
    std::string output_dir = ".";
    std::uint64_t seed = 0;
    int parallelism = 0;
    std::optional<SynthConfig> synth;

    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig from_file(const std::string& path);
    nlohmann::json to_json() const;

    IngestConfig ingest_config() const;
    std::string edge_list_path() const;
};

}  // namespace egolayers
