#include "egolayers/config.hpp"

#include <fstream>
#include <set>

namespace egolayers {

namespace {

void check_keys(const nlohmann::json& j, const char* where,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
    const std::set<std::string> known(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) {
            throw ConfigError(std::string("unknown config key '") + key + "' in " + where);
        }
    }
}

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return fallback;
    try {
        return it->get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("config key '") + key + "' has the wrong type");
    }
}

LabelSource label_source_from_string(const std::string& s) {
    if (s == "none") return LabelSource::none;
    if (s == "file") return LabelSource::file;
    if (s == "heuristic") return LabelSource::heuristic;
    throw ConfigError("labels.source must be none|file|heuristic, got '" + s + "'");
}

std::string label_source_to_string(LabelSource s) {
    switch (s) {
        case LabelSource::none: return "none";
        case LabelSource::file: return "file";
        case LabelSource::heuristic: return "heuristic";
    }
    return "none";
}

InputFormat format_from_string(const std::string& s) {
    if (s == "csv") return InputFormat::csv;
    if (s == "jsonl") return InputFormat::jsonl;
    throw ConfigError("input.format must be csv|jsonl, got '" + s + "'");
}

TimestampFormat ts_format_from_string(const std::string& s) {
    if (s == "iso8601") return TimestampFormat::iso8601;
    if (s == "unix") return TimestampFormat::unix_seconds;
    if (s == "auto") return TimestampFormat::automatic;
    throw ConfigError("input.timestamp_format must be iso8601|unix|auto, got '" + s + "'");
}

std::string ts_format_to_string(TimestampFormat f) {
    switch (f) {
        case TimestampFormat::iso8601: return "iso8601";
        case TimestampFormat::unix_seconds: return "unix";
        case TimestampFormat::automatic: return "auto";
    }
    return "auto";
}

LayerSpec layer_spec_from_json(const nlohmann::json& j) {
    check_keys(j, "synth layer",
               {"alter_count_mean", "alter_count_dispersion", "frequency_mean", "frequency_sd",
                "update_prob", "targeted_prob", "frequency_model"});
    LayerSpec spec;
    spec.alter_count_mean = get_or(j, "alter_count_mean", spec.alter_count_mean);
    spec.alter_count_dispersion = get_or(j, "alter_count_dispersion", spec.alter_count_dispersion);
    spec.frequency_mean = get_or(j, "frequency_mean", spec.frequency_mean);
    spec.frequency_sd = get_or(j, "frequency_sd", spec.frequency_sd);
    spec.update_prob = get_or(j, "update_prob", spec.update_prob);
    spec.targeted_prob = get_or(j, "targeted_prob", spec.targeted_prob);
    const std::string model = get_or<std::string>(j, "frequency_model", "gaussian");
    if (model == "gaussian") {
        spec.frequency_model = FrequencyModel::gaussian_truncated;
    } else if (model == "lognormal") {
        spec.frequency_model = FrequencyModel::log_normal;
    } else {
        throw ConfigError("frequency_model must be gaussian|lognormal, got '" + model + "'");
    }
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid synth layer: ") + e.what());
    }
    return spec;
}

nlohmann::json layer_spec_to_json(const LayerSpec& spec) {
    return {{"alter_count_mean", spec.alter_count_mean},
            {"alter_count_dispersion", spec.alter_count_dispersion},
            {"frequency_mean", spec.frequency_mean},
            {"frequency_sd", spec.frequency_sd},
            {"update_prob", spec.update_prob},
            {"targeted_prob", spec.targeted_prob},
            {"frequency_model",
             spec.frequency_model == FrequencyModel::gaussian_truncated ? "gaussian" : "lognormal"}};
}

std::vector<LayerSpec> layers_from_json(const nlohmann::json& j) {
    // Either an array of layer objects or a named preset string.
    if (j.is_string()) {
        const std::string name = j.get<std::string>();
        if (name == "reviewer_two_layer") return presets::reviewer_two_layer();
        if (name == "reviewer_three_layer") return presets::reviewer_three_layer();
        if (name == "author_two_layer") return presets::author_two_layer();
        if (name == "author_three_layer") return presets::author_three_layer();
        throw ConfigError("unknown layer preset '" + name + "'");
    }
    if (!j.is_array() || j.empty()) {
        throw ConfigError("synth layers must be a preset name or a nonempty array");
    }
    std::vector<LayerSpec> out;
    for (const auto& item : j) out.push_back(layer_spec_from_json(item));
    return out;
}

}  // namespace

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    check_keys(j, "config root",
               {"input", "days_per_month", "criteria", "k_max", "elbow", "fixed_ks", "directions",
                "restrict_to_matching", "labels", "crosstab_k", "crosstab_direction", "edge_list",
                "output_dir", "seed", "parallelism", "synth"});
    RunConfig c;

    if (j.contains("input")) {
        const auto& in = j.at("input");
        check_keys(in, "input",
                   {"path", "format", "delimiter", "header", "column_indices", "timestamp_format",
                    "fields", "strict"});
        c.input.path = get_or<std::string>(in, "path", "");
        c.input.format = format_from_string(get_or<std::string>(in, "format", "csv"));
        const std::string delim = get_or<std::string>(in, "delimiter", ",");
        if (delim.size() != 1) throw ConfigError("input.delimiter must be one character");
        c.input.delimiter = delim[0];
        c.input.header = get_or(in, "header", true);
        c.input.timestamp_format =
            ts_format_from_string(get_or<std::string>(in, "timestamp_format", "auto"));
        c.input.policy = get_or(in, "strict", false) ? ParsePolicy::strict
                                                     : ParsePolicy::skip_and_count;
        if (in.contains("column_indices")) {
            for (const auto& [key, value] : in.at("column_indices").items()) {
                c.input.column_indices[key] = value.get<int>();
            }
        }
        if (in.contains("fields")) {
            const auto& f = in.at("fields");
            check_keys(f, "input.fields",
                       {"id", "source", "target", "timestamp", "text", "anonymous", "label_update",
                        "label_targeted"});
            c.input.fields.id = get_or<std::string>(f, "id", c.input.fields.id);
            c.input.fields.source = get_or<std::string>(f, "source", c.input.fields.source);
            c.input.fields.target = get_or<std::string>(f, "target", c.input.fields.target);
            c.input.fields.timestamp =
                get_or<std::string>(f, "timestamp", c.input.fields.timestamp);
            c.input.fields.text = get_or<std::string>(f, "text", c.input.fields.text);
            c.input.fields.anonymous =
                get_or<std::string>(f, "anonymous", c.input.fields.anonymous);
            c.input.fields.label_update =
                get_or<std::string>(f, "label_update", c.input.fields.label_update);
            c.input.fields.label_targeted =
                get_or<std::string>(f, "label_targeted", c.input.fields.label_targeted);
        }
    }

    c.days_per_month = get_or(j, "days_per_month", c.days_per_month);
    if (!(c.days_per_month > 0.0)) throw ConfigError("days_per_month must be positive");

    if (j.contains("criteria")) {
        const auto& cr = j.at("criteria");
        check_keys(cr, "criteria", {"min_monthly_rate", "min_connections"});
        c.criteria.min_monthly_rate = get_or(cr, "min_monthly_rate", c.criteria.min_monthly_rate);
        c.criteria.min_connections = get_or(cr, "min_connections", c.criteria.min_connections);
        if (!(c.criteria.min_monthly_rate > 0.0) || c.criteria.min_connections <= 0) {
            throw ConfigError("criteria thresholds must be strictly positive");
        }
    }

    c.k_max = get_or(j, "k_max", c.k_max);
    if (c.k_max < 1 || c.k_max > 1000) throw ConfigError("k_max must lie in [1, 1000]");

    if (j.contains("elbow")) {
        const auto& e = j.at("elbow");
        check_keys(e, "elbow", {"marginal_gain_threshold", "zero_tol"});
        c.elbow.marginal_gain_threshold =
            get_or(e, "marginal_gain_threshold", c.elbow.marginal_gain_threshold);
        c.elbow.zero_tol = get_or(e, "zero_tol", c.elbow.zero_tol);
        if (!(c.elbow.marginal_gain_threshold > 0.0) || c.elbow.marginal_gain_threshold >= 1.0) {
            throw ConfigError("elbow.marginal_gain_threshold must lie in (0, 1)");
        }
        if (c.elbow.zero_tol < 0.0) throw ConfigError("elbow.zero_tol must be nonnegative");
    }

    if (j.contains("fixed_ks")) {
        c.fixed_ks.clear();
        for (const auto& v : j.at("fixed_ks")) {
            const int k = v.get<int>();
            if (k < 1 || k > 1000) throw ConfigError("fixed_ks entries must lie in [1, 1000]");
            c.fixed_ks.push_back(k);
        }
    }

    if (j.contains("directions")) {
        c.directions.clear();
        for (const auto& v : j.at("directions")) {
            c.directions.push_back(direction_from_string(v.get<std::string>()));
        }
        if (c.directions.empty()) throw ConfigError("directions must not be empty");
    }

    c.restrict_to_matching = get_or(j, "restrict_to_matching", c.restrict_to_matching);

    if (j.contains("labels")) {
        const auto& l = j.at("labels");
        check_keys(l, "labels", {"source", "path"});
        c.label_source = label_source_from_string(get_or<std::string>(l, "source", "none"));
        c.label_path = get_or<std::string>(l, "path", "");
        if (c.label_source == LabelSource::file && c.label_path.empty()) {
            throw ConfigError("labels.source=file requires labels.path");
        }
    }

    c.crosstab_k = get_or(j, "crosstab_k", c.crosstab_k);
    if (c.crosstab_k < 1 || c.crosstab_k > 1000) throw ConfigError("crosstab_k must lie in [1, 1000]");
    if (j.contains("crosstab_direction")) {
        c.crosstab_direction = direction_from_string(j.at("crosstab_direction").get<std::string>());
    }

    c.edge_list = get_or<std::string>(j, "edge_list", "");
    c.output_dir = get_or<std::string>(j, "output_dir", c.output_dir);
    c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
    c.parallelism = get_or(j, "parallelism", c.parallelism);
    if (c.parallelism < 0 || c.parallelism > 4096) {
        throw ConfigError("parallelism must lie in [0, 4096]");
    }

    if (j.contains("synth")) {
        const auto& s = j.at("synth");
        check_keys(s, "synth",
                   {"mixture", "layers", "egos", "direction", "span_months", "span_start",
                    "ego_prefix"});
        SynthConfig sc;
        if (s.contains("mixture")) {
            for (const auto& comp : s.at("mixture")) {
                check_keys(comp, "synth.mixture component", {"egos", "layers"});
                MixtureComponent mc;
                mc.ego_count = comp.at("egos").get<std::int64_t>();
                mc.layers = layers_from_json(comp.at("layers"));
                sc.mixture.push_back(std::move(mc));
            }
        } else if (s.contains("layers")) {
            MixtureComponent mc;
            mc.ego_count = get_or<std::int64_t>(s, "egos", 1000);
            mc.layers = layers_from_json(s.at("layers"));
            sc.mixture.push_back(std::move(mc));
        } else {
            throw ConfigError("synth requires either 'mixture' or 'layers'");
        }
        for (const auto& mc : sc.mixture) {
            if (mc.ego_count <= 0) throw ConfigError("synth ego counts must be positive");
        }
        if (s.contains("direction")) {
            sc.direction = direction_from_string(s.at("direction").get<std::string>());
        }
        sc.span_months = get_or(s, "span_months", sc.span_months);
        if (!(sc.span_months > 0.0)) throw ConfigError("synth.span_months must be positive");
        if (s.contains("span_start")) {
            const auto ts = parse_timestamp(s.at("span_start").get<std::string>(),
                                            TimestampFormat::automatic);
            if (!ts) throw ConfigError("synth.span_start is not a valid timestamp");
            sc.span_start_ts = *ts;
        }
        sc.ego_prefix = get_or<std::string>(s, "ego_prefix", sc.ego_prefix);
        c.synth = std::move(sc);
    }

    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return from_json(j);
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json fields{{"id", input.fields.id},
                          {"source", input.fields.source},
                          {"target", input.fields.target},
                          {"timestamp", input.fields.timestamp},
                          {"text", input.fields.text},
                          {"anonymous", input.fields.anonymous},
                          {"label_update", input.fields.label_update},
                          {"label_targeted", input.fields.label_targeted}};
    nlohmann::json j{
        {"input",
         {{"path", input.path},
          {"format", input.format == InputFormat::csv ? "csv" : "jsonl"},
          {"delimiter", std::string(1, input.delimiter)},
          {"header", input.header},
          {"timestamp_format", ts_format_to_string(input.timestamp_format)},
          {"fields", fields},
          {"strict", input.policy == ParsePolicy::strict}}},
        {"days_per_month", days_per_month},
        {"criteria",
         {{"min_monthly_rate", criteria.min_monthly_rate},
          {"min_connections", criteria.min_connections}}},
        {"k_max", k_max},
        {"elbow",
         {{"marginal_gain_threshold", elbow.marginal_gain_threshold},
          {"zero_tol", elbow.zero_tol}}},
        {"fixed_ks", fixed_ks},
        {"restrict_to_matching", restrict_to_matching},
        {"labels", {{"source", label_source_to_string(label_source)}, {"path", label_path}}},
        {"crosstab_k", crosstab_k},
        {"crosstab_direction", to_string(crosstab_direction)},
        {"edge_list", edge_list},
        {"output_dir", output_dir},
        {"seed", seed},
        {"parallelism", parallelism}};
    nlohmann::json dirs = nlohmann::json::array();
    for (const auto d : directions) dirs.push_back(to_string(d));
    j["directions"] = dirs;
    if (!input.column_indices.empty()) {
        nlohmann::json cols = nlohmann::json::object();
        for (const auto& [name, idx] : input.column_indices) cols[name] = idx;
        j["input"]["column_indices"] = cols;
    }
    if (synth) {
        nlohmann::json mixture = nlohmann::json::array();
        for (const auto& mc : synth->mixture) {
            nlohmann::json layers = nlohmann::json::array();
            for (const auto& spec : mc.layers) layers.push_back(layer_spec_to_json(spec));
            mixture.push_back({{"egos", mc.ego_count}, {"layers", layers}});
        }
        j["synth"] = {{"mixture", mixture},
                      {"direction", to_string(synth->direction)},
                      {"span_months", synth->span_months},
                      {"span_start", format_iso8601(synth->span_start_ts)},
                      {"ego_prefix", synth->ego_prefix}};
    }
    return j;
}

IngestConfig RunConfig::ingest_config() const {
    IngestConfig ic;
    ic.format = input.format;
    ic.delimiter = input.delimiter;
    ic.header = input.header;
    ic.column_indices = input.column_indices;
    ic.timestamp_format = input.timestamp_format;
    ic.fields = input.fields;
    ic.policy = input.policy;
    ic.days_per_month = days_per_month;
    return ic;
}

std::string RunConfig::edge_list_path() const {
    if (!edge_list.empty()) return edge_list;
    return output_dir + "/edges.csv";
}

}  // namespace egolayers
