#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "egolayers/commands.hpp"

namespace {

struct Overrides {
    std::optional<std::string> input;
    std::optional<std::string> output_dir;
    std::optional<std::string> edge_list;
    std::optional<std::string> label_source;
    std::optional<std::string> label_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> parallelism;
    std::optional<std::string> direction;
    std::optional<int> crosstab_k;

    void apply(egolayers::RunConfig& config) const {
        if (input) config.input.path = *input;
        if (output_dir) config.output_dir = *output_dir;
        if (edge_list) config.edge_list = *edge_list;
        if (label_source) {
            if (*label_source == "none") {
                config.label_source = egolayers::LabelSource::none;
            } else if (*label_source == "file") {
                config.label_source = egolayers::LabelSource::file;
            } else if (*label_source == "heuristic") {
                config.label_source = egolayers::LabelSource::heuristic;
            } else {
                throw egolayers::ConfigError("--labels must be none|file|heuristic");
            }
        }
        if (label_path) config.label_path = *label_path;
        if (seed) config.seed = *seed;
        if (parallelism) config.parallelism = *parallelism;
        if (direction) {
            config.directions = {egolayers::direction_from_string(*direction)};
            config.crosstab_direction = egolayers::direction_from_string(*direction);
        }
        if (crosstab_k) config.crosstab_k = *crosstab_k;
    }
};

void add_common_options(CLI::App* cmd, std::string& config_path, Overrides& o) {
    cmd->add_option("-c,--config", config_path, "JSON config file");
    cmd->add_option("--input", o.input, "input event log (overrides config)");
    cmd->add_option("--output-dir", o.output_dir, "output directory (overrides config)");
    cmd->add_option("--edge-list", o.edge_list, "edge list path (overrides config)");
    cmd->add_option("--seed", o.seed, "random seed (overrides config)");
    cmd->add_option("--parallelism", o.parallelism, "worker count, 0 = hardware");
}

egolayers::RunConfig load_config(const std::string& config_path, const Overrides& o) {
    egolayers::RunConfig config;
    if (!config_path.empty()) config = egolayers::RunConfig::from_file(config_path);
    o.apply(config);
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"egolayers: layered ego-network analysis over interaction event logs"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides o;

    auto* ingest = app.add_subcommand("ingest", "aggregate raw events into a filtered edge list");
    add_common_options(ingest, config_path, o);

    auto* analyze =
        app.add_subcommand("analyze", "cluster ego networks and summarize the population");
    add_common_options(analyze, config_path, o);
    analyze->add_option("--direction", o.direction, "restrict to one direction");

    auto* crosstab = app.add_subcommand("crosstab", "review types per network layer");
    add_common_options(crosstab, config_path, o);
    crosstab->add_option("--labels", o.label_source, "label source: none|file|heuristic");
    crosstab->add_option("--labels-path", o.label_path, "label file path");
    crosstab->add_option("--direction", o.direction, "ego direction for attribution");
    crosstab->add_option("-k", o.crosstab_k, "fixed layer count for the crosstab");

    auto* synth = app.add_subcommand("synth", "generate a synthetic event log with planted layers");
    add_common_options(synth, config_path, o);

    auto* export_dot = app.add_subcommand("export-dot", "emit one ego network as Graphviz DOT");
    add_common_options(export_dot, config_path, o);
    std::string ego_id, dot_direction = "outgoing", dot_out = "-";
    int dot_k = 0;
    export_dot->add_option("--ego", ego_id, "ego id to export")->required();
    export_dot->add_option("--direction", dot_direction, "outgoing|incoming");
    export_dot->add_option("-k", dot_k, "layer count (0 = per-ego optimal)");
    export_dot->add_option("--out", dot_out, "output path, '-' for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        const egolayers::RunConfig config = load_config(config_path, o);
        if (ingest->parsed()) {
            egolayers::cmd_ingest(config);
        } else if (analyze->parsed()) {
            egolayers::cmd_analyze(config);
        } else if (crosstab->parsed()) {
            egolayers::cmd_crosstab(config);
        } else if (synth->parsed()) {
            egolayers::cmd_synth(config);
        } else if (export_dot->parsed()) {
            egolayers::cmd_export_dot(config, ego_id,
                                      egolayers::direction_from_string(dot_direction), dot_k,
                                      dot_out);
        }
        return 0;
    } catch (const egolayers::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const egolayers::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
