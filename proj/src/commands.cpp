#include "egolayers/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "egolayers/manifest.hpp"
#include "egolayers/pipeline.hpp"
#include "egolayers/reviewtypes.hpp"

namespace egolayers {

namespace {

namespace fs = std::filesystem;

void ensure_output_dir(const RunConfig& config) {
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec) {
        throw ConfigError("cannot create output directory '" + config.output_dir +
                          "': " + ec.message());
    }
}

std::ifstream open_input(const std::string& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(std::string("cannot open ") + what + " '" + path + "'");
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    return out;
}

InteractionGraph load_graph(const RunConfig& config) {
    const std::string path = config.edge_list_path();
    auto in = open_input(path, "edge list");
    const auto relationships = read_edge_list(in, config.days_per_month);
    if (relationships.empty()) {
        throw DataError("edge list '" + path + "' holds no relationships; run ingest first");
    }
    return InteractionGraph::assemble(relationships, config.days_per_month);
}

}  // namespace

void cmd_ingest(const RunConfig& config) {
    if (config.input.path.empty()) throw ConfigError("ingest requires input.path");
    ensure_output_dir(config);

    auto in = open_input(config.input.path, "event log");
    RelationshipAccumulator acc(config.days_per_month);
    const IngestStats stats =
        for_each_event(in, config.ingest_config(), [&](InteractionEvent&& ev) { acc.add(ev); });
    const auto relationships = filter_relationships(std::move(acc).finish());

    const std::string edge_path = config.edge_list_path();
    {
        auto out = open_output(edge_path);
        write_edge_list(out, relationships);
    }
    const std::string stats_path = config.output_dir + "/ingest_stats.json";
    {
        auto out = open_output(stats_path);
        out << stats.to_json() << "\n";
    }
    std::cerr << stats.to_json() << "\n";
    if (relationships.empty()) {
        std::cerr << "note: no relationship survived the >=2 events / >=1 month filter\n";
    }

    write_manifest(config.output_dir, "ingest", config.to_json(), {config.input.path},
                   {edge_path, stats_path});
}

void cmd_analyze(const RunConfig& config) {
    ensure_output_dir(config);
    const InteractionGraph graph = load_graph(config);

    std::vector<std::string> outputs;
    for (const Direction direction : config.directions) {
        AnalysisOptions options;
        options.direction = direction;
        options.criteria = config.criteria;
        options.k_max = config.k_max;
        options.elbow = config.elbow;
        options.fixed_ks = config.fixed_ks;
        options.parallelism = config.parallelism;
        options.restrict_to_matching = config.restrict_to_matching;

        const AnalysisRun run = analyze_graph(graph, options);
        const std::string tag = to_string(direction);

        const std::string results_path = config.output_dir + "/results_" + tag + ".jsonl";
        {
            auto out = open_output(results_path);
            for (const auto& r : run.results) out << result_to_json_line(r) << "\n";
        }
        const std::string summary_path = config.output_dir + "/summary_" + tag + ".json";
        {
            auto out = open_output(summary_path);
            out << run.summary.to_json() << "\n";
        }
        const std::string table_path = config.output_dir + "/summary_" + tag + ".txt";
        {
            auto out = open_output(table_path);
            out << run.summary.to_text();
        }
        const std::string px_path = config.output_dir + "/p_of_x_" + tag + ".csv";
        {
            auto out = open_output(px_path);
            out << run.summary.p_of_x_csv();
        }
        outputs.insert(outputs.end(), {results_path, summary_path, table_path, px_path});
        std::cerr << "analyze[" << tag << "]: " << run.results.size() << " egos analyzed, "
                  << run.skipped_degenerate << " degenerate skipped\n";
    }

    write_manifest(config.output_dir, "analyze", config.to_json(), {config.edge_list_path()},
                   outputs);
}

void cmd_crosstab(const RunConfig& config) {
    if (config.label_source == LabelSource::none) {
        throw ConfigError("crosstab requires labels.source = file or heuristic");
    }
    if (config.input.path.empty()) throw ConfigError("crosstab requires input.path (the event log)");
    ensure_output_dir(config);

    const InteractionGraph graph = load_graph(config);
    const Direction direction = config.crosstab_direction;
    const auto nodes = graph.select_active_nodes(direction, config.criteria);
    if (nodes.empty()) {
        throw DataError("no active egos matched the inclusion criteria for the crosstab");
    }

    // Layer assignments at the fixed crosstab k; egos that cannot support the
    // k (degree or distinct frequencies too small) stay unassigned.
    std::vector<std::optional<LayerAssignment>> slots(nodes.size());
    run_parallel(nodes.size(), config.parallelism, [&](std::size_t i) {
        const EgoNetwork ego = graph.extract_ego_network(nodes[i], direction);
        if (ego.degree() < config.crosstab_k) return;
        KmeansDp dp(ego.frequencies(), config.crosstab_k);
        if (config.crosstab_k > dp.distinct_count()) return;
        slots[i] = assign_layers(dp.clustering(config.crosstab_k), ego);
    });

    CrosstabBuilder builder(config.crosstab_k, direction);
    std::int64_t assigned_egos = 0;
    for (const auto& slot : slots) {
        if (!slot) continue;
        builder.add_assignment(*slot);
        ++assigned_egos;
    }
    if (assigned_egos == 0) {
        throw DataError("no ego could be clustered at crosstab_k=" +
                        std::to_string(config.crosstab_k));
    }

    std::optional<LabelLoadResult> file_labels;
    std::vector<std::string> inputs{config.edge_list_path(), config.input.path};
    if (config.label_source == LabelSource::file) {
        auto in = open_input(config.label_path, "label file");
        file_labels = load_labels(in, ',', config.input.policy);
        inputs.push_back(config.label_path);
    }

    auto events_in = open_input(config.input.path, "event log");
    for_each_event(events_in, config.ingest_config(), [&](InteractionEvent&& ev) {
        std::optional<ReviewLabel> label;
        if (file_labels) {
            const auto it = file_labels->labels.find(ev.event_id);
            if (it != file_labels->labels.end()) {
                label = it->second;
            } else if (ev.label) {
                label = ev.label;
            }
        } else {
            // Heuristic source: only events that carry text can be labeled.
            if (ev.text && !ev.text->empty()) label = classify_review_heuristic(*ev.text);
        }
        builder.add_event(ev, label);
    });

    const LayerCrosstab tab = builder.finish();
    const std::string json_path = config.output_dir + "/crosstab.json";
    {
        auto out = open_output(json_path);
        out << tab.to_json() << "\n";
    }
    const std::string text_path = config.output_dir + "/crosstab.txt";
    {
        auto out = open_output(text_path);
        out << tab.to_text();
    }
    std::cerr << "crosstab: " << assigned_egos << " egos, " << tab.attributed_total()
              << " events attributed (" << tab.unassigned << " unassigned, " << tab.unlabeled
              << " unlabeled)\n";

    write_manifest(config.output_dir, "crosstab", config.to_json(), inputs,
                   {json_path, text_path});
}

void cmd_synth(const RunConfig& config) {
    if (!config.synth) throw ConfigError("synth requires a 'synth' config block");
    ensure_output_dir(config);

    EventLogOptions options;
    options.seed = config.seed;
    options.direction = config.synth->direction;
    options.span_start_ts = config.synth->span_start_ts;
    options.days_per_month = config.days_per_month;
    options.span_months = config.synth->span_months;
    options.ego_prefix = config.synth->ego_prefix;

    const std::string events_path = config.output_dir + "/events.csv";
    const std::string labels_path = config.output_dir + "/labels.csv";
    const std::string ledger_path = config.output_dir + "/ledger.jsonl";
    auto events_out = open_output(events_path);
    auto labels_out = open_output(labels_path);
    auto ledger_out = open_output(ledger_path);
    const EventLogTotals totals =
        generate_event_log(config.synth->mixture, options, events_out, labels_out, ledger_out);

    std::cerr << "synth: " << totals.egos << " egos, " << totals.alters << " alters, "
              << totals.events << " events\n";
    write_manifest(config.output_dir, "synth", config.to_json(), {},
                   {events_path, labels_path, ledger_path});
}

void cmd_export_dot(const RunConfig& config, const std::string& ego_id, Direction direction,
                    int k, const std::string& out_path) {
    const InteractionGraph graph = load_graph(config);
    const EgoNetwork ego = graph.extract_ego_network(ego_id, direction);
    if (ego.degree() == 0) throw DataError("ego '" + ego_id + "' has no alters in this direction");

    Clustering clustering;
    if (k > 0) {
        if (k > ego.degree()) {
            throw DataError("requested k exceeds the ego's degree (" +
                            std::to_string(ego.degree()) + ")");
        }
        clustering = kmeans_1d_exact(ego.frequencies(), k);
    } else if (ego.degree() == 1) {
        clustering = kmeans_1d_exact(ego.frequencies(), 1);
    } else {
        const auto result = analyze_ego(ego, config.k_max, config.elbow, {});
        clustering = result->clustering_at_optimal;
    }
    const LayerAssignment assignment = assign_layers(clustering, ego);
    const std::string dot = export_ego_dot(assignment, ego);

    if (out_path.empty() || out_path == "-") {
        std::cout << dot;
        return;
    }
    ensure_output_dir(config);
    auto out = open_output(out_path);
    out << dot;
    write_manifest(config.output_dir, "export-dot", config.to_json(), {config.edge_list_path()},
                   {out_path});
}

}  // namespace egolayers
