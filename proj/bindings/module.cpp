#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "egolayers/commands.hpp"
#include "egolayers/config.hpp"
#include "egolayers/manifest.hpp"
#include "egolayers/pipeline.hpp"
#include "egolayers/reviewtypes.hpp"
#include "egolayers/synth.hpp"

namespace py = pybind11;
using namespace egolayers;

namespace {

EgoNetwork ego_from_weights(const std::vector<double>& weights) {
    EgoNetwork ego;
    ego.ego_id = "ego";
    char buf[16];
    for (std::size_t i = 0; i < weights.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "a%04zu", i);
        ego.alters.emplace_back(buf, weights[i]);
    }
    return ego;
}

RunConfig config_from_json_text(const std::string& text) {
    const auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ConfigError("config string is not valid JSON");
    return RunConfig::from_json(j);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Layered ego-network analysis: exact 1-D k-means, elbow/silhouette "
              "selection, population layer statistics, synthetic generators.";
    m.attr("__version__") = kToolVersion;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);

    py::class_<Clustering>(m, "Clustering")
        .def_readonly("k", &Clustering::k)
        .def_readonly("assignments", &Clustering::assignments)
        .def_readonly("centroids", &Clustering::centroids)
        .def_readonly("wcss", &Clustering::wcss)
        .def("sizes", &Clustering::sizes)
        .def("__repr__", [](const Clustering& c) {
            std::ostringstream ss;
            ss << "Clustering(k=" << c.k << ", wcss=" << c.wcss << ")";
            return ss.str();
        });

    m.def("kmeans_1d", &kmeans_1d_exact, py::arg("weights"), py::arg("k"),
          "Globally optimal 1-D k-means over the weights (deterministic DP).");
    m.def("wcss_curve", &wcss_curve, py::arg("weights"), py::arg("k_max") = kDefaultKMax,
          "Optimal WCSS for k = 1..min(k_max, n).");
    m.def(
        "elbow_optimal_k",
        [](const std::vector<double>& curve, double threshold, double zero_tol) {
            return elbow_optimal_k(curve, {threshold, zero_tol});
        },
        py::arg("curve"), py::arg("marginal_gain_threshold") = ElbowParams{}.marginal_gain_threshold,
        py::arg("zero_tol") = ElbowParams{}.zero_tol,
        "Smallest k whose marginal explained-variance gain drops below the threshold.");
    m.def("silhouette", &silhouette, py::arg("weights"), py::arg("clustering"),
          "Mean silhouette (absolute-difference distance, singleton s=0).");
    m.def("kmeans_1d_lloyd", &kmeans_1d_lloyd, py::arg("weights"), py::arg("k"), py::arg("seed"),
          py::arg("restarts") = 8, "Seeded Lloyd's iteration; cross-check only.");

    py::class_<ClusteringResult>(m, "EgoAnalysis")
        .def_readonly("ego_id", &ClusteringResult::ego_id)
        .def_readonly("degree", &ClusteringResult::degree)
        .def_readonly("wcss_curve", &ClusteringResult::wcss_curve)
        .def_readonly("optimal_k", &ClusteringResult::optimal_k)
        .def_readonly("clustering", &ClusteringResult::clustering_at_optimal)
        .def_readonly("silhouette", &ClusteringResult::silhouette_at_optimal)
        .def_readonly("fixed", &ClusteringResult::clusterings_at_fixed)
        .def("__repr__", [](const ClusteringResult& r) {
            std::ostringstream ss;
            ss << "EgoAnalysis(degree=" << r.degree << ", optimal_k=" << r.optimal_k << ")";
            return ss.str();
        });

    m.def(
        "analyze_weights",
        [](const std::vector<double>& weights, int k_max, double threshold, double zero_tol,
           const std::vector<int>& fixed_ks) -> std::optional<ClusteringResult> {
            return analyze_ego(ego_from_weights(weights), k_max, {threshold, zero_tol}, fixed_ks);
        },
        py::arg("weights"), py::arg("k_max") = kDefaultKMax,
        py::arg("marginal_gain_threshold") = ElbowParams{}.marginal_gain_threshold,
        py::arg("zero_tol") = ElbowParams{}.zero_tol, py::arg("fixed_ks") = std::vector<int>{},
        "Full per-ego pipeline over a weight vector; None when fewer than 2 weights.");

    py::class_<LayerSpec>(m, "LayerSpec")
        .def(py::init([](double alter_count_mean, double alter_count_dispersion,
                         double frequency_mean, double frequency_sd, double update_prob,
                         double targeted_prob, const std::string& frequency_model) {
                 LayerSpec s;
                 s.alter_count_mean = alter_count_mean;
                 s.alter_count_dispersion = alter_count_dispersion;
                 s.frequency_mean = frequency_mean;
                 s.frequency_sd = frequency_sd;
                 s.update_prob = update_prob;
                 s.targeted_prob = targeted_prob;
                 if (frequency_model == "gaussian") {
                     s.frequency_model = FrequencyModel::gaussian_truncated;
                 } else if (frequency_model == "lognormal") {
                     s.frequency_model = FrequencyModel::log_normal;
                 } else {
                     throw ConfigError("frequency_model must be gaussian|lognormal");
                 }
                 s.validate();
                 return s;
             }),
             py::arg("alter_count_mean"), py::arg("alter_count_dispersion") = 0.0,
             py::arg("frequency_mean") = 1.0, py::arg("frequency_sd") = 0.0,
             py::arg("update_prob") = 0.0, py::arg("targeted_prob") = 0.0,
             py::arg("frequency_model") = "gaussian")
        .def_readwrite("alter_count_mean", &LayerSpec::alter_count_mean)
        .def_readwrite("alter_count_dispersion", &LayerSpec::alter_count_dispersion)
        .def_readwrite("frequency_mean", &LayerSpec::frequency_mean)
        .def_readwrite("frequency_sd", &LayerSpec::frequency_sd)
        .def_readwrite("update_prob", &LayerSpec::update_prob)
        .def_readwrite("targeted_prob", &LayerSpec::targeted_prob);

    m.def("reviewer_two_layer", &presets::reviewer_two_layer, py::arg("cv") = 0.2);
    m.def("reviewer_three_layer", &presets::reviewer_three_layer, py::arg("cv") = 0.2);
    m.def("author_two_layer", &presets::author_two_layer, py::arg("cv") = 0.2);
    m.def("author_three_layer", &presets::author_three_layer, py::arg("cv") = 0.2);

    m.def(
        "generate_ego",
        [](const std::vector<LayerSpec>& layers, std::uint64_t seed, const std::string& ego_id) {
            auto [ego, planted] = generate_ego(layers, seed, ego_id);
            std::vector<std::tuple<std::string, int, double>> truth;
            truth.reserve(planted.alters.size());
            for (const auto& a : planted.alters) {
                truth.emplace_back(a.alter_id, a.layer, a.frequency);
            }
            return py::make_tuple(ego.alters, truth);
        },
        py::arg("layers"), py::arg("seed"), py::arg("ego_id") = std::string(),
        "Returns (alters sorted by descending frequency, planted ledger entries).");

    m.def(
        "classify_review",
        [](const std::string& text) {
            const ReviewLabel label = classify_review_heuristic(text);
            return py::make_tuple(label.update_encouragement, label.targeted);
        },
        py::arg("text"), "Keyword-lexicon labels: (update_encouragement, targeted).");

    // Config-driven runs, mirroring the CLI subcommands.
    m.def("run_ingest", [](const std::string& config_json) { cmd_ingest(config_from_json_text(config_json)); },
          py::arg("config_json"));
    m.def("run_analyze", [](const std::string& config_json) { cmd_analyze(config_from_json_text(config_json)); },
          py::arg("config_json"));
    m.def("run_crosstab", [](const std::string& config_json) { cmd_crosstab(config_from_json_text(config_json)); },
          py::arg("config_json"));
    m.def("run_synth", [](const std::string& config_json) { cmd_synth(config_from_json_text(config_json)); },
          py::arg("config_json"));
}
