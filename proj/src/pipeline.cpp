#include "egolayers/pipeline.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include <json.hpp>

namespace egolayers {

void run_parallel(std::size_t n, int parallelism, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    unsigned workers = parallelism > 0 ? static_cast<unsigned>(parallelism)
                                       : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(n, std::memory_order_relaxed);  // drain remaining work
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) threads.emplace_back(work);
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

AnalysisRun analyze_graph(const InteractionGraph& graph, const AnalysisOptions& options) {
    const auto nodes = graph.select_active_nodes(options.direction, options.criteria);
    if (nodes.empty()) {
        throw DataError("no active egos matched the inclusion criteria (min_monthly_rate=" +
                        std::to_string(options.criteria.min_monthly_rate) +
                        ", min_connections=" + std::to_string(options.criteria.min_connections) +
                        ", direction=" + to_string(options.direction) + ")");
    }

    std::vector<std::optional<ClusteringResult>> slots(nodes.size());
    run_parallel(nodes.size(), options.parallelism, [&](std::size_t i) {
        const EgoNetwork ego = graph.extract_ego_network(nodes[i], options.direction);
        slots[i] = analyze_ego(ego, options.k_max, options.elbow, options.fixed_ks);
    });

    AnalysisRun run;
    run.active_count = static_cast<std::int64_t>(nodes.size());
    PopulationAccumulator acc(options.direction, options.fixed_ks, options.restrict_to_matching);
    run.results.reserve(nodes.size());
    for (auto& slot : slots) {
        if (!slot) {
            ++run.skipped_degenerate;
            continue;
        }
        acc.add(*slot);
        run.results.push_back(std::move(*slot));
    }
    if (run.results.empty()) {
        throw DataError("every active ego was degenerate (degree < 2); nothing to analyze");
    }
    run.summary = acc.finish();
    return run;
}

std::string result_to_json_line(const ClusteringResult& r) {
    nlohmann::json j;
    j["ego_id"] = r.ego_id;
    j["direction"] = to_string(r.direction);
    j["degree"] = r.degree;
    j["wcss_curve"] = r.wcss_curve;
    j["optimal_k"] = r.optimal_k;
    j["centroids"] = r.clustering_at_optimal.centroids;
    j["layer_sizes"] = r.clustering_at_optimal.sizes();
    if (r.silhouette_at_optimal) {
        j["silhouette"] = *r.silhouette_at_optimal;
    } else {
        j["silhouette"] = nullptr;
    }
    return j.dump();
}

}  // namespace egolayers
