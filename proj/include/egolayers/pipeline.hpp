#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "egolayers/cluster.hpp"
#include "egolayers/egonet.hpp"
#include "egolayers/layers.hpp"

namespace egolayers {

struct AnalysisOptions {
    Direction direction = Direction::outgoing;
    InclusionCriteria criteria;
    int k_max = kDefaultKMax;
    ElbowParams elbow;
    std::vector<int> fixed_ks = {2, 3};
    int parallelism = 0;  // 0 = hardware concurrency
    bool restrict_to_matching = false;
};

struct AnalysisRun {
    std::vector<ClusteringResult> results;  // canonical ego order
    PopulationSummary summary;
    std::int64_t active_count = 0;
    std::int64_t skipped_degenerate = 0;
};

// Runs workers over 0..n-1; results must be written into per-index slots so
// output is identical for any parallelism degree.
void run_parallel(std::size_t n, int parallelism, const std::function<void(std::size_t)>& fn);

// Select active egos, analyze them in parallel, fold the population summary
// in canonical order. Throws DataError when no ego passes the criteria.
AnalysisRun analyze_graph(const InteractionGraph& graph, const AnalysisOptions& options);

/// Stable line-JSON encoding of one per-ego result.
std::string result_to_json_line(const ClusteringResult& result);

}  // namespace egolayers
