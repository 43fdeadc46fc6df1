#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "egolayers/cluster.hpp"
#include "egolayers/egonet.hpp"
#include "egolayers/types.hpp"

namespace egolayers {

/// Fraction of probability mass a consecutive k-window must capture to be
/// reported as the population-level k*.
inline constexpr double kKStarMassThreshold = 0.66;

struct Layer {
    std::vector<std::string> alter_ids;
    int size = 0;
    double mean_frequency = 0.0;
};

/// Clusters relabeled into layers: layer 0 carries the highest mean frequency.
struct LayerAssignment {
    std::string ego_id;
    int k = 0;
    std::vector<Layer> layers;
};

// Depends only on the partition and the weights, not on the clusterer's
// internal labeling. Throws InvariantError on tied layer means (excluded by
// optimality for k <= distinct values).
LayerAssignment assign_layers(const Clustering& clustering, const EgoNetwork& ego);

struct LayerTableCell {
    std::int64_t ego_count = 0;
    double size_mean = 0.0;
    double size_sd = 0.0;  // population sd
    double freq_mean = 0.0;
    double freq_sd = 0.0;
};

struct PopulationSummary {
    Direction direction = Direction::outgoing;
    std::int64_t ego_count = 0;
    std::map<int, double> p_of_x;  // proportion of egos with optimal_k = k
    double mean_optimal_k = 0.0;
    std::vector<int> k_star;
    std::optional<double> mean_silhouette;  // over egos with optimal_k >= 2
    std::map<int, std::vector<LayerTableCell>> layer_tables;  // fixed k -> layers

    std::string to_json(int indent = 2) const;
    std::string to_text() const;       // aligned-column tables
    std::string p_of_x_csv() const;    // "k,proportion"
};

// Commutative-monoid fold over ClusteringResults; partial accumulators from
// sharded streams merge into the same summary (within FP reassociation).
class PopulationAccumulator {
  public:
    PopulationAccumulator(Direction direction, std::vector<int> fixed_ks,
                          bool restrict_to_matching = false);

    void add(const ClusteringResult& result);
    void merge(const PopulationAccumulator& other);
    /// Throws DataError on an empty population.
    PopulationSummary finish() const;

  private:
    struct Moments {
        std::int64_t n = 0;
        double size_sum = 0.0, size_sq = 0.0;
        double freq_sum = 0.0, freq_sq = 0.0;
    };
    Direction direction_;
    std::vector<int> fixed_ks_;
    bool restrict_to_matching_;
    std::int64_t ego_count_ = 0;
    std::int64_t optimal_k_sum_ = 0;
    std::map<int, std::int64_t> k_histogram_;
    double silhouette_sum_ = 0.0;
    std::int64_t silhouette_count_ = 0;
    std::map<int, std::vector<Moments>> layer_moments_;
};

PopulationSummary population_summary(const std::vector<ClusteringResult>& results,
                                     const std::vector<int>& fixed_ks,
                                     bool restrict_to_matching = false);

/// Smallest consecutive k-window holding >= threshold of the mass; ties break
/// to the window with more mass, then the smaller starting k.
std::vector<int> select_k_star(const std::map<int, double>& p_of_x,
                               double mass_threshold = kKStarMassThreshold);

// Graphviz DOT text: ego as the central node, alters filled by layer
// (darkest = layer 0), edge penwidth proportional to contact frequency.
std::string export_ego_dot(const LayerAssignment& assignment, const EgoNetwork& ego);

}  // namespace egolayers
