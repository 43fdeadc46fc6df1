#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "egolayers/egonet.hpp"
#include "egolayers/types.hpp"

namespace egolayers {

inline constexpr int kDefaultKMax = 20;

/// A k-partition of a weight vector. Cluster 0 holds the highest centroid;
/// centroids are strictly decreasing (guaranteed by optimality for
/// k <= number of distinct values).
struct Clustering {
    int k = 0;
    std::vector<int> assignments;  // per input point, cluster index
    std::vector<double> centroids;
    double wcss = 0.0;

    std::vector<int> sizes() const;
};

struct ElbowParams {
    // Smallest k whose marginal explained-variance gain falls below this.
    // 0.10 keeps planted two- and three-layer structure recoverable at
    // cv = 0.2 (validated by the acceptance suite).
    double marginal_gain_threshold = 0.10;
    double zero_tol = 1e-12;
};

// Globally optimal 1-D k-means by dynamic programming over the sorted
// weights (optimal clusters are contiguous in sorted order). Deterministic,
// no random initialization. Throws std::invalid_argument when weights are
// empty/non-finite/non-positive, k is out of [1, n], or k exceeds the number
// of distinct values (tied centroids would otherwise be unavoidable).
Clustering kmeans_1d_exact(const std::vector<double>& weights, int k);

/// Element j-1 is the optimal WCSS at k = j, for k = 1..min(k_max, n).
std::vector<double> wcss_curve(const std::vector<double>& weights, int k_max = kDefaultKMax);

// Per-ego optimal k from a nonincreasing WCSS curve (curve[0] is the value
// at k=1). Returns 1 when total variance <= zero_tol; otherwise the smallest
// k with E(k+1) - E(k) < marginal_gain_threshold, where
// E(k) = 1 - curve[k]/curve[1] (1-based); falls through to the curve length.
int elbow_optimal_k(const std::vector<double>& curve, const ElbowParams& params = {});

// Mean silhouette with absolute-difference distance. Singleton clusters get
// s(i) = 0. Requires k >= 2 and every cluster nonempty; arbitrary (not
// necessarily contiguous) partitions are accepted.
double silhouette(const std::vector<double>& weights, const Clustering& clustering);

/// Lloyd's iterative k-means with seeded restarts; cross-check only, may be suboptimal.
Clustering kmeans_1d_lloyd(const std::vector<double>& weights, int k, std::uint64_t seed,
                           int restarts = 8);

// Shared DP tables for one weight vector: one pass serves the whole curve
// plus clusterings at any k.
class KmeansDp {
  public:
    KmeansDp(std::vector<double> weights, int k_max);

    int k_max_eff() const { return k_max_eff_; }
    int distinct_count() const { return distinct_; }
    const std::vector<double>& curve() const { return curve_; }
    Clustering clustering(int k) const;

  private:
    std::vector<double> weights_;       // input order
    std::vector<std::uint32_t> order_;  // input index of each sorted position
    std::vector<double> sorted_;
    std::vector<double> prefix_;         // shifted prefix sums
    std::vector<double> prefix_sq_;
    std::vector<double> prefix_raw_;     // unshifted, for exact centroids
    std::vector<double> curve_;
    std::vector<std::vector<std::uint32_t>> back_;  // back_[k][i]: start of last cluster
    int k_max_eff_ = 0;
    int distinct_ = 0;

    double segment_cost(std::size_t start, std::size_t end) const;  // [start, end)
};

struct ClusteringResult {
    std::string ego_id;
    Direction direction = Direction::outgoing;
    int degree = 0;
    std::vector<double> wcss_curve;
    int optimal_k = 0;
    Clustering clustering_at_optimal;
    std::optional<double> silhouette_at_optimal;  // absent when optimal_k == 1
    std::map<int, Clustering> clusterings_at_fixed;
};

// Full per-ego analysis: curve -> elbow -> clustering at the optimum ->
// silhouette, plus clusterings at each requested fixed k that the ego can
// support (k <= degree and k <= distinct frequency count). Egos with degree
// < 2 are skipped (nullopt).
std::optional<ClusteringResult> analyze_ego(const EgoNetwork& ego, int k_max = kDefaultKMax,
                                            const ElbowParams& elbow = {},
                                            const std::vector<int>& fixed_ks = {});

}  // namespace egolayers
