#include "egolayers/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "egolayers/rng.hpp"

namespace egolayers {

std::vector<int> Clustering::sizes() const {
    std::vector<int> s(k, 0);
    for (const int a : assignments) ++s[a];
    return s;
}

namespace {

void validate_weights(const std::vector<double>& weights) {
    if (weights.empty()) throw std::invalid_argument("weights must be non-empty");
    for (const double w : weights) {
        if (!std::isfinite(w) || w <= 0.0) {
            throw std::invalid_argument("weights must be finite and positive");
        }
    }
}

}  // namespace

KmeansDp::KmeansDp(std::vector<double> weights, int k_max) : weights_(std::move(weights)) {
    validate_weights(weights_);
    if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");

    const std::size_t n = weights_.size();
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), 0u);
    std::stable_sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) {
        return weights_[a] < weights_[b];
    });
    sorted_.resize(n);
    for (std::size_t i = 0; i < n; ++i) sorted_[i] = weights_[order_[i]];

    distinct_ = 1;
    for (std::size_t i = 1; i < n; ++i) {
        if (sorted_[i] != sorted_[i - 1]) ++distinct_;
    }

    // Shift by the mean so the ss2 - s^2/len cost stays well conditioned.
    const double mean = std::accumulate(sorted_.begin(), sorted_.end(), 0.0) / static_cast<double>(n);
    prefix_.assign(n + 1, 0.0);
    prefix_sq_.assign(n + 1, 0.0);
    prefix_raw_.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = sorted_[i] - mean;
        prefix_[i + 1] = prefix_[i] + v;
        prefix_sq_[i + 1] = prefix_sq_[i] + v * v;
        prefix_raw_[i + 1] = prefix_raw_[i] + sorted_[i];
    }

    k_max_eff_ = std::min<int>(k_max, static_cast<int>(n));
    curve_.resize(k_max_eff_);
    back_.assign(k_max_eff_ + 1, std::vector<std::uint32_t>(n + 1, 0));

    std::vector<double> prev(n + 1, std::numeric_limits<double>::infinity());
    std::vector<double> cur(n + 1, std::numeric_limits<double>::infinity());

    // Row 1: a single cluster over the first i points.
    for (std::size_t i = 1; i <= n; ++i) {
        prev[i] = segment_cost(0, i);
        back_[1][i] = 1;
    }
    curve_[0] = prev[n];

    // Rows 2..k: divide and conquer over the row, exploiting that the optimal
    // start of the last cluster is nondecreasing in i.
    for (int k = 2; k <= k_max_eff_; ++k) {
        auto& b = back_[k];
        std::fill(cur.begin(), cur.end(), std::numeric_limits<double>::infinity());
        // Fill cur[i] for i in [k, n]; split j ranges over [k, i].
        struct Frame {
            std::size_t lo, hi, jlo, jhi;
        };
        std::vector<Frame> stack{{static_cast<std::size_t>(k), n, static_cast<std::size_t>(k), n}};
        while (!stack.empty()) {
            const Frame f = stack.back();
            stack.pop_back();
            if (f.lo > f.hi) continue;
            const std::size_t mid = f.lo + (f.hi - f.lo) / 2;
            double best = std::numeric_limits<double>::infinity();
            std::size_t best_j = f.jlo;
            const std::size_t j_hi = std::min(f.jhi, mid);
            for (std::size_t j = f.jlo; j <= j_hi; ++j) {
                const double c = prev[j - 1] + segment_cost(j - 1, mid);
                if (c < best) {
                    best = c;
                    best_j = j;
                }
            }
            cur[mid] = best;
            b[mid] = static_cast<std::uint32_t>(best_j);
            if (mid > f.lo) stack.push_back({f.lo, mid - 1, f.jlo, best_j});
            if (mid < f.hi) stack.push_back({mid + 1, f.hi, best_j, f.jhi});
        }
        // Monotone clamp: guards against FP noise breaking the theoretical
        // nonincreasing property at the 1e-16 level.
        curve_[k - 1] = std::min(std::max(cur[n], 0.0), curve_[k - 2]);
        std::swap(prev, cur);
    }
}

double KmeansDp::segment_cost(std::size_t start, std::size_t end) const {
    const double len = static_cast<double>(end - start);
    const double s = prefix_[end] - prefix_[start];
    const double s2 = prefix_sq_[end] - prefix_sq_[start];
    return std::max(0.0, s2 - s * s / len);
}

Clustering KmeansDp::clustering(int k) const {
    const std::size_t n = weights_.size();
    if (k < 1 || k > static_cast<int>(n)) {
        throw std::invalid_argument("k must be in [1, number of points]");
    }
    if (k > k_max_eff_) throw std::invalid_argument("k exceeds the computed k_max");
    if (k > distinct_) {
        throw std::invalid_argument(
            "k exceeds the number of distinct weights; centroids would tie");
    }

    // Recover segment boundaries [start, end) in sorted order.
    std::vector<std::pair<std::size_t, std::size_t>> segments(k);
    std::size_t i = n;
    for (int kk = k; kk >= 1; --kk) {
        const std::size_t j = back_[kk][i];
        segments[kk - 1] = {j - 1, i};
        i = j - 1;
    }

    Clustering c;
    c.k = k;
    c.assignments.resize(n);
    c.centroids.resize(k);
    c.wcss = 0.0;
    for (int seg = 0; seg < k; ++seg) {
        const auto [lo, hi] = segments[seg];
        // Ascending segment `seg` becomes descending cluster index.
        const int label = k - 1 - seg;
        const double centroid =
            (prefix_raw_[hi] - prefix_raw_[lo]) / static_cast<double>(hi - lo);
        c.centroids[label] = centroid;
        for (std::size_t p = lo; p < hi; ++p) {
            c.assignments[order_[p]] = label;
            const double d = sorted_[p] - centroid;
            c.wcss += d * d;
        }
    }
    return c;
}

Clustering kmeans_1d_exact(const std::vector<double>& weights, int k) {
    KmeansDp dp(weights, k);
    return dp.clustering(k);
}

std::vector<double> wcss_curve(const std::vector<double>& weights, int k_max) {
    KmeansDp dp(weights, k_max);
    return dp.curve();
}

int elbow_optimal_k(const std::vector<double>& curve, const ElbowParams& params) {
    if (curve.empty()) throw std::invalid_argument("wcss curve must be non-empty");
    for (std::size_t i = 0; i < curve.size(); ++i) {
        if (!std::isfinite(curve[i]) || curve[i] < -1e-9) {
            throw std::invalid_argument("wcss curve values must be nonnegative");
        }
        if (i > 0 && curve[i] > curve[i - 1] + 1e-9) {
            throw std::invalid_argument("wcss curve must be nonincreasing");
        }
    }
    const double total = curve[0];
    if (total <= params.zero_tol) return 1;
    const int len = static_cast<int>(curve.size());
    for (int k = 1; k < len; ++k) {
        const double gain = (curve[k - 1] - curve[k]) / total;  // E(k+1) - E(k)
        if (gain < params.marginal_gain_threshold) return k;
    }
    return len;
}

double silhouette(const std::vector<double>& weights, const Clustering& clustering) {
    const std::size_t n = weights.size();
    const int k = clustering.k;
    if (k < 2) throw std::invalid_argument("silhouette requires k >= 2 clusters");
    if (clustering.assignments.size() != n) {
        throw std::invalid_argument("assignments do not match the weight vector");
    }

    std::vector<std::vector<double>> values(k);
    for (std::size_t i = 0; i < n; ++i) {
        const int a = clustering.assignments[i];
        if (a < 0 || a >= k) throw std::invalid_argument("cluster index out of range");
        values[a].push_back(weights[i]);
    }
    std::vector<std::vector<double>> prefix(k);
    for (int c = 0; c < k; ++c) {
        if (values[c].empty()) throw std::invalid_argument("every cluster must be nonempty");
        std::sort(values[c].begin(), values[c].end());
        prefix[c].assign(values[c].size() + 1, 0.0);
        for (std::size_t i = 0; i < values[c].size(); ++i) {
            prefix[c][i + 1] = prefix[c][i] + values[c][i];
        }
    }

    auto distance_sum = [&](int c, double x) {
        const auto& v = values[c];
        const auto& p = prefix[c];
        const std::size_t m =
            std::lower_bound(v.begin(), v.end(), x) - v.begin();  // values < x
        const double below = x * static_cast<double>(m) - p[m];
        const double above = (p[v.size()] - p[m]) - x * static_cast<double>(v.size() - m);
        return below + above;
    };

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const int own = clustering.assignments[i];
        const std::size_t own_size = values[own].size();
        if (own_size == 1) continue;  // s(i) = 0 by convention
        const double a = distance_sum(own, weights[i]) / static_cast<double>(own_size - 1);
        double b = std::numeric_limits<double>::infinity();
        for (int c = 0; c < k; ++c) {
            if (c == own) continue;
            b = std::min(b, distance_sum(c, weights[i]) / static_cast<double>(values[c].size()));
        }
        const double denom = std::max(a, b);
        if (denom > 0.0) total += (b - a) / denom;
    }
    return total / static_cast<double>(n);
}

Clustering kmeans_1d_lloyd(const std::vector<double>& weights, int k, std::uint64_t seed,
                           int restarts) {
    validate_weights(weights);
    const std::size_t n = weights.size();
    if (k < 1 || k > static_cast<int>(n)) {
        throw std::invalid_argument("k must be in [1, number of points]");
    }
    std::vector<double> distinct = weights;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (k > static_cast<int>(distinct.size())) {
        throw std::invalid_argument("k exceeds the number of distinct weights");
    }

    DeterministicRng rng(seed);
    double best_wcss = std::numeric_limits<double>::infinity();
    std::vector<int> best_assign;
    std::vector<double> best_centers;

    for (int r = 0; r < std::max(1, restarts); ++r) {
        // Forgy init from distinct values.
        std::vector<double> pool = distinct;
        for (std::size_t i = pool.size(); i > 1; --i) {
            std::swap(pool[i - 1], pool[rng.below(i)]);
        }
        std::vector<double> centers(pool.begin(), pool.begin() + k);
        std::sort(centers.begin(), centers.end());

        std::vector<int> assign(n, 0);
        for (int iter = 0; iter < 200; ++iter) {
            bool changed = false;
            for (std::size_t i = 0; i < n; ++i) {
                int nearest = 0;
                double dmin = std::abs(weights[i] - centers[0]);
                for (int c = 1; c < k; ++c) {
                    const double d = std::abs(weights[i] - centers[c]);
                    if (d < dmin) {
                        dmin = d;
                        nearest = c;
                    }
                }
                if (assign[i] != nearest) {
                    assign[i] = nearest;
                    changed = true;
                }
            }
            std::vector<double> sums(k, 0.0);
            std::vector<int> counts(k, 0);
            for (std::size_t i = 0; i < n; ++i) {
                sums[assign[i]] += weights[i];
                ++counts[assign[i]];
            }
            for (int c = 0; c < k; ++c) {
                if (counts[c] == 0) {
                    // Reseed from the point farthest from its center.
                    std::size_t far = 0;
                    double dmax = -1.0;
                    for (std::size_t i = 0; i < n; ++i) {
                        const double d = std::abs(weights[i] - centers[assign[i]]);
                        if (d > dmax) {
                            dmax = d;
                            far = i;
                        }
                    }
                    centers[c] = weights[far];
                    changed = true;
                } else {
                    centers[c] = sums[c] / counts[c];
                }
            }
            if (!changed) break;
        }

        double wcss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = weights[i] - centers[assign[i]];
            wcss += d * d;
        }
        if (wcss < best_wcss) {
            best_wcss = wcss;
            best_assign = assign;
            best_centers = centers;
        }
    }

    // Relabel to descending centroids.
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return best_centers[a] > best_centers[b]; });
    std::vector<int> relabel(k);
    for (int c = 0; c < k; ++c) relabel[idx[c]] = c;

    Clustering out;
    out.k = k;
    out.wcss = best_wcss;
    out.centroids.resize(k);
    for (int c = 0; c < k; ++c) out.centroids[c] = best_centers[idx[c]];
    out.assignments.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.assignments[i] = relabel[best_assign[i]];
    return out;
}

std::optional<ClusteringResult> analyze_ego(const EgoNetwork& ego, int k_max,
                                            const ElbowParams& elbow,
                                            const std::vector<int>& fixed_ks) {
    if (ego.degree() < 2) return std::nullopt;

    ClusteringResult r;
    r.ego_id = ego.ego_id;
    r.direction = ego.direction;
    r.degree = ego.degree();

    KmeansDp dp(ego.frequencies(), k_max);
    r.wcss_curve = dp.curve();
    r.optimal_k = elbow_optimal_k(r.wcss_curve, elbow);
    r.clustering_at_optimal = dp.clustering(r.optimal_k);
    if (r.optimal_k >= 2) {
        r.silhouette_at_optimal = silhouette(ego.frequencies(), r.clustering_at_optimal);
    }
    for (const int k : fixed_ks) {
        if (k >= 1 && k <= dp.k_max_eff() && k <= dp.distinct_count()) {
            r.clusterings_at_fixed.emplace(k, dp.clustering(k));
        }
    }
    return r;
}

}  // namespace egolayers
