#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "egolayers/cluster.hpp"
#include "egolayers/rng.hpp"
#include "oracles.hpp"

using namespace egolayers;

namespace {

std::vector<double> random_weights(DeterministicRng& rng, std::size_t n, double lo = 0.01,
                                   double hi = 20.0) {
    std::vector<double> w(n);
    for (auto& x : w) x = rng.uniform(lo, hi);
    return w;
}

std::vector<std::vector<double>> cluster_value_sets(const std::vector<double>& w,
                                                    const Clustering& c) {
    std::vector<std::vector<double>> sets(c.k);
    for (std::size_t i = 0; i < w.size(); ++i) sets[c.assignments[i]].push_back(w[i]);
    for (auto& s : sets) std::sort(s.begin(), s.end());
    return sets;
}

}  // namespace

TEST_CASE("kmeans_1d_exact: perfectly separated duplicates") {
    const std::vector<double> w{1, 1, 1, 8, 8, 8};
    const Clustering c = kmeans_1d_exact(w, 2);
    CHECK(c.k == 2);
    CHECK(c.centroids == std::vector<double>{8.0, 1.0});
    CHECK(c.wcss == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(c.assignments == std::vector<int>{1, 1, 1, 0, 0, 0});
}

TEST_CASE("kmeans_1d_exact: single point identity") {
    const Clustering c = kmeans_1d_exact({5.0}, 1);
    CHECK(c.centroids == std::vector<double>{5.0});
    CHECK(c.wcss == 0.0);
    CHECK(c.sizes() == std::vector<int>{1});
}

TEST_CASE("kmeans_1d_exact: split matches the brute-force oracle") {
    const std::vector<double> w{0.5, 1.0, 1.5, 7.0, 8.0, 9.0};
    const Clustering c = kmeans_1d_exact(w, 2);
    CHECK(c.centroids[0] == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(c.centroids[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.wcss == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(oracles::brute_force_min_wcss(w, 2) == doctest::Approx(2.5).epsilon(1e-12));
    // Split lands between 1.5 and 7.0.
    CHECK(c.assignments == std::vector<int>{1, 1, 1, 0, 0, 0});
}

TEST_CASE("kmeans_1d_exact: argument validation") {
    CHECK_THROWS_AS(kmeans_1d_exact({}, 1), std::invalid_argument);
    CHECK_THROWS_AS(kmeans_1d_exact({1.0, 2.0}, 3), std::invalid_argument);
    CHECK_THROWS_AS(kmeans_1d_exact({1.0, 2.0}, 0), std::invalid_argument);
    CHECK_THROWS_AS(kmeans_1d_exact({1.0, -2.0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(kmeans_1d_exact({1.0, 0.0}, 1), std::invalid_argument);
    // k beyond the distinct-value count would force tied centroids.
    CHECK_THROWS_AS(kmeans_1d_exact({1.0, 1.0, 1.0, 2.0}, 3), std::invalid_argument);
}

TEST_CASE("wcss_curve: two duplicate pairs") {
    // k=1 value from the partition-enumeration oracle: sum (x - 4.5)^2 = 49.
    const std::vector<double> w{1, 1, 8, 8};
    CHECK(oracles::brute_force_min_wcss(w, 1) == doctest::Approx(49.0).epsilon(1e-12));
    const auto curve = wcss_curve(w, 3);
    REQUIRE(curve.size() == 3);
    CHECK(curve[0] == doctest::Approx(49.0).epsilon(1e-12));
    CHECK(curve[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(curve[2] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("wcss_curve: constant weights give a zero curve") {
    const auto curve = wcss_curve({3, 3, 3, 3}, 4);
    REQUIRE(curve.size() == 4);
    for (const double v : curve) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("wcss_curve: length clamps to n and values are nonincreasing") {
    DeterministicRng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto n = 1 + rng.below(40);
        const auto w = random_weights(rng, n);
        const auto curve = wcss_curve(w, 20);
        CHECK(curve.size() == std::min<std::size_t>(20, n));
        for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i] <= curve[i - 1] + 1e-9);
        CHECK_FALSE(curve.empty());
        CHECK(curve.back() >= 0.0);
    }
    CHECK_THROWS_AS(wcss_curve({}, 3), std::invalid_argument);
}

TEST_CASE("elbow_optimal_k: spec rule on reference curves") {
    // Gains 0.90, 0.02, 0.01 -> k = 2 at any threshold in (0.02, 0.90).
    CHECK(elbow_optimal_k({100, 10, 8, 7}, {.marginal_gain_threshold = 0.05}) == 2);
    CHECK(elbow_optimal_k({100, 10, 8, 7}, {.marginal_gain_threshold = 0.10}) == 2);
    // Gains 0.40, 0.48, 0.02, 0.005 -> k = 3.
    CHECK(elbow_optimal_k({100, 60, 12, 10, 9.5}, {.marginal_gain_threshold = 0.05}) == 3);
    CHECK(elbow_optimal_k({100, 60, 12, 10, 9.5}, {.marginal_gain_threshold = 0.10}) == 3);
}

TEST_CASE("elbow_optimal_k: zero-variance guard and fallbacks") {
    CHECK(elbow_optimal_k({0.0}) == 1);
    CHECK(elbow_optimal_k({1e-15, 0.0, 0.0}) == 1);
    CHECK(elbow_optimal_k({42.0}) == 1);
    // Every gain clears the threshold: falls through to the curve length.
    CHECK(elbow_optimal_k({100, 50, 25, 12.5}, {.marginal_gain_threshold = 0.10}) == 4);
}

TEST_CASE("elbow_optimal_k: rejects bad curves") {
    CHECK_THROWS_AS(elbow_optimal_k({}), std::invalid_argument);
    CHECK_THROWS_AS(elbow_optimal_k({10, 11, 5}), std::invalid_argument);
    CHECK_THROWS_AS(elbow_optimal_k({10, -5}), std::invalid_argument);
    // Within the 1e-9 tolerance is accepted.
    CHECK_NOTHROW(elbow_optimal_k({10.0, 10.0 + 1e-10, 5.0}));
}

TEST_CASE("silhouette: fully separated pairs score 1") {
    const std::vector<double> w{1, 1, 8, 8};
    const Clustering c = kmeans_1d_exact(w, 2);
    CHECK(silhouette(w, c) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("silhouette: hand-evaluated four-point case") {
    const std::vector<double> w{1, 2, 8, 9};
    const Clustering c = kmeans_1d_exact(w, 2);
    const double s = silhouette(w, c);
    // (13/15 + 11/13 + 11/13 + 13/15) / 4
    const double expected = (13.0 / 15.0 + 11.0 / 13.0 + 11.0 / 13.0 + 13.0 / 15.0) / 4.0;
    CHECK(s == doctest::Approx(expected).epsilon(1e-12));
    CHECK(s == doctest::Approx(0.8564).epsilon(1e-4));
    CHECK(s == doctest::Approx(oracles::silhouette_reference(w, c.assignments, 2)).epsilon(1e-9));
}

TEST_CASE("silhouette: singleton cluster contributes zero") {
    const std::vector<double> w{1, 1, 5};
    const Clustering c = kmeans_1d_exact(w, 2);
    REQUIRE(c.sizes() == std::vector<int>{1, 2});  // cluster 0 = {5}
    const double s = silhouette(w, c);
    CHECK(s == doctest::Approx(2.0 / 3.0).epsilon(1e-12));  // {1,1} score 1 each, {5} scores 0
    CHECK(s == doctest::Approx(oracles::silhouette_reference(w, c.assignments, 2)).epsilon(1e-9));
}

TEST_CASE("silhouette: k=1 is undefined") {
    const std::vector<double> w{1, 2, 3};
    const Clustering c = kmeans_1d_exact(w, 1);
    CHECK_THROWS_AS(silhouette(w, c), std::invalid_argument);
}

TEST_CASE("silhouette matches the reference on random clusterings") {
    DeterministicRng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.below(30);
        const int k = 2 + static_cast<int>(rng.below(std::min<std::uint64_t>(4, n - 1)));
        const auto w = random_weights(rng, n);
        // Random (not necessarily contiguous) partition with nonempty clusters.
        Clustering c;
        c.k = k;
        c.assignments.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            c.assignments[i] = i < static_cast<std::size_t>(k)
                                   ? static_cast<int>(i)
                                   : static_cast<int>(rng.below(k));
        }
        const double got = silhouette(w, c);
        const double want = oracles::silhouette_reference(w, c.assignments, k);
        CHECK(got == doctest::Approx(want).epsilon(1e-9));
        CHECK(got >= -1.0 - 1e-12);
        CHECK(got <= 1.0 + 1e-12);
    }
}

TEST_CASE("dp wcss equals the set-partition brute force on small inputs") {
    DeterministicRng rng(23);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng.below(10);
        const auto w = random_weights(rng, n);
        const int k = 1 + static_cast<int>(rng.below(std::min<std::uint64_t>(4, n)));
        const Clustering c = kmeans_1d_exact(w, k);
        const double oracle = oracles::brute_force_min_wcss(w, k);
        CHECK(c.wcss == doctest::Approx(oracle).epsilon(1e-9));
    }
}

TEST_CASE("dp curve equals the plain O(kn^2) dp at larger sizes") {
    DeterministicRng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + rng.below(199);
        const auto w = random_weights(rng, n);
        const auto fast = wcss_curve(w, 20);
        const auto plain = oracles::plain_dp_curve(w, 20);
        REQUIRE(fast.size() == plain.size());
        for (std::size_t i = 0; i < fast.size(); ++i) {
            CHECK(fast[i] == doctest::Approx(plain[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("optimal clusters are contiguous in sorted order") {
    DeterministicRng rng(37);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.below(60);
        const auto w = random_weights(rng, n);
        const int k = 1 + static_cast<int>(rng.below(std::min<std::uint64_t>(8, n)));
        const Clustering c = kmeans_1d_exact(w, k);

        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0u);
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return w[a] < w[b]; });
        // Ascending weights must see nonincreasing labels (label 0 = highest centroid).
        for (std::size_t i = 1; i < n; ++i) {
            CHECK(c.assignments[idx[i]] <= c.assignments[idx[i - 1]]);
        }
        // Centroids strictly decreasing, no empty cluster.
        const auto sizes = c.sizes();
        for (int cl = 0; cl < k; ++cl) CHECK(sizes[cl] > 0);
        for (int cl = 1; cl < k; ++cl) CHECK(c.centroids[cl - 1] > c.centroids[cl]);
    }
}

TEST_CASE("scale equivariance") {
    DeterministicRng rng(41);
    const std::vector<double> factors{0.5, 2.0, 3.7, 1e-3, 1e3};
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 3 + rng.below(40);
        const auto w = random_weights(rng, n);
        const int k = 2 + static_cast<int>(rng.below(std::min<std::uint64_t>(5, n - 1)));
        const Clustering base = kmeans_1d_exact(w, k);
        const double base_sil = silhouette(w, base);
        const auto base_curve = wcss_curve(w, 10);
        const int base_k = elbow_optimal_k(base_curve);

        for (const double c : factors) {
            std::vector<double> scaled(w);
            for (auto& x : scaled) x *= c;
            const Clustering s = kmeans_1d_exact(scaled, k);
            CHECK(s.assignments == base.assignments);
            CHECK(s.wcss == doctest::Approx(base.wcss * c * c).epsilon(1e-9));
            CHECK(silhouette(scaled, s) == doctest::Approx(base_sil).epsilon(1e-9));
            CHECK(elbow_optimal_k(wcss_curve(scaled, 10)) == base_k);
        }
    }
}

TEST_CASE("permutation invariance") {
    DeterministicRng rng(43);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 2 + rng.below(40);
        auto w = random_weights(rng, n);
        const int k = 1 + static_cast<int>(rng.below(std::min<std::uint64_t>(5, n)));
        const Clustering base = kmeans_1d_exact(w, k);
        const auto base_sets = cluster_value_sets(w, base);
        const auto base_curve = wcss_curve(w, 10);

        for (std::size_t i = w.size(); i > 1; --i) std::swap(w[i - 1], w[rng.below(i)]);
        const Clustering shuf = kmeans_1d_exact(w, k);
        CHECK(shuf.wcss == doctest::Approx(base.wcss).epsilon(1e-12));
        CHECK(cluster_value_sets(w, shuf) == base_sets);
        const auto shuf_curve = wcss_curve(w, 10);
        for (std::size_t i = 0; i < base_curve.size(); ++i) {
            CHECK(shuf_curve[i] == doctest::Approx(base_curve[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("lloyd cross-check never beats the exact dp") {
    DeterministicRng rng(47);
    int ties = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + rng.below(30);
        const auto w = random_weights(rng, n);
        const int k = 1 + static_cast<int>(rng.below(std::min<std::uint64_t>(5, n)));
        const Clustering exact = kmeans_1d_exact(w, k);
        const Clustering lloyd = kmeans_1d_lloyd(w, k, rng.next_u64());
        CHECK(lloyd.wcss >= exact.wcss - 1e-9);
        if (lloyd.wcss <= exact.wcss + 1e-9) ++ties;
    }
    CHECK(ties > 30);  // restarts should usually find the optimum
}

TEST_CASE("analyze_ego: bounds and degenerate guards") {
    EgoNetwork two;
    two.ego_id = "e";
    two.alters = {{"a", 5.0}, {"b", 1.0}};
    const auto r = analyze_ego(two);
    REQUIRE(r.has_value());
    CHECK(r->optimal_k >= 1);
    CHECK(r->optimal_k <= 2);

    EgoNetwork flat;
    flat.ego_id = "f";
    flat.alters = {{"a", 2.0}, {"b", 2.0}, {"c", 2.0}};
    const auto rf = analyze_ego(flat);
    REQUIRE(rf.has_value());
    CHECK(rf->optimal_k == 1);
    CHECK_FALSE(rf->silhouette_at_optimal.has_value());

    EgoNetwork tiny;
    tiny.ego_id = "t";
    tiny.alters = {{"a", 1.0}};
    CHECK_FALSE(analyze_ego(tiny).has_value());
}

TEST_CASE("analyze_ego: fixed-k clusterings attach when supported") {
    EgoNetwork ego;
    ego.ego_id = "e";
    ego.alters = {{"a", 9.0}, {"b", 8.5}, {"c", 2.0}, {"d", 1.5}, {"e", 0.2}};
    const auto r = analyze_ego(ego, 20, {}, {2, 3, 7});
    REQUIRE(r.has_value());
    CHECK(r->clusterings_at_fixed.count(2) == 1);
    CHECK(r->clusterings_at_fixed.count(3) == 1);
    CHECK(r->clusterings_at_fixed.count(7) == 0);  // exceeds degree
    CHECK(r->wcss_curve.size() == 5);

    EgoNetwork dup;
    dup.ego_id = "d";
    dup.alters = {{"a", 4.0}, {"b", 4.0}, {"c", 4.0}, {"d", 1.0}};
    const auto rd = analyze_ego(dup, 20, {}, {2, 3});
    REQUIRE(rd.has_value());
    CHECK(rd->clusterings_at_fixed.count(2) == 1);
    CHECK(rd->clusterings_at_fixed.count(3) == 0);  // only two distinct frequencies
}
