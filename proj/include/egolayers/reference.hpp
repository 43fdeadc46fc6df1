#pragma once

#include <array>
#include <cstdint>

// Published measurements from a large fanfiction reviewing corpus
// (2001-2017, reviewer/author interaction graph). Kept as documentation and
// as default parameterizations for the synthetic generator; corpus-level
// numbers are not reproducible here because the underlying data set is
// private.
namespace egolayers::reference {

inline constexpr std::int64_t kCorpusRelationships = 53'202'307;
inline constexpr std::int64_t kCorpusReviewers = 2'580'411;
inline constexpr std::int64_t kCorpusAuthors = 1'373'910;

// Inclusion criteria used for the "active user" subset.
inline constexpr double kActiveMonthlyRate = 10.0;
inline constexpr int kActiveMinConnections = 25;
inline constexpr int kScanKMax = 20;

inline constexpr double kReviewerMeanOptimalK = 2.39;
inline constexpr double kAuthorMeanOptimalK = 2.36;
inline constexpr double kReviewerMeanSilhouette = 0.6952;
inline constexpr double kAuthorMeanSilhouette = 0.6857;

// Per-layer means (layer 0 = innermost, highest contact frequency).
inline constexpr std::array<double, 2> kReviewerK2AlterMean = {9.08, 50.30};
inline constexpr std::array<double, 2> kReviewerK2AlterSd = {9.10, 59.34};
inline constexpr std::array<double, 2> kReviewerK2FreqMean = {7.01, 1.26};
inline constexpr std::array<double, 2> kReviewerK2FreqSd = {7.50, 0.65};

inline constexpr std::array<double, 3> kReviewerK3AlterMean = {3.89, 14.76, 40.73};
inline constexpr std::array<double, 3> kReviewerK3AlterSd = {3.52, 13.98, 51.82};
inline constexpr std::array<double, 3> kReviewerK3FreqMean = {8.66, 3.25, 0.97};
inline constexpr std::array<double, 3> kReviewerK3FreqSd = {8.04, 2.92, 0.58};

inline constexpr std::array<double, 2> kAuthorK2AlterMean = {11.48, 59.40};
inline constexpr std::array<double, 2> kAuthorK2AlterSd = {12.39, 89.79};
inline constexpr std::array<double, 2> kAuthorK2FreqMean = {6.77, 1.26};
inline constexpr std::array<double, 2> kAuthorK2FreqSd = {8.36, 0.72};

inline constexpr std::array<double, 3> kAuthorK3AlterMean = {4.72, 17.997, 48.16};
inline constexpr std::array<double, 3> kAuthorK3AlterSd = {4.57, 19.45, 78.86};
inline constexpr std::array<double, 3> kAuthorK3FreqMean = {8.38, 3.11, 1.02};
inline constexpr std::array<double, 3> kAuthorK3FreqSd = {8.82, 3.32, 0.70};

// Review-type proportions per layer of the reviewer-as-ego network (k = 3).
inline constexpr std::array<double, 3> kUpdateShareByLayer = {0.176, 0.243, 0.279};
inline constexpr std::array<double, 3> kTargetedShareByLayer = {0.553, 0.531, 0.498};

// Accuracy of the upstream machine classifier that produced those labels;
// the classifier itself is out of scope for this toolkit.
inline constexpr double kUpdateClassifierAccuracy = 0.87;
inline constexpr double kTargetedClassifierAccuracy = 0.75;

}  // namespace egolayers::reference
