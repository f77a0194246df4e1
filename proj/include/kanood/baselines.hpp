#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kanood/dataset.hpp"
#include "kanood/detector.hpp"

namespace kanood {

/// Binary occupancy detector: the KAN detector's degenerate limit where each
/// univariate activation is replaced by a histogram that records InD presence
/// per grid interval. Scored with the same reduction over the per-feature
/// occupancy indicators to keep the comparison like-for-like.
struct HistogramDetector {
    int dim = 0;
    int grid_size = 0;
    double domain_min = -1.0;
    double domain_max = 1.0;
    ScoringFn scoring = ScoringFn::median;
    std::vector<uint8_t> occupied;  // [dim][grid_size]

    int interval_of(double x) const;
};

HistogramDetector histogram_fit(const LabeledDataset& data, int grid_size, double domain_min,
                                double domain_max, ScoringFn scoring = ScoringFn::median);
double histogram_score(const HistogramDetector& det, std::span<const double> x);

/// Distance baseline: score is the negative Euclidean distance to the k-th
/// nearest training sample (higher = more InD).
struct KnnDetector {
    int dim = 0;
    int n = 0;
    int k_nn = 1;
    std::vector<double> points;  // [n][dim]
};

KnnDetector knn_fit(const LabeledDataset& data, int k_nn);
double knn_score(const KnnDetector& det, std::span<const double> x);

// 50, scaled down to 5% of the training size for small sets (never below 1).
int default_knn_k(int train_size);

}  // namespace kanood
