#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kanood/dataset.hpp"
#include "kanood/network.hpp"
#include "kanood/partitioning.hpp"
#include "kanood/preprocessing.hpp"

namespace kanood {

enum class Reduction { min, mean, median, max };
using ScoringFn = Reduction;  // reduces one delta matrix to a scalar
using AggFn = Reduction;      // combines per-partition scores

// Median of an even-length multiset is the mean of the two central elements.
double reduce(Reduction fn, std::span<const double> values);

std::string reduction_name(Reduction fn);
Reduction reduction_from_name(const std::string& name);

/// A trained network paired with its identically initialized untrained copy.
/// The delta comparison uses the spline component of each activation only;
/// the globally supported residual term would leak training signal into
/// untouched grid regions (include_residual exists for ablations).
struct KanDetector {
    KanNetwork trained;
    KanNetwork untrained;
    ScoringFn scoring = ScoringFn::median;
    bool include_residual = false;
};

// Per-layer |phi_trained - phi_untrained| matrices, flattened [n_in * n_out].
std::vector<std::vector<double>> delta_matrix(const KanDetector& det, std::span<const double> x);

// Coefficient-difference route sum_i |c_tr - c_untr| B_i(x) per activation.
// An elementwise upper bound of delta_matrix, with equality when the active
// coefficient differences share one sign. Single-layer detectors only: deeper
// layers see different inputs in the two networks, so the expansion does not
// apply.
std::vector<std::vector<double>> delta_coeff_bound(const KanDetector& det,
                                                   std::span<const double> x);

// Scoring function over the multiset of all delta entries across layers.
double ind_score(const KanDetector& det, std::span<const double> x);

enum class Verdict { InD, OOD };
inline Verdict classify_score(double score, double lambda) {
    return score >= lambda ? Verdict::InD : Verdict::OOD;
}
Verdict classify(const KanDetector& det, std::span<const double> x, double lambda);

struct TrainingSummary {
    std::vector<int> partition_sizes;
    std::vector<double> final_losses;  // per partition, on that partition's data
};

struct DetectorConfig {
    enum class Partitioner { kmeans, class_based };

    int partitions = 1;
    Partitioner partitioner = Partitioner::kmeans;
    int kmeans_restarts = 1;
    int grid_size = 50;
    int spline_order = 3;
    double domain_min = -1.0;
    double domain_max = 1.0;
    std::vector<int> hidden;  // hidden layer widths; empty = single KAN layer
    ScoringFn scoring = ScoringFn::median;
    AggFn agg = AggFn::max;
    std::optional<double> threshold;  // lambda; scoring is threshold-free without it
    TrainConfig train;
    bool use_normalizer = true;
    int normalizer_bins = 40;
    bool include_residual = false;
    double init_scale = 0.1;

    GridSpec grid_spec() const { return {grid_size, spline_order, domain_min, domain_max}; }
    void validate() const;
};

/// Ensemble of per-partition detectors. All members share the same untrained
/// network and scoring; raw inputs pass through the fitted normalizer (when
/// present) before scoring.
struct PartitionedDetector {
    std::vector<KanDetector> detectors;
    int partition_count = 0;
    AggFn agg = AggFn::max;
    bool shared_untrained = true;
    std::optional<HistogramNormalizer> normalizer;
    std::optional<ClusterModel> cluster_model;       // kmeans partitioner
    std::vector<int> partition_labels;               // class_based partitioner
    DetectorConfig config;
    TrainingSummary training;
};

// Normalizes x (when configured), scores every member detector, aggregates.
double partitioned_score(const PartitionedDetector& pdet, std::span<const double> x);
Verdict classify(const PartitionedDetector& pdet, std::span<const double> x, double lambda);

std::vector<double> score_all(const PartitionedDetector& pdet, const LabeledDataset& data);

// Fits normalizer and partitioner on the InD data, initializes one untrained
// network from seed, trains one copy per partition. Each partition's training
// RNG stream is derived from (seed, partition index), so results do not
// depend on training order.
PartitionedDetector fit_detector(const LabeledDataset& data, const DetectorConfig& cfg,
                                 uint64_t seed);

// Lambda such that the requested fraction of the reference scores falls below
// it; helper for picking a decision threshold from training scores.
double lambda_at_quantile(std::span<const double> scores, double quantile);

}  // namespace kanood
