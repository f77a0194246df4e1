#pragma once

#include <span>
#include <vector>

#include "kanood/dataset.hpp"

namespace kanood {

/// Per-feature empirical-CDF remapping onto the spline grid domain. Fitted on
/// InD training features; the transform interpolates the CDF piecewise
/// linearly so nearby distinct inputs stay distinct, and clamps out-of-range
/// values to the domain endpoints.
struct HistogramNormalizer {
    struct FeatureCdf {
        double lo = 0.0;
        double hi = 0.0;
        std::vector<double> cdf;  // bins+1 cumulative fractions, 0 to 1
    };

    int bins = 0;
    double domain_min = -1.0;
    double domain_max = 1.0;
    std::vector<FeatureCdf> per_feature;

    int dim() const { return static_cast<int>(per_feature.size()); }
};

HistogramNormalizer fit_normalizer(const LabeledDataset& data, int bins, double domain_min,
                                   double domain_max);

std::vector<double> transform(const HistogramNormalizer& norm, std::span<const double> x);

LabeledDataset transform_dataset(const HistogramNormalizer& norm, const LabeledDataset& data);

}  // namespace kanood
