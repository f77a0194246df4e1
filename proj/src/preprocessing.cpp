#include "kanood/preprocessing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kanood {

HistogramNormalizer fit_normalizer(const LabeledDataset& data, int bins, double domain_min,
                                   double domain_max) {
    data.validate();
    if (data.n < 2) throw std::invalid_argument("fit_normalizer: need at least 2 samples");
    if (bins < 1) throw std::invalid_argument("fit_normalizer: bins must be >= 1");
    if (!(domain_min < domain_max))
        throw std::invalid_argument("fit_normalizer: domain_min must be < domain_max");

    HistogramNormalizer norm;
    norm.bins = bins;
    norm.domain_min = domain_min;
    norm.domain_max = domain_max;
    norm.per_feature.resize(static_cast<size_t>(data.dim));

    std::vector<double> counts(static_cast<size_t>(bins));
    for (int f = 0; f < data.dim; ++f) {
        auto& fc = norm.per_feature[static_cast<size_t>(f)];
        fc.lo = fc.hi = data.features[static_cast<size_t>(f)];
        for (int i = 1; i < data.n; ++i) {
            const double v = data.features[static_cast<size_t>(i) * data.dim + f];
            fc.lo = std::min(fc.lo, v);
            fc.hi = std::max(fc.hi, v);
        }
        fc.cdf.assign(static_cast<size_t>(bins + 1), 0.0);
        if (fc.hi == fc.lo) continue;  // constant feature: transform maps to the midpoint

        std::fill(counts.begin(), counts.end(), 0.0);
        const double width = (fc.hi - fc.lo) / bins;
        for (int i = 0; i < data.n; ++i) {
            const double v = data.features[static_cast<size_t>(i) * data.dim + f];
            int b = static_cast<int>((v - fc.lo) / width);
            b = std::clamp(b, 0, bins - 1);
            counts[static_cast<size_t>(b)] += 1.0;
        }
        double running = 0.0;
        for (int b = 0; b < bins; ++b) {
            running += counts[static_cast<size_t>(b)];
            fc.cdf[static_cast<size_t>(b + 1)] = running / data.n;
        }
        fc.cdf.back() = 1.0;
    }
    return norm;
}

std::vector<double> transform(const HistogramNormalizer& norm, std::span<const double> x) {
    if (static_cast<int>(x.size()) != norm.dim())
        throw std::invalid_argument("transform: input has dimension " + std::to_string(x.size()) +
                                    ", normalizer expects " + std::to_string(norm.dim()));
    std::vector<double> out(x.size());
    const double span = norm.domain_max - norm.domain_min;
    for (size_t f = 0; f < x.size(); ++f) {
        const auto& fc = norm.per_feature[f];
        double t;
        if (fc.hi == fc.lo) {
            t = 0.5;
        } else if (x[f] <= fc.lo) {
            t = 0.0;
        } else if (x[f] >= fc.hi) {
            t = 1.0;
        } else {
            const double width = (fc.hi - fc.lo) / norm.bins;
            const double pos = (x[f] - fc.lo) / width;
            int b = std::clamp(static_cast<int>(pos), 0, norm.bins - 1);
            const double frac = pos - b;
            t = fc.cdf[static_cast<size_t>(b)] +
                frac * (fc.cdf[static_cast<size_t>(b + 1)] - fc.cdf[static_cast<size_t>(b)]);
        }
        out[f] = norm.domain_min + t * span;
    }
    return out;
}

LabeledDataset transform_dataset(const HistogramNormalizer& norm, const LabeledDataset& data) {
    LabeledDataset out = data;
    for (int i = 0; i < data.n; ++i) {
        const auto t = transform(norm, data.row(i));
        std::copy(t.begin(), t.end(), out.features.begin() + static_cast<size_t>(i) * data.dim);
    }
    return out;
}

}  // namespace kanood
