#include "kanood/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kanood {

int HistogramDetector::interval_of(double x) const {
    const double cx = std::clamp(x, domain_min, domain_max);
    const double width = (domain_max - domain_min) / grid_size;
    const int b = static_cast<int>((cx - domain_min) / width);
    return std::clamp(b, 0, grid_size - 1);
}

HistogramDetector histogram_fit(const LabeledDataset& data, int grid_size, double domain_min,
                                double domain_max, ScoringFn scoring) {
    data.validate();
    if (data.n == 0) throw std::invalid_argument("histogram_fit: dataset is empty");
    if (grid_size < 1) throw std::invalid_argument("histogram_fit: grid_size must be >= 1");
    if (!(domain_min < domain_max))
        throw std::invalid_argument("histogram_fit: domain_min must be < domain_max");

    HistogramDetector det;
    det.dim = data.dim;
    det.grid_size = grid_size;
    det.domain_min = domain_min;
    det.domain_max = domain_max;
    det.scoring = scoring;
    det.occupied.assign(static_cast<size_t>(data.dim) * grid_size, 0);
    for (int i = 0; i < data.n; ++i) {
        const auto row = data.row(i);
        for (int f = 0; f < data.dim; ++f)
            det.occupied[static_cast<size_t>(f) * grid_size + det.interval_of(row[static_cast<size_t>(f)])] = 1;
    }
    return det;
}

double histogram_score(const HistogramDetector& det, std::span<const double> x) {
    if (static_cast<int>(x.size()) != det.dim)
        throw std::invalid_argument("histogram_score: input has dimension " +
                                    std::to_string(x.size()) + ", detector expects " +
                                    std::to_string(det.dim));
    std::vector<double> indicators(x.size());
    for (size_t f = 0; f < x.size(); ++f)
        indicators[f] = det.occupied[f * static_cast<size_t>(det.grid_size) +
                                     static_cast<size_t>(det.interval_of(x[f]))];
    return reduce(det.scoring, indicators);
}

int default_knn_k(int train_size) {
    if (train_size < 1) throw std::invalid_argument("default_knn_k: empty training set");
    return std::max(1, std::min(50, train_size / 20));
}

KnnDetector knn_fit(const LabeledDataset& data, int k_nn) {
    data.validate();
    if (data.n == 0) throw std::invalid_argument("knn_fit: dataset is empty");
    if (k_nn < 1 || k_nn > data.n)
        throw std::invalid_argument("knn_fit: k_nn must be in [1, " + std::to_string(data.n) +
                                    "], got " + std::to_string(k_nn));
    KnnDetector det;
    det.dim = data.dim;
    det.n = data.n;
    det.k_nn = k_nn;
    det.points = data.features;
    return det;
}

double knn_score(const KnnDetector& det, std::span<const double> x) {
    if (static_cast<int>(x.size()) != det.dim)
        throw std::invalid_argument("knn_score: input has dimension " + std::to_string(x.size()) +
                                    ", detector expects " + std::to_string(det.dim));
    std::vector<double> dists(static_cast<size_t>(det.n));
    for (int i = 0; i < det.n; ++i) {
        const double* p = det.points.data() + static_cast<size_t>(i) * det.dim;
        double d = 0.0;
        for (int f = 0; f < det.dim; ++f) {
            const double e = x[static_cast<size_t>(f)] - p[f];
            d += e * e;
        }
        dists[static_cast<size_t>(i)] = d;
    }
    std::nth_element(dists.begin(), dists.begin() + (det.k_nn - 1), dists.end());
    return -std::sqrt(dists[static_cast<size_t>(det.k_nn - 1)]);
}

}  // namespace kanood
