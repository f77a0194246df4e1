#include "kanood/partitioning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "kanood/rng.hpp"

namespace kanood {

namespace {

double sq_dist(const double* a, const double* b, int dim) {
    double d = 0.0;
    for (int i = 0; i < dim; ++i) {
        const double e = a[i] - b[i];
        d += e * e;
    }
    return d;
}

}  // namespace

namespace {
ClusterModel kmeans_fit_once(const LabeledDataset& data, int partitions, uint64_t seed);
}

ClusterModel kmeans_fit(const LabeledDataset& data, int partitions, uint64_t seed, int restarts) {
    data.validate();
    if (partitions < 1) throw std::invalid_argument("kmeans_fit: partitions must be >= 1");
    if (partitions > data.n)
        throw std::invalid_argument("kmeans_fit: " + std::to_string(partitions) +
                                    " partitions exceed " + std::to_string(data.n) + " samples");
    if (restarts < 1) throw std::invalid_argument("kmeans_fit: restarts must be >= 1");

    ClusterModel best = kmeans_fit_once(data, partitions, derive_seed(seed, 0));
    for (int r = 1; r < restarts; ++r) {
        ClusterModel candidate = kmeans_fit_once(data, partitions, derive_seed(seed, static_cast<uint64_t>(r)));
        if (candidate.inertia < best.inertia) best = std::move(candidate);
    }
    return best;
}

namespace {

ClusterModel kmeans_fit_once(const LabeledDataset& data, int partitions, uint64_t seed) {
    const int n = data.n;
    const int d = data.dim;
    const int P = partitions;
    ClusterModel model;
    model.dim = d;
    model.centroids.assign(static_cast<size_t>(P) * d, 0.0);

    Rng rng(derive_seed(seed, 0x6bea));

    // k-means++ seeding
    {
        const int pick = static_cast<int>(rng.next_below(static_cast<uint64_t>(n)));
        std::copy_n(data.row(pick).data(), d, model.centroids.begin());
        std::vector<double> min_d(static_cast<size_t>(n), std::numeric_limits<double>::infinity());
        for (int c = 1; c < P; ++c) {
            double total = 0.0;
            for (int i = 0; i < n; ++i) {
                const double dist = sq_dist(data.row(i).data(),
                                            model.centroids.data() + static_cast<size_t>(c - 1) * d, d);
                min_d[static_cast<size_t>(i)] = std::min(min_d[static_cast<size_t>(i)], dist);
                total += min_d[static_cast<size_t>(i)];
            }
            int chosen = n - 1;
            if (total > 0.0) {
                double u = rng.uniform() * total;
                for (int i = 0; i < n; ++i) {
                    u -= min_d[static_cast<size_t>(i)];
                    if (u <= 0.0) {
                        chosen = i;
                        break;
                    }
                }
            } else {
                chosen = static_cast<int>(rng.next_below(static_cast<uint64_t>(n)));
            }
            std::copy_n(data.row(chosen).data(), d,
                        model.centroids.begin() + static_cast<size_t>(c) * d);
        }
    }

    std::vector<int> assignment(static_cast<size_t>(n), -1);
    std::vector<double> sums(static_cast<size_t>(P) * d);
    std::vector<int> counts(static_cast<size_t>(P));
    double prev_inertia = std::numeric_limits<double>::infinity();

    constexpr int kMaxIterations = 300;
    for (int it = 0; it < kMaxIterations; ++it) {
        model.iterations_run = it + 1;
        bool changed = false;
        double inertia = 0.0;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_d = sq_dist(data.row(i).data(), model.centroids.data(), d);
            for (int c = 1; c < P; ++c) {
                const double dist =
                    sq_dist(data.row(i).data(), model.centroids.data() + static_cast<size_t>(c) * d, d);
                if (dist < best_d) {
                    best_d = dist;
                    best = c;
                }
            }
            inertia += best_d;
            if (assignment[static_cast<size_t>(i)] != best) {
                assignment[static_cast<size_t>(i)] = best;
                changed = true;
            }
        }
        if (inertia > prev_inertia + 1e-9 * (1.0 + prev_inertia))
            throw std::logic_error("kmeans_fit: inertia increased between iterations");
        prev_inertia = inertia;
        model.inertia = inertia;
        if (!changed) break;

        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0);
        for (int i = 0; i < n; ++i) {
            const int c = assignment[static_cast<size_t>(i)];
            ++counts[static_cast<size_t>(c)];
            const double* x = data.row(i).data();
            double* s = sums.data() + static_cast<size_t>(c) * d;
            for (int j = 0; j < d; ++j) s[j] += x[j];
        }
        for (int c = 0; c < P; ++c) {
            if (counts[static_cast<size_t>(c)] == 0) {
                // reseed to the point farthest from its assigned centroid
                int far_i = 0;
                double far_d = -1.0;
                for (int i = 0; i < n; ++i) {
                    const int a = assignment[static_cast<size_t>(i)];
                    const double dist = sq_dist(data.row(i).data(),
                                                model.centroids.data() + static_cast<size_t>(a) * d, d);
                    if (dist > far_d) {
                        far_d = dist;
                        far_i = i;
                    }
                }
                std::copy_n(data.row(far_i).data(), d,
                            model.centroids.begin() + static_cast<size_t>(c) * d);
                prev_inertia = std::numeric_limits<double>::infinity();
            } else {
                double* ctr = model.centroids.data() + static_cast<size_t>(c) * d;
                const double* s = sums.data() + static_cast<size_t>(c) * d;
                for (int j = 0; j < d; ++j) ctr[j] = s[j] / counts[static_cast<size_t>(c)];
            }
        }
    }
    return model;
}

}  // namespace

int assign(const ClusterModel& model, std::span<const double> x) {
    if (static_cast<int>(x.size()) != model.dim)
        throw std::invalid_argument("assign: input has dimension " + std::to_string(x.size()) +
                                    ", model expects " + std::to_string(model.dim));
    const int P = model.partition_count();
    int best = 0;
    double best_d = sq_dist(x.data(), model.centroids.data(), model.dim);
    for (int c = 1; c < P; ++c) {
        const double dist =
            sq_dist(x.data(), model.centroids.data() + static_cast<size_t>(c) * model.dim, model.dim);
        if (dist < best_d) {
            best_d = dist;
            best = c;
        }
    }
    return best;
}

std::vector<int> assign_all(const ClusterModel& model, const LabeledDataset& data) {
    std::vector<int> out(static_cast<size_t>(data.n));
    for (int i = 0; i < data.n; ++i) out[static_cast<size_t>(i)] = assign(model, data.row(i));
    return out;
}

std::vector<int> sorted_distinct_labels(const LabeledDataset& data) {
    if (!data.has_labels())
        throw std::invalid_argument("class_partition: dataset has no labels");
    std::set<int> distinct(data.labels.begin(), data.labels.end());
    return {distinct.begin(), distinct.end()};
}

std::vector<LabeledDataset> class_partition(const LabeledDataset& data) {
    const auto labels = sorted_distinct_labels(data);
    std::vector<LabeledDataset> out;
    out.reserve(labels.size());
    for (int label : labels) {
        std::vector<int> rows;
        for (int i = 0; i < data.n; ++i)
            if (data.labels[static_cast<size_t>(i)] == label) rows.push_back(i);
        out.push_back(data.subset(rows));
    }
    return out;
}

}  // namespace kanood
