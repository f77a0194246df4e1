#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kanood/dataset.hpp"

namespace kanood {

struct ClusterModel {
    int dim = 0;
    std::vector<double> centroids;  // [P][dim]
    double inertia = 0.0;           // sum of squared distances to assigned centroids
    int iterations_run = 0;

    int partition_count() const {
        return dim == 0 ? 0 : static_cast<int>(centroids.size()) / dim;
    }
    std::span<const double> centroid(int i) const {
        return {centroids.data() + static_cast<size_t>(i) * dim, static_cast<size_t>(dim)};
    }
};

// Lloyd iterations from k-means++ seeding until the assignment reaches a
// fixpoint or 300 iterations. Empty clusters are reseeded to the point
// farthest from its assigned centroid, so every cluster is nonempty. With
// restarts > 1 the fit with the lowest inertia wins.
ClusterModel kmeans_fit(const LabeledDataset& data, int partitions, uint64_t seed,
                        int restarts = 1);

// Nearest centroid by squared Euclidean distance; ties go to the lowest index.
int assign(const ClusterModel& model, std::span<const double> x);

std::vector<int> assign_all(const ClusterModel& model, const LabeledDataset& data);

// One subset per distinct label, ordered by label value; disjoint and
// exhaustive.
std::vector<LabeledDataset> class_partition(const LabeledDataset& data);

// The distinct labels in the order class_partition emits subsets.
std::vector<int> sorted_distinct_labels(const LabeledDataset& data);

}  // namespace kanood
