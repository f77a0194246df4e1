#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace kanood {

/// Feature matrix plus optional labels, regression targets, and InD/OOD tags.
/// The unit of ingestion, partitioning, training, and evaluation.
struct LabeledDataset {
    int n = 0;
    int dim = 0;
    std::vector<double> features;   // row-major [n][dim]
    std::vector<int> labels;        // size n or empty
    std::vector<double> targets;    // size n or empty
    std::vector<uint8_t> ind_flag;  // size n or empty; 1 = InD, 0 = OOD
    std::string provenance;

    bool has_labels() const { return !labels.empty(); }
    bool has_targets() const { return !targets.empty(); }
    bool has_ind_flags() const { return !ind_flag.empty(); }

    std::span<const double> row(int i) const {
        return {features.data() + static_cast<size_t>(i) * dim, static_cast<size_t>(dim)};
    }

    void push_row(std::span<const double> x) {
        features.insert(features.end(), x.begin(), x.end());
        ++n;
    }

    // Rows at the given indices, carrying labels/targets/flags along.
    LabeledDataset subset(const std::vector<int>& indices) const;

    void validate() const;  // row counts agree, features finite
};

struct FivePeaksParams {
    std::vector<double> centers = {-0.8, -0.4, 0.0, 0.4, 0.8};
    double width = 0.07;
    double amplitude = 1.0;
    int train_peaks = 2;     // leftmost peaks used for training
    double truncation = 2.0; // training draws within +-truncation*width of a peak
};

// 1D regression task: targets are a sum of Gaussian bumps; the training set
// is drawn from the leftmost two peak regions only, the test set mixes
// held-out in-region draws (InD) with draws from the remaining input range
// (OOD). Test size equals n, split evenly.
struct FivePeaksData {
    LabeledDataset train;
    LabeledDataset test;
    FivePeaksParams params;
};
FivePeaksData gen_five_peaks(int n, uint64_t seed, const FivePeaksParams& params = {});
double five_peaks_target(double x, const FivePeaksParams& params);

// Intervals [center - truncation*width, center + truncation*width] for the
// training peaks; the OOD range is their complement within [-1, 1].
std::vector<std::pair<double, double>> five_peaks_train_regions(const FivePeaksParams& params);

struct LShapeParams {
    // two axis-aligned arms and the held-out corner; defaults satisfy the
    // marginal-overlap property (corner x1 and x2 ranges both lie inside the
    // training marginals)
    double arm_thickness = 0.3;
    double corner_lo = 0.6;
    double corner_hi = 1.0;
    double target_constant = 1.0;
};

// 2D regression-to-constant task: training points uniform over an L-shaped
// union of two arms, OOD points uniform over the opposite corner square.
struct LShapeData {
    LabeledDataset train;
    LabeledDataset test_ood;
    LShapeParams params;
};
LShapeData gen_lshape(int n, uint64_t seed, const LShapeParams& params = {});

// x uniform on [0,1]^5, y = 10 sin(pi x0 x1) + 20 (x2 - 0.5)^2 + 10 x3
// + 5 x4 + Normal(0, noise_sigma)
LabeledDataset gen_friedman(int n, double noise_sigma, uint64_t seed);
double friedman_mean_response(std::span<const double> x);

// Splits on the regression value: rows with y < threshold are InD, rows with
// y >= threshold are OOD. Throws if either side would be empty.
std::pair<LabeledDataset, LabeledDataset> friedman_ood_split(const LabeledDataset& data,
                                                             double threshold);

// Copy with one feature column multiplied by factor, tagged OOD.
LabeledDataset synthetic_ood_scale(const LabeledDataset& data, int feature_index, double factor);

struct DelimitedSchema {
    char delimiter = ',';
    bool has_header = false;
    int label_column = -1;   // -1: no labels
    int target_column = -1;  // -1: no targets
};

LabeledDataset load_delimited(const std::string& path, const DelimitedSchema& schema);
void save_delimited(const LabeledDataset& data, const std::string& path,
                    const DelimitedSchema& schema);

}  // namespace kanood
