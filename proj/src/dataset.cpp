#include "kanood/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "kanood/rng.hpp"

namespace kanood {

LabeledDataset LabeledDataset::subset(const std::vector<int>& indices) const {
    LabeledDataset out;
    out.dim = dim;
    out.provenance = provenance;
    out.features.reserve(indices.size() * static_cast<size_t>(dim));
    for (int i : indices) {
        if (i < 0 || i >= n) throw std::out_of_range("LabeledDataset::subset: bad index");
        out.push_row(row(i));
        if (has_labels()) out.labels.push_back(labels[static_cast<size_t>(i)]);
        if (has_targets()) out.targets.push_back(targets[static_cast<size_t>(i)]);
        if (has_ind_flags()) out.ind_flag.push_back(ind_flag[static_cast<size_t>(i)]);
    }
    return out;
}

void LabeledDataset::validate() const {
    if (features.size() != static_cast<size_t>(n) * static_cast<size_t>(dim))
        throw std::invalid_argument("LabeledDataset: feature size mismatch");
    if (has_labels() && labels.size() != static_cast<size_t>(n))
        throw std::invalid_argument("LabeledDataset: label count mismatch");
    if (has_targets() && targets.size() != static_cast<size_t>(n))
        throw std::invalid_argument("LabeledDataset: target count mismatch");
    if (has_ind_flags() && ind_flag.size() != static_cast<size_t>(n))
        throw std::invalid_argument("LabeledDataset: ind_flag count mismatch");
    for (double v : features)
        if (!std::isfinite(v)) throw std::invalid_argument("LabeledDataset: non-finite feature");
}

double five_peaks_target(double x, const FivePeaksParams& p) {
    double y = 0.0;
    for (double c : p.centers) {
        const double d = (x - c) / p.width;
        y += p.amplitude * std::exp(-0.5 * d * d);
    }
    return y;
}

std::vector<std::pair<double, double>> five_peaks_train_regions(const FivePeaksParams& p) {
    std::vector<std::pair<double, double>> regions;
    const double r = p.truncation * p.width;
    for (int j = 0; j < p.train_peaks; ++j) {
        const double c = p.centers[static_cast<size_t>(j)];
        regions.emplace_back(std::max(-1.0, c - r), std::min(1.0, c + r));
    }
    return regions;
}

namespace {

double draw_truncated_normal(Rng& rng, double center, double sigma, double lo, double hi) {
    for (;;) {
        const double x = rng.normal(center, sigma);
        if (x >= lo && x <= hi) return x;
    }
}

}  // namespace

FivePeaksData gen_five_peaks(int n, uint64_t seed, const FivePeaksParams& p) {
    if (n < 10) throw std::invalid_argument("gen_five_peaks: n must be >= 10");
    if (p.train_peaks < 1 || p.train_peaks > static_cast<int>(p.centers.size()))
        throw std::invalid_argument("gen_five_peaks: train_peaks out of range");

    FivePeaksData out;
    out.params = p;
    const auto regions = five_peaks_train_regions(p);

    Rng rng(derive_seed(seed, 0x5eed5));

    auto draw_train_x = [&]() {
        const int j = static_cast<int>(rng.next_below(static_cast<uint64_t>(p.train_peaks)));
        const auto& [lo, hi] = regions[static_cast<size_t>(j)];
        return draw_truncated_normal(rng, p.centers[static_cast<size_t>(j)], p.width, lo, hi);
    };

    out.train.dim = 1;
    out.train.provenance = "five_peaks(n=" + std::to_string(n) + ",seed=" + std::to_string(seed) + ")";
    for (int i = 0; i < n; ++i) {
        const double x = draw_train_x();
        out.train.push_row({&x, 1});
        out.train.targets.push_back(five_peaks_target(x, p));
        out.train.ind_flag.push_back(1);
    }

    // complement of the training regions within [-1, 1]
    std::vector<std::pair<double, double>> gaps;
    double cursor = -1.0;
    for (const auto& [lo, hi] : regions) {
        if (lo > cursor) gaps.emplace_back(cursor, lo);
        cursor = std::max(cursor, hi);
    }
    if (cursor < 1.0) gaps.emplace_back(cursor, 1.0);
    double total_gap = 0.0;
    for (const auto& [lo, hi] : gaps) total_gap += hi - lo;

    auto draw_ood_x = [&]() {
        double u = rng.uniform() * total_gap;
        for (const auto& [lo, hi] : gaps) {
            if (u < hi - lo) return lo + u;
            u -= hi - lo;
        }
        return gaps.back().second;
    };

    out.test.dim = 1;
    out.test.provenance = out.train.provenance + " test";
    const int n_ind = n / 2;
    const int n_ood = n - n_ind;
    for (int i = 0; i < n_ind; ++i) {
        const double x = draw_train_x();
        out.test.push_row({&x, 1});
        out.test.targets.push_back(five_peaks_target(x, p));
        out.test.ind_flag.push_back(1);
    }
    for (int i = 0; i < n_ood; ++i) {
        const double x = draw_ood_x();
        out.test.push_row({&x, 1});
        out.test.targets.push_back(five_peaks_target(x, p));
        out.test.ind_flag.push_back(0);
    }
    return out;
}

LShapeData gen_lshape(int n, uint64_t seed, const LShapeParams& p) {
    if (n < 10) throw std::invalid_argument("gen_lshape: n must be >= 10");
    if (p.arm_thickness <= 0.0 || p.arm_thickness >= p.corner_lo)
        throw std::invalid_argument("gen_lshape: corner must be disjoint from the arms");

    LShapeData out;
    out.params = p;
    Rng rng(derive_seed(seed, 0x15a9e));

    // disjoint decomposition of the L: horizontal arm [0,1]x[0,t],
    // vertical remainder [0,t]x(t,1]
    const double t = p.arm_thickness;
    const double area_h = t;             // 1 * t
    const double area_v = t * (1.0 - t); // t * (1-t)
    const double p_h = area_h / (area_h + area_v);

    out.train.dim = 2;
    out.train.provenance = "lshape(n=" + std::to_string(n) + ",seed=" + std::to_string(seed) + ")";
    for (int i = 0; i < n; ++i) {
        double xy[2];
        if (rng.uniform() < p_h) {
            xy[0] = rng.uniform(0.0, 1.0);
            xy[1] = rng.uniform(0.0, t);
        } else {
            xy[0] = rng.uniform(0.0, t);
            xy[1] = rng.uniform(t, 1.0);
        }
        out.train.push_row({xy, 2});
        out.train.targets.push_back(p.target_constant);
        out.train.ind_flag.push_back(1);
    }

    out.test_ood.dim = 2;
    out.test_ood.provenance = out.train.provenance + " corner";
    const int n_ood = n / 2;
    for (int i = 0; i < n_ood; ++i) {
        double xy[2] = {rng.uniform(p.corner_lo, p.corner_hi), rng.uniform(p.corner_lo, p.corner_hi)};
        out.test_ood.push_row({xy, 2});
        out.test_ood.targets.push_back(p.target_constant);
        out.test_ood.ind_flag.push_back(0);
    }
    return out;
}

double friedman_mean_response(std::span<const double> x) {
    return 10.0 * std::sin(3.14159265358979323846 * x[0] * x[1]) +
           20.0 * (x[2] - 0.5) * (x[2] - 0.5) + 10.0 * x[3] + 5.0 * x[4];
}

LabeledDataset gen_friedman(int n, double noise_sigma, uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_friedman: n must be >= 1");
    if (noise_sigma < 0.0) throw std::invalid_argument("gen_friedman: noise_sigma must be >= 0");

    LabeledDataset out;
    out.dim = 5;
    out.provenance = "friedman(n=" + std::to_string(n) + ",sigma=" + std::to_string(noise_sigma) +
                     ",seed=" + std::to_string(seed) + ")";
    Rng rng(derive_seed(seed, 0xf71ed));
    double x[5];
    for (int i = 0; i < n; ++i) {
        for (double& v : x) v = rng.uniform();
        out.push_row({x, 5});
        out.targets.push_back(friedman_mean_response({x, 5}) + rng.normal(0.0, noise_sigma));
    }
    return out;
}

std::pair<LabeledDataset, LabeledDataset> friedman_ood_split(const LabeledDataset& data,
                                                             double threshold) {
    if (!data.has_targets())
        throw std::invalid_argument("friedman_ood_split: dataset has no targets");
    std::vector<int> ind_rows, ood_rows;
    for (int i = 0; i < data.n; ++i)
        (data.targets[static_cast<size_t>(i)] < threshold ? ind_rows : ood_rows).push_back(i);
    if (ind_rows.empty() || ood_rows.empty()) {
        auto [mn, mx] = std::minmax_element(data.targets.begin(), data.targets.end());
        throw std::invalid_argument(
            "friedman_ood_split: threshold " + std::to_string(threshold) +
            " leaves one side empty; targets span [" + std::to_string(*mn) + ", " +
            std::to_string(*mx) + "], try a value in between");
    }
    auto ind = data.subset(ind_rows);
    auto ood = data.subset(ood_rows);
    ind.ind_flag.assign(static_cast<size_t>(ind.n), 1);
    ood.ind_flag.assign(static_cast<size_t>(ood.n), 0);
    return {std::move(ind), std::move(ood)};
}

LabeledDataset synthetic_ood_scale(const LabeledDataset& data, int feature_index, double factor) {
    if (feature_index < 0 || feature_index >= data.dim)
        throw std::invalid_argument("synthetic_ood_scale: feature index out of range");
    if (!std::isfinite(factor))
        throw std::invalid_argument("synthetic_ood_scale: factor must be finite");
    LabeledDataset out = data;
    for (int i = 0; i < out.n; ++i)
        out.features[static_cast<size_t>(i) * out.dim + feature_index] *= factor;
    out.ind_flag.assign(static_cast<size_t>(out.n), 0);
    out.provenance += " scaled(col=" + std::to_string(feature_index) +
                      ",F=" + std::to_string(factor) + ")";
    return out;
}

namespace {

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, delim)) cells.push_back(cell);
    if (!line.empty() && line.back() == delim) cells.emplace_back();
    return cells;
}

double parse_cell(const std::string& cell, int row, int col) {
    try {
        size_t pos = 0;
        const double v = std::stod(cell, &pos);
        while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
        if (pos != cell.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("load_delimited: non-numeric cell at row " + std::to_string(row) +
                                 " col " + std::to_string(col) + ": '" + cell + "'");
    }
}

}  // namespace

LabeledDataset load_delimited(const std::string& path, const DelimitedSchema& schema) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_delimited: cannot open " + path);

    LabeledDataset out;
    out.provenance = "file:" + path;
    std::string line;
    int row = 0;
    int n_cols = -1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (row == 1 && schema.has_header) continue;
        if (line.empty()) continue;
        const auto cells = split_line(line, schema.delimiter);
        if (n_cols < 0) {
            n_cols = static_cast<int>(cells.size());
            if (schema.label_column >= n_cols || schema.target_column >= n_cols)
                throw std::runtime_error("load_delimited: schema column out of range for " +
                                         std::to_string(n_cols) + " columns");
            out.dim = n_cols - (schema.label_column >= 0 ? 1 : 0) -
                      (schema.target_column >= 0 ? 1 : 0);
            if (out.dim < 1) throw std::runtime_error("load_delimited: no feature columns left");
        } else if (static_cast<int>(cells.size()) != n_cols) {
            throw std::runtime_error("load_delimited: row " + std::to_string(row) + " has " +
                                     std::to_string(cells.size()) + " columns, expected " +
                                     std::to_string(n_cols));
        }
        for (int c = 0; c < n_cols; ++c) {
            const double v = parse_cell(cells[static_cast<size_t>(c)], row, c + 1);
            if (c == schema.label_column)
                out.labels.push_back(static_cast<int>(std::llround(v)));
            else if (c == schema.target_column)
                out.targets.push_back(v);
            else
                out.features.push_back(v);
        }
        ++out.n;
    }
    if (out.n == 0) throw std::runtime_error("load_delimited: no data rows in " + path);
    out.validate();
    return out;
}

void save_delimited(const LabeledDataset& data, const std::string& path,
                    const DelimitedSchema& schema) {
    std::ofstream outf(path);
    if (!outf) throw std::runtime_error("save_delimited: cannot open " + path);
    outf.precision(17);

    const int extra = (schema.label_column >= 0 ? 1 : 0) + (schema.target_column >= 0 ? 1 : 0);
    const int n_cols = data.dim + extra;
    if (schema.label_column >= n_cols || schema.target_column >= n_cols)
        throw std::runtime_error("save_delimited: schema column out of range");
    if (schema.label_column >= 0 && !data.has_labels())
        throw std::runtime_error("save_delimited: schema names a label column but data has no labels");
    if (schema.target_column >= 0 && !data.has_targets())
        throw std::runtime_error("save_delimited: schema names a target column but data has no targets");

    if (schema.has_header) {
        for (int c = 0; c < n_cols; ++c) {
            if (c) outf << schema.delimiter;
            if (c == schema.label_column)
                outf << "label";
            else if (c == schema.target_column)
                outf << "target";
            else
                outf << "x" << c;
        }
        outf << '\n';
    }
    for (int i = 0; i < data.n; ++i) {
        int f = 0;
        for (int c = 0; c < n_cols; ++c) {
            if (c) outf << schema.delimiter;
            if (c == schema.label_column)
                outf << data.labels[static_cast<size_t>(i)];
            else if (c == schema.target_column)
                outf << data.targets[static_cast<size_t>(i)];
            else
                outf << data.features[static_cast<size_t>(i) * data.dim + f++];
        }
        outf << '\n';
    }
    if (!outf) throw std::runtime_error("save_delimited: write failed for " + path);
}

}  // namespace kanood
