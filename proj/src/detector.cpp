#include "kanood/detector.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kanood/rng.hpp"

namespace kanood {

double reduce(Reduction fn, std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("reduce: empty value set");
    switch (fn) {
        case Reduction::min: return *std::min_element(values.begin(), values.end());
        case Reduction::max: return *std::max_element(values.begin(), values.end());
        case Reduction::mean: {
            double s = 0.0;
            for (double v : values) s += v;
            return s / static_cast<double>(values.size());
        }
        case Reduction::median: {
            std::vector<double> sorted(values.begin(), values.end());
            std::sort(sorted.begin(), sorted.end());
            const size_t n = sorted.size();
            if (n % 2 == 1) return sorted[n / 2];
            return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
        }
    }
    throw std::logic_error("reduce: unknown reduction");
}

std::string reduction_name(Reduction fn) {
    switch (fn) {
        case Reduction::min: return "min";
        case Reduction::mean: return "mean";
        case Reduction::median: return "median";
        case Reduction::max: return "max";
    }
    throw std::logic_error("reduction_name: unknown reduction");
}

Reduction reduction_from_name(const std::string& name) {
    if (name == "min") return Reduction::min;
    if (name == "mean") return Reduction::mean;
    if (name == "median") return Reduction::median;
    if (name == "max") return Reduction::max;
    throw std::invalid_argument("unknown scoring/aggregation function '" + name +
                                "' (expected min|mean|median|max)");
}

std::vector<std::vector<double>> delta_matrix(const KanDetector& det, std::span<const double> x) {
    ActivationRecord rec_tr, rec_un;
    forward(det.trained, x, &rec_tr);
    forward(det.untrained, x, &rec_un);

    std::vector<std::vector<double>> delta(rec_tr.size());
    for (size_t l = 0; l < rec_tr.size(); ++l) {
        const auto& tr = rec_tr[l];
        const auto& un = rec_un[l];
        delta[l].resize(tr.spline.size());
        for (size_t i = 0; i < tr.spline.size(); ++i) {
            double a = tr.spline[i];
            double b = un.spline[i];
            if (det.include_residual) {
                a += tr.residual[i];
                b += un.residual[i];
            }
            delta[l][i] = std::abs(a - b);
        }
    }
    return delta;
}

std::vector<std::vector<double>> delta_coeff_bound(const KanDetector& det,
                                                   std::span<const double> x) {
    if (det.trained.layers.size() != 1)
        throw std::invalid_argument(
            "delta_coeff_bound: coefficient expansion applies to single-layer detectors only");
    const KanLayer& tr = det.trained.layers[0];
    const KanLayer& un = det.untrained.layers[0];
    if (static_cast<int>(x.size()) != tr.n_in)
        throw std::invalid_argument("delta_coeff_bound: input dimension mismatch");

    const int k = tr.grid.order();
    std::vector<double> window(static_cast<size_t>(k + 1));

    std::vector<std::vector<double>> out(1);
    out[0].assign(static_cast<size_t>(tr.n_in) * tr.n_out, 0.0);
    for (int p = 0; p < tr.n_in; ++p) {
        const int first = basis_eval_local(tr.grid, x[static_cast<size_t>(p)], window.data());
        for (int q = 0; q < tr.n_out; ++q) {
            double bound = 0.0;
            for (int r = 0; r <= k; ++r) {
                const int i = first + r;
                bound += std::abs(tr.coeff(p, q, i) - un.coeff(p, q, i)) *
                         window[static_cast<size_t>(r)];
            }
            out[0][static_cast<size_t>(p) * tr.n_out + q] = bound;
        }
    }
    return out;
}

double ind_score(const KanDetector& det, std::span<const double> x) {
    const auto delta = delta_matrix(det, x);
    std::vector<double> pooled;
    for (const auto& layer : delta) pooled.insert(pooled.end(), layer.begin(), layer.end());
    return reduce(det.scoring, pooled);
}

Verdict classify(const KanDetector& det, std::span<const double> x, double lambda) {
    if (!std::isfinite(lambda)) throw std::invalid_argument("classify: lambda must be finite");
    return classify_score(ind_score(det, x), lambda);
}

void DetectorConfig::validate() const {
    if (partitions < 1) throw std::invalid_argument("detector config: partitions must be >= 1");
    if (kmeans_restarts < 1)
        throw std::invalid_argument("detector config: kmeans_restarts must be >= 1");
    if (grid_size < 1) throw std::invalid_argument("detector config: grid_size must be >= 1");
    if (spline_order < 0) throw std::invalid_argument("detector config: spline_order must be >= 0");
    if (!(domain_min < domain_max))
        throw std::invalid_argument("detector config: domain_min must be < domain_max");
    if (normalizer_bins < 1)
        throw std::invalid_argument("detector config: normalizer_bins must be >= 1");
    if (train.epochs < 1) throw std::invalid_argument("detector config: epochs must be >= 1");
    if (!(train.learning_rate > 0.0))
        throw std::invalid_argument("detector config: learning_rate must be > 0");
    for (int h : hidden)
        if (h < 1) throw std::invalid_argument("detector config: hidden widths must be positive");
}

double partitioned_score(const PartitionedDetector& pdet, std::span<const double> x) {
    std::vector<double> normalized;
    std::span<const double> input = x;
    if (pdet.normalizer) {
        normalized = transform(*pdet.normalizer, x);
        input = normalized;
    }
    std::vector<double> scores;
    scores.reserve(pdet.detectors.size());
    for (const auto& det : pdet.detectors) scores.push_back(ind_score(det, input));
    return reduce(pdet.agg, scores);
}

Verdict classify(const PartitionedDetector& pdet, std::span<const double> x, double lambda) {
    if (!std::isfinite(lambda)) throw std::invalid_argument("classify: lambda must be finite");
    return classify_score(partitioned_score(pdet, x), lambda);
}

std::vector<double> score_all(const PartitionedDetector& pdet, const LabeledDataset& data) {
    std::vector<double> scores(static_cast<size_t>(data.n));
    for (int i = 0; i < data.n; ++i)
        scores[static_cast<size_t>(i)] = partitioned_score(pdet, data.row(i));
    return scores;
}

PartitionedDetector fit_detector(const LabeledDataset& data, const DetectorConfig& cfg,
                                 uint64_t seed) {
    cfg.validate();
    data.validate();
    if (data.n == 0) throw std::invalid_argument("fit_detector: dataset is empty");

    PartitionedDetector pdet;
    pdet.config = cfg;
    pdet.agg = cfg.agg;
    pdet.shared_untrained = true;

    LabeledDataset working = data;
    if (cfg.use_normalizer) {
        pdet.normalizer = fit_normalizer(data, cfg.normalizer_bins, cfg.domain_min, cfg.domain_max);
        working = transform_dataset(*pdet.normalizer, data);
    }

    // partition the (normalized) training data
    std::vector<LabeledDataset> parts;
    if (cfg.partitioner == DetectorConfig::Partitioner::class_based) {
        if (!working.has_labels())
            throw std::invalid_argument("fit_detector: class_based partitioning requires labels");
        pdet.partition_labels = sorted_distinct_labels(working);
        parts = class_partition(working);
    } else {
        pdet.cluster_model =
            kmeans_fit(working, cfg.partitions, derive_seed(seed, 0xc1a5), cfg.kmeans_restarts);
        const auto assignment = assign_all(*pdet.cluster_model, working);
        std::vector<std::vector<int>> rows(static_cast<size_t>(cfg.partitions));
        for (int i = 0; i < working.n; ++i)
            rows[static_cast<size_t>(assignment[static_cast<size_t>(i)])].push_back(i);
        for (int c = 0; c < cfg.partitions; ++c) {
            if (rows[static_cast<size_t>(c)].empty())
                throw std::invalid_argument("fit_detector: partition " + std::to_string(c) +
                                            " is empty");
            parts.push_back(working.subset(rows[static_cast<size_t>(c)]));
        }
    }
    pdet.partition_count = static_cast<int>(parts.size());

    // network shape: features -> hidden... -> task outputs
    int n_out = 1;
    TrainConfig train_cfg = cfg.train;
    if (train_cfg.task == TrainConfig::Task::classification) {
        if (!working.has_labels())
            throw std::invalid_argument("fit_detector: classification task requires labels");
        if (train_cfg.n_classes <= 0) {
            int max_label = 0;
            for (int v : working.labels) max_label = std::max(max_label, v);
            train_cfg.n_classes = max_label + 1;
        }
        n_out = train_cfg.n_classes;
    }
    std::vector<int> shape;
    shape.push_back(working.dim);
    shape.insert(shape.end(), cfg.hidden.begin(), cfg.hidden.end());
    shape.push_back(n_out);

    const KanNetwork untrained =
        init_network(shape, cfg.grid_spec(), derive_seed(seed, 0x1417), cfg.init_scale);

    for (size_t i = 0; i < parts.size(); ++i) {
        TrainConfig part_cfg = train_cfg;
        part_cfg.rng_seed = derive_seed(seed, 0x7000 + i);
        KanNetwork trained = train(untrained, parts[i], part_cfg);
        pdet.training.partition_sizes.push_back(parts[i].n);
        std::vector<int> all_rows(static_cast<size_t>(parts[i].n));
        for (int r = 0; r < parts[i].n; ++r) all_rows[static_cast<size_t>(r)] = r;
        pdet.training.final_losses.push_back(
            detail::batch_loss(trained, parts[i], all_rows, part_cfg));
        pdet.detectors.push_back(
            KanDetector{std::move(trained), untrained, cfg.scoring, cfg.include_residual});
    }
    return pdet;
}

double lambda_at_quantile(std::span<const double> scores, double quantile) {
    if (scores.empty()) throw std::invalid_argument("lambda_at_quantile: empty score list");
    if (!(quantile >= 0.0 && quantile <= 1.0))
        throw std::invalid_argument("lambda_at_quantile: quantile must be in [0, 1]");
    std::vector<double> sorted(scores.begin(), scores.end());
    std::sort(sorted.begin(), sorted.end());
    const double pos = quantile * static_cast<double>(sorted.size() - 1);
    const size_t lo = static_cast<size_t>(pos);
    const size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace kanood
