// Acceptance suite: end-to-end checks of the detector pipeline on the
// synthetic benchmarks, printing one PASS/FAIL line per criterion. Exit
// status is nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <vector>

#include "kanood/baselines.hpp"
#include "kanood/dataset.hpp"
#include "kanood/detector.hpp"
#include "kanood/metrics.hpp"
#include "kanood/network.hpp"
#include "kanood/rng.hpp"
#include "kanood/serialize.hpp"
#include "kanood/spline.hpp"

using namespace kanood;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail, double seconds) {
    std::printf("[%s] criterion %d: %s (%.1fs)\n", pass ? "PASS" : "FAIL", criterion,
                detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

std::string fmt(const char* format, ...) {
    char buffer[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buffer, sizeof(buffer), format, args);
    va_end(args);
    return buffer;
}

// ----------------------------------------------------------------------
// shared five-peak split helpers
// ----------------------------------------------------------------------

struct Split {
    LabeledDataset train, ind, ood;
};

Split five_peak_split(int n, uint64_t seed) {
    auto toy = gen_five_peaks(n, seed);
    std::vector<int> ind_rows, ood_rows;
    for (int i = 0; i < toy.test.n; ++i)
        (toy.test.ind_flag[static_cast<size_t>(i)] ? ind_rows : ood_rows).push_back(i);
    return {std::move(toy.train), toy.test.subset(ind_rows), toy.test.subset(ood_rows)};
}

struct FriedmanSplit {
    LabeledDataset train, ind, ood;
    double threshold = 0.0;
};

// Split protocol for the partition ablation: low-response rows are InD (the
// lowest quintile of the target), 60% of them train the detectors.
FriedmanSplit friedman_split() {
    const auto data = gen_friedman(5000, 7.0, 100);
    auto sorted = data.targets;
    std::sort(sorted.begin(), sorted.end());
    const double threshold = sorted[sorted.size() / 5];
    auto [ind, ood] = friedman_ood_split(data, threshold);
    std::vector<int> train_rows, test_rows;
    const int n_train = ind.n * 6 / 10;
    for (int i = 0; i < ind.n; ++i) (i < n_train ? train_rows : test_rows).push_back(i);
    return {ind.subset(train_rows), ind.subset(test_rows), std::move(ood), threshold};
}

DetectorConfig friedman_config(int partitions) {
    DetectorConfig cfg;
    cfg.partitions = partitions;
    cfg.kmeans_restarts = 8;
    cfg.grid_size = 30;
    cfg.use_normalizer = true;
    cfg.normalizer_bins = 80;
    cfg.scoring = ScoringFn::median;
    cfg.agg = AggFn::max;
    cfg.train.task = TrainConfig::Task::regression_to_constant;
    cfg.train.constant = 1.0;
    cfg.train.epochs = 1;
    cfg.train.batch_size = 64;
    return cfg;
}

double friedman_auroc(const FriedmanSplit& split, int partitions, uint64_t seed) {
    const auto pdet = fit_detector(split.train, friedman_config(partitions), seed);
    return auroc(score_all(pdet, split.ind), score_all(pdet, split.ood)) * 100.0;
}

// ----------------------------------------------------------------------
// criteria
// ----------------------------------------------------------------------

void criterion_1_local_plasticity() {
    Timer timer;
    const auto toy = gen_five_peaks(1000, 11);

    TrainConfig cfg;
    cfg.task = TrainConfig::Task::regression;
    cfg.weight_decay = 0.0;
    cfg.epochs = 1;
    cfg.batch_size = 32;
    cfg.rng_seed = 3;

    const GridSpec grid_spec{200, 3, -1.0, 1.0};
    const auto before = init_network({1, 1}, grid_spec, 42);
    const auto after = train(before, toy.train, cfg);

    const auto& grid = before.layers[0].grid;
    std::vector<bool> touched(static_cast<size_t>(grid.basis_count()), false);
    for (int i = 0; i < toy.train.n; ++i) {
        const auto basis = basis_eval(grid, toy.train.features[static_cast<size_t>(i)]);
        for (size_t j = 0; j < basis.size(); ++j)
            if (basis[j] != 0.0) touched[j] = true;
    }

    int untouched = 0, untouched_identical = 0, touched_count = 0, touched_moved = 0;
    for (int j = 0; j < grid.basis_count(); ++j) {
        const double b = before.layers[0].coeff(0, 0, j);
        const double a = after.layers[0].coeff(0, 0, j);
        if (!touched[static_cast<size_t>(j)]) {
            ++untouched;
            if (a == b) ++untouched_identical;  // bit-identical
        } else {
            ++touched_count;
            if (a != b) ++touched_moved;
        }
    }

    const bool pass = untouched > 50 && untouched_identical == untouched && touched_moved > 0 &&
                      timer.seconds() < 5.0;
    report(1, pass,
           fmt("local plasticity: %d/%d untouched coefficients bit-identical, %d/%d touched "
               "coefficients moved",
               untouched_identical, untouched, touched_moved, touched_count),
           timer.seconds());
}

void criterion_2_five_peak_figure() {
    Timer timer;
    const auto split = five_peak_split(2000, 7);
    FivePeaksParams params;  // generator defaults

    DetectorConfig cfg;
    cfg.partitions = 1;
    cfg.grid_size = 200;
    cfg.use_normalizer = false;
    cfg.scoring = ScoringFn::median;
    cfg.train.task = TrainConfig::Task::regression;
    cfg.train.epochs = 1;
    cfg.train.batch_size = 32;
    const auto pdet = fit_detector(split.train, cfg, 23);

    const double lambda = 1e-3;
    bool banding = true;
    // both training peaks marked InD across their draw regions
    for (int peak = 0; peak < 2; ++peak)
        for (double t = -1.5; t <= 1.5; t += 0.25) {
            const double x = params.centers[static_cast<size_t>(peak)] + t * params.width;
            if (classify(pdet, {&x, 1}, lambda) != Verdict::InD) banding = false;
        }
    // the three held-out peaks marked OOD
    for (int peak = 2; peak < 5; ++peak)
        for (double t = -2.0; t <= 2.0; t += 0.25) {
            const double x = params.centers[static_cast<size_t>(peak)] + t * params.width;
            if (classify(pdet, {&x, 1}, lambda) != Verdict::OOD) banding = false;
        }

    const double a = auroc(score_all(pdet, split.ind), score_all(pdet, split.ood));
    const bool pass = banding && a >= 0.95 && timer.seconds() < 30.0;
    report(2, pass,
           fmt("five-peak toy: lambda banding %s, AUROC %.4f (>= 0.95)",
               banding ? "correct" : "wrong", a),
           timer.seconds());
}

void criterion_3_lshape() {
    Timer timer;
    const auto shape = gen_lshape(2000, 11);
    const auto ind_test = gen_lshape(1000, 1011).train;

    auto make_cfg = [](int P) {
        DetectorConfig cfg;
        cfg.partitions = P;
        cfg.grid_size = 30;
        cfg.domain_min = 0.0;
        cfg.domain_max = 1.0;
        cfg.use_normalizer = false;
        cfg.scoring = ScoringFn::median;
        cfg.agg = AggFn::max;
        cfg.train.task = TrainConfig::Task::regression_to_constant;
        cfg.train.constant = 1.0;
        cfg.train.epochs = 1;
        cfg.train.batch_size = 0;  // full batch
        return cfg;
    };

    const auto single = fit_detector(shape.train, make_cfg(1), 1);
    const double auroc_p1 =
        auroc(score_all(single, ind_test), score_all(single, shape.test_ood));

    const auto pair = fit_detector(shape.train, make_cfg(2), 1);
    const auto ood_scores = score_all(pair, shape.test_ood);
    const double auroc_p2 = auroc(score_all(pair, ind_test), ood_scores);

    const auto train_scores = score_all(pair, shape.train);
    const double p5 = lambda_at_quantile(train_scores, 0.05);
    int corners_below = 0;
    for (double s : ood_scores)
        if (s < p5) ++corners_below;

    const bool pass = auroc_p1 < 0.8 && auroc_p2 >= 0.95 &&
                      corners_below == static_cast<int>(ood_scores.size()) &&
                      timer.seconds() < 60.0;
    report(3, pass,
           fmt("L-shape: P=1 AUROC %.4f (< 0.8), P=2 AUROC %.4f (>= 0.95), corner points below "
               "5th-percentile train score %d/%zu",
               auroc_p1, auroc_p2, corners_below, ood_scores.size()),
           timer.seconds());
}

void criterion_4_friedman_partitions() {
    Timer timer;
    const auto split = friedman_split();
    const double p1 = friedman_auroc(split, 1, 6);
    const double p4 = friedman_auroc(split, 4, 6);
    const bool pass =
        p1 >= 47.0 && p1 <= 58.0 && p4 >= 64.0 && (p4 - p1) >= 8.0 && timer.seconds() < 300.0;
    report(4, pass,
           fmt("friedman partitions: P=1 AUROC %.2f (in [47, 58]), P=4 AUROC %.2f (>= 64), "
               "gain %.2f (>= 8)",
               p1, p4, p4 - p1),
           timer.seconds());
}

void criterion_5_baseline_ordering() {
    Timer timer;
    const auto split = friedman_split();

    double kan_sum = 0.0;
    const std::vector<uint64_t> seeds = {2, 3, 4, 5, 6};
    for (uint64_t seed : seeds) kan_sum += friedman_auroc(split, 4, seed);
    const double kan = kan_sum / static_cast<double>(seeds.size());

    // baselines see the same normalized features the detector saw
    const auto cfg = friedman_config(4);
    const auto norm =
        fit_normalizer(split.train, cfg.normalizer_bins, cfg.domain_min, cfg.domain_max);
    const auto train = transform_dataset(norm, split.train);
    const auto ind = transform_dataset(norm, split.ind);
    const auto ood = transform_dataset(norm, split.ood);

    const auto hist = histogram_fit(train, cfg.grid_size, cfg.domain_min, cfg.domain_max,
                                    cfg.scoring);
    std::vector<double> hist_ind(static_cast<size_t>(ind.n)), hist_ood(static_cast<size_t>(ood.n));
    for (int i = 0; i < ind.n; ++i) hist_ind[static_cast<size_t>(i)] = histogram_score(hist, ind.row(i));
    for (int i = 0; i < ood.n; ++i) hist_ood[static_cast<size_t>(i)] = histogram_score(hist, ood.row(i));
    const double hist_auroc = auroc(hist_ind, hist_ood) * 100.0;

    const auto knn = knn_fit(train, default_knn_k(train.n));
    std::vector<double> knn_ind(static_cast<size_t>(ind.n)), knn_ood(static_cast<size_t>(ood.n));
    for (int i = 0; i < ind.n; ++i) knn_ind[static_cast<size_t>(i)] = knn_score(knn, ind.row(i));
    for (int i = 0; i < ood.n; ++i) knn_ood[static_cast<size_t>(i)] = knn_score(knn, ood.row(i));
    const double knn_auroc = auroc(knn_ind, knn_ood) * 100.0;

    const bool pass = kan >= hist_auroc && kan >= knn_auroc - 1.0 && timer.seconds() < 600.0;
    report(5, pass,
           fmt("baseline ordering (5-seed mean): KAN %.2f >= histogram %.2f and >= KNN %.2f - 1",
               kan, hist_auroc, knn_auroc),
           timer.seconds());
}

void criterion_6_scoring_direction() {
    Timer timer;
    const auto split = five_peak_split(2000, 7);

    DetectorConfig cfg;
    cfg.partitions = 1;
    cfg.grid_size = 50;
    cfg.use_normalizer = false;
    cfg.hidden = {8};
    cfg.train.task = TrainConfig::Task::regression;
    cfg.train.epochs = 1;
    cfg.train.batch_size = 32;
    auto pdet = fit_detector(split.train, cfg, 1);

    // adversarial pre-match: copy the most-changed trained coefficient back
    // into the untrained network
    auto& det = pdet.detectors[0];
    size_t match_layer = 0, match_index = 0;
    double largest = -1.0;
    for (size_t l = 0; l < det.trained.layers.size(); ++l)
        for (size_t i = 0; i < det.trained.layers[l].coeffs.size(); ++i) {
            const double d =
                std::abs(det.trained.layers[l].coeffs[i] - det.untrained.layers[l].coeffs[i]);
            if (d > largest) {
                largest = d;
                match_layer = l;
                match_index = i;
            }
        }
    det.untrained.layers[match_layer].coeffs[match_index] =
        det.trained.layers[match_layer].coeffs[match_index];

    double scores[4] = {0, 0, 0, 0};
    const Reduction fns[4] = {Reduction::min, Reduction::mean, Reduction::median, Reduction::max};
    for (int f = 0; f < 4; ++f) {
        for (auto& d : pdet.detectors) d.scoring = fns[f];
        scores[f] = auroc(score_all(pdet, split.ind), score_all(pdet, split.ood));
    }
    const double min_a = scores[0], mean_a = scores[1], median_a = scores[2], max_a = scores[3];
    const bool max_lowest = max_a < min_a && max_a < mean_a && max_a < median_a;
    const bool pass = median_a >= mean_a && max_lowest && timer.seconds() < 60.0;
    report(6, pass,
           fmt("scoring direction: median %.4f >= mean %.4f; max %.4f lowest of {min %.4f, "
               "mean, median}",
               median_a, mean_a, max_a, min_a),
           timer.seconds());
}

void criterion_7_metric_oracles() {
    Timer timer;
    Rng rng(2024);
    bool auroc_exact = true;
    bool fpr_exact = true;

    for (int rep = 0; rep < 200; ++rep) {
        const int n1 = 5 + static_cast<int>(rng.next_below(60));
        const int n0 = 5 + static_cast<int>(rng.next_below(60));
        std::vector<double> ind(static_cast<size_t>(n1)), ood(static_cast<size_t>(n0));
        for (double& v : ind) v = rng.normal(0.4, 1.0);
        for (double& v : ood) v = rng.normal(0.0, 1.0);
        for (int i = 0; i < 3 && i < n1 && i < n0; ++i) ood[static_cast<size_t>(i)] = ind[static_cast<size_t>(i)];

        // O(n^2) pairwise-count oracle
        double wins = 0.0;
        for (double a : ind)
            for (double b : ood) wins += a > b ? 1.0 : (a == b ? 0.5 : 0.0);
        if (auroc(ind, ood) != wins / (static_cast<double>(n1) * n0)) auroc_exact = false;

        // exhaustive threshold scan
        double best = 1.0;
        std::vector<double> candidates = ind;
        candidates.insert(candidates.end(), ood.begin(), ood.end());
        for (double t : candidates) {
            int tp = 0;
            for (double s : ind)
                if (s >= t) ++tp;
            if (static_cast<double>(tp) / n1 < 0.95) continue;
            int fp = 0;
            for (double s : ood)
                if (s >= t) ++fp;
            best = std::min(best, static_cast<double>(fp) / n0);
        }
        if (fpr_at_95(ind, ood) != best) fpr_exact = false;
    }

    const auto near = overall_average({{90.06, 0.47}, {91.92, 0.52}});
    const bool near_ok = std::abs(near.first - 90.99) <= 0.01;

    const auto sweep = seed_sweep_stats(
        {{94.12, 0.59}, {94.02, 0.58}, {94.11, 0.52}, {94.17, 0.57}, {94.06, 0.39}});
    const bool sweep_ok = std::abs(sweep.sigma_b - 0.53) <= 0.01 &&
                          std::abs(sweep.sigma_d - 0.05) <= 0.01 &&
                          std::abs(sweep.mu_b - 94.10) <= 0.01;

    const bool pass = auroc_exact && fpr_exact && near_ok && sweep_ok && timer.seconds() < 10.0;
    report(7, pass,
           fmt("metric oracles: AUROC exact %s, FPR@95 exact %s, near-average %.4f (90.99 +- "
               "0.01), sweep sigma_b %.4f sigma_d %.4f mu_b %.2f",
               auroc_exact ? "yes" : "no", fpr_exact ? "yes" : "no", near.first, sweep.sigma_b,
               sweep.sigma_d, sweep.mu_b),
           timer.seconds());
}

void criterion_8_numerical_core() {
    Timer timer;

    // partition of unity
    bool pou = true;
    const SplineGrid grid(-1.0, 1.0, 37, 3);
    for (int i = 0; i < 1000; ++i) {
        const double x = -1.0 + 2.0 * i / 999.0;
        const auto basis = basis_eval(grid, x);
        double sum = 0.0;
        for (double b : basis) sum += b;
        if (std::abs(sum - 1.0) >= 1e-12) pou = false;
    }

    // analytic vs finite-difference gradients, both loss types
    bool grads_ok = true;
    {
        LabeledDataset data;
        data.dim = 2;
        Rng rng(5);
        std::vector<double> row(2);
        for (int i = 0; i < 8; ++i) {
            for (double& v : row) v = rng.uniform(-1.0, 1.0);
            data.push_row(row);
            data.targets.push_back(rng.uniform(-1.0, 1.0));
            data.labels.push_back(static_cast<int>(rng.next_below(2)));
        }
        std::vector<int> rows(8);
        std::iota(rows.begin(), rows.end(), 0);

        for (int task = 0; task < 2; ++task) {
            TrainConfig cfg;
            cfg.task = task == 0 ? TrainConfig::Task::regression
                                 : TrainConfig::Task::classification;
            cfg.n_classes = 2;
            auto net = init_network({2, 2}, {5, 3, -1.0, 1.0}, 77);
            const auto grads = detail::loss_and_gradients(net, data, rows, cfg);
            const double h = 1e-6;
            for (size_t i = 0; i < net.layers[0].coeffs.size(); ++i) {
                const double saved = net.layers[0].coeffs[i];
                net.layers[0].coeffs[i] = saved + h;
                const double up = detail::batch_loss(net, data, rows, cfg);
                net.layers[0].coeffs[i] = saved - h;
                const double down = detail::batch_loss(net, data, rows, cfg);
                net.layers[0].coeffs[i] = saved;
                const double fd = (up - down) / (2 * h);
                const double scale =
                    std::max({std::abs(fd), std::abs(grads.coeff_grads[0][i]), 1e-3});
                if (std::abs(grads.coeff_grads[0][i] - fd) / scale >= 1e-4) grads_ok = false;
            }
        }
    }

    // response-difference route bounded by the coefficient-difference route
    bool bound_ok = true;
    {
        auto untrained = init_network({1, 1}, {20, 3, -1.0, 1.0}, 9);
        auto trained = clone_weights(untrained);
        Rng rng(10);
        for (double& c : trained.layers[0].coeffs) c += rng.normal(0.0, 0.3);
        const KanDetector det{trained, untrained};
        for (int rep = 0; rep < 200; ++rep) {
            const double x = rng.uniform(-1.0, 1.0);
            const auto direct = delta_matrix(det, {&x, 1});
            const auto bound = delta_coeff_bound(det, {&x, 1});
            if (direct[0][0] > bound[0][0] + 1e-10) bound_ok = false;
        }
    }

    // zero delta for identical networks
    bool zero_ok = true;
    {
        const auto net = init_network({3, 2}, {15, 3, -1.0, 1.0}, 13);
        const KanDetector det{clone_weights(net), net};
        Rng rng(14);
        std::vector<double> x(3);
        for (int rep = 0; rep < 100; ++rep) {
            for (double& v : x) v = rng.uniform(-1.5, 1.5);
            for (const auto& layer : delta_matrix(det, x))
                for (double d : layer)
                    if (d != 0.0) zero_ok = false;
        }
    }

    const bool pass = pou && grads_ok && bound_ok && zero_ok && timer.seconds() < 60.0;
    report(8, pass,
           fmt("numerical core: partition of unity %s, gradients %s, delta bound %s, zero-delta "
               "identity %s",
               pou ? "ok" : "bad", grads_ok ? "ok" : "bad", bound_ok ? "ok" : "bad",
               zero_ok ? "ok" : "bad"),
           timer.seconds());
}

void criterion_9_determinism_serialization() {
    Timer timer;
    const auto split = friedman_split();
    const auto cfg = friedman_config(4);

    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path();
    const auto path_a = (dir / "kanood_acceptance_a.json").string();
    const auto path_b = (dir / "kanood_acceptance_b.json").string();

    const auto pdet = fit_detector(split.train, cfg, 6);
    save_bundle(pdet, path_a);
    const auto loaded = load_bundle(path_a);

    bool scores_identical = true;
    const auto direct = score_all(pdet, split.ind);
    const auto reloaded = score_all(loaded, split.ind);
    for (size_t i = 0; i < direct.size(); ++i)
        if (direct[i] != reloaded[i]) scores_identical = false;

    const auto refit = fit_detector(split.train, cfg, 6);
    save_bundle(refit, path_b);
    auto read_bytes = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    };
    const bool bytes_identical = read_bytes(path_a) == read_bytes(path_b);
    fs::remove(path_a);
    fs::remove(path_b);

    const bool pass = scores_identical && bytes_identical && timer.seconds() < 30.0;
    report(9, pass,
           fmt("determinism: save/load scores identical %s, refit bundle byte-identical %s",
               scores_identical ? "yes" : "no", bytes_identical ? "yes" : "no"),
           timer.seconds());
}

}  // namespace

int main() {
    criterion_1_local_plasticity();
    criterion_2_five_peak_figure();
    criterion_3_lshape();
    criterion_4_friedman_partitions();
    criterion_5_baseline_ordering();
    criterion_6_scoring_direction();
    criterion_7_metric_oracles();
    criterion_8_numerical_core();
    criterion_9_determinism_serialization();

    if (g_failures == 0) {
        std::printf("all 9 criteria passed\n");
        return 0;
    }
    std::printf("%d criteria failed\n", g_failures);
    return 1;
}
