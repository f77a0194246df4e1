// kanood: fit detectors, score inputs, run benchmark sweeps, and emit
// plot-ready score curves. Config-driven; every run echoes its resolved
// configuration into the report so results stay reproducible.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kanood/baselines.hpp"
#include "kanood/dataset.hpp"
#include "kanood/detector.hpp"
#include "kanood/metrics.hpp"
#include "kanood/serialize.hpp"

namespace fs = std::filesystem;
using kanood::Json;

namespace {

void require_keys(const Json& j, const std::string& where,
                  const std::vector<std::string>& allowed) {
    for (const auto& [key, value] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw std::runtime_error("config: unknown key '" + key + "' in " + where);
    }
}

// ----------------------------------------------------------------------
// run configuration
// ----------------------------------------------------------------------

struct DatasetSpec {
    std::string generator;  // five_peaks | lshape | friedman, or empty for files
    int n = 2000;
    uint64_t seed = 1;
    double noise_sigma = 1.0;                 // friedman
    std::optional<double> threshold;          // friedman; overrides the quantile
    double threshold_quantile = 0.5;          // friedman; split at this target quantile
    double train_fraction = 0.5;              // friedman
    std::string train_path;
    std::string ind_test_path;
    std::map<std::string, std::string> ood_sets;
    std::map<std::string, std::string> ood_groups;  // set name -> near|far
    kanood::DelimitedSchema schema;
};

struct RunConfig {
    DatasetSpec dataset;
    kanood::DetectorConfig detector;
    std::vector<uint64_t> seeds{1};
    std::optional<double> lambda;
    std::vector<std::string> baselines;  // subset of {histogram, knn}
    std::string out_dir = ".";
    std::string bundle_name = "detector_bundle.json";
    std::string report_name = "report.json";
    std::string csv_name = "report.csv";
    Json resolved;  // full echo of the parsed config
};

kanood::DelimitedSchema schema_from_json(const Json& j) {
    kanood::DelimitedSchema schema;
    require_keys(j, "dataset.schema", {"delimiter", "has_header", "label_column", "target_column"});
    if (j.contains("delimiter")) {
        const auto d = j["delimiter"].get<std::string>();
        if (d.size() != 1) throw std::runtime_error("config: delimiter must be one character");
        schema.delimiter = d[0];
    }
    if (j.contains("has_header")) schema.has_header = j["has_header"].get<bool>();
    if (j.contains("label_column")) schema.label_column = j["label_column"].get<int>();
    if (j.contains("target_column")) schema.target_column = j["target_column"].get<int>();
    return schema;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    Json j;
    in >> j;
    require_keys(j, "top level", {"dataset", "detector", "seeds", "lambda", "baselines", "output"});

    RunConfig cfg;
    cfg.resolved = j;
    if (!j.contains("dataset")) throw std::runtime_error("config: missing 'dataset' section");

    const Json& d = j["dataset"];
    require_keys(d, "dataset",
                 {"generator", "n", "seed", "noise_sigma", "threshold", "threshold_quantile",
                  "train_fraction", "train_path", "ind_test_path", "ood_sets", "ood_groups",
                  "schema"});
    if (d.contains("generator")) cfg.dataset.generator = d["generator"].get<std::string>();
    if (d.contains("n")) cfg.dataset.n = d["n"].get<int>();
    if (d.contains("seed")) cfg.dataset.seed = d["seed"].get<uint64_t>();
    if (d.contains("noise_sigma")) cfg.dataset.noise_sigma = d["noise_sigma"].get<double>();
    if (d.contains("threshold")) cfg.dataset.threshold = d["threshold"].get<double>();
    if (d.contains("threshold_quantile"))
        cfg.dataset.threshold_quantile = d["threshold_quantile"].get<double>();
    if (d.contains("train_fraction")) cfg.dataset.train_fraction = d["train_fraction"].get<double>();
    if (d.contains("train_path")) cfg.dataset.train_path = d["train_path"].get<std::string>();
    if (d.contains("ind_test_path"))
        cfg.dataset.ind_test_path = d["ind_test_path"].get<std::string>();
    if (d.contains("ood_sets"))
        cfg.dataset.ood_sets = d["ood_sets"].get<std::map<std::string, std::string>>();
    if (d.contains("ood_groups")) {
        cfg.dataset.ood_groups = d["ood_groups"].get<std::map<std::string, std::string>>();
        for (const auto& [name, group] : cfg.dataset.ood_groups)
            if (group != "near" && group != "far")
                throw std::runtime_error("config: ood_groups values must be near|far, got '" +
                                         group + "' for set '" + name + "'");
    }
    if (d.contains("schema")) cfg.dataset.schema = schema_from_json(d["schema"]);
    if (cfg.dataset.generator.empty() && cfg.dataset.train_path.empty())
        throw std::runtime_error("config: dataset needs either 'generator' or 'train_path'");

    if (j.contains("detector"))
        cfg.detector = kanood::detector_config_from_user_json(j["detector"]);
    if (j.contains("seeds")) {
        cfg.seeds = j["seeds"].get<std::vector<uint64_t>>();
        if (cfg.seeds.empty()) throw std::runtime_error("config: seeds must not be empty");
    }
    if (j.contains("lambda")) cfg.lambda = j["lambda"].get<double>();
    if (j.contains("baselines")) {
        cfg.baselines = j["baselines"].get<std::vector<std::string>>();
        for (const auto& b : cfg.baselines)
            if (b != "histogram" && b != "knn")
                throw std::runtime_error("config: unknown baseline '" + b + "'");
    }
    if (j.contains("output")) {
        const Json& o = j["output"];
        require_keys(o, "output", {"dir", "bundle", "report", "csv"});
        if (o.contains("dir")) cfg.out_dir = o["dir"].get<std::string>();
        if (o.contains("bundle")) cfg.bundle_name = o["bundle"].get<std::string>();
        if (o.contains("report")) cfg.report_name = o["report"].get<std::string>();
        if (o.contains("csv")) cfg.csv_name = o["csv"].get<std::string>();
    }
    if (const char* env = std::getenv("KANOOD_OUT_DIR"); env && *env) cfg.out_dir = env;
    return cfg;
}

// ----------------------------------------------------------------------
// dataset assembly
// ----------------------------------------------------------------------

struct EvalData {
    kanood::LabeledDataset train;
    kanood::LabeledDataset ind_test;
    std::vector<std::pair<std::string, kanood::LabeledDataset>> ood_sets;
};

EvalData build_eval_data(const DatasetSpec& spec) {
    EvalData out;
    if (spec.generator == "five_peaks") {
        auto toy = kanood::gen_five_peaks(spec.n, spec.seed);
        std::vector<int> ind_rows, ood_rows;
        for (int i = 0; i < toy.test.n; ++i)
            (toy.test.ind_flag[static_cast<size_t>(i)] ? ind_rows : ood_rows).push_back(i);
        out.train = std::move(toy.train);
        out.ind_test = toy.test.subset(ind_rows);
        out.ood_sets.emplace_back("held_out_peaks", toy.test.subset(ood_rows));
    } else if (spec.generator == "lshape") {
        auto shape = kanood::gen_lshape(spec.n, spec.seed);
        out.train = std::move(shape.train);
        // held-out InD draw from the same distribution
        out.ind_test = kanood::gen_lshape(std::max(10, spec.n / 2), spec.seed + 1000).train;
        out.ood_sets.emplace_back("corner", std::move(shape.test_ood));
    } else if (spec.generator == "friedman") {
        auto data = kanood::gen_friedman(spec.n, spec.noise_sigma, spec.seed);
        double threshold;
        if (spec.threshold) {
            threshold = *spec.threshold;
        } else {
            if (!(spec.threshold_quantile > 0.0 && spec.threshold_quantile < 1.0))
                throw std::runtime_error("config: threshold_quantile must be in (0, 1)");
            auto sorted = data.targets;
            std::sort(sorted.begin(), sorted.end());
            threshold = sorted[static_cast<size_t>(sorted.size() * spec.threshold_quantile)];
        }
        auto [ind, ood] = kanood::friedman_ood_split(data, threshold);
        const int n_train = std::max(1, static_cast<int>(ind.n * spec.train_fraction));
        std::vector<int> train_rows, test_rows;
        for (int i = 0; i < ind.n; ++i)
            (i < n_train ? train_rows : test_rows).push_back(i);
        if (test_rows.empty())
            throw std::runtime_error("friedman recipe: train_fraction leaves no InD test rows");
        out.train = ind.subset(train_rows);
        out.ind_test = ind.subset(test_rows);
        out.ood_sets.emplace_back("high_response", std::move(ood));
    } else if (!spec.generator.empty()) {
        throw std::runtime_error("config: unknown generator '" + spec.generator +
                                 "' (expected five_peaks|lshape|friedman)");
    } else {
        out.train = kanood::load_delimited(spec.train_path, spec.schema);
        if (!spec.ind_test_path.empty())
            out.ind_test = kanood::load_delimited(spec.ind_test_path, spec.schema);
        for (const auto& [name, path] : spec.ood_sets)
            out.ood_sets.emplace_back(name, kanood::load_delimited(path, spec.schema));
    }
    return out;
}

kanood::LabeledDataset build_train_data(const DatasetSpec& spec) {
    return build_eval_data(spec).train;
}

// ----------------------------------------------------------------------
// shared output helpers
// ----------------------------------------------------------------------

std::string join_path(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

Json set_result_to_json(const kanood::EvalSetResult& r) {
    return Json{{"name", r.name},
                {"group", r.group},
                {"auroc_mean", r.auroc_mean},
                {"auroc_sd", r.auroc_sd},
                {"fpr95_mean", r.fpr95_mean},
                {"fpr95_sd", r.fpr95_sd},
                {"n_ind", r.n_ind},
                {"n_ood", r.n_ood},
                {"auroc_per_seed", r.auroc_per_seed},
                {"fpr95_per_seed", r.fpr95_per_seed}};
}

kanood::EvalSetResult summarize_set(const std::string& name, int n_ind, int n_ood,
                                    const std::vector<double>& auroc_per_seed,
                                    const std::vector<double>& fpr_per_seed) {
    kanood::EvalSetResult r;
    r.name = name;
    r.n_ind = n_ind;
    r.n_ood = n_ood;
    r.auroc_per_seed = auroc_per_seed;
    r.fpr95_per_seed = fpr_per_seed;
    auto mean_sd = [](const std::vector<double>& v) {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        var /= static_cast<double>(v.size());  // population SD over seeds
        return std::pair{mean, std::sqrt(var)};
    };
    std::tie(r.auroc_mean, r.auroc_sd) = mean_sd(auroc_per_seed);
    std::tie(r.fpr95_mean, r.fpr95_sd) = mean_sd(fpr_per_seed);
    return r;
}

// ----------------------------------------------------------------------
// subcommands
// ----------------------------------------------------------------------

int cmd_fit(const std::string& config_path, const std::string& bundle_override,
            std::optional<double> lambda_quantile) {
    const auto cfg = load_run_config(config_path);
    const auto train_data = build_train_data(cfg.dataset);

    const auto t0 = std::chrono::steady_clock::now();
    auto pdet = kanood::fit_detector(train_data, cfg.detector, cfg.seeds.front());
    const auto elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    // threshold helper: pin lambda at the requested quantile of the
    // training-sample scores and store it in the bundle
    if (lambda_quantile) {
        const auto train_scores = kanood::score_all(pdet, train_data);
        pdet.config.threshold = kanood::lambda_at_quantile(train_scores, *lambda_quantile);
    }

    const std::string bundle_path = bundle_override.empty()
                                        ? join_path(cfg.out_dir, cfg.bundle_name)
                                        : bundle_override;
    kanood::save_bundle(pdet, bundle_path);

    Json summary{{"bundle", bundle_path},
                 {"train_rows", train_data.n},
                 {"feature_dim", train_data.dim},
                 {"partitions", pdet.partition_count},
                 {"partition_sizes", pdet.training.partition_sizes},
                 {"final_losses", pdet.training.final_losses},
                 {"wall_time_seconds", elapsed},
                 {"seed", cfg.seeds.front()}};
    if (pdet.config.threshold) summary["lambda"] = *pdet.config.threshold;
    std::cout << summary.dump(2) << "\n";
    return 0;
}

int cmd_score(const std::string& bundle_path, const std::string& input_path,
              const std::string& out_path, std::optional<double> lambda, char delimiter,
              bool has_header) {
    const auto pdet = kanood::load_bundle(bundle_path);
    if (!lambda && pdet.config.threshold) lambda = pdet.config.threshold;
    kanood::DelimitedSchema schema;
    schema.delimiter = delimiter;
    schema.has_header = has_header;
    const auto data = kanood::load_delimited(input_path, schema);

    const int expected = pdet.detectors.front().trained.input_dim();
    if (data.dim != expected)
        throw std::runtime_error("input has " + std::to_string(data.dim) +
                                 " feature columns, bundle expects " + std::to_string(expected));

    std::ostringstream out;
    out.precision(17);
    out << "score";
    if (lambda) out << ",verdict";
    out << "\n";
    for (int i = 0; i < data.n; ++i) {
        const double s = kanood::partitioned_score(pdet, data.row(i));
        out << s;
        if (lambda)
            out << ','
                << (kanood::classify_score(s, *lambda) == kanood::Verdict::InD ? "InD" : "OOD");
        out << "\n";
    }
    kanood::atomic_write_text(out_path, out.str());
    std::cout << "wrote " << data.n << " scores to " << out_path << "\n";
    return 0;
}

int cmd_eval(const std::string& config_path, const std::string& seeds_override) {
    auto cfg = load_run_config(config_path);
    if (!seeds_override.empty()) {
        cfg.seeds.clear();
        std::istringstream ss(seeds_override);
        std::string tok;
        while (std::getline(ss, tok, ',')) cfg.seeds.push_back(std::stoull(tok));
        if (cfg.seeds.empty()) throw std::runtime_error("--seeds produced an empty list");
    }

    const auto data = build_eval_data(cfg.dataset);
    if (data.ind_test.n == 0) throw std::runtime_error("eval: no InD test data");
    if (data.ood_sets.empty()) throw std::runtime_error("eval: no OOD sets");

    std::vector<std::string> errors;

    // per seed, per set AUROC/FPR for the detector
    std::map<std::string, std::vector<double>> auroc_per_set, fpr_per_set;
    for (const uint64_t seed : cfg.seeds) {
        const auto pdet = kanood::fit_detector(data.train, cfg.detector, seed);
        const auto ind_scores = kanood::score_all(pdet, data.ind_test);
        for (const auto& [name, ood] : data.ood_sets) {
            try {
                const auto ood_scores = kanood::score_all(pdet, ood);
                auroc_per_set[name].push_back(kanood::auroc(ind_scores, ood_scores) * 100.0);
                fpr_per_set[name].push_back(kanood::fpr_at_95(ind_scores, ood_scores) * 100.0);
            } catch (const std::exception& e) {
                errors.push_back("set '" + name + "' seed " + std::to_string(seed) + ": " +
                                 e.what());
            }
        }
    }

    std::vector<kanood::EvalSetResult> per_set;
    for (const auto& [name, ood] : data.ood_sets) {
        if (auroc_per_set[name].empty()) continue;
        auto row = summarize_set(name, data.ind_test.n, ood.n, auroc_per_set[name],
                                 fpr_per_set[name]);
        if (auto it = cfg.dataset.ood_groups.find(name); it != cfg.dataset.ood_groups.end())
            row.group = it->second;
        per_set.push_back(std::move(row));
    }
    if (per_set.empty()) throw std::runtime_error("eval: every OOD set failed");
    const auto report = kanood::finalize_report(per_set);

    // optional baselines, fitted on the same training features
    Json baselines_json = Json::object();
    for (const auto& baseline : cfg.baselines) {
        Json rows = Json::array();
        // baselines see the same normalization the detector saw
        kanood::LabeledDataset train = data.train;
        std::optional<kanood::HistogramNormalizer> norm;
        if (cfg.detector.use_normalizer) {
            norm = kanood::fit_normalizer(data.train, cfg.detector.normalizer_bins,
                                          cfg.detector.domain_min, cfg.detector.domain_max);
            train = kanood::transform_dataset(*norm, data.train);
        }
        auto apply_norm = [&](const kanood::LabeledDataset& d) {
            return norm ? kanood::transform_dataset(*norm, d) : d;
        };
        const auto ind = apply_norm(data.ind_test);
        if (baseline == "histogram") {
            const auto det = kanood::histogram_fit(train, cfg.detector.grid_size,
                                                   cfg.detector.domain_min,
                                                   cfg.detector.domain_max, cfg.detector.scoring);
            for (const auto& [name, ood_raw] : data.ood_sets) {
                const auto ood = apply_norm(ood_raw);
                std::vector<double> ind_s(static_cast<size_t>(ind.n)), ood_s(static_cast<size_t>(ood.n));
                for (int i = 0; i < ind.n; ++i) ind_s[static_cast<size_t>(i)] = kanood::histogram_score(det, ind.row(i));
                for (int i = 0; i < ood.n; ++i) ood_s[static_cast<size_t>(i)] = kanood::histogram_score(det, ood.row(i));
                rows.push_back(Json{{"name", name},
                                    {"auroc", kanood::auroc(ind_s, ood_s) * 100.0},
                                    {"fpr95", kanood::fpr_at_95(ind_s, ood_s) * 100.0}});
            }
        } else if (baseline == "knn") {
            const auto det = kanood::knn_fit(train, kanood::default_knn_k(train.n));
            for (const auto& [name, ood_raw] : data.ood_sets) {
                const auto ood = apply_norm(ood_raw);
                std::vector<double> ind_s(static_cast<size_t>(ind.n)), ood_s(static_cast<size_t>(ood.n));
                for (int i = 0; i < ind.n; ++i) ind_s[static_cast<size_t>(i)] = kanood::knn_score(det, ind.row(i));
                for (int i = 0; i < ood.n; ++i) ood_s[static_cast<size_t>(i)] = kanood::knn_score(det, ood.row(i));
                rows.push_back(Json{{"name", name},
                                    {"auroc", kanood::auroc(ind_s, ood_s) * 100.0},
                                    {"fpr95", kanood::fpr_at_95(ind_s, ood_s) * 100.0}});
            }
        }
        baselines_json[baseline] = std::move(rows);
    }

    Json results{{"per_set", Json::array()},
                 {"mu_overall", report.mu_overall},
                 {"sigma_overall", report.sigma_overall}};
    for (const auto& r : report.per_set) results["per_set"].push_back(set_result_to_json(r));
    const bool has_groups = std::any_of(report.per_set.begin(), report.per_set.end(),
                                        [](const auto& r) { return !r.group.empty(); });
    if (has_groups) {
        results["near_mean"] = report.near_mean;
        results["far_mean"] = report.far_mean;
    }
    if (report.has_seed_sweep) {
        Json sweep{{"mu_b", report.sweep.mu_b},
                   {"sigma_b", report.sweep.sigma_b},
                   {"sigma_d", report.sweep.sigma_d},
                   {"per_seed", report.per_seed_stats}};
        results["seed_sweep"] = std::move(sweep);
    }
    if (!baselines_json.empty()) results["baselines"] = std::move(baselines_json);
    if (!errors.empty()) results["errors"] = errors;

    Json full{{"resolved_config", cfg.resolved},
              {"seeds", cfg.seeds},
              {"results", std::move(results)}};
    const auto report_path = join_path(cfg.out_dir, cfg.report_name);
    kanood::atomic_write_text(report_path, full.dump(2) + "\n");

    std::ostringstream csv;
    csv.precision(10);
    csv << "set,group,auroc_mean,auroc_sd,fpr95_mean,fpr95_sd,n_ind,n_ood\n";
    for (const auto& r : report.per_set)
        csv << r.name << ',' << r.group << ',' << r.auroc_mean << ',' << r.auroc_sd << ','
            << r.fpr95_mean << ',' << r.fpr95_sd << ',' << r.n_ind << ',' << r.n_ood << "\n";
    csv << "overall,," << report.mu_overall << ',' << report.sigma_overall << ",,,,\n";
    const auto csv_path = join_path(cfg.out_dir, cfg.csv_name);
    kanood::atomic_write_text(csv_path, csv.str());

    std::cout << "wrote " << report_path << " and " << csv_path << "\n";
    for (const auto& e : errors) std::cerr << "warning: " << e << "\n";
    return 0;
}

int cmd_curve(const std::string& bundle_path, const std::string& out_path, double min1,
              double max1, int points1, double min2, double max2, int points2) {
    const auto pdet = kanood::load_bundle(bundle_path);
    const int dim = pdet.detectors.front().trained.input_dim();
    if (dim > 2)
        throw std::runtime_error("curve supports 1- or 2-dimensional inputs; this bundle expects " +
                                 std::to_string(dim) +
                                 " features. Project or slice the input space instead.");
    if (points1 < 2) throw std::runtime_error("--points must be >= 2");

    std::ostringstream out;
    out.precision(17);
    if (dim == 1) {
        out << "x,score\n";
        for (int i = 0; i < points1; ++i) {
            const double x = min1 + (max1 - min1) * i / (points1 - 1);
            out << x << ',' << kanood::partitioned_score(pdet, {&x, 1}) << "\n";
        }
    } else {
        if (points2 < 2) throw std::runtime_error("--points2 must be >= 2 for 2D bundles");
        out << "x1,x2,score\n";
        for (int i = 0; i < points1; ++i) {
            for (int j = 0; j < points2; ++j) {
                const double xy[2] = {min1 + (max1 - min1) * i / (points1 - 1),
                                      min2 + (max2 - min2) * j / (points2 - 1)};
                out << xy[0] << ',' << xy[1] << ',' << kanood::partitioned_score(pdet, {xy, 2})
                    << "\n";
            }
        }
    }
    kanood::atomic_write_text(out_path, out.str());
    std::cout << "wrote curve to " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"KAN-based out-of-distribution detection toolkit"};
    app.require_subcommand(1);

    std::string config_path, bundle_path, input_path, out_path, seeds_list;
    std::optional<double> lambda, lambda_quantile;
    char delimiter = ',';
    bool has_header = false;
    double min1 = -1.0, max1 = 1.0, min2 = -1.0, max2 = 1.0;
    int points1 = 1000, points2 = 0;

    auto* fit = app.add_subcommand("fit", "fit a detector bundle from a run config");
    fit->add_option("--config", config_path, "run config JSON")->required();
    fit->add_option("--out", out_path, "bundle output path (overrides config)");
    fit->add_option("--lambda-quantile", lambda_quantile,
                    "store lambda at this quantile of the training scores");

    auto* score = app.add_subcommand("score", "score delimited feature rows with a bundle");
    score->add_option("--bundle", bundle_path, "detector bundle")->required();
    score->add_option("--input", input_path, "delimited feature file")->required();
    score->add_option("--out", out_path, "output CSV path")->required();
    score->add_option("--lambda", lambda, "threshold; adds an InD/OOD verdict column");
    score->add_option("--delimiter", delimiter, "input delimiter (default ,)");
    score->add_flag("--has-header", has_header, "skip the first input line");

    auto* eval = app.add_subcommand("eval", "run a benchmark recipe and write reports");
    eval->add_option("--config", config_path, "run config JSON")->required();
    eval->add_option("--seeds", seeds_list, "comma-separated seed list (overrides config)");

    auto* curve = app.add_subcommand("curve", "emit a dense (x, S(x)) grid for plotting");
    curve->add_option("--bundle", bundle_path, "detector bundle")->required();
    curve->add_option("--out", out_path, "output CSV path")->required();
    curve->add_option("--min", min1, "sweep minimum (default -1)");
    curve->add_option("--max", max1, "sweep maximum (default 1)");
    curve->add_option("--points", points1, "sample count (default 1000)");
    curve->add_option("--min2", min2, "second-axis minimum (2D bundles)");
    curve->add_option("--max2", max2, "second-axis maximum (2D bundles)");
    curve->add_option("--points2", points2, "second-axis sample count (2D bundles)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fit->parsed()) return cmd_fit(config_path, out_path, lambda_quantile);
        if (score->parsed())
            return cmd_score(bundle_path, input_path, out_path, lambda, delimiter, has_header);
        if (eval->parsed()) return cmd_eval(config_path, seeds_list);
        if (curve->parsed())
            return cmd_curve(bundle_path, out_path, min1, max1, points1, min2, max2,
                             points2 > 0 ? points2 : points1);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
