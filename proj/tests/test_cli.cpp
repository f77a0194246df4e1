#include <doctest.h>

#include <stdexcept>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "kanood/dataset.hpp"
#include "kanood/detector.hpp"
#include "kanood/serialize.hpp"

using namespace kanood;
namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    const char* p = std::getenv("KANOOD_CLI");
    REQUIRE_MESSAGE(p != nullptr, "KANOOD_CLI must point at the CLI binary");
    return p;
}

int run(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
    return std::system(cmd.c_str());
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("kanood_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(reinterpret_cast<uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string five_peaks_config(const TempDir& dir, const std::string& bundle) {
    Json cfg{
        {"dataset", Json{{"generator", "five_peaks"}, {"n", 400}, {"seed", 7}}},
        {"detector",
         Json{{"partitions", 1},
              {"grid_size", 100},
              {"use_normalizer", false},
              {"train", Json{{"task", "regression"}, {"epochs", 1}, {"batch_size", 32}}}}},
        {"seeds", Json::array({11})},
        {"output", Json{{"dir", dir.path.string()}, {"bundle", bundle}}}};
    const auto path = dir.file("config.json");
    write_file(path, cfg.dump(2));
    return path;
}

}  // namespace

TEST_CASE("fit: writes a loadable bundle, deterministic across runs") {
    TempDir dir;
    const auto cfg = five_peaks_config(dir, "a.json");
    REQUIRE(run("fit --config " + cfg) == 0);
    const auto bundle_a = dir.file("a.json");
    REQUIRE(fs::exists(bundle_a));

    const auto pdet = load_bundle(bundle_a);
    CHECK(pdet.partition_count == 1);

    // second fit with the same config and seed is byte-identical
    REQUIRE(run("fit --config " + cfg + " --out " + dir.file("b.json")) == 0);
    CHECK(read_file(bundle_a) == read_file(dir.file("b.json")));
}

TEST_CASE("fit: invalid configs are rejected with nonzero exit") {
    TempDir dir;
    const auto bad = dir.file("bad.json");
    write_file(bad, R"({"dataset": {"generator": "five_peaks"}, "detector": {"grid_size": 0}})");
    CHECK(run("fit --config " + bad) != 0);

    // unknown keys are rejected
    const auto unknown = dir.file("unknown.json");
    write_file(unknown, R"({"dataset": {"generator": "five_peaks"}, "grid_size": 5})");
    CHECK(run("fit --config " + unknown) != 0);

    // no partial bundle left behind
    bool any_tmp = false;
    for (const auto& entry : fs::directory_iterator(dir.path))
        if (entry.path().extension() == ".tmp") any_tmp = true;
    CHECK(!any_tmp);
}

TEST_CASE("score: row order, plumbing identity, and dimension errors") {
    TempDir dir;
    const auto cfg = five_peaks_config(dir, "det.json");
    REQUIRE(run("fit --config " + cfg) == 0);
    const auto bundle = dir.file("det.json");

    // write a small input file
    const auto input = dir.file("input.csv");
    std::ostringstream rows;
    const double xs[] = {-0.8, -0.4, 0.0, 0.4, 0.8};
    rows.precision(17);
    for (double x : xs) rows << x << "\n";
    write_file(input, rows.str());

    const auto out = dir.file("scores.csv");
    REQUIRE(run("score --bundle " + bundle + " --input " + input + " --out " + out +
                " --lambda 0.001") == 0);

    const auto pdet = load_bundle(bundle);
    std::ifstream in(out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "score,verdict");
    int i = 0;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        const double score = std::stod(line.substr(0, comma));
        const std::string verdict = line.substr(comma + 1);
        const double expected = partitioned_score(pdet, {&xs[i], 1});
        CHECK(score == doctest::Approx(expected).epsilon(1e-12));
        CHECK(verdict == (classify_score(expected, 1e-3) == Verdict::InD ? "InD" : "OOD"));
        ++i;
    }
    CHECK(i == 5);

    // wrong dimensionality is reported
    const auto wide = dir.file("wide.csv");
    write_file(wide, "0.1,0.2\n");
    CHECK(run("score --bundle " + bundle + " --input " + wide + " --out " + out) != 0);
}

TEST_CASE("eval: report and csv emitted, config echoed verbatim") {
    TempDir dir;
    Json cfg{{"dataset", Json{{"generator", "five_peaks"}, {"n", 300}, {"seed", 3}}},
             {"detector",
              Json{{"partitions", 1},
                   {"grid_size", 80},
                   {"use_normalizer", false},
                   {"train", Json{{"task", "regression"}, {"batch_size", 32}}}}},
             {"seeds", Json::array({1, 2})},
             {"baselines", Json::array({"histogram", "knn"})},
             {"output", Json{{"dir", dir.path.string()}}}};
    const auto cfg_path = dir.file("eval.json");
    write_file(cfg_path, cfg.dump());
    REQUIRE(run("eval --config " + cfg_path) == 0);

    const auto report = Json::parse(read_file(dir.file("report.json")));
    CHECK(report["resolved_config"] == cfg);  // verbatim echo
    REQUIRE(report["results"]["per_set"].size() == 1);
    const auto& set = report["results"]["per_set"][0];
    CHECK(set["name"] == "held_out_peaks");
    const double auroc_val = set["auroc_mean"].get<double>();
    CHECK(auroc_val >= 0.0);
    CHECK(auroc_val <= 100.0);
    CHECK(report["results"].contains("seed_sweep"));  // two seeds
    CHECK(report["results"]["baselines"].contains("histogram"));
    CHECK(report["results"]["baselines"].contains("knn"));

    const auto csv = read_file(dir.file("report.csv"));
    CHECK(csv.find("set,group,auroc_mean") != std::string::npos);
    CHECK(csv.find("held_out_peaks") != std::string::npos);
    CHECK(csv.find("overall") != std::string::npos);
}

TEST_CASE("curve: 1D sweep row count and zero-delta bundle") {
    TempDir dir;
    const auto cfg = five_peaks_config(dir, "det.json");
    REQUIRE(run("fit --config " + cfg) == 0);
    const auto bundle = dir.file("det.json");

    const auto out = dir.file("curve.csv");
    REQUIRE(run("curve --bundle " + bundle + " --out " + out +
                " --min -1 --max 1 --points 1000") == 0);
    std::ifstream in(out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,score");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 1000);

    // a bundle whose trained network equals the untrained one sweeps to zero
    auto pdet = load_bundle(bundle);
    for (auto& det : pdet.detectors) det.trained = det.untrained;
    const auto zero_bundle = dir.file("zero.json");
    save_bundle(pdet, zero_bundle);
    REQUIRE(run("curve --bundle " + zero_bundle + " --out " + out + " --points 50") == 0);
    std::ifstream zin(out);
    std::getline(zin, line);
    while (std::getline(zin, line)) {
        const double s = std::stod(line.substr(line.find(',') + 1));
        CHECK(s == 0.0);
    }
}

TEST_CASE("env var overrides the output directory") {
    TempDir dir;
    TempDir override_dir;
    const auto cfg = five_peaks_config(dir, "env.json");
    const std::string cmd = "KANOOD_OUT_DIR=" + override_dir.path.string() + " " + cli_path() +
                            " fit --config " + cfg + " >/dev/null 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(fs::exists(override_dir.path / "env.json"));
    CHECK(!fs::exists(dir.path / "env.json"));
}

TEST_CASE("eval: friedman recipe reproduces the partition gain through the CLI") {
    TempDir dir;
    auto config_for = [&](int partitions, const std::string& report) {
        Json cfg{{"dataset", Json{{"generator", "friedman"},
                                  {"n", 5000},
                                  {"seed", 100},
                                  {"noise_sigma", 7.0},
                                  {"threshold_quantile", 0.2},
                                  {"train_fraction", 0.6}}},
                 {"detector", Json{{"partitions", partitions},
                                   {"kmeans_restarts", 8},
                                   {"grid_size", 30},
                                   {"normalizer_bins", 80},
                                   {"train", Json{{"task", "regression_to_constant"},
                                                  {"batch_size", 64}}}}},
                 {"seeds", Json::array({6})},
                 {"output", Json{{"dir", dir.path.string()}, {"report", report}}}};
        const auto path = dir.file("friedman_p" + std::to_string(partitions) + ".json");
        write_file(path, cfg.dump());
        return path;
    };

    REQUIRE(run("eval --config " + config_for(1, "p1.json")) == 0);
    REQUIRE(run("eval --config " + config_for(4, "p4.json")) == 0);

    const auto p1 = Json::parse(read_file(dir.file("p1.json")));
    const auto p4 = Json::parse(read_file(dir.file("p4.json")));
    const double auroc_p1 = p1["results"]["per_set"][0]["auroc_mean"].get<double>();
    const double auroc_p4 = p4["results"]["per_set"][0]["auroc_mean"].get<double>();
    CHECK(auroc_p1 < 60.0);
    CHECK(auroc_p4 >= 64.0);
    CHECK(auroc_p4 - auroc_p1 >= 8.0);
}

TEST_CASE("eval: file-based datasets with near/far groups") {
    TempDir dir;
    // build small delimited fixtures from a friedman draw
    const auto data = gen_friedman(600, 1.0, 9);
    DelimitedSchema schema;  // features only
    std::vector<int> train_rows, ind_rows;
    for (int i = 0; i < data.n; ++i) (i < 400 ? train_rows : ind_rows).push_back(i);
    auto train = data.subset(train_rows);
    auto ind = data.subset(ind_rows);
    train.targets.clear();
    ind.targets.clear();
    auto near_ood = synthetic_ood_scale(ind, 1, 3.0);
    auto far_ood = synthetic_ood_scale(ind, 1, 100.0);
    save_delimited(train, dir.file("train.csv"), schema);
    save_delimited(ind, dir.file("ind.csv"), schema);
    save_delimited(near_ood, dir.file("near.csv"), schema);
    save_delimited(far_ood, dir.file("far.csv"), schema);

    Json cfg{{"dataset", Json{{"train_path", dir.file("train.csv")},
                              {"ind_test_path", dir.file("ind.csv")},
                              {"ood_sets", Json{{"scaled_small", dir.file("near.csv")},
                                                {"scaled_large", dir.file("far.csv")}}},
                              {"ood_groups", Json{{"scaled_small", "near"},
                                                  {"scaled_large", "far"}}}}},
             // scaled-feature OOD needs the raw grid with headroom beyond the
             // data range: a fitted normalizer would park clamped values on the
             // cell the training maximum occupied
             {"detector", Json{{"partitions", 2},
                               {"grid_size", 20},
                               {"use_normalizer", false},
                               {"domain_min", -2.0},
                               {"domain_max", 2.0},
                               {"train", Json{{"task", "regression_to_constant"},
                                              {"batch_size", 0}}}}},
             {"seeds", Json::array({4})},
             {"output", Json{{"dir", dir.path.string()}}}};
    const auto cfg_path = dir.file("files.json");
    write_file(cfg_path, cfg.dump());
    REQUIRE(run("eval --config " + cfg_path) == 0);

    const auto report = Json::parse(read_file(dir.file("report.json")));
    REQUIRE(report["results"]["per_set"].size() == 2);
    CHECK(report["results"].contains("near_mean"));
    CHECK(report["results"].contains("far_mean"));
    // the grossly scaled feature should be easier to flag
    const double near_mean = report["results"]["near_mean"].get<double>();
    const double far_mean = report["results"]["far_mean"].get<double>();
    CHECK(far_mean >= near_mean);
    CHECK(far_mean > 60.0);
}

TEST_CASE("fit: lambda quantile helper stores a threshold the scorer reuses") {
    TempDir dir;
    const auto cfg = five_peaks_config(dir, "det.json");
    REQUIRE(run("fit --config " + cfg + " --lambda-quantile 0.05") == 0);
    const auto bundle = dir.file("det.json");
    const auto pdet = load_bundle(bundle);
    REQUIRE(pdet.config.threshold.has_value());
    CHECK(*pdet.config.threshold > 0.0);

    // score without --lambda: verdict column appears using the stored value
    const auto input = dir.file("x.csv");
    write_file(input, "-0.8\n0.4\n");
    const auto out = dir.file("scores.csv");
    REQUIRE(run("score --bundle " + bundle + " --input " + input + " --out " + out) == 0);
    const auto text = read_file(out);
    CHECK(text.find("score,verdict") != std::string::npos);
    CHECK(text.find("InD") != std::string::npos);
    CHECK(text.find("OOD") != std::string::npos);
}
