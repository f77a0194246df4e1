#include "kanood/serialize.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace kanood {

namespace {

constexpr int kNetworkVersion = 1;
constexpr int kBundleVersion = 1;

Json grid_to_json(const SplineGrid& grid) {
    return Json{{"grid_size", grid.grid_size()},
                {"order", grid.order()},
                {"domain_min", grid.domain_min()},
                {"domain_max", grid.domain_max()}};
}

SplineGrid grid_from_json(const Json& j) {
    return SplineGrid(j.at("domain_min").get<double>(), j.at("domain_max").get<double>(),
                      j.at("grid_size").get<int>(), j.at("order").get<int>());
}

void require_version(const Json& j, const char* key, int expected) {
    const int v = j.at(key).get<int>();
    if (v != expected)
        throw std::runtime_error(std::string("unsupported ") + key + " " + std::to_string(v) +
                                 " (this build reads version " + std::to_string(expected) + ")");
}

}  // namespace

Json network_to_json(const KanNetwork& net) {
    Json layers = Json::array();
    for (const auto& layer : net.layers) {
        layers.push_back(Json{{"n_in", layer.n_in},
                              {"n_out", layer.n_out},
                              {"grid", grid_to_json(layer.grid)},
                              {"coeffs", layer.coeffs},
                              {"base_weights", layer.base_weights}});
    }
    return Json{{"network_version", kNetworkVersion},
                {"init_seed", net.init_seed},
                {"layers", std::move(layers)}};
}

KanNetwork network_from_json(const Json& j) {
    require_version(j, "network_version", kNetworkVersion);
    KanNetwork net;
    net.init_seed = j.at("init_seed").get<uint64_t>();
    for (const auto& jl : j.at("layers")) {
        KanLayer layer(jl.at("n_in").get<int>(), jl.at("n_out").get<int>(),
                       grid_from_json(jl.at("grid")));
        layer.coeffs = jl.at("coeffs").get<std::vector<double>>();
        layer.base_weights = jl.at("base_weights").get<std::vector<double>>();
        if (layer.coeffs.size() != static_cast<size_t>(layer.n_in) * layer.n_out *
                                       layer.grid.basis_count() ||
            layer.base_weights.size() != static_cast<size_t>(layer.n_in) * layer.n_out)
            throw std::runtime_error("network_from_json: tensor sizes do not match layer shape");
        net.layers.push_back(std::move(layer));
    }
    if (net.layers.empty()) throw std::runtime_error("network_from_json: no layers");
    return net;
}

Json detector_config_to_json(const DetectorConfig& cfg) {
    Json train{{"learning_rate", cfg.train.learning_rate},
               {"epochs", cfg.train.epochs},
               {"batch_size", cfg.train.batch_size},
               {"weight_decay", cfg.train.weight_decay},
               {"task", cfg.train.task == TrainConfig::Task::classification
                            ? "classification"
                            : cfg.train.task == TrainConfig::Task::regression
                                  ? "regression"
                                  : "regression_to_constant"},
               {"n_classes", cfg.train.n_classes},
               {"constant", cfg.train.constant}};
    Json j{{"partitions", cfg.partitions},
           {"partitioner",
            cfg.partitioner == DetectorConfig::Partitioner::kmeans ? "kmeans" : "class_based"},
           {"kmeans_restarts", cfg.kmeans_restarts},
           {"grid_size", cfg.grid_size},
           {"spline_order", cfg.spline_order},
           {"domain_min", cfg.domain_min},
           {"domain_max", cfg.domain_max},
           {"hidden", cfg.hidden},
           {"scoring", reduction_name(cfg.scoring)},
           {"agg", reduction_name(cfg.agg)},
           {"use_normalizer", cfg.use_normalizer},
           {"normalizer_bins", cfg.normalizer_bins},
           {"include_residual", cfg.include_residual},
           {"init_scale", cfg.init_scale},
           {"train", std::move(train)}};
    if (cfg.threshold) j["threshold"] = *cfg.threshold;
    return j;
}

DetectorConfig detector_config_from_json(const Json& j) {
    DetectorConfig cfg;
    cfg.partitions = j.at("partitions").get<int>();
    const std::string part = j.at("partitioner").get<std::string>();
    if (part == "kmeans")
        cfg.partitioner = DetectorConfig::Partitioner::kmeans;
    else if (part == "class_based")
        cfg.partitioner = DetectorConfig::Partitioner::class_based;
    else
        throw std::runtime_error("unknown partitioner '" + part + "' (expected kmeans|class_based)");
    cfg.kmeans_restarts = j.at("kmeans_restarts").get<int>();
    cfg.grid_size = j.at("grid_size").get<int>();
    cfg.spline_order = j.at("spline_order").get<int>();
    cfg.domain_min = j.at("domain_min").get<double>();
    cfg.domain_max = j.at("domain_max").get<double>();
    cfg.hidden = j.at("hidden").get<std::vector<int>>();
    cfg.scoring = reduction_from_name(j.at("scoring").get<std::string>());
    cfg.agg = reduction_from_name(j.at("agg").get<std::string>());
    cfg.use_normalizer = j.at("use_normalizer").get<bool>();
    cfg.normalizer_bins = j.at("normalizer_bins").get<int>();
    cfg.include_residual = j.at("include_residual").get<bool>();
    cfg.init_scale = j.at("init_scale").get<double>();
    if (j.contains("threshold")) cfg.threshold = j.at("threshold").get<double>();

    const Json& train = j.at("train");
    cfg.train.learning_rate = train.at("learning_rate").get<double>();
    cfg.train.epochs = train.at("epochs").get<int>();
    cfg.train.batch_size = train.at("batch_size").get<int>();
    cfg.train.weight_decay = train.at("weight_decay").get<double>();
    const std::string task = train.at("task").get<std::string>();
    if (task == "classification")
        cfg.train.task = TrainConfig::Task::classification;
    else if (task == "regression")
        cfg.train.task = TrainConfig::Task::regression;
    else if (task == "regression_to_constant")
        cfg.train.task = TrainConfig::Task::regression_to_constant;
    else
        throw std::runtime_error("unknown task '" + task + "'");
    cfg.train.n_classes = train.at("n_classes").get<int>();
    cfg.train.constant = train.at("constant").get<double>();
    return cfg;
}

DetectorConfig detector_config_from_user_json(const Json& j) {
    static const std::vector<std::string> allowed = {
        "partitions",     "partitioner",      "kmeans_restarts", "grid_size",  "spline_order",
        "domain_min",     "domain_max",       "hidden",     "scoring",
        "agg",            "threshold",        "use_normalizer", "normalizer_bins",
        "include_residual", "init_scale",     "train"};
    static const std::vector<std::string> allowed_train = {
        "learning_rate", "epochs", "batch_size", "weight_decay", "task", "n_classes", "constant"};
    for (const auto& [key, value] : j.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw std::runtime_error("detector config: unknown key '" + key + "'");

    DetectorConfig cfg;
    if (j.contains("partitions")) cfg.partitions = j["partitions"].get<int>();
    if (j.contains("partitioner")) {
        const auto name = j["partitioner"].get<std::string>();
        if (name == "kmeans")
            cfg.partitioner = DetectorConfig::Partitioner::kmeans;
        else if (name == "class_based")
            cfg.partitioner = DetectorConfig::Partitioner::class_based;
        else
            throw std::runtime_error("detector config: unknown partitioner '" + name +
                                     "' (expected kmeans|class_based)");
    }
    if (j.contains("kmeans_restarts")) cfg.kmeans_restarts = j["kmeans_restarts"].get<int>();
    if (j.contains("grid_size")) cfg.grid_size = j["grid_size"].get<int>();
    if (j.contains("spline_order")) cfg.spline_order = j["spline_order"].get<int>();
    if (j.contains("domain_min")) cfg.domain_min = j["domain_min"].get<double>();
    if (j.contains("domain_max")) cfg.domain_max = j["domain_max"].get<double>();
    if (j.contains("hidden")) cfg.hidden = j["hidden"].get<std::vector<int>>();
    if (j.contains("scoring")) cfg.scoring = reduction_from_name(j["scoring"].get<std::string>());
    if (j.contains("agg")) cfg.agg = reduction_from_name(j["agg"].get<std::string>());
    if (j.contains("threshold")) cfg.threshold = j["threshold"].get<double>();
    if (j.contains("use_normalizer")) cfg.use_normalizer = j["use_normalizer"].get<bool>();
    if (j.contains("normalizer_bins")) cfg.normalizer_bins = j["normalizer_bins"].get<int>();
    if (j.contains("include_residual"))
        cfg.include_residual = j["include_residual"].get<bool>();
    if (j.contains("init_scale")) cfg.init_scale = j["init_scale"].get<double>();
    if (j.contains("train")) {
        const Json& t = j["train"];
        for (const auto& [key, value] : t.items())
            if (std::find(allowed_train.begin(), allowed_train.end(), key) == allowed_train.end())
                throw std::runtime_error("detector config: unknown key 'train." + key + "'");
        if (t.contains("learning_rate")) cfg.train.learning_rate = t["learning_rate"].get<double>();
        if (t.contains("epochs")) cfg.train.epochs = t["epochs"].get<int>();
        if (t.contains("batch_size")) cfg.train.batch_size = t["batch_size"].get<int>();
        if (t.contains("weight_decay")) cfg.train.weight_decay = t["weight_decay"].get<double>();
        if (t.contains("task")) {
            const auto task = t["task"].get<std::string>();
            if (task == "classification")
                cfg.train.task = TrainConfig::Task::classification;
            else if (task == "regression")
                cfg.train.task = TrainConfig::Task::regression;
            else if (task == "regression_to_constant")
                cfg.train.task = TrainConfig::Task::regression_to_constant;
            else
                throw std::runtime_error(
                    "detector config: unknown task '" + task +
                    "' (expected classification|regression|regression_to_constant)");
        }
        if (t.contains("n_classes")) cfg.train.n_classes = t["n_classes"].get<int>();
        if (t.contains("constant")) cfg.train.constant = t["constant"].get<double>();
    }
    return cfg;
}

namespace {

Json normalizer_to_json(const HistogramNormalizer& norm) {
    Json features = Json::array();
    for (const auto& fc : norm.per_feature)
        features.push_back(Json{{"lo", fc.lo}, {"hi", fc.hi}, {"cdf", fc.cdf}});
    return Json{{"bins", norm.bins},
                {"domain_min", norm.domain_min},
                {"domain_max", norm.domain_max},
                {"per_feature", std::move(features)}};
}

HistogramNormalizer normalizer_from_json(const Json& j) {
    HistogramNormalizer norm;
    norm.bins = j.at("bins").get<int>();
    norm.domain_min = j.at("domain_min").get<double>();
    norm.domain_max = j.at("domain_max").get<double>();
    for (const auto& jf : j.at("per_feature")) {
        HistogramNormalizer::FeatureCdf fc;
        fc.lo = jf.at("lo").get<double>();
        fc.hi = jf.at("hi").get<double>();
        fc.cdf = jf.at("cdf").get<std::vector<double>>();
        norm.per_feature.push_back(std::move(fc));
    }
    return norm;
}

Json cluster_to_json(const ClusterModel& model) {
    return Json{{"dim", model.dim},
                {"centroids", model.centroids},
                {"inertia", model.inertia},
                {"iterations_run", model.iterations_run}};
}

ClusterModel cluster_from_json(const Json& j) {
    ClusterModel model;
    model.dim = j.at("dim").get<int>();
    model.centroids = j.at("centroids").get<std::vector<double>>();
    model.inertia = j.at("inertia").get<double>();
    model.iterations_run = j.at("iterations_run").get<int>();
    return model;
}

}  // namespace

Json bundle_to_json(const PartitionedDetector& pdet) {
    Json j{{"bundle_version", kBundleVersion},
           {"config", detector_config_to_json(pdet.config)},
           {"partition_count", pdet.partition_count},
           {"agg", reduction_name(pdet.agg)},
           {"shared_untrained", pdet.shared_untrained}};
    if (pdet.normalizer) j["normalizer"] = normalizer_to_json(*pdet.normalizer);
    if (pdet.cluster_model) j["cluster_model"] = cluster_to_json(*pdet.cluster_model);
    if (!pdet.partition_labels.empty()) j["partition_labels"] = pdet.partition_labels;
    j["training"] = Json{{"partition_sizes", pdet.training.partition_sizes},
                         {"final_losses", pdet.training.final_losses}};
    if (pdet.detectors.empty()) throw std::runtime_error("bundle_to_json: no detectors");
    j["untrained"] = network_to_json(pdet.detectors.front().untrained);
    Json trained = Json::array();
    for (const auto& det : pdet.detectors) trained.push_back(network_to_json(det.trained));
    j["trained"] = std::move(trained);
    return j;
}

PartitionedDetector bundle_from_json(const Json& j) {
    require_version(j, "bundle_version", kBundleVersion);
    PartitionedDetector pdet;
    pdet.config = detector_config_from_json(j.at("config"));
    pdet.partition_count = j.at("partition_count").get<int>();
    pdet.agg = reduction_from_name(j.at("agg").get<std::string>());
    pdet.shared_untrained = j.at("shared_untrained").get<bool>();
    if (j.contains("normalizer")) pdet.normalizer = normalizer_from_json(j.at("normalizer"));
    if (j.contains("cluster_model")) pdet.cluster_model = cluster_from_json(j.at("cluster_model"));
    if (j.contains("partition_labels"))
        pdet.partition_labels = j.at("partition_labels").get<std::vector<int>>();
    pdet.training.partition_sizes =
        j.at("training").at("partition_sizes").get<std::vector<int>>();
    pdet.training.final_losses = j.at("training").at("final_losses").get<std::vector<double>>();

    const KanNetwork untrained = network_from_json(j.at("untrained"));
    for (const auto& jt : j.at("trained")) {
        pdet.detectors.push_back(KanDetector{network_from_json(jt), untrained,
                                             pdet.config.scoring, pdet.config.include_residual});
    }
    if (pdet.detectors.empty()) throw std::runtime_error("bundle_from_json: no trained networks");
    return pdet;
}

void atomic_write_text(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) {
            fs::remove(tmp);
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, target);
}

void save_bundle(const PartitionedDetector& pdet, const std::string& path) {
    atomic_write_text(path, bundle_to_json(pdet).dump());
}

PartitionedDetector load_bundle(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open bundle " + path);
    Json j;
    in >> j;
    return bundle_from_json(j);
}

}  // namespace kanood
