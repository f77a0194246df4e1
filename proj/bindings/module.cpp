#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kanood/baselines.hpp"
#include "kanood/dataset.hpp"
#include "kanood/detector.hpp"
#include "kanood/metrics.hpp"
#include "kanood/serialize.hpp"
#include "kanood/spline.hpp"

namespace py = pybind11;
using namespace kanood;

namespace {

LabeledDataset dataset_from_numpy(py::array_t<double, py::array::c_style | py::array::forcecast> features,
                                  py::object labels, py::object targets) {
    if (features.ndim() != 2) throw std::invalid_argument("features must be a 2D array");
    LabeledDataset data;
    data.n = static_cast<int>(features.shape(0));
    data.dim = static_cast<int>(features.shape(1));
    data.features.assign(features.data(), features.data() + data.n * data.dim);
    if (!labels.is_none()) data.labels = labels.cast<std::vector<int>>();
    if (!targets.is_none()) data.targets = targets.cast<std::vector<double>>();
    data.validate();
    return data;
}

py::array_t<double> to_numpy(const std::vector<double>& v) {
    py::array_t<double> out(std::vector<py::ssize_t>{static_cast<py::ssize_t>(v.size())});
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

std::vector<double> scores_from(const PartitionedDetector& pdet,
                                py::array_t<double, py::array::c_style | py::array::forcecast> x) {
    if (x.ndim() == 1) {
        std::vector<double> row(x.data(), x.data() + x.shape(0));
        return {partitioned_score(pdet, row)};
    }
    if (x.ndim() != 2) throw std::invalid_argument("x must be a 1D or 2D array");
    std::vector<double> out;
    const int n = static_cast<int>(x.shape(0));
    const int d = static_cast<int>(x.shape(1));
    out.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        out.push_back(partitioned_score(pdet, {x.data() + static_cast<size_t>(i) * d,
                                               static_cast<size_t>(d)}));
    return out;
}

DetectorConfig config_from_pyobj(py::object config) {
    if (config.is_none()) return {};
    const std::string dumped = py::module_::import("json").attr("dumps")(config).cast<std::string>();
    return detector_config_from_user_json(Json::parse(dumped));
}

}  // namespace

PYBIND11_MODULE(_kanood, m) {
    m.doc() = "KAN-based out-of-distribution detection";

    py::class_<SplineGrid>(m, "SplineGrid")
        .def(py::init<double, double, int, int>(), py::arg("domain_min"), py::arg("domain_max"),
             py::arg("grid_size"), py::arg("order") = 3)
        .def_property_readonly("basis_count", &SplineGrid::basis_count)
        .def_property_readonly("knots", [](const SplineGrid& g) { return g.knots(); });

    m.def("basis_eval", [](const SplineGrid& g, double x) { return to_numpy(basis_eval(g, x)); },
          py::arg("grid"), py::arg("x"));
    m.def("basis_grad", [](const SplineGrid& g, double x) { return to_numpy(basis_grad(g, x)); },
          py::arg("grid"), py::arg("x"));

    py::class_<PartitionedDetector>(m, "Detector")
        .def_property_readonly("partition_count",
                               [](const PartitionedDetector& p) { return p.partition_count; })
        .def_property_readonly("partition_sizes",
                               [](const PartitionedDetector& p) { return p.training.partition_sizes; })
        .def("score",
             [](const PartitionedDetector& p,
                py::array_t<double, py::array::c_style | py::array::forcecast> x) {
                 return to_numpy(scores_from(p, x));
             },
             py::arg("x"), "InD scores for one sample or a matrix of samples")
        .def("classify",
             [](const PartitionedDetector& p,
                py::array_t<double, py::array::c_style | py::array::forcecast> x, double lam) {
                 std::vector<bool> verdicts;
                 for (double s : scores_from(p, x)) verdicts.push_back(s >= lam);
                 return verdicts;
             },
             py::arg("x"), py::arg("lam"), "True where the sample is classified InD")
        .def("save", [](const PartitionedDetector& p, const std::string& path) {
            save_bundle(p, path);
        });

    m.def("fit_detector",
          [](py::array_t<double, py::array::c_style | py::array::forcecast> features,
             py::object labels, py::object targets, py::object config, uint64_t seed) {
              return fit_detector(dataset_from_numpy(features, labels, targets),
                                  config_from_pyobj(config), seed);
          },
          py::arg("features"), py::arg("labels") = py::none(), py::arg("targets") = py::none(),
          py::arg("config") = py::none(), py::arg("seed") = 0);

    m.def("load_detector", &load_bundle, py::arg("path"));

    m.def("auroc",
          [](std::vector<double> ind, std::vector<double> ood) { return auroc(ind, ood); });
    m.def("fpr_at_95",
          [](std::vector<double> ind, std::vector<double> ood) { return fpr_at_95(ind, ood); });
    m.def("welch_t_test",
          [](std::vector<double> a, std::vector<double> b) { return welch_t_test(a, b); });
    m.def("overall_average", &overall_average);
    m.def("seed_sweep_stats", [](const std::vector<std::pair<double, double>>& per_seed) {
        const auto s = seed_sweep_stats(per_seed);
        return py::make_tuple(s.mu_b, s.sigma_b, s.sigma_d);
    });

    m.def("gen_five_peaks",
          [](int n, uint64_t seed) {
              const auto toy = gen_five_peaks(n, seed);
              auto pack = [](const LabeledDataset& d) {
                  py::dict out;
                  py::array_t<double> x({d.n, d.dim});
                  std::copy(d.features.begin(), d.features.end(), x.mutable_data());
                  out["features"] = x;
                  out["targets"] = to_numpy(d.targets);
                  out["ind_flag"] = std::vector<bool>(d.ind_flag.begin(), d.ind_flag.end());
                  return out;
              };
              return py::make_tuple(pack(toy.train), pack(toy.test));
          },
          py::arg("n"), py::arg("seed"));

    m.def("gen_friedman",
          [](int n, double noise_sigma, uint64_t seed) {
              const auto d = gen_friedman(n, noise_sigma, seed);
              py::array_t<double> x({d.n, d.dim});
              std::copy(d.features.begin(), d.features.end(), x.mutable_data());
              return py::make_tuple(x, to_numpy(d.targets));
          },
          py::arg("n"), py::arg("noise_sigma"), py::arg("seed"));
}
