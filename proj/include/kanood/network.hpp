#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kanood/dataset.hpp"
#include "kanood/spline.hpp"

namespace kanood {

/// One KAN layer: every (input p, output q) edge carries a univariate
/// activation phi_{p,q}(x) = base_weights[p][q] * silu(x) + sum_i
/// coeffs[p][q][i] * B_i(x), evaluated on the layer's shared grid with x
/// clamped to the grid domain. Outputs are y_q = sum_p phi_{p,q}(x_p).
struct KanLayer {
    int n_in = 0;
    int n_out = 0;
    SplineGrid grid;
    std::vector<double> coeffs;        // [n_in][n_out][basis_count]
    std::vector<double> base_weights;  // [n_in][n_out]

    KanLayer(int n_in_, int n_out_, const SplineGrid& grid_);

    double& coeff(int p, int q, int i) {
        return coeffs[(static_cast<size_t>(p) * n_out + q) * grid.basis_count() + i];
    }
    double coeff(int p, int q, int i) const {
        return coeffs[(static_cast<size_t>(p) * n_out + q) * grid.basis_count() + i];
    }
    double& base_weight(int p, int q) { return base_weights[static_cast<size_t>(p) * n_out + q]; }
    double base_weight(int p, int q) const {
        return base_weights[static_cast<size_t>(p) * n_out + q];
    }
};

/// Per-layer activation capture from one forward pass: the spline component
/// sum_i c_{p,q,i} B_i(x_p) and the residual component w_{p,q} silu(x_p),
/// stored separately so their sum reconstructs phi_{p,q}(x_p).
struct LayerActivation {
    int n_in = 0;
    int n_out = 0;
    std::vector<double> spline;    // [n_in][n_out]
    std::vector<double> residual;  // [n_in][n_out]
};
using ActivationRecord = std::vector<LayerActivation>;

struct KanNetwork {
    std::vector<KanLayer> layers;
    uint64_t init_seed = 0;

    int input_dim() const { return layers.front().n_in; }
    int output_dim() const { return layers.back().n_out; }
};

struct TrainConfig {
    enum class Task { classification, regression, regression_to_constant };

    double learning_rate = 0.1;
    int epochs = 1;
    int batch_size = 0;  // 0 = full dataset, capped at 4096
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 1e-4;
    Task task = Task::regression;
    int n_classes = 0;        // classification only
    double constant = 1.0;    // regression_to_constant only
    uint64_t rng_seed = 0;
};

// Coefficients i.i.d. Normal(0, init_scale), base weights 1; fully
// determined by seed. shape lists layer widths, e.g. {2, 3, 1}.
KanNetwork init_network(const std::vector<int>& shape, const GridSpec& grid_spec, uint64_t seed,
                        double init_scale = 0.1);

// Forward pass; fills rec (spline + residual components per layer) when given.
std::vector<double> forward(const KanNetwork& net, std::span<const double> x,
                            ActivationRecord* rec = nullptr);

// Minibatch AdamW for cfg.epochs passes in a seed-determined shuffle order.
// Returns the trained copy; net itself is never modified.
KanNetwork train(const KanNetwork& net, const LabeledDataset& data, const TrainConfig& cfg);

KanNetwork clone_weights(const KanNetwork& net);

bool weights_equal(const KanNetwork& a, const KanNetwork& b);

double silu(double x);
double silu_grad(double x);

namespace detail {

// Flat parameter-order gradients (coeffs then base_weights, layer by layer),
// exposed for finite-difference checks.
struct BatchGradients {
    double loss = 0.0;
    std::vector<std::vector<double>> coeff_grads;        // per layer
    std::vector<std::vector<double>> base_weight_grads;  // per layer
};

BatchGradients loss_and_gradients(const KanNetwork& net, const LabeledDataset& data,
                                  const std::vector<int>& rows, const TrainConfig& cfg);

double batch_loss(const KanNetwork& net, const LabeledDataset& data,
                  const std::vector<int>& rows, const TrainConfig& cfg);

}  // namespace detail

}  // namespace kanood
