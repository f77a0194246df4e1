#include "kanood/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "kanood/rng.hpp"

namespace kanood {

double silu(double x) { return x / (1.0 + std::exp(-x)); }

double silu_grad(double x) {
    const double s = 1.0 / (1.0 + std::exp(-x));
    return s * (1.0 + x * (1.0 - s));
}

KanLayer::KanLayer(int n_in_, int n_out_, const SplineGrid& grid_)
    : n_in(n_in_), n_out(n_out_), grid(grid_) {
    if (n_in < 1 || n_out < 1)
        throw std::invalid_argument("KanLayer: n_in and n_out must be positive");
    coeffs.assign(static_cast<size_t>(n_in) * n_out * grid.basis_count(), 0.0);
    base_weights.assign(static_cast<size_t>(n_in) * n_out, 0.0);
}

KanNetwork init_network(const std::vector<int>& shape, const GridSpec& grid_spec, uint64_t seed,
                        double init_scale) {
    if (shape.size() < 2)
        throw std::invalid_argument("init_network: shape needs at least an input and output width");
    for (int w : shape)
        if (w < 1) throw std::invalid_argument("init_network: layer widths must be positive");

    KanNetwork net;
    net.init_seed = seed;
    const SplineGrid grid(grid_spec);
    Rng rng(derive_seed(seed, 0x1a11));
    for (size_t l = 0; l + 1 < shape.size(); ++l) {
        KanLayer layer(shape[l], shape[l + 1], grid);
        for (double& c : layer.coeffs) c = rng.normal(0.0, init_scale);
        std::fill(layer.base_weights.begin(), layer.base_weights.end(), 1.0);
        net.layers.push_back(std::move(layer));
    }
    return net;
}

KanNetwork clone_weights(const KanNetwork& net) { return net; }

bool weights_equal(const KanNetwork& a, const KanNetwork& b) {
    if (a.layers.size() != b.layers.size()) return false;
    for (size_t l = 0; l < a.layers.size(); ++l) {
        const auto& la = a.layers[l];
        const auto& lb = b.layers[l];
        if (la.n_in != lb.n_in || la.n_out != lb.n_out || !(la.grid == lb.grid)) return false;
        if (la.coeffs != lb.coeffs || la.base_weights != lb.base_weights) return false;
    }
    return true;
}

namespace {

// Single-layer forward into out[q]; optionally captures components.
void layer_forward(const KanLayer& layer, const double* x, double* out, LayerActivation* act) {
    const int k = layer.grid.order();
    const int m = layer.grid.basis_count();
    std::vector<double> window(static_cast<size_t>(k + 1));

    std::fill(out, out + layer.n_out, 0.0);
    if (act) {
        act->n_in = layer.n_in;
        act->n_out = layer.n_out;
        act->spline.assign(static_cast<size_t>(layer.n_in) * layer.n_out, 0.0);
        act->residual.assign(static_cast<size_t>(layer.n_in) * layer.n_out, 0.0);
    }

    for (int p = 0; p < layer.n_in; ++p) {
        const double cx = layer.grid.clamp(x[p]);
        const double res_basis = silu(cx);
        const int first = basis_eval_local(layer.grid, cx, window.data());
        const double* cp = layer.coeffs.data() + static_cast<size_t>(p) * layer.n_out * m;
        for (int q = 0; q < layer.n_out; ++q) {
            const double* cq = cp + static_cast<size_t>(q) * m;
            double spline_val = 0.0;
            for (int r = 0; r <= k; ++r) spline_val += cq[first + r] * window[static_cast<size_t>(r)];
            const double res_val = layer.base_weight(p, q) * res_basis;
            out[q] += spline_val + res_val;
            if (act) {
                act->spline[static_cast<size_t>(p) * layer.n_out + q] = spline_val;
                act->residual[static_cast<size_t>(p) * layer.n_out + q] = res_val;
            }
        }
    }
}

}  // namespace

std::vector<double> forward(const KanNetwork& net, std::span<const double> x,
                            ActivationRecord* rec) {
    if (static_cast<int>(x.size()) != net.input_dim())
        throw std::invalid_argument("forward: input has dimension " + std::to_string(x.size()) +
                                    ", network expects " + std::to_string(net.input_dim()));
    for (double v : x)
        if (!std::isfinite(v)) throw std::invalid_argument("forward: non-finite input");

    if (rec) rec->assign(net.layers.size(), LayerActivation{});

    std::vector<double> cur(x.begin(), x.end());
    std::vector<double> next;
    for (size_t l = 0; l < net.layers.size(); ++l) {
        const KanLayer& layer = net.layers[l];
        next.assign(static_cast<size_t>(layer.n_out), 0.0);
        layer_forward(layer, cur.data(), next.data(), rec ? &(*rec)[l] : nullptr);
        cur.swap(next);
    }
    return cur;
}

namespace detail {

namespace {

struct LayerCache {
    std::vector<double> inputs;  // raw (unclamped) layer inputs
};

// dL/dy for one sample given its network output; returns the sample loss.
double output_gradient(const std::vector<double>& y, const LabeledDataset& data, int row,
                       const TrainConfig& cfg, std::vector<double>& dy) {
    const int dim = static_cast<int>(y.size());
    dy.assign(static_cast<size_t>(dim), 0.0);

    switch (cfg.task) {
        case TrainConfig::Task::classification: {
            const int label = data.labels[static_cast<size_t>(row)];
            if (label < 0 || label >= dim)
                throw std::invalid_argument("train: label " + std::to_string(label) +
                                            " outside the network's " + std::to_string(dim) +
                                            " outputs");
            // softmax cross-entropy
            const double mx = *std::max_element(y.begin(), y.end());
            double z = 0.0;
            for (double v : y) z += std::exp(v - mx);
            for (int q = 0; q < dim; ++q) dy[static_cast<size_t>(q)] = std::exp(y[static_cast<size_t>(q)] - mx) / z;
            const double loss = -std::log(std::max(dy[static_cast<size_t>(label)], 1e-300));
            dy[static_cast<size_t>(label)] -= 1.0;
            return loss;
        }
        case TrainConfig::Task::regression:
        case TrainConfig::Task::regression_to_constant: {
            const double t = cfg.task == TrainConfig::Task::regression
                                 ? data.targets[static_cast<size_t>(row)]
                                 : cfg.constant;
            double loss = 0.0;
            for (int q = 0; q < dim; ++q) {
                const double e = y[static_cast<size_t>(q)] - t;
                loss += e * e / dim;
                dy[static_cast<size_t>(q)] = 2.0 * e / dim;
            }
            return loss;
        }
    }
    throw std::logic_error("train: unknown task");
}

}  // namespace

BatchGradients loss_and_gradients(const KanNetwork& net, const LabeledDataset& data,
                                  const std::vector<int>& rows, const TrainConfig& cfg) {
    BatchGradients out;
    out.coeff_grads.resize(net.layers.size());
    out.base_weight_grads.resize(net.layers.size());
    for (size_t l = 0; l < net.layers.size(); ++l) {
        out.coeff_grads[l].assign(net.layers[l].coeffs.size(), 0.0);
        out.base_weight_grads[l].assign(net.layers[l].base_weights.size(), 0.0);
    }

    const size_t depth = net.layers.size();
    std::vector<LayerCache> cache(depth);
    std::vector<double> y, dy, dx;
    std::vector<double> window, gwindow;

    for (int row : rows) {
        // forward, caching raw layer inputs
        std::vector<double> cur(data.row(row).begin(), data.row(row).end());
        for (size_t l = 0; l < depth; ++l) {
            cache[l].inputs = cur;
            const KanLayer& layer = net.layers[l];
            std::vector<double> next(static_cast<size_t>(layer.n_out), 0.0);
            layer_forward(layer, cur.data(), next.data(), nullptr);
            cur.swap(next);
        }
        y = cur;
        out.loss += output_gradient(y, data, row, cfg, dy);

        // backward
        for (size_t li = depth; li-- > 0;) {
            const KanLayer& layer = net.layers[li];
            const int k = layer.grid.order();
            const int m = layer.grid.basis_count();
            window.assign(static_cast<size_t>(k + 1), 0.0);
            gwindow.assign(static_cast<size_t>(k + 1), 0.0);
            const bool need_dx = li > 0;
            if (need_dx) dx.assign(static_cast<size_t>(layer.n_in), 0.0);

            double* cg = out.coeff_grads[li].data();
            double* wg = out.base_weight_grads[li].data();
            for (int p = 0; p < layer.n_in; ++p) {
                const double raw = cache[li].inputs[static_cast<size_t>(p)];
                const double cx = layer.grid.clamp(raw);
                const bool inside = raw >= layer.grid.domain_min() && raw <= layer.grid.domain_max();
                const double res_basis = silu(cx);
                const double res_grad = silu_grad(cx);
                const int first = basis_eval_local(layer.grid, cx, window.data());
                if (need_dx) basis_grad_local(layer.grid, cx, gwindow.data());

                const double* cp = layer.coeffs.data() + static_cast<size_t>(p) * layer.n_out * m;
                double dxp = 0.0;
                for (int q = 0; q < layer.n_out; ++q) {
                    const double g = dy[static_cast<size_t>(q)];
                    const size_t base = (static_cast<size_t>(p) * layer.n_out + q) * m;
                    for (int r = 0; r <= k; ++r)
                        cg[base + static_cast<size_t>(first + r)] += g * window[static_cast<size_t>(r)];
                    wg[static_cast<size_t>(p) * layer.n_out + q] += g * res_basis;
                    if (need_dx) {
                        const double* cq = cp + static_cast<size_t>(q) * m;
                        double dphi = layer.base_weight(p, q) * res_grad;
                        for (int r = 0; r <= k; ++r)
                            dphi += cq[first + r] * gwindow[static_cast<size_t>(r)];
                        dxp += g * dphi;
                    }
                }
                // clamped inputs sit on a flat region of the activation
                if (need_dx) dx[static_cast<size_t>(p)] = inside ? dxp : 0.0;
            }
            if (need_dx) dy = dx;
        }
    }

    const double inv = 1.0 / static_cast<double>(rows.size());
    out.loss *= inv;
    for (auto& g : out.coeff_grads)
        for (double& v : g) v *= inv;
    for (auto& g : out.base_weight_grads)
        for (double& v : g) v *= inv;
    return out;
}

double batch_loss(const KanNetwork& net, const LabeledDataset& data, const std::vector<int>& rows,
                  const TrainConfig& cfg) {
    double total = 0.0;
    std::vector<double> dy;
    for (int row : rows) {
        const auto y = forward(net, data.row(row));
        total += output_gradient(y, data, row, cfg, dy);
    }
    return total / static_cast<double>(rows.size());
}

}  // namespace detail

KanNetwork train(const KanNetwork& net, const LabeledDataset& data, const TrainConfig& cfg) {
    data.validate();
    if (data.n == 0) throw std::invalid_argument("train: dataset is empty");
    if (data.dim != net.input_dim())
        throw std::invalid_argument("train: feature dimension " + std::to_string(data.dim) +
                                    " does not match network input " +
                                    std::to_string(net.input_dim()));
    if (cfg.epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
    if (!(cfg.learning_rate > 0.0)) throw std::invalid_argument("train: learning_rate must be > 0");
    if (cfg.task == TrainConfig::Task::classification && !data.has_labels())
        throw std::invalid_argument("train: classification requires labels");
    if (cfg.task == TrainConfig::Task::regression && !data.has_targets())
        throw std::invalid_argument("train: regression requires targets");

    KanNetwork out = net;

    const int batch = cfg.batch_size > 0 ? std::min(cfg.batch_size, data.n)
                                         : std::min(data.n, 4096);

    // AdamW state, one slot per parameter
    struct Moments {
        std::vector<double> m, v;
    };
    std::vector<Moments> coeff_mom(out.layers.size());
    std::vector<Moments> weight_mom(out.layers.size());
    for (size_t l = 0; l < out.layers.size(); ++l) {
        coeff_mom[l].m.assign(out.layers[l].coeffs.size(), 0.0);
        coeff_mom[l].v.assign(out.layers[l].coeffs.size(), 0.0);
        weight_mom[l].m.assign(out.layers[l].base_weights.size(), 0.0);
        weight_mom[l].v.assign(out.layers[l].base_weights.size(), 0.0);
    }

    std::vector<int> order(static_cast<size_t>(data.n));
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle_rng(derive_seed(cfg.rng_seed, 0x5f1e));
    long step = 0;

    auto adamw_update = [&](std::vector<double>& params, const std::vector<double>& grads,
                            Moments& mom) {
        const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
        const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
        for (size_t i = 0; i < params.size(); ++i) {
            mom.m[i] = cfg.beta1 * mom.m[i] + (1.0 - cfg.beta1) * grads[i];
            mom.v[i] = cfg.beta2 * mom.v[i] + (1.0 - cfg.beta2) * grads[i] * grads[i];
            const double mhat = mom.m[i] / bc1;
            const double vhat = mom.v[i] / bc2;
            params[i] -= cfg.learning_rate * (mhat / (std::sqrt(vhat) + cfg.eps) +
                                              cfg.weight_decay * params[i]);
        }
    };

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        shuffle_rng.shuffle(order.data(), order.size());
        for (int start = 0; start < data.n; start += batch) {
            const int stop = std::min(start + batch, data.n);
            const std::vector<int> rows(order.begin() + start, order.begin() + stop);
            auto grads = detail::loss_and_gradients(out, data, rows, cfg);
            if (!std::isfinite(grads.loss))
                throw std::runtime_error(
                    "train: loss became non-finite at epoch " + std::to_string(epoch + 1) +
                    "; lower the learning rate or normalize the feature scale");
            ++step;
            for (size_t l = 0; l < out.layers.size(); ++l) {
                adamw_update(out.layers[l].coeffs, grads.coeff_grads[l], coeff_mom[l]);
                adamw_update(out.layers[l].base_weights, grads.base_weight_grads[l], weight_mom[l]);
            }
        }
    }
    return out;
}

}  // namespace kanood
