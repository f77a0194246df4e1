#include "kanood/spline.hpp"

#include <cmath>
#include <stdexcept>

namespace kanood {

SplineGrid::SplineGrid(double domain_min, double domain_max, int grid_size, int order)
    : domain_min_(domain_min), domain_max_(domain_max), grid_size_(grid_size), order_(order) {
    if (!std::isfinite(domain_min) || !std::isfinite(domain_max) || domain_min >= domain_max)
        throw std::invalid_argument("SplineGrid: domain_min must be < domain_max and finite");
    if (grid_size < 1)
        throw std::invalid_argument("SplineGrid: grid_size must be >= 1");
    if (order < 0)
        throw std::invalid_argument("SplineGrid: order must be >= 0");

    spacing_ = (domain_max_ - domain_min_) / grid_size_;
    knots_.resize(static_cast<size_t>(grid_size_ + 2 * order_ + 1));
    for (int i = 0; i < static_cast<int>(knots_.size()); ++i)
        knots_[static_cast<size_t>(i)] = domain_min_ + (i - order_) * spacing_;
}

int SplineGrid::span_index(double x) const {
    double cx = clamp(x);
    int j = order_ + static_cast<int>(std::floor((cx - domain_min_) / spacing_));
    if (j < order_) j = order_;
    if (j > order_ + grid_size_ - 1) j = order_ + grid_size_ - 1;
    return j;
}

int basis_eval_local(const SplineGrid& grid, double x, double* vals) {
    if (!std::isfinite(x))
        throw std::invalid_argument("basis_eval: x must be finite");

    const int k = grid.order();
    const double cx = grid.clamp(x);
    const int j = grid.span_index(cx);
    const std::vector<double>& t = grid.knots();

    // Cox-de Boor, local triangular scheme: after pass d, vals[0..d] hold the
    // order-d bases B_{j-d..j,d}(cx). Knots are strictly increasing so the
    // denominators never vanish.
    vals[0] = 1.0;
    for (int d = 1; d <= k; ++d) {
        double saved = 0.0;
        for (int r = 0; r < d; ++r) {
            const double right = t[static_cast<size_t>(j + r + 1)] - cx;
            const double left = cx - t[static_cast<size_t>(j + 1 - d + r)];
            const double temp = vals[r] / (right + left);
            vals[r] = saved + right * temp;
            saved = left * temp;
        }
        vals[d] = saved;
    }
    // rounding at knot boundaries can leave a -1e-44 where an exact zero
    // belongs; the basis is nonnegative by definition
    for (int r = 0; r <= k; ++r)
        if (vals[r] < 0.0) vals[r] = 0.0;
    return j - k;
}

int basis_grad_local(const SplineGrid& grid, double x, double* vals) {
    if (!std::isfinite(x))
        throw std::invalid_argument("basis_grad: x must be finite");

    const int k = grid.order();
    const double cx = grid.clamp(x);
    const int j = grid.span_index(cx);

    if (k == 0) {
        vals[0] = 0.0;
        return j;
    }

    const std::vector<double>& t = grid.knots();

    // Order k-1 bases at the same span: lower[r] = B_{j-k+1+r, k-1}(cx).
    std::vector<double> lower(static_cast<size_t>(k));
    lower[0] = 1.0;
    for (int d = 1; d <= k - 1; ++d) {
        double saved = 0.0;
        for (int r = 0; r < d; ++r) {
            const double right = t[static_cast<size_t>(j + r + 1)] - cx;
            const double left = cx - t[static_cast<size_t>(j + 1 - d + r)];
            const double temp = lower[static_cast<size_t>(r)] / (right + left);
            lower[static_cast<size_t>(r)] = saved + right * temp;
            saved = left * temp;
        }
        lower[static_cast<size_t>(d)] = saved;
    }

    // dB_{i,k}/dx = k * (B_{i,k-1}/(t_{i+k}-t_i) - B_{i+1,k-1}/(t_{i+k+1}-t_{i+1}))
    const int first = j - k;
    for (int r = 0; r <= k; ++r) {
        const int i = first + r;
        double a = 0.0;
        if (r >= 1)
            a = lower[static_cast<size_t>(r - 1)] /
                (t[static_cast<size_t>(i + k)] - t[static_cast<size_t>(i)]);
        double b = 0.0;
        if (r <= k - 1)
            b = lower[static_cast<size_t>(r)] /
                (t[static_cast<size_t>(i + k + 1)] - t[static_cast<size_t>(i + 1)]);
        vals[r] = k * (a - b);
    }
    return first;
}

std::vector<double> basis_eval(const SplineGrid& grid, double x) {
    std::vector<double> out(static_cast<size_t>(grid.basis_count()), 0.0);
    std::vector<double> window(static_cast<size_t>(grid.order() + 1));
    const int first = basis_eval_local(grid, x, window.data());
    for (int r = 0; r <= grid.order(); ++r)
        out[static_cast<size_t>(first + r)] = window[static_cast<size_t>(r)];
    return out;
}

std::vector<double> basis_grad(const SplineGrid& grid, double x) {
    std::vector<double> out(static_cast<size_t>(grid.basis_count()), 0.0);
    std::vector<double> window(static_cast<size_t>(grid.order() + 1));
    const int first = basis_grad_local(grid, x, window.data());
    const int count = grid.order() == 0 ? 1 : grid.order() + 1;
    for (int r = 0; r < count; ++r)
        out[static_cast<size_t>(first + r)] = window[static_cast<size_t>(r)];
    return out;
}

}  // namespace kanood
