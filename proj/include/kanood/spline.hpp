#pragma once

#include <vector>

namespace kanood {

struct GridSpec {
    int grid_size = 50;
    int order = 3;
    double domain_min = -1.0;
    double domain_max = 1.0;
};

/// Uniform B-spline knot grid over [domain_min, domain_max] with G intervals
/// and spline order k. The knot vector has G + 2k + 1 entries at constant
/// spacing (domain_max - domain_min) / G, extended k knots beyond each end,
/// which supports G + k basis functions forming a partition of unity on the
/// domain. Inputs outside the domain are clamped before evaluation.
class SplineGrid {
public:
    SplineGrid(double domain_min, double domain_max, int grid_size, int order = 3);
    explicit SplineGrid(const GridSpec& spec)
        : SplineGrid(spec.domain_min, spec.domain_max, spec.grid_size, spec.order) {}

    double domain_min() const { return domain_min_; }
    double domain_max() const { return domain_max_; }
    int grid_size() const { return grid_size_; }
    int order() const { return order_; }
    const std::vector<double>& knots() const { return knots_; }

    int basis_count() const { return grid_size_ + order_; }
    double spacing() const { return spacing_; }

    double clamp(double x) const {
        if (x < domain_min_) return domain_min_;
        if (x > domain_max_) return domain_max_;
        return x;
    }

    // Knot index j with knots[j] <= clamp(x) < knots[j+1], restricted to the
    // interior intervals [order, order + grid_size - 1]. x == domain_max maps
    // to the last interior interval.
    int span_index(double x) const;

    GridSpec spec() const { return {grid_size_, order_, domain_min_, domain_max_}; }

    bool operator==(const SplineGrid& other) const {
        return domain_min_ == other.domain_min_ && domain_max_ == other.domain_max_ &&
               grid_size_ == other.grid_size_ && order_ == other.order_;
    }

private:
    double domain_min_;
    double domain_max_;
    int grid_size_;
    int order_;
    double spacing_;
    std::vector<double> knots_;
};

// Values of the k+1 basis functions active at x, written to vals[0..k].
// Returns the index of the first active basis; all other bases are exactly 0.
// vals must have room for order+1 doubles. Throws std::invalid_argument on
// non-finite x.
int basis_eval_local(const SplineGrid& grid, double x, double* vals);

// Derivatives dB_i/dx of the active window, same layout as basis_eval_local.
// Order-0 grids yield zeros.
int basis_grad_local(const SplineGrid& grid, double x, double* vals);

// Full-length (basis_count) vectors; thin wrappers over the local versions.
std::vector<double> basis_eval(const SplineGrid& grid, double x);
std::vector<double> basis_grad(const SplineGrid& grid, double x);

}  // namespace kanood
