#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace hypoflow {

/// Tensor-product grid on [-L,L]^d carrying trapezoid quadrature weights
/// against the standard Gaussian measure dgamma = Z^{-1} e^{-|x|^2/2} dx,
/// with Z = (2 pi)^{d/2} taken exactly (no numerical normalisation).
///
/// d is 1 or 2. For d=2 the flattened index is i0 * n + i1, i.e. the second
/// coordinate is contiguous in memory.
class GaussianGrid {
public:
    GaussianGrid(int d, double L, std::size_t n, double tail_tol = 1e-10);

    int dim() const { return d_; }
    double extent() const { return L_; }
    std::size_t points_per_axis() const { return n_; }
    std::size_t size() const { return weights_.size(); }
    double spacing() const { return h_; }

    /// 1-d node coordinates (shared by every axis).
    const std::vector<double>& nodes() const { return nodes_; }

    /// Gaussian quadrature weight attached to each flattened node.
    const std::vector<double>& weights() const { return weights_; }

    /// Coordinate of flattened node i along the given axis.
    double coord(std::size_t i, int axis) const;

    /// integral of f dgamma over the grid (f given as flattened samples).
    double integrate(const std::vector<double>& f) const;

    /// Sample a function of position into a flattened field.
    std::vector<double> sample(const std::function<double(const std::vector<double>&)>& f) const;

private:
    int d_;
    double L_;
    std::size_t n_;
    double h_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// Order-2 or order-4 first derivative of a 1-d line of samples with matching
/// one-sided closures at the ends. Used on grid lines in each direction.
void derivative_line(const double* f, double* out, std::size_t n, double h, int order);

/// Second derivative, same conventions.
void second_derivative_line(const double* f, double* out, std::size_t n, double h, int order);

/// Gradient component along `axis` of a flattened field on `g`.
std::vector<double> gradient_axis(const GaussianGrid& g, const std::vector<double>& f,
                                  int axis, int order = 4);

}  // namespace hypoflow
