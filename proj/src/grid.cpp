#include "hypoflow/grid.hpp"

#include <cmath>

namespace hypoflow {

GaussianGrid::GaussianGrid(int d, double L, std::size_t n, double tail_tol)
    : d_(d), L_(L), n_(n) {
    if (d != 1 && d != 2) throw std::invalid_argument("GaussianGrid: dim must be 1 or 2");
    if (n < 8) throw std::invalid_argument("GaussianGrid: need at least 8 points per axis");
    if (L <= 0.0) throw std::invalid_argument("GaussianGrid: extent must be positive");

    // Truncation control: the Gaussian mass outside [-L,L] per axis must be
    // below tail_tol. erfc(L/sqrt(2)) is that mass.
    if (std::erfc(L / std::sqrt(2.0)) > tail_tol)
        throw std::invalid_argument("GaussianGrid: extent too small for requested tail tolerance");

    h_ = 2.0 * L / static_cast<double>(n - 1);
    nodes_.resize(n);
    for (std::size_t i = 0; i < n; ++i) nodes_[i] = -L + h_ * static_cast<double>(i);

    // 1-d trapezoid weights against the exactly-normalised Gaussian.
    const double z1 = std::sqrt(2.0 * M_PI);
    std::vector<double> w1(n);
    for (std::size_t i = 0; i < n; ++i) {
        double tw = (i == 0 || i == n - 1) ? 0.5 * h_ : h_;
        w1[i] = tw * std::exp(-0.5 * nodes_[i] * nodes_[i]) / z1;
    }

    if (d == 1) {
        weights_ = std::move(w1);
    } else {
        weights_.resize(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) weights_[i * n + j] = w1[i] * w1[j];
    }
}

double GaussianGrid::coord(std::size_t i, int axis) const {
    if (axis < 0 || axis >= d_) throw std::invalid_argument("GaussianGrid::coord: bad axis");
    if (d_ == 1) return nodes_[i];
    return axis == 0 ? nodes_[i / n_] : nodes_[i % n_];
}

double GaussianGrid::integrate(const std::vector<double>& f) const {
    if (f.size() != weights_.size())
        throw std::invalid_argument("GaussianGrid::integrate: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * weights_[i];
    return acc;
}

std::vector<double> GaussianGrid::sample(
    const std::function<double(const std::vector<double>&)>& f) const {
    std::vector<double> out(size());
    std::vector<double> x(d_);
    for (std::size_t i = 0; i < size(); ++i) {
        for (int a = 0; a < d_; ++a) x[a] = coord(i, a);
        out[i] = f(x);
    }
    return out;
}

void derivative_line(const double* f, double* out, std::size_t n, double h, int order) {
    if (order != 2 && order != 4) throw std::invalid_argument("derivative_line: order must be 2 or 4");
    if (order == 2) {
        if (n < 3) throw std::invalid_argument("derivative_line: line too short");
        out[0] = (-1.5 * f[0] + 2.0 * f[1] - 0.5 * f[2]) / h;
        for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
        out[n - 1] = (1.5 * f[n - 1] - 2.0 * f[n - 2] + 0.5 * f[n - 3]) / h;
        return;
    }
    if (n < 6) throw std::invalid_argument("derivative_line: line too short for order 4");
    // order-4 one-sided closures at and next to the boundary
    out[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
    out[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
    for (std::size_t i = 2; i + 2 < n; ++i)
        out[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    out[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) /
                 (12.0 * h);
    out[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] +
                  3.0 * f[n - 5]) /
                 (12.0 * h);
}

void second_derivative_line(const double* f, double* out, std::size_t n, double h, int order) {
    if (order != 2 && order != 4)
        throw std::invalid_argument("second_derivative_line: order must be 2 or 4");
    const double h2 = h * h;
    if (order == 2) {
        if (n < 4) throw std::invalid_argument("second_derivative_line: line too short");
        out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
        for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
        out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
        return;
    }
    if (n < 7) throw std::invalid_argument("second_derivative_line: line too short for order 4");
    out[0] = (45.0 * f[0] - 154.0 * f[1] + 214.0 * f[2] - 156.0 * f[3] + 61.0 * f[4] -
              10.0 * f[5]) /
             (12.0 * h2);
    out[1] = (10.0 * f[0] - 15.0 * f[1] - 4.0 * f[2] + 14.0 * f[3] - 6.0 * f[4] + f[5]) /
             (12.0 * h2);
    for (std::size_t i = 2; i + 2 < n; ++i)
        out[i] = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) /
                 (12.0 * h2);
    out[n - 2] = (10.0 * f[n - 1] - 15.0 * f[n - 2] - 4.0 * f[n - 3] + 14.0 * f[n - 4] -
                  6.0 * f[n - 5] + f[n - 6]) /
                 (12.0 * h2);
    out[n - 1] = (45.0 * f[n - 1] - 154.0 * f[n - 2] + 214.0 * f[n - 3] - 156.0 * f[n - 4] +
                  61.0 * f[n - 5] - 10.0 * f[n - 6]) /
                 (12.0 * h2);
}

std::vector<double> gradient_axis(const GaussianGrid& g, const std::vector<double>& f, int axis,
                                  int order) {
    if (f.size() != g.size()) throw std::invalid_argument("gradient_axis: size mismatch");
    const std::size_t n = g.points_per_axis();
    std::vector<double> out(f.size());
    if (g.dim() == 1) {
        derivative_line(f.data(), out.data(), n, g.spacing(), order);
        return out;
    }
    if (axis == 1) {
        // contiguous lines
        for (std::size_t i = 0; i < n; ++i)
            derivative_line(f.data() + i * n, out.data() + i * n, n, g.spacing(), order);
    } else {
        std::vector<double> line(n), dline(n);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) line[i] = f[i * n + j];
            derivative_line(line.data(), dline.data(), n, g.spacing(), order);
            for (std::size_t i = 0; i < n; ++i) out[i * n + j] = dline[i];
        }
    }
    return out;
}

}  // namespace hypoflow
