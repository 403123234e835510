#include "hypoflow/functionals.hpp"

#include <algorithm>
#include <cmath>

namespace hypoflow {

namespace {
constexpr double kFloor = 1e-14;
}

double phi_entropy(const GaussianGrid& g, const PhiFamily& fam, const std::vector<double>& w) {
    std::vector<double> pw(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) pw[i] = phi_eval(fam, std::max(w[i], 0.0));
    const double mass = g.integrate(w);
    return g.integrate(pw) - phi_eval(fam, std::max(mass, 0.0));
}

double fisher_information(const GaussianGrid& g, const PhiFamily& fam,
                          const std::vector<double>& w, int stencil_order) {
    std::vector<double> integrand(w.size(), 0.0);
    for (int a = 0; a < g.dim(); ++a) {
        auto dw = gradient_axis(g, w, a, stencil_order);
        for (std::size_t i = 0; i < w.size(); ++i) integrand[i] += dw[i] * dw[i];
    }
    for (std::size_t i = 0; i < w.size(); ++i)
        integrand[i] *= phi_eval(fam, std::max(w[i], kFloor), 2);
    return g.integrate(integrand);
}

double grad_sq_axis(const GaussianGrid& g, const std::vector<double>& f, int axis,
                    int stencil_order) {
    auto df = gradient_axis(g, f, axis, stencil_order);
    for (auto& v : df) v *= v;
    return g.integrate(df);
}

double grad_cross(const GaussianGrid& g, const std::vector<double>& f, int axis_a, int axis_b,
                  int stencil_order) {
    auto da = gradient_axis(g, f, axis_a, stencil_order);
    auto db = gradient_axis(g, f, axis_b, stencil_order);
    for (std::size_t i = 0; i < da.size(); ++i) da[i] *= db[i];
    return g.integrate(da);
}

double lq_norm(const GaussianGrid& g, const std::vector<double>& f, double q) {
    if (q < 1.0) throw std::invalid_argument("lq_norm: q must be >= 1");
    std::vector<double> a(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) a[i] = std::pow(std::abs(f[i]), q);
    return std::pow(g.integrate(a), 1.0 / q);
}

}  // namespace hypoflow
