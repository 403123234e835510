#include "hypoflow/fp_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hypoflow {

void gauss_hermite_normal(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_hermite_normal: n must be positive");
    // Roots of the physicists' Hermite polynomial H_n by Newton iteration
    // with the standard asymptotic initial guesses, then rescaled by sqrt(2)
    // to the standard-normal convention.
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        else if (i == 1)
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * nodes[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * nodes[1];
        else
            z = 2.0 * z - nodes[i - 2];

        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = std::pow(M_PI, -0.25);
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 -
                     std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        nodes[i] = z;
        nodes[n - 1 - i] = -z;
        weights[i] = 2.0 / (pp * pp);
        weights[n - 1 - i] = weights[i];
    }
    // rescale to the standard normal and renormalise the weights to sum 1
    double wsum = 0.0;
    for (int i = 0; i < n; ++i) wsum += weights[i];
    for (int i = 0; i < n; ++i) {
        nodes[i] *= std::sqrt(2.0);
        weights[i] /= wsum;
    }
    std::sort(nodes.begin(), nodes.end());
}

void cubic_weights(double y, double L, double h, std::size_t n, std::size_t& base, double w[4]) {
    y = std::clamp(y, -L, L);
    long j = static_cast<long>(std::floor((y + L) / h));
    j = std::clamp(j, 1L, static_cast<long>(n) - 3);
    const double t = (y - (-L + h * static_cast<double>(j))) / h;
    w[0] = -t * (t - 1.0) * (t - 2.0) / 6.0;
    w[1] = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    w[2] = -(t + 1.0) * t * (t - 2.0) / 2.0;
    w[3] = (t + 1.0) * t * (t - 1.0) / 6.0;
    base = static_cast<std::size_t>(j - 1);
}

std::vector<double> ou_kernel_matrix(const GaussianGrid& g, double dt, int n_hermite) {
    if (dt <= 0.0) throw std::invalid_argument("ou_kernel_matrix: dt must be positive");
    const std::size_t n = g.points_per_axis();
    std::vector<double> gh_x, gh_w;
    gauss_hermite_normal(n_hermite, gh_x, gh_w);

    const double e = std::exp(-dt);
    const double s = std::sqrt(1.0 - e * e);
    const auto& x = g.nodes();
    std::vector<double> K(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double mean = x[i] * e;
        for (int k = 0; k < n_hermite; ++k) {
            std::size_t base;
            double w[4];
            cubic_weights(mean + s * gh_x[k], g.extent(), g.spacing(), n, base, w);
            for (int q = 0; q < 4; ++q) K[i * n + base + q] += gh_w[k] * w[q];
        }
    }
    return K;
}

double ou_step(const GaussianGrid& g, const std::vector<double>& kernel, std::vector<double>& w) {
    const std::size_t n = g.points_per_axis();
    if (g.dim() != 1 || w.size() != n || kernel.size() != n * n)
        throw std::invalid_argument("ou_step: size mismatch");
    const double m0 = g.integrate(w);
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        const double* row = kernel.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) acc += row[j] * w[j];
        out[i] = std::max(acc, 0.0);
    }
    const double m1 = g.integrate(out);
    const double defect = (m0 != 0.0) ? std::abs(m1 - m0) / std::abs(m0) : std::abs(m1);
    if (m1 > 0.0 && m0 > 0.0) {
        const double scale = m0 / m1;
        for (auto& v : out) v *= scale;
    }
    w = std::move(out);
    return defect;
}

std::vector<double> exact_fp_oracle(const GaussianGrid& g, double x0, double t) {
    if (g.dim() != 1) throw std::invalid_argument("exact_fp_oracle: 1-D grids only");
    const double a = x0 * std::exp(-t);
    const auto& x = g.nodes();
    std::vector<double> w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) w[i] = std::exp(x[i] * a - 0.5 * a * a);
    return w;
}

DecayTrace evolve_fp(const GaussianGrid& g, std::vector<double> w0,
                     const std::vector<double>& p_list, const EvolveFpOptions& opt) {
    if (g.dim() != 1) throw std::invalid_argument("evolve_fp: 1-D grids only");
    if (opt.dt <= 0.0 || opt.T <= 0.0) throw std::invalid_argument("evolve_fp: bad T or dt");
    for (double v : w0)
        if (v < 0.0) throw std::invalid_argument("evolve_fp: initial data must be nonnegative");

    const auto kernel = ou_kernel_matrix(g, opt.dt, opt.n_hermite);
    const std::size_t n_steps = static_cast<std::size_t>(std::llround(opt.T / opt.dt));

    DecayTrace tr;
    tr.p_values = p_list;
    tr.entropy.assign(p_list.size(), {});
    tr.fisher.assign(p_list.size(), {});
    tr.ck_bound.assign(p_list.size(), {});

    std::vector<PhiFamily> fams;
    fams.reserve(p_list.size());
    for (double p : p_list) fams.emplace_back(p);

    for (std::size_t s = 0; s <= n_steps; ++s) {
        // exact multiples of dt: accumulation error would shift samples off their nominal times
        const double t = static_cast<double>(s) * opt.dt;
        if (s % opt.sample_every == 0 || s == n_steps) {
            tr.times.push_back(t);
            const double mass = g.integrate(w0);
            std::vector<double> wn(w0);
            if (mass > 0.0)
                for (auto& v : wn) v /= mass;
            for (std::size_t c = 0; c < fams.size(); ++c) {
                const double E = phi_entropy(g, fams[c], w0);
                if (!tr.entropy[c].empty() && E > tr.entropy[c].back() + 1e-10)
                    throw std::runtime_error("evolve_fp: entropy increased beyond tolerance");
                tr.entropy[c].push_back(E);
                tr.fisher[c].push_back(fisher_information(g, fams[c], w0, opt.stencil_order));
                tr.ck_bound[c].push_back(csiszar_kullback_bound(g, fams[c], wn).bound);
            }
        }
        if (s == n_steps) break;
        const double defect = ou_step(g, kernel, w0);
        tr.max_raw_mass_defect = std::max(tr.max_raw_mass_defect, defect);
        if (std::abs(defect) > 1e-6)
            throw std::runtime_error("evolve_fp: raw mass drift exceeded 1e-6 in one step");
    }

    if (opt.check_production_identity && tr.times.size() >= 3) {
        const double h = g.spacing();
        for (std::size_t c = 0; c < fams.size(); ++c) {
            for (std::size_t k = 1; k + 1 < tr.times.size(); ++k) {
                const double ds = 0.5 * (tr.times[k + 1] - tr.times[k - 1]);
                // compare dE/dt against the Simpson average of I on the same
                // stencil: both sides then carry O(ds^4) discretisation error
                const double budget =
                    opt.production_budget > 0.0
                        ? opt.production_budget
                        : 50.0 * (opt.dt * opt.dt + h * h * h * h) + ds * ds * ds * ds;
                const double dEdt =
                    (tr.entropy[c][k + 1] - tr.entropy[c][k - 1]) / (2.0 * ds);
                const double I_bar = (tr.fisher[c][k - 1] + 4.0 * tr.fisher[c][k] +
                                      tr.fisher[c][k + 1]) / 6.0;
                if (std::abs(dEdt + I_bar) > budget)
                    throw std::runtime_error("evolve_fp: dE/dt = -I identity violated beyond budget");
            }
        }
    }
    return tr;
}

double improved_F(const PhiFamily& fam, double s) {
    if (s < 0.0) throw std::domain_error("improved_F: s must be nonnegative");
    const double kp = fam.kappa_p();
    if (kp < 1e-14) return s;
    return (1.0 + s - std::pow(1.0 + s, kp)) / (1.0 - kp);
}

ImprovedEepReport check_improved_eep(const DecayTrace& trace, std::size_t channel,
                                     const PhiFamily& fam) {
    if (fam.p <= 1.0 || fam.p >= 2.0)
        throw std::invalid_argument("check_improved_eep: p must lie in (1,2)");
    if (channel >= trace.p_values.size())
        throw std::invalid_argument("check_improved_eep: bad channel");
    const auto& t = trace.times;
    const auto& E = trace.entropy[channel];
    const auto& I = trace.fisher[channel];
    const double kp = fam.kappa_p();

    ImprovedEepReport rep{1e300, 1e300};
    for (std::size_t k = 0; k < t.size(); ++k)
        rep.min_margin_static = std::min(rep.min_margin_static, I[k] - 2.0 * improved_F(fam, E[k]));
    for (std::size_t k = 1; k + 1 < t.size(); ++k) {
        const double dIdt = (I[k + 1] - I[k - 1]) / (t[k + 1] - t[k - 1]);
        const double margin =
            -(dIdt + 2.0 * I[k]) - kp * I[k] * I[k] / (1.0 + (fam.p - 1.0) * E[k]);
        rep.min_margin_dynamic = std::min(rep.min_margin_dynamic, margin);
    }
    return rep;
}

std::vector<double> integrate_improved_ode(const PhiFamily& fam, double e0,
                                           const std::vector<double>& times) {
    if (e0 < 0.0) throw std::invalid_argument("integrate_improved_ode: e0 must be nonnegative");
    auto rhs = [&](double e) { return -2.0 * improved_F(fam, std::max(e, 0.0)); };
    std::vector<double> out;
    out.reserve(times.size());
    double e = e0;
    out.push_back(e);
    for (std::size_t k = 1; k < times.size(); ++k) {
        // sub-step so that the RK4 step never exceeds 1e-3
        const double span = times[k] - times[k - 1];
        const std::size_t nsub = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / 1e-3)));
        const double dt = span / static_cast<double>(nsub);
        for (std::size_t s = 0; s < nsub; ++s) {
            const double k1 = rhs(e);
            const double k2 = rhs(e + 0.5 * dt * k1);
            const double k3 = rhs(e + 0.5 * dt * k2);
            const double k4 = rhs(e + dt * k3);
            e += dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
            e = std::max(e, 0.0);
        }
        out.push_back(e);
    }
    return out;
}

double fit_decay_rate(const std::vector<double>& times, const std::vector<double>& values,
                      double window_lo, double window_hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    // tolerant window edges: a sample nominally at the boundary must not drop out of the
    // fit through rounding, since the fitted slope is sensitive to endpoint inclusion
    const double tol = 1e-9 * (1.0 + std::abs(window_lo) + std::abs(window_hi));
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] < window_lo - tol || times[k] > window_hi + tol) continue;
        if (values[k] <= 0.0)
            throw std::invalid_argument("fit_decay_rate: nonpositive value in window");
        const double y = std::log(values[k]);
        sx += times[k];
        sy += y;
        sxx += times[k] * times[k];
        sxy += times[k] * y;
        ++m;
    }
    if (m < 10) throw std::invalid_argument("fit_decay_rate: window needs at least 10 samples");
    const double denom = static_cast<double>(m) * sxx - sx * sx;
    if (denom == 0.0) return 0.0;
    return -(static_cast<double>(m) * sxy - sx * sy) / denom;
}

CkBound csiszar_kullback_bound(const GaussianGrid& g, const PhiFamily& fam,
                               const std::vector<double>& w) {
    const double mass = g.integrate(w);
    if (std::abs(mass - 1.0) > 1e-8)
        throw std::invalid_argument("csiszar_kullback_bound: field must have unit mass");
    const double p = fam.p;
    const double wp = lq_norm(g, w, p);
    std::vector<double> dev(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) dev[i] = w[i] - 1.0;
    const double devp = lq_norm(g, dev, p);
    const double bound = std::pow(2.0, -2.0 / p) * fam.ck_constant() *
                         std::min(1.0, std::pow(wp, p - 2.0)) * devp * devp;
    return {bound, phi_entropy(g, fam, w)};
}

}  // namespace hypoflow
