#include "hypoflow/kfp_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hypoflow/functionals.hpp"
#include "hypoflow/hypo_algebra.hpp"

namespace hypoflow {

namespace {
constexpr double kFloor = 1e-14;

double closed_form_lambda1(double kappa) { return eigenvalues_m2_closed_form(kappa)[0]; }
}  // namespace

RotationOp::RotationOp(const GaussianGrid& g, double theta) {
    if (g.dim() != 2) throw std::invalid_argument("RotationOp: 2-D grid required");
    n_ = g.points_per_axis();
    const std::size_t N = n_ * n_;
    idx_.resize(16 * N);
    wts_.resize(16 * N);
    const double c = std::cos(theta), s = std::sin(theta);
    const auto& x = g.nodes();
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t k = 0; k < n_; ++k) {
            const double xf = x[i] * c - x[k] * s;
            const double vf = x[i] * s + x[k] * c;
            std::size_t bi, bk;
            double wi[4], wk[4];
            cubic_weights(xf, g.extent(), g.spacing(), n_, bi, wi);
            cubic_weights(vf, g.extent(), g.spacing(), n_, bk, wk);
            const std::size_t m = (i * n_ + k) * 16;
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) {
                    idx_[m + a * 4 + b] = static_cast<std::uint32_t>((bi + a) * n_ + (bk + b));
                    wts_[m + a * 4 + b] = wi[a] * wk[b];
                }
        }
    }
}

void RotationOp::apply(const std::vector<double>& in, std::vector<double>& out) const {
    const std::size_t N = n_ * n_;
    if (in.size() != N) throw std::invalid_argument("RotationOp::apply: size mismatch");
    out.resize(N);
    for (std::size_t m = 0; m < N; ++m) {
        const std::uint32_t* id = idx_.data() + m * 16;
        const double* w = wts_.data() + m * 16;
        double acc = 0.0;
        for (int q = 0; q < 16; ++q) acc += w[q] * in[id[q]];
        out[m] = acc;
    }
}

void ou_v_apply(const GaussianGrid& g2, const std::vector<double>& kernel,
                const std::vector<double>& in, std::vector<double>& out) {
    const std::size_t n = g2.points_per_axis();
    if (g2.dim() != 2 || in.size() != n * n || kernel.size() != n * n)
        throw std::invalid_argument("ou_v_apply: size mismatch");
    out.resize(n * n);
    for (std::size_t ix = 0; ix < n; ++ix) {
        const double* line = in.data() + ix * n;
        double* dst = out.data() + ix * n;
        for (std::size_t iv = 0; iv < n; ++iv) {
            const double* row = kernel.data() + iv * n;
            double acc = 0.0;
            for (std::size_t jv = 0; jv < n; ++jv) acc += row[jv] * line[jv];
            dst[iv] = acc;
        }
    }
}

StrangStepper::StrangStepper(const GaussianGrid& g2, double dt, int n_hermite)
    : half_rotation(g2, 0.5 * dt) {
    if (dt <= 0.0) throw std::invalid_argument("StrangStepper: dt must be positive");
    // the v-axis of the tensor grid is a copy of the x-axis
    GaussianGrid axis(1, g2.extent(), g2.points_per_axis());
    v_kernel = ou_kernel_matrix(axis, dt, n_hermite);
}

double StrangStepper::step(const GaussianGrid& g2, std::vector<double>& g) const {
    const double m0 = g2.integrate(g);
    half_rotation.apply(g, scratch_a);
    ou_v_apply(g2, v_kernel, scratch_a, scratch_b);
    half_rotation.apply(scratch_b, scratch_a);
    for (auto& v : scratch_a) v = std::max(v, 0.0);
    const double m1 = g2.integrate(scratch_a);
    const double defect = (m0 != 0.0) ? std::abs(m1 - m0) / std::abs(m0) : std::abs(m1);
    g = scratch_a;
    if (m1 > 0.0 && m0 > 0.0) {
        const double scale = m0 / m1;
        for (auto& v : g) v *= scale;
    }
    return defect;
}

void kfp_oracle_center(double x0, double v0, double t, double& x_star, double& v_star) {
    // x' = v, v' = -x - v, RK4 at fixed step
    double x = x0, v = v0;
    const double dt = 1e-4;
    const std::size_t nst = static_cast<std::size_t>(std::ceil(t / dt));
    const double h = (nst > 0) ? t / static_cast<double>(nst) : 0.0;
    for (std::size_t s = 0; s < nst; ++s) {
        const double k1x = v, k1v = -x - v;
        const double k2x = v + 0.5 * h * k1v, k2v = -(x + 0.5 * h * k1x) - (v + 0.5 * h * k1v);
        const double k3x = v + 0.5 * h * k2v, k3v = -(x + 0.5 * h * k2x) - (v + 0.5 * h * k2v);
        const double k4x = v + h * k3v, k4v = -(x + h * k3x) - (v + h * k3v);
        x += h * (k1x + 2.0 * k2x + 2.0 * k3x + k4x) / 6.0;
        v += h * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) / 6.0;
    }
    x_star = x;
    v_star = v;
}

std::vector<double> exact_kfp_oracle(const GaussianGrid& g2, double x0, double v0, double t) {
    if (g2.dim() != 2) throw std::invalid_argument("exact_kfp_oracle: 2-D grid required");
    double xs, vs;
    kfp_oracle_center(x0, v0, t, xs, vs);
    const std::size_t n = g2.points_per_axis();
    const auto& x = g2.nodes();
    std::vector<double> g(n * n);
    const double norm = 0.5 * (xs * xs + vs * vs);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            g[i * n + k] = std::exp(x[i] * xs + x[k] * vs - norm);
    return g;
}

std::vector<double> compute_h(const PhiFamily& fam, const std::vector<double>& g) {
    std::vector<double> h(g.size());
    const double e = 0.5 * fam.p;
    for (std::size_t i = 0; i < g.size(); ++i) h[i] = std::pow(std::max(g[i], kFloor), e);
    return h;
}

KineticDiagnostics kinetic_diagnostics(const GaussianGrid& g2, const PhiFamily& fam,
                                       const std::vector<double>& g, double t, double lambda,
                                       int stencil_order) {
    KineticDiagnostics d{};
    d.t = t;
    d.entropy = phi_entropy(g2, fam, g);
    const auto h = compute_h(fam, g);
    auto hx = gradient_axis(g2, h, 0, stencil_order);
    auto hv = gradient_axis(g2, h, 1, stencil_order);
    std::vector<double> tmp(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) tmp[i] = hv[i] * hv[i];
    d.grad_v_sq = g2.integrate(tmp);
    for (std::size_t i = 0; i < h.size(); ++i) tmp[i] = hx[i] * hx[i];
    d.grad_x_sq = g2.integrate(tmp);
    for (std::size_t i = 0; i < h.size(); ++i) tmp[i] = hx[i] * hv[i];
    d.cross = g2.integrate(tmp);
    d.J_half = d.grad_v_sq + d.cross + d.grad_x_sq;
    d.J_lambda = d.grad_v_sq + 2.0 * lambda * d.cross + d.grad_x_sq;
    const double et = std::exp(t);
    d.a = et * d.grad_v_sq;
    d.b = et * d.cross;
    d.c = et * d.grad_x_sq;
    d.j = d.a + d.b + d.c;
    return d;
}

KineticTrace evolve_kfp(const GaussianGrid& g2, std::vector<double> g0,
                        const std::vector<double>& p_list, const EvolveKfpOptions& opt) {
    if (g2.dim() != 2) throw std::invalid_argument("evolve_kfp: 2-D grid required");
    if (opt.dt <= 0.0 || opt.T <= 0.0) throw std::invalid_argument("evolve_kfp: bad T or dt");
    for (double v : g0)
        if (v < 0.0) throw std::invalid_argument("evolve_kfp: initial data must be nonnegative");

    const StrangStepper stepper(g2, opt.dt, opt.n_hermite);
    const std::size_t n_steps = static_cast<std::size_t>(std::llround(opt.T / opt.dt));

    KineticTrace tr;
    tr.p_values = p_list;
    tr.channels.assign(p_list.size(), {});
    std::vector<PhiFamily> fams;
    for (double p : p_list) fams.emplace_back(p);

    const PhiFamily ctrl_fam(opt.controller_p);
    const double lambda1p = closed_form_lambda1(ctrl_fam.kappa());
    double c0 = 0.0;
    double lambda_t = 0.5, prev_rho = 0.5, tau_partial = 0.0;
    bool prev_exp_branch = true;
    std::vector<double> a_history;  // for the running median
    double prev_sample_t = 0.0;

    for (std::size_t s = 0; s <= n_steps; ++s) {
        // exact multiples of dt: accumulation error would shift samples off their nominal times
        const double t = static_cast<double>(s) * opt.dt;
        const bool sample = (s % opt.sample_every == 0) || s == n_steps;
        if (sample) {
            const double lam_for_J = opt.controller.enabled ? lambda_t : 0.5;
            KineticDiagnostics ctrl_diag{};
            bool have_ctrl = false;
            for (std::size_t ch = 0; ch < fams.size(); ++ch) {
                auto d = kinetic_diagnostics(g2, fams[ch], g0, t, lam_for_J, opt.stencil_order);
                if (fams[ch].p == ctrl_fam.p) {
                    ctrl_diag = d;
                    have_ctrl = true;
                }
                tr.channels[ch].push_back(d);
            }
            tr.times.push_back(t);
            if (!have_ctrl)
                ctrl_diag = kinetic_diagnostics(g2, ctrl_fam, g0, t, lam_for_J, opt.stencil_order);

            if (ctrl_diag.a < 1e-3 * std::abs(ctrl_diag.j) && ctrl_diag.j > 0.0)
                tr.zero_crossings.push_back(t);

            if (opt.controller.enabled) {
                if (tr.times.size() == 1) c0 = 1.0 + (ctrl_fam.p - 1.0) * ctrl_diag.entropy;

                a_history.push_back(ctrl_diag.a);
                std::vector<double> sorted(a_history);
                std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
                const double median = sorted[sorted.size() / 2];
                const double a_star = opt.controller.a_star_fraction * median;

                double eps, rho;
                bool exp_branch = ctrl_diag.a >= a_star;
                if (exp_branch) {
                    const double nu_br = lambda1p / c0 * a_star;
                    eps = nu_br * std::exp(-t);
                    lambda_t = 0.5 * (1.0 + eps);
                    rho = 0.5 * (1.0 + nu_br / (nu_br + 3.0 * std::exp(t)));
                } else {
                    if (prev_exp_branch) lambda_t = 0.5;  // re-anchor at the crossing
                    eps = lambda1p / c0 * ctrl_diag.grad_v_sq;
                    rho = zeta(eps, lambda_t, opt.controller.nu_choice);
                    lambda_t += opt.controller.nu_choice * eps * (t - prev_sample_t);
                }
                lambda_t = std::clamp(lambda_t, 0.5, 1.0 - 1e-9);
                prev_exp_branch = exp_branch;

                if (tr.times.size() > 1)
                    tau_partial += (t - prev_sample_t) * ((2.0 * rho - 1.0) + (2.0 * prev_rho - 1.0)) * 0.5;
                prev_rho = rho;
                tr.controller.push_back({lambda_t, rho, eps, tau_partial, exp_branch});
            }
            prev_sample_t = t;
        }
        if (s == n_steps) break;
        const double defect = stepper.step(g2, g0);
        tr.max_raw_mass_defect = std::max(tr.max_raw_mass_defect, defect);
        if (defect > 1e-5)
            throw std::runtime_error("evolve_kfp: per-step mass defect exceeded 1e-5");
    }
    return tr;
}

TauEstimate estimate_tau(const KineticTrace& trace) {
    if (trace.controller.empty())
        throw std::invalid_argument("estimate_tau: controller trace required");
    const double tau = trace.controller.back().tau_partial;
    const std::size_t q = trace.controller.size() - trace.controller.size() / 4;
    const double earlier = trace.controller[q - 1].tau_partial;
    const double scale = std::max(std::abs(tau), 1e-12);
    return {tau, std::abs(tau - earlier) / scale < 0.01};
}

LemmaMargin check_lemma_quadratic_form(const GaussianGrid& g2, const PhiFamily& fam,
                                       const std::vector<double>& g, int stencil_order) {
    if (g2.dim() != 2) throw std::invalid_argument("check_lemma_quadratic_form: 2-D grid required");
    const auto h = compute_h(fam, g);
    std::vector<double> rooth(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) rooth[i] = std::sqrt(std::max(h[i], kFloor));

    const std::size_t n = g2.points_per_axis();
    const double hh = g2.spacing();

    auto hx = gradient_axis(g2, h, 0, stencil_order);
    auto hv = gradient_axis(g2, h, 1, stencil_order);
    auto rx = gradient_axis(g2, rooth, 0, stencil_order);
    auto rv = gradient_axis(g2, rooth, 1, stencil_order);

    // H_vv = d2h/dv2 along v-lines, H_xv by composing axis stencils
    std::vector<double> Hvv(h.size());
    for (std::size_t i = 0; i < n; ++i)
        second_derivative_line(h.data() + i * n, Hvv.data() + i * n, n, hh, stencil_order);
    auto Hxv = gradient_axis(g2, hv, 0, stencil_order);

    const double kappa = fam.kappa();
    const SymMat M1 = hypo_M1(0.5, 1.0);
    const SymMat M0 = hypo_M0(0.5, 1.0);
    const SymMat M2 = hypo_M2(0.5, 1.0, kappa);
    const double lambda1 = closed_form_lambda1(kappa);

    std::vector<double> lhs_f(h.size()), rhs_f(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double X[2] = {hv[i], hx[i]};
        const double Y[4] = {Hvv[i], Hxv[i], rv[i] * rv[i], rx[i] * rv[i]};
        double xm1 = 0.0, xm0 = 0.0, ym2 = 0.0, y2 = 0.0;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                xm1 += X[a] * M1.at(a, b) * X[b];
                xm0 += X[a] * M0.at(a, b) * X[b];
            }
        for (int a = 0; a < 4; ++a) {
            y2 += Y[a] * Y[a];
            for (int b = 0; b < 4; ++b) ym2 += Y[a] * M2.at(a, b) * Y[b];
        }
        lhs_f[i] = xm1 + ym2;
        rhs_f[i] = 0.5 * xm0 + lambda1 * y2;
    }
    const double lhs = g2.integrate(lhs_f);
    const double rhs = g2.integrate(rhs_f);
    return {lhs, rhs, lhs - rhs};
}

}  // namespace hypoflow
