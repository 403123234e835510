#pragma once

#include <vector>

#include "hypoflow/functionals.hpp"
#include "hypoflow/grid.hpp"
#include "hypoflow/phi.hpp"

namespace hypoflow {

/// Gauss-Hermite quadrature for the standard normal weight: nodes xi_k and
/// weights w_k with sum w_k = 1 (weights renormalised), so that
/// E[f(xi)] ~= sum w_k f(xi_k).
void gauss_hermite_normal(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// base index and 4 Lagrange weights for cubic interpolation of a function
/// sampled on uniform nodes [-L, L] at target y (clamped to the grid).
void cubic_weights(double y, double L, double h, std::size_t n, std::size_t& base,
                   double w[4]);

/// Dense n x n one-dimensional exact OU transition matrix for time step dt:
///   (K w)(x_i) = E[ w(x_i e^{-dt} + sqrt(1 - e^{-2dt}) xi) ],
/// expectation over 32 Gauss-Hermite nodes, w read through cubic
/// interpolation. Rows sum to 1 exactly up to round-off.
std::vector<double> ou_kernel_matrix(const GaussianGrid& g, double dt, int n_hermite = 32);

/// One exact-kernel OU step, with negative-undershoot clamping and
/// multiplicative mass renormalisation. Returns the raw (pre-renormalisation)
/// relative mass defect of the step.
double ou_step(const GaussianGrid& g, const std::vector<double>& kernel, std::vector<double>& w);

/// Stationary-translate oracle: w(x) = exp(x a - a^2/2) with a = x0 e^{-t}.
std::vector<double> exact_fp_oracle(const GaussianGrid& g, double x0, double t);

struct DecayTrace {
    std::vector<double> times;
    std::vector<double> p_values;                 // the p channels recorded
    std::vector<std::vector<double>> entropy;     // [channel][sample]
    std::vector<std::vector<double>> fisher;      // [channel][sample]
    std::vector<std::vector<double>> ck_bound;    // CK lower bound on E (mass-normalised field)
    double max_raw_mass_defect = 0.0;             // largest per-step defect seen
};

struct EvolveFpOptions {
    double T = 5.0;
    double dt = 1e-3;
    std::size_t sample_every = 50;  // in steps
    int n_hermite = 32;
    int stencil_order = 4;
    bool check_production_identity = false;  // |dE/dt + I| <= budget at interior samples
    double production_budget = 0.0;          // 0 => auto: 50*(dt^2 + h^4)
};

/// Evolve w0 under the OU flow and record E and I for each p channel.
/// Aborts (throws) if any step's raw mass drift exceeds 1e-6, and
/// enforces entropy monotonicity per sample to 1e-10.
DecayTrace evolve_fp(const GaussianGrid& g, std::vector<double> w0,
                     const std::vector<double>& p_list, const EvolveFpOptions& opt);

/// F(s) = [1 + s - (1+s)^{kappa_p}]/(1 - kappa_p); the kappa_p = 0 limit is
/// F(s) = s. Satisfies F(0) = 0, F'(0) = 1, F(s) > s for s > 0 if kappa_p>0.
double improved_F(const PhiFamily& fam, double s);

struct ImprovedEepReport {
    double min_margin_static;   // min over t of I - 2 F(E)
    double min_margin_dynamic;  // min over interior t of -(dI/dt + 2I) - kp I^2/(1+(p-1)E)
};

/// Evaluate the improved entropy - entropy production estimates along one
/// p-channel of a trace; dI/dt by central differences on the sample times.
ImprovedEepReport check_improved_eep(const DecayTrace& trace, std::size_t channel,
                                     const PhiFamily& fam);

/// Integrate the comparison ODE e' = -2 F(e) with classical RK4; returns the
/// bound sampled at the given times (times[0] carries e0).
std::vector<double> integrate_improved_ode(const PhiFamily& fam, double e0,
                                           const std::vector<double>& times);

/// Least-squares slope of -log(values) vs time over [window_lo, window_hi].
double fit_decay_rate(const std::vector<double>& times, const std::vector<double>& values,
                      double window_lo, double window_hi);

/// Both sides of the Csiszar-Kullback estimate for a mass-1 field:
///   E[w] >= 2^{-2/p} p min{1, ||w||_p^{p-2}} ||w-1||_p^2.
struct CkBound {
    double bound;
    double entropy;
};
CkBound csiszar_kullback_bound(const GaussianGrid& g, const PhiFamily& fam,
                               const std::vector<double>& w);

}  // namespace hypoflow
