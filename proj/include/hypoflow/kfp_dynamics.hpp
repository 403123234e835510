#pragma once

#include <cstdint>
#include <vector>

#include "hypoflow/fp_dynamics.hpp"
#include "hypoflow/grid.hpp"
#include "hypoflow/phi.hpp"

namespace hypoflow {

/// Precomputed semi-Lagrangian rotation of the (x,v) plane by a fixed angle.
/// For harmonic confinement the transport flow is the rigid rotation
/// (x,v) -> (x cos t - v sin t, x sin t + v cos t); pulling back through the
/// inverse map and bicubic interpolation gives 16 weights per node.
class RotationOp {
public:
    RotationOp(const GaussianGrid& g, double theta);

    void apply(const std::vector<double>& in, std::vector<double>& out) const;

private:
    std::size_t n_;
    std::vector<std::uint32_t> idx_;  // 16 source indices per node
    std::vector<double> wts_;         // 16 weights per node
};

/// Exact OU step in v applied to every x-line of a phase-space field
/// (layout: values[ix*n + iv], v contiguous). kernel is the 1-D matrix from
/// ou_kernel_matrix on the same axis grid.
void ou_v_apply(const GaussianGrid& g2, const std::vector<double>& kernel,
                const std::vector<double>& in, std::vector<double>& out);

/// One Strang step transport(dt/2) o ou_v(dt) o transport(dt/2) with
/// positivity clamping and mass renormalisation; returns the raw relative
/// mass defect of the step.
struct StrangStepper {
    StrangStepper(const GaussianGrid& g2, double dt, int n_hermite = 32);
    double step(const GaussianGrid& g2, std::vector<double>& g) const;

    RotationOp half_rotation;
    std::vector<double> v_kernel;
    mutable std::vector<double> scratch_a, scratch_b;
};

/// Centre of the decentred travelling solution: 4th-order (RK4) integration
/// of x' = v, v' = -x - v from (x0, v0), fixed internal step 1e-4.
void kfp_oracle_center(double x0, double v0, double t, double& x_star, double& v_star);

/// g(x,v) = f_star(x - x_star, v - v_star)/f_star(x,v)
///        = exp(x x_star + v v_star - (x_star^2 + v_star^2)/2).
std::vector<double> exact_kfp_oracle(const GaussianGrid& g2, double x0, double v0, double t);

/// h = g^{p/2} with positivity floor 1e-14.
std::vector<double> compute_h(const PhiFamily& fam, const std::vector<double>& g);

struct KineticDiagnostics {
    double t;
    double entropy;
    double grad_v_sq;  // int |grad_v h|^2 dmu
    double grad_x_sq;  // int |grad_x h|^2 dmu
    double cross;      // int grad_v h . grad_x h dmu
    double J_half;     // grad_v_sq + cross + grad_x_sq
    double J_lambda;   // grad_v_sq + 2 lambda cross + grad_x_sq (nu = 1 form)
    double a, b, c, j; // e^t-scaled gradient integrals, j = a + b + c
};

/// Gradients taken in coordinates: axis 0 is x, axis 1 is v.
KineticDiagnostics kinetic_diagnostics(const GaussianGrid& g2, const PhiFamily& fam,
                                       const std::vector<double>& g, double t,
                                       double lambda = 0.5, int stencil_order = 4);

struct ControllerOptions {
    bool enabled = false;
    double nu_choice = 1.0;         // free scalar in (0, 1 + sqrt(3)/2)
    double a_star_fraction = 0.1;   // threshold as a fraction of running median of a
};

struct ControllerSample {
    double lambda_t;
    double rho_t;
    double epsilon_t;
    double tau_partial;
    bool exp_branch;  // which case of the construction was active
};

struct KineticTrace {
    std::vector<double> times;
    std::vector<double> p_values;
    std::vector<std::vector<KineticDiagnostics>> channels;  // [channel][sample]
    std::vector<ControllerSample> controller;               // empty if disabled
    std::vector<double> zero_crossings;                     // times with a < 1e-3 j
    double max_raw_mass_defect = 0.0;
};

struct EvolveKfpOptions {
    double T = 8.0;
    double dt = 2e-3;
    std::size_t sample_every = 50;  // steps between samples (0.1 time units at dt=2e-3)
    int n_hermite = 32;
    int stencil_order = 4;
    ControllerOptions controller;
    double controller_p = 1.5;  // channel driving the adaptive state
};

KineticTrace evolve_kfp(const GaussianGrid& g2, std::vector<double> g0,
                        const std::vector<double>& p_list, const EvolveKfpOptions& opt);

struct TauEstimate {
    double tau;
    bool converged;  // relative change of tau_partial < 1% over the last quarter
};

TauEstimate estimate_tau(const KineticTrace& trace);

/// Both sides of the entropic quadratic-form estimate at (lambda,nu)=(1/2,1):
///   int X.M1 X + int Y.M2 Y  >=  1/2 int X.M0 X + lambda1(kappa) int |Y|^2,
/// with X = (grad_v h, grad_x h) and Y = (H_vv, H_xv, M_vv, M_xv) assembled
/// pointwise from first/second differences of h and sqrt(h).
struct LemmaMargin {
    double lhs;
    double rhs;
    double margin;  // lhs - rhs
};

LemmaMargin check_lemma_quadratic_form(const GaussianGrid& g2, const PhiFamily& fam,
                                       const std::vector<double>& g, int stencil_order = 4);

}  // namespace hypoflow
