#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hypoflow/functionals.hpp"
#include "hypoflow/grid.hpp"
#include "hypoflow/phi.hpp"

namespace hypoflow {

/// Seeded families of strictly positive test fields. Amplitudes are chosen
/// so that every field stays inside [0.1, 10], where phi'' is well
/// conditioned for p close to 1. Works on 1-D and 2-D grids.
enum class FieldFamily {
    hermite_perturbation,    // 1 + eps He_k(x)
    shifted_gaussian_ratio,  // exp(a x - a^2/2)
    positive_mixture,        // convex combination of shifted ratios
    step_like,               // smoothed indicator
};

FieldFamily field_family_from_index(int idx);  // idx mod 4

std::vector<double> generate_field(const GaussianGrid& g, FieldFamily family,
                                   std::uint64_t seed);

/// Bounded perturbation of the base Gaussian: d(mu) = e^{-chi} d(gamma),
/// stored with the envelope pair (a, b) = (min chi, max chi) so that
/// e^{-b} dgamma <= dmu <= e^{-a} dgamma.
struct PerturbedMeasure {
    std::vector<double> weights;  // e^{-chi(x)} * gamma weights (not renormalised)
    double a;
    double b;
};

PerturbedMeasure make_perturbed_measure(const GaussianGrid& g,
                                        const std::vector<double>& chi);

/// Sub-additivity on the product measure:
///   E_{g1 x g2}[w] <= int E_{g1}[w] dg2 + int E_{g2}[w] dg1.
/// Returns residual = RHS - LHS (>= 0 up to quadrature noise).
double check_tensorization(const GaussianGrid& g2, const PhiFamily& fam,
                           const std::vector<double>& w);

/// Jensen-type lemma: int E_{g1}[w(.,x2)] dg2 >= E_{g1}[int w dg2].
/// Returns margin = LHS - RHS.
double check_jensen_lemma(const GaussianGrid& g2, const PhiFamily& fam,
                          const std::vector<double>& w);

/// Convexity of the non-normalised entropy:
///   E[t w1 + (1-t) w0] <= t E[w1] + (1-t) E[w0].
/// Returns margin = RHS - LHS.
double check_entropy_convexity(const GaussianGrid& g, const PhiFamily& fam,
                               const std::vector<double>& w0, const std::vector<double>& w1,
                               double t);

/// Measured entropy - entropy production constant: inf I[w]/E[w] over the
/// generator family (n_seeds per family) on the given 1-D grid.
double measure_lambda(const GaussianGrid& g, const PhiFamily& fam, int n_seeds,
                      std::uint64_t base_seed = 1000);

/// Perturbation stability: with wt = int w dmu / int dmu,
///   e^{a-b} Lambda int [phi(w) - phi(wt) - phi'(wt)(w - wt)] dmu
///     <= int phi''(w) |grad w|^2 dmu.
/// Returns margin = RHS - LHS.
double check_holley_stroock(const GaussianGrid& g, const PhiFamily& fam,
                            const std::vector<double>& w, const PerturbedMeasure& mu,
                            double lambda_measured);

/// Interpolation family between Poincare (q=1, where ||f||_1 is read as the
/// mean int f dgamma) and log-Sobolev:
///   (||f||_2^2 - ||f||_q^2) / (2-q) <= int |grad f|^2 dgamma.
struct InterpolationReport {
    double lhs;
    double rhs;
    double ratio;                // lhs/rhs, 0 when degenerate
    bool degenerate;             // rhs ~ 0 (constant f)
    double strengthened_margin;  // rhs - [||f||_2^2 - ||f||_q^{2(2-q)} ||f||_2^{2(q-1)}]/(2-q)
};

InterpolationReport check_interpolation_family(const GaussianGrid& g,
                                               const std::vector<double>& f, double q);

/// Aggregate runner used by the CLI `check` subcommand.
struct CheckResult {
    std::string check;
    double p_or_q;
    int seeds;
    double min_margin;
    std::uint64_t argmin_seed;
};

/// selector: "all" or a comma-free single name among
/// {ck, tensorization, subadditivity, jensen, convexity, holley_stroock,
///  interpolation, lemma31, selftest-violation}.
std::vector<CheckResult> run_inequality_suite(const std::string& selector, int n_seeds,
                                              std::uint64_t base_seed);

}  // namespace hypoflow
