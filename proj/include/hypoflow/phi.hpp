#pragma once

#include <stdexcept>

namespace hypoflow {

/// The convex entropy generator family phi_p, p in [1,2], together with the
/// derived constants used by the algebraic and dynamic estimates.
///
///   phi_p(s) = (s^p - 1 - p(s-1)) / (p-1)   for p > 1
///   phi_1(s) = s log s - (s-1)              (limit p -> 1)
///
/// The p=1 branch is selected when |p-1| < 1e-12; the p>1 formula is never
/// evaluated closer to p=1 than that (catastrophic cancellation).
struct PhiFamily {
    double p;

    explicit PhiFamily(double p_) : p(p_) {
        if (p < 1.0 || p > 2.0)
            throw std::invalid_argument("PhiFamily: p must lie in [1,2]");
    }

    bool is_log_branch() const { return p - 1.0 < 1e-12; }

    /// kappa = 8(2-p)/p, the coefficient of the nonlinear terms in the
    /// hypocoercivity matrices.
    double kappa() const { return 8.0 * (2.0 - p) / p; }

    /// kappa_p = (p-1)(2-p)/p, the exponent of the improved
    /// entropy - entropy production inequality. Vanishes at p=1 and p=2.
    double kappa_p() const { return (p - 1.0) * (2.0 - p) / p; }

    /// A = inf_s s^{2-p} phi''(s); equals p for the phi_p family
    /// (Csiszar-Kullback constant).
    double ck_constant() const { return p; }
};

/// Evaluate phi_p(s) or its first or second derivative.
///
/// Preconditions: s >= 0, and s > 0 whenever order >= 1 with p < 2
/// (phi'' is singular at 0 for p < 2; callers apply a positivity floor).
double phi_eval(const PhiFamily& fam, double s, int order = 0);

}  // namespace hypoflow
