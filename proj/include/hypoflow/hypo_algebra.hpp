#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace hypoflow {

/// Small dense symmetric matrix (n <= 4), row-major.
struct SymMat {
    std::size_t n = 0;
    std::array<double, 16> a{};

    double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

/// Eigenvalues of a symmetric matrix, ascending. Closed form for n <= 2,
/// cyclic Jacobi sweeps otherwise (plenty for n <= 4).
std::vector<double> sym_eigenvalues(const SymMat& m);

/// Minimum eigenvalue of the pencil (A, B) with B positive definite:
/// smallest mu with det(A - mu B) = 0, computed via the Cholesky congruence
/// B = L L^T, reducing to the symmetric problem L^{-1} A L^{-T}.
double min_generalized_eigenvalue(const SymMat& A, const SymMat& B);

/// The 2x2 quadratic-form matrices of the twisted Lyapunov functional and
/// its dissipation, and the 4x4 matrix controlling the entropic estimate.
SymMat hypo_M0(double lambda, double nu);
SymMat hypo_M1(double lambda, double nu);
SymMat hypo_M2(double lambda, double nu, double kappa);
SymMat hypo_M3();  // diag(1, 0)

/// The four closed-form eigenvalues of M2(1/2, 1, kappa), in the
/// conventional labelling (l1..l4, not sorted):
///   l1 = 1/4 (2k+1 - sqrt(5k^2-4k+1)),  l2 = 3 l1,
///   l3 = 1/4 (2k+1 + sqrt(5k^2-4k+1)),  l4 = 3 l3.
std::array<double, 4> eigenvalues_m2_closed_form(double kappa);

/// Feasibility of (lambda, nu): lambda^2 <= nu, M0 positive definite, and
/// M2(lambda, nu, kappa) >= -1e-12 (semidefinite up to round-off).
bool hypo_feasible(double lambda, double nu, double kappa);

/// lambda_star(lambda, nu) = min generalized eigenvalue of (M1, M0):
/// the certified decay rate of the twisted functional at these parameters.
double lambda_star(double lambda, double nu);

struct OptimizeResult {
    double lambda;
    double nu;
    double rate;       // lambda_star at the optimum
    std::size_t evals; // number of objective evaluations
};

/// Maximise lambda_star over the feasible set at the given kappa:
/// coarse scan (step 0.01 over lambda in [0,1], nu in [0,2]) followed by
/// local grid refinement down to resolution 1e-5.
OptimizeResult optimize_lambda_star(double kappa);

/// Perturbed pencil value
///   zeta(eps, lambda, nu) = min gen-eig of
///       ( M1(lambda,1) + (nu/2) eps M0(lambda,1) + eps M3 ,  M0(lambda,1) ).
double zeta(double eps, double lambda, double nu);

}  // namespace hypoflow
