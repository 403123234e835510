#include "hypoflow/hypo_algebra.hpp"

#include <algorithm>
#include <cmath>

namespace hypoflow {

namespace {

// Cyclic Jacobi for symmetric n<=4; converges to machine precision in a few
// sweeps at this size.
std::vector<double> jacobi_eigenvalues(SymMat m) {
    const std::size_t n = m.n;
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += m.at(i, j) * m.at(i, j);
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = m.at(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (m.at(q, q) - m.at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = m.at(k, p), akq = m.at(k, q);
                    m.at(k, p) = c * akp - s * akq;
                    m.at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = m.at(p, k), aqk = m.at(q, k);
                    m.at(p, k) = c * apk - s * aqk;
                    m.at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = m.at(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

}  // namespace

std::vector<double> sym_eigenvalues(const SymMat& m) {
    if (m.n == 0 || m.n > 4) throw std::invalid_argument("sym_eigenvalues: n must be 1..4");
    if (m.n == 1) return {m.at(0, 0)};
    if (m.n == 2) {
        const double tr = m.at(0, 0) + m.at(1, 1);
        const double diff = m.at(0, 0) - m.at(1, 1);
        const double disc = std::sqrt(diff * diff + 4.0 * m.at(0, 1) * m.at(0, 1));
        return {0.5 * (tr - disc), 0.5 * (tr + disc)};
    }
    return jacobi_eigenvalues(m);
}

double min_generalized_eigenvalue(const SymMat& A, const SymMat& B) {
    if (A.n != B.n) throw std::invalid_argument("min_generalized_eigenvalue: size mismatch");
    const std::size_t n = B.n;

    // Cholesky B = L L^T.
    std::array<double, 16> L{};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = B.at(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= L[i * n + k] * L[j * n + k];
            if (i == j) {
                if (s <= 0.0)
                    throw std::domain_error("min_generalized_eigenvalue: B not positive definite");
                L[i * n + i] = std::sqrt(s);
            } else {
                L[i * n + j] = s / L[j * n + j];
            }
        }
    }

    // C = L^{-1} A L^{-T}: solve L X = A (columns), then L Y = X^T.
    std::array<double, 16> X{};
    for (std::size_t col = 0; col < n; ++col) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = A.at(i, col);
            for (std::size_t k = 0; k < i; ++k) s -= L[i * n + k] * X[k * n + col];
            X[i * n + col] = s / L[i * n + i];
        }
    }
    SymMat C;
    C.n = n;
    for (std::size_t col = 0; col < n; ++col) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = X[col * n + i];  // row `col` of X, i.e. (X^T)(i,col)
            for (std::size_t k = 0; k < i; ++k) s -= L[i * n + k] * C.at(k, col);
            C.at(i, col) = s / L[i * n + i];
        }
    }
    // symmetrise round-off
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (C.at(i, j) + C.at(j, i));
            C.at(i, j) = C.at(j, i) = v;
        }
    return sym_eigenvalues(C).front();
}

SymMat hypo_M0(double lambda, double nu) {
    SymMat m;
    m.n = 2;
    m.at(0, 0) = 1.0;
    m.at(0, 1) = m.at(1, 0) = lambda;
    m.at(1, 1) = nu;
    return m;
}

SymMat hypo_M1(double lambda, double nu) {
    SymMat m;
    m.n = 2;
    m.at(0, 0) = 1.0 - lambda;
    m.at(0, 1) = m.at(1, 0) = 0.5 * (1.0 + lambda - nu);
    m.at(1, 1) = lambda;
    return m;
}

SymMat hypo_M2(double lambda, double nu, double kappa) {
    SymMat m;
    m.n = 4;
    const double k = kappa;
    m.at(0, 0) = 1.0;        m.at(0, 1) = lambda;      m.at(0, 2) = -0.5 * k;          m.at(0, 3) = -0.5 * k * lambda;
    m.at(1, 0) = lambda;     m.at(1, 1) = nu;          m.at(1, 2) = -0.5 * k * lambda; m.at(1, 3) = -0.5 * k * nu;
    m.at(2, 0) = -0.5 * k;   m.at(2, 1) = -0.5 * k * lambda; m.at(2, 2) = 2.0 * k;     m.at(2, 3) = 2.0 * k * lambda;
    m.at(3, 0) = -0.5 * k * lambda; m.at(3, 1) = -0.5 * k * nu; m.at(3, 2) = 2.0 * k * lambda; m.at(3, 3) = 2.0 * k * nu;
    return m;
}

SymMat hypo_M3() {
    SymMat m;
    m.n = 2;
    m.at(0, 0) = 1.0;
    m.at(0, 1) = m.at(1, 0) = 0.0;
    m.at(1, 1) = 0.0;
    return m;
}

std::array<double, 4> eigenvalues_m2_closed_form(double kappa) {
    const double r = std::sqrt(5.0 * kappa * kappa - 4.0 * kappa + 1.0);
    const double lo = 0.25 * (2.0 * kappa + 1.0 - r);
    const double hi = 0.25 * (2.0 * kappa + 1.0 + r);
    return {lo, 3.0 * lo, hi, 3.0 * hi};
}

bool hypo_feasible(double lambda, double nu, double kappa) {
    if (lambda * lambda > nu) return false;
    // M0 positive definite: nu > 0 and det > 0
    if (nu <= 0.0 || nu - lambda * lambda <= 0.0) return false;
    const auto ev = sym_eigenvalues(hypo_M2(lambda, nu, kappa));
    return ev.front() >= -1e-12;
}

double lambda_star(double lambda, double nu) {
    return min_generalized_eigenvalue(hypo_M1(lambda, nu), hypo_M0(lambda, nu));
}

OptimizeResult optimize_lambda_star(double kappa) {
    OptimizeResult best{0.0, 0.0, -1e300, 0};

    auto consider = [&](double lam, double nu) {
        if (!hypo_feasible(lam, nu, kappa)) return;
        const double r = lambda_star(lam, nu);
        ++best.evals;
        if (r > best.rate) {
            best.rate = r;
            best.lambda = lam;
            best.nu = nu;
        }
    };

    // coarse scan
    const double step0 = 0.01;
    for (int i = 0; i <= 100; ++i)
        for (int j = 0; j <= 200; ++j) consider(i * step0, j * step0);
    if (best.rate == -1e300)
        throw std::runtime_error("optimize_lambda_star: no feasible point found");

    // local refinement: shrink the grid around the incumbent
    double step = step0;
    while (step > 1e-5) {
        step *= 0.25;
        const double lam0 = best.lambda, nu0 = best.nu;
        for (int i = -4; i <= 4; ++i)
            for (int j = -4; j <= 4; ++j) consider(lam0 + i * step, nu0 + j * step);
    }
    return best;
}

double zeta(double eps, double lambda, double nu) {
    SymMat A = hypo_M1(lambda, 1.0);
    const SymMat B = hypo_M0(lambda, 1.0);
    const SymMat M3 = hypo_M3();
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            A.at(i, j) += 0.5 * nu * eps * B.at(i, j) + eps * M3.at(i, j);
    return min_generalized_eigenvalue(A, B);
}

}  // namespace hypoflow
