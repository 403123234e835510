#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hypoflow/hypo_algebra.hpp"

using namespace hypoflow;

namespace {

// determinant of (A - mu I) for n<=4 by cofactor expansion on a copy
double det_shift(const SymMat& A, double mu) {
    const std::size_t n = A.n;
    double m[4][4];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = A.at(i, j) - (i == j ? mu : 0.0);
    // gaussian elimination with partial pivoting
    double det = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        if (m[c][c] == 0.0) return 0.0;
        det *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return det;
}

double frob(const SymMat& A) {
    double s = 0.0;
    for (std::size_t i = 0; i < A.n; ++i)
        for (std::size_t j = 0; j < A.n; ++j) s += A.at(i, j) * A.at(i, j);
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("matrix construction matches the printed entries") {
    const auto m0 = hypo_M0(0.5, 1.0);
    const auto m1 = hypo_M1(0.5, 1.0);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(m1.at(i, j) == doctest::Approx(0.5 * m0.at(i, j)));  // M1(1/2,1)=M0/2
    CHECK(m1.at(0, 0) == doctest::Approx(0.5));
    CHECK(m1.at(0, 1) == doctest::Approx(0.25));

    const auto m2 = hypo_M2(0.5, 1.0, 0.0);
    CHECK(m2.at(0, 0) == 1.0);
    CHECK(m2.at(0, 1) == 0.5);
    CHECK(m2.at(0, 2) == 0.0);
    CHECK(m2.at(2, 2) == 0.0);
    CHECK(m2.at(3, 3) == 0.0);

    const auto m00 = hypo_M0(0.0, 0.0);
    CHECK(m00.at(0, 0) == 1.0);
    CHECK(m00.at(0, 1) == 0.0);
    CHECK(m00.at(1, 1) == 0.0);
}

TEST_CASE("numeric eigenvalues: small pinned cases") {
    SymMat id2;
    id2.n = 2;
    id2.at(0, 0) = id2.at(1, 1) = 1.0;
    auto ev = sym_eigenvalues(id2);
    CHECK(ev[0] == doctest::Approx(1.0));
    CHECK(ev[1] == doctest::Approx(1.0));

    ev = sym_eigenvalues(hypo_M0(0.5, 1.0));  // eigenvalues 1 +- lambda
    CHECK(ev[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ev[1] == doctest::Approx(1.5).epsilon(1e-12));

    ev = sym_eigenvalues(hypo_M2(0.5, 1.0, 0.0));
    CHECK(ev[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ev[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ev[2] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ev[3] == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("closed-form eigenvalues of M2(1/2,1,kappa)") {
    auto ev0 = eigenvalues_m2_closed_form(0.0);
    CHECK(ev0[0] == doctest::Approx(0.0));
    CHECK(ev0[1] == doctest::Approx(0.0));
    CHECK(ev0[2] == doctest::Approx(0.5));
    CHECK(ev0[3] == doctest::Approx(1.5));
    // kappa=8: 5*64-32+1=289, sqrt=17, l1=(17-17)/4=0
    CHECK(eigenvalues_m2_closed_form(8.0)[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(eigenvalues_m2_closed_form(1.0)[0] ==
          doctest::Approx((3.0 - std::sqrt(2.0)) / 4.0).epsilon(1e-12));
}

TEST_CASE("closed form vs numeric eigenvalues as multisets") {
    for (double k = 0.0; k <= 8.0 + 1e-12; k += 0.25) {
        auto closed = eigenvalues_m2_closed_form(k);
        std::sort(closed.begin(), closed.end());
        const auto numeric = sym_eigenvalues(hypo_M2(0.5, 1.0, k));
        for (int i = 0; i < 4; ++i)
            CHECK(std::abs(closed[i] - numeric[i]) < 1e-10);
        CHECK(numeric[0] >= -1e-12);  // all nonnegative on [0,8]
    }
}

TEST_CASE("random symmetric 4x4: eigenvalues are characteristic roots") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        SymMat A;
        A.n = 4;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = i; j < 4; ++j) A.at(i, j) = A.at(j, i) = u(rng);
        const auto ev = sym_eigenvalues(A);
        CHECK(std::is_sorted(ev.begin(), ev.end()));
        const double scale = std::pow(std::max(frob(A), 1.0), 4.0);
        for (double mu : ev) CHECK(std::abs(det_shift(A, mu)) < 1e-9 * scale);
        // trace = sum of eigenvalues
        const double tr = A.at(0, 0) + A.at(1, 1) + A.at(2, 2) + A.at(3, 3);
        CHECK(ev[0] + ev[1] + ev[2] + ev[3] == doctest::Approx(tr).epsilon(1e-10));
    }
}

TEST_CASE("feasibility") {
    CHECK(hypo_feasible(0.5, 1.0, 3.0));
    CHECK_FALSE(hypo_feasible(1.0, 0.5, 1.0));   // lambda^2 > nu
    CHECK(hypo_feasible(0.9, 0.82, 0.0));        // det M0 = 0.01 > 0, kappa terms vanish
    CHECK_FALSE(hypo_feasible(0.5, 0.0, 0.0));   // M0 singular
}

TEST_CASE("lambda_star") {
    CHECK(lambda_star(0.5, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(lambda_star(0.0, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(lambda_star(0.4, 0.9) < 0.5);
    SymMat sing = hypo_M0(0.5, 0.25);  // lambda^2 = nu -> singular
    CHECK_THROWS_AS(min_generalized_eigenvalue(hypo_M1(0.5, 0.25), sing), std::domain_error);
}

TEST_CASE("optimize_lambda_star attains 1/2 at (1/2, 1)") {
    for (double kappa : {0.0, 3.0}) {
        const auto r = optimize_lambda_star(kappa);
        CHECK(r.rate == doctest::Approx(0.5).epsilon(2e-4));
        CHECK(std::abs(r.lambda - 0.5) < 1e-3);
        CHECK(std::abs(r.nu - 1.0) < 1e-3);
    }
    CHECK(optimize_lambda_star(8.0).rate <= 0.5 + 1e-4);
}

TEST_CASE("zeta: value at the origin and monotonicity in eps") {
    for (double nu : {0.5, 1.0, 1.5}) {
        CHECK(std::abs(zeta(0.0, 0.5, nu) - 0.5) < 1e-12);
        if (nu < 1.0 + std::sqrt(3.0) / 2.0) {
            const double h = 1e-6;
            CHECK((zeta(h, 0.5, nu) - zeta(-h, 0.5, nu)) / (2 * h) > 0.0);
        }
    }
}

TEST_CASE("zeta: one-sided lambda slope at (0, 1/2) is -2/sqrt(3)") {
    // the generalized eigenvalue is conically degenerate at lambda = 1/2, so
    // only the right-sided slope reproduces the printed coefficient; the
    // second-order one-sided stencil resolves it
    const double h = 1e-4;
    for (double nu : {0.5, 1.0, 1.5}) {
        const double slope =
            (-3.0 * zeta(0.0, 0.5, nu) + 4.0 * zeta(0.0, 0.5 + h, nu) -
             zeta(0.0, 0.5 + 2.0 * h, nu)) /
            (2.0 * h);
        CHECK(slope == doctest::Approx(-2.0 / std::sqrt(3.0)).epsilon(1e-6));
    }
}
