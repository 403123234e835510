#include <doctest.h>

#include <cmath>
#include <numeric>

#include "hypoflow/grid.hpp"

using namespace hypoflow;

TEST_CASE("grid construction and mass") {
    const GaussianGrid g(1, 8.0, 257);
    CHECK(g.size() == 257);
    const double mass = std::accumulate(g.weights().begin(), g.weights().end(), 0.0);
    CHECK(mass >= 1.0 - 1e-10);
    CHECK(mass <= 1.0 + 1e-10);
    // node symmetry
    const auto& x = g.nodes();
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(x[i] == doctest::Approx(-x[x.size() - 1 - i]).epsilon(1e-15));
}

TEST_CASE("2-D grid weights are products of axis weights") {
    const GaussianGrid g1(1, 8.0, 65);
    const GaussianGrid g2(2, 8.0, 65);
    CHECK(g2.size() == 65 * 65);
    for (std::size_t i : {std::size_t(0), std::size_t(10), std::size_t(40)})
        for (std::size_t j : {std::size_t(3), std::size_t(32), std::size_t(64)})
            CHECK(g2.weights()[i * 65 + j] ==
                  doctest::Approx(g1.weights()[i] * g1.weights()[j]).epsilon(1e-15));
    CHECK(g2.coord(5 * 65 + 7, 0) == doctest::Approx(g1.nodes()[5]));
    CHECK(g2.coord(5 * 65 + 7, 1) == doctest::Approx(g1.nodes()[7]));
}

TEST_CASE("grid configuration errors") {
    CHECK_THROWS_AS(GaussianGrid(1, 2.0, 65), std::invalid_argument);  // tail mass ~0.0455
    CHECK_THROWS_AS(GaussianGrid(3, 8.0, 65), std::invalid_argument);
    CHECK_THROWS_AS(GaussianGrid(1, 8.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(GaussianGrid(1, -1.0, 65), std::invalid_argument);
}

TEST_CASE("quadrature against closed-form Gaussian moments") {
    const GaussianGrid g(1, 8.0, 257);
    auto x2 = g.sample([](const std::vector<double>& x) { return x[0] * x[0]; });
    CHECK(g.integrate(x2) == doctest::Approx(1.0).epsilon(1e-8));
    auto mgf = g.sample([](const std::vector<double>& x) { return std::exp(0.5 * x[0]); });
    CHECK(g.integrate(mgf) == doctest::Approx(std::exp(0.125)).epsilon(1e-8));
}

TEST_CASE("derivatives: constants and polynomials exact") {
    const GaussianGrid g(1, 8.0, 257);
    for (int order : {2, 4}) {
        auto c = g.sample([](const std::vector<double>&) { return 3.7; });
        auto dc = gradient_axis(g, c, 0, order);
        for (double v : dc) CHECK(std::abs(v) < 1e-12);
        auto lin = g.sample([](const std::vector<double>& x) { return x[0]; });
        auto dl = gradient_axis(g, lin, 0, order);
        for (double v : dl) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("derivative convergence order") {
    auto max_err = [](std::size_t n, int order) {
        const GaussianGrid g(1, 8.0, n);
        auto f = g.sample([](const std::vector<double>& x) { return std::sin(x[0]); });
        auto df = gradient_axis(g, f, 0, order);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            err = std::max(err, std::abs(df[i] - std::cos(g.nodes()[i])));
        return err;
    };
    const double e4a = max_err(257, 4), e4b = max_err(513, 4);
    CHECK(e4a / e4b > 10.0);  // ~16x for order 4
    const double e2a = max_err(257, 2), e2b = max_err(513, 2);
    CHECK(e2a / e2b > 3.0);  // ~4x for order 2
    CHECK(e4a < e2a);
}

TEST_CASE("second derivative stencils") {
    const GaussianGrid g(1, 8.0, 257);
    auto f = g.sample([](const std::vector<double>& x) { return std::cos(x[0]); });
    std::vector<double> d2(f.size());
    second_derivative_line(f.data(), d2.data(), f.size(), g.spacing(), 4);
    double err = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        err = std::max(err, std::abs(d2[i] + std::cos(g.nodes()[i])));
    CHECK(err < 1e-4);
    // quadratic exact for both orders
    auto q = g.sample([](const std::vector<double>& x) { return x[0] * x[0]; });
    for (int order : {2, 4}) {
        second_derivative_line(q.data(), d2.data(), q.size(), g.spacing(), order);
        for (double v : d2) CHECK(v == doctest::Approx(2.0).epsilon(1e-9));
    }
}

TEST_CASE("gradient along both 2-D axes") {
    const GaussianGrid g(2, 8.0, 65);
    auto f = g.sample([](const std::vector<double>& x) { return x[0] * x[0] + 2.0 * x[1]; });
    auto d0 = gradient_axis(g, f, 0, 4);
    auto d1 = gradient_axis(g, f, 1, 4);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(d0[i] == doctest::Approx(2.0 * g.coord(i, 0)).epsilon(1e-9));
        CHECK(d1[i] == doctest::Approx(2.0).epsilon(1e-9));
    }
}
