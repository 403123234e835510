#include <doctest.h>

#include <cmath>

#include "hypoflow/functionals.hpp"

using namespace hypoflow;

namespace {
const GaussianGrid& grid1d() {
    static GaussianGrid g(1, 8.0, 257);
    return g;
}
}  // namespace

TEST_CASE("entropy of constants vanishes (non-normalised form)") {
    const auto& g = grid1d();
    for (double p : {1.0, 1.5, 2.0}) {
        const PhiFamily fam(p);
        for (double c : {1.0, 0.3, 2.7}) {
            std::vector<double> w(g.size(), c);
            CHECK(std::abs(phi_entropy(g, fam, w)) < 1e-12);
        }
    }
}

TEST_CASE("entropy of the shifted-Gaussian ratio, p=2: e^{x0^2} - 1") {
    const auto& g = grid1d();
    const double x0 = 0.5;
    auto w = g.sample([&](const std::vector<double>& x) {
        return std::exp(x[0] * x0 - 0.5 * x0 * x0);
    });
    CHECK(phi_entropy(g, PhiFamily(2.0), w) ==
          doctest::Approx(std::exp(0.25) - 1.0).epsilon(1e-8));
}

TEST_CASE("fisher information: pinned cases") {
    const auto& g = grid1d();
    const PhiFamily f2(2.0);
    std::vector<double> ones(g.size(), 1.0);
    CHECK(std::abs(fisher_information(g, f2, ones)) < 1e-20);

    const double eps = 0.1;
    auto w = g.sample([&](const std::vector<double>& x) { return 1.0 + eps * x[0]; });
    CHECK(fisher_information(g, f2, w) == doctest::Approx(2.0 * eps * eps).epsilon(1e-8));
}

TEST_CASE("Poincare sharpness: I/E -> 2 as the shift goes to 0") {
    const auto& g = grid1d();
    const PhiFamily f2(2.0);
    double prev_gap = 1e300;
    for (double a : {0.1, 0.05}) {
        auto w = g.sample([&](const std::vector<double>& x) {
            return std::exp(x[0] * a - 0.5 * a * a);
        });
        const double ratio = fisher_information(g, f2, w) / phi_entropy(g, f2, w);
        // closed form: 2 a^2 e^{a^2} / (e^{a^2} - 1)
        const double exact = 2.0 * a * a * std::exp(a * a) / (std::exp(a * a) - 1.0);
        CHECK(ratio == doctest::Approx(exact).epsilon(1e-6));
        CHECK(std::abs(ratio - 2.0) < prev_gap);
        prev_gap = std::abs(ratio - 2.0);
    }
}

TEST_CASE("lq norms") {
    const auto& g = grid1d();
    std::vector<double> ones(g.size(), 1.0);
    CHECK(lq_norm(g, ones, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(lq_norm(g, ones, 1.7) == doctest::Approx(1.0).epsilon(1e-10));
    std::vector<double> c(g.size(), 2.5);
    CHECK(lq_norm(g, c, 2.0) == doctest::Approx(2.5).epsilon(1e-10));
    auto f = g.sample([](const std::vector<double>& x) { return std::exp(0.5 * x[0]); });
    CHECK(lq_norm(g, f, 2.0) == doctest::Approx(std::exp(0.25)).epsilon(1e-8));
    CHECK_THROWS_AS(lq_norm(g, f, 0.5), std::invalid_argument);
}

TEST_CASE("entropy and fisher converge under grid refinement") {
    const PhiFamily fam(1.5);
    auto field = [](const GaussianGrid& g) {
        return g.sample([](const std::vector<double>& x) {
            return 1.0 + 0.4 * std::sin(x[0]) + 0.1 * x[0];
        });
    };
    const GaussianGrid ga(1, 8.0, 129), gb(1, 8.0, 257), gc(1, 8.0, 513);
    const double ea = phi_entropy(ga, fam, field(ga));
    const double eb = phi_entropy(gb, fam, field(gb));
    const double ec = phi_entropy(gc, fam, field(gc));
    // the trapezoid rule is spectrally accurate on smooth Gaussian-weighted
    // integrands: already at roundoff on the coarsest grid here
    CHECK(std::abs(ea - eb) < 1e-12);
    CHECK(std::abs(eb - ec) < 1e-12);
    const double ia = fisher_information(ga, fam, field(ga));
    const double ic = fisher_information(gc, fam, field(gc));
    CHECK(std::abs(ia - ic) < 1e-4);
}
