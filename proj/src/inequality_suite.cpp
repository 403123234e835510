#include "hypoflow/inequality_suite.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "hypoflow/fp_dynamics.hpp"
#include "hypoflow/kfp_dynamics.hpp"

namespace hypoflow {

namespace {

// normalised Hermite polynomials He_k / sqrt(k!)
double hermite_normalized(int k, double x) {
    switch (k) {
        case 1: return x;
        case 2: return (x * x - 1.0) / std::sqrt(2.0);
        case 3: return (x * x * x - 3.0 * x) / std::sqrt(6.0);
        default: throw std::invalid_argument("hermite_normalized: k must be 1..3");
    }
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

// 1-D field on the axis nodes, strictly inside [0.1, 10]
std::vector<double> generate_axis_field(const std::vector<double>& x, FieldFamily family,
                                        std::mt19937_64& rng) {
    const std::size_t n = x.size();
    std::vector<double> w(n);
    switch (family) {
        case FieldFamily::hermite_perturbation: {
            const int k = 1 + static_cast<int>(rng() % 3);
            double hmax = 0.0;
            for (double xi : x) hmax = std::max(hmax, std::abs(hermite_normalized(k, xi)));
            const double eps = uniform(rng, 0.05, 0.85) / hmax;
            for (std::size_t i = 0; i < n; ++i) w[i] = 1.0 + eps * hermite_normalized(k, x[i]);
            break;
        }
        case FieldFamily::shifted_gaussian_ratio: {
            const double a = uniform(rng, -0.25, 0.25);
            for (std::size_t i = 0; i < n; ++i) w[i] = std::exp(a * x[i] - 0.5 * a * a);
            break;
        }
        case FieldFamily::positive_mixture: {
            const double a1 = uniform(rng, -0.25, 0.25);
            const double a2 = uniform(rng, -0.25, 0.25);
            const double th = uniform(rng, 0.2, 0.8);
            for (std::size_t i = 0; i < n; ++i)
                w[i] = th * std::exp(a1 * x[i] - 0.5 * a1 * a1) +
                       (1.0 - th) * std::exp(a2 * x[i] - 0.5 * a2 * a2);
            break;
        }
        case FieldFamily::step_like: {
            const double c1 = uniform(rng, 0.2, 1.0);
            const double c2 = uniform(rng, 0.5, 3.0);
            const double x0 = uniform(rng, -2.0, 2.0);
            const double s = uniform(rng, 0.5, 1.5);
            for (std::size_t i = 0; i < n; ++i)
                w[i] = c1 + c2 * 0.5 * (1.0 + std::tanh((x[i] - x0) / s));
            break;
        }
    }
    return w;
}

}  // namespace

FieldFamily field_family_from_index(int idx) {
    switch (((idx % 4) + 4) % 4) {
        case 0: return FieldFamily::hermite_perturbation;
        case 1: return FieldFamily::shifted_gaussian_ratio;
        case 2: return FieldFamily::positive_mixture;
        default: return FieldFamily::step_like;
    }
}

std::vector<double> generate_field(const GaussianGrid& g, FieldFamily family,
                                   std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    if (g.dim() == 1) return generate_axis_field(g.nodes(), family, rng);

    const auto u = generate_axis_field(g.nodes(), family, rng);
    const auto v = generate_axis_field(g.nodes(), family, rng);
    const bool product = (rng() & 1u) != 0;
    const std::size_t n = g.points_per_axis();
    std::vector<double> w(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            w[i * n + j] = product ? u[i] * v[j] : 0.5 * (u[i] + v[j]);
    return w;
}

PerturbedMeasure make_perturbed_measure(const GaussianGrid& g, const std::vector<double>& chi) {
    if (chi.size() != g.size())
        throw std::invalid_argument("make_perturbed_measure: size mismatch");
    PerturbedMeasure mu;
    mu.weights.resize(chi.size());
    mu.a = chi[0];
    mu.b = chi[0];
    for (std::size_t i = 0; i < chi.size(); ++i) {
        mu.a = std::min(mu.a, chi[i]);
        mu.b = std::max(mu.b, chi[i]);
        mu.weights[i] = std::exp(-chi[i]) * g.weights()[i];
    }
    return mu;
}

namespace {

// per-slice entropy of a 2-D field along the chosen axis, integrated against
// the other axis's measure; also returns the marginal field if requested
double sliced_entropy_sum(const GaussianGrid& g2, const PhiFamily& fam,
                          const std::vector<double>& w, int entropy_axis) {
    const std::size_t n = g2.points_per_axis();
    GaussianGrid axis(1, g2.extent(), n);
    const auto& aw = axis.weights();
    std::vector<double> slice(n);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (entropy_axis == 0)
            for (std::size_t i = 0; i < n; ++i) slice[i] = w[i * n + j];
        else
            for (std::size_t i = 0; i < n; ++i) slice[i] = w[j * n + i];
        acc += aw[j] * phi_entropy(axis, fam, slice);
    }
    return acc;
}

}  // namespace

double check_tensorization(const GaussianGrid& g2, const PhiFamily& fam,
                           const std::vector<double>& w) {
    if (g2.dim() != 2) throw std::invalid_argument("check_tensorization: 2-D grid required");
    const double lhs = phi_entropy(g2, fam, w);
    const double rhs = sliced_entropy_sum(g2, fam, w, 0) + sliced_entropy_sum(g2, fam, w, 1);
    return rhs - lhs;
}

double check_jensen_lemma(const GaussianGrid& g2, const PhiFamily& fam,
                          const std::vector<double>& w) {
    if (g2.dim() != 2) throw std::invalid_argument("check_jensen_lemma: 2-D grid required");
    const std::size_t n = g2.points_per_axis();
    GaussianGrid axis(1, g2.extent(), n);
    const auto& aw = axis.weights();
    const double lhs = sliced_entropy_sum(g2, fam, w, 0);
    std::vector<double> marginal(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) marginal[i] += w[i * n + j] * aw[j];
    return lhs - phi_entropy(axis, fam, marginal);
}

double check_entropy_convexity(const GaussianGrid& g, const PhiFamily& fam,
                               const std::vector<double>& w0, const std::vector<double>& w1,
                               double t) {
    std::vector<double> mix(w0.size());
    for (std::size_t i = 0; i < w0.size(); ++i) mix[i] = t * w1[i] + (1.0 - t) * w0[i];
    return t * phi_entropy(g, fam, w1) + (1.0 - t) * phi_entropy(g, fam, w0) -
           phi_entropy(g, fam, mix);
}

double measure_lambda(const GaussianGrid& g, const PhiFamily& fam, int n_seeds,
                      std::uint64_t base_seed) {
    double lam = 1e300;
    for (int s = 0; s < n_seeds; ++s) {
        auto w = generate_field(g, field_family_from_index(s), base_seed + s);
        const double E = phi_entropy(g, fam, w);
        if (E < 1e-12) continue;
        lam = std::min(lam, fisher_information(g, fam, w) / E);
    }
    if (lam == 1e300) throw std::runtime_error("measure_lambda: all fields degenerate");
    return lam;
}

double check_holley_stroock(const GaussianGrid& g, const PhiFamily& fam,
                            const std::vector<double>& w, const PerturbedMeasure& mu,
                            double lambda_measured) {
    if (w.size() != g.size() || mu.weights.size() != g.size())
        throw std::invalid_argument("check_holley_stroock: size mismatch");
    double mass_mu = 0.0, wmean = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        mass_mu += mu.weights[i];
        wmean += w[i] * mu.weights[i];
    }
    const double wt = wmean / mass_mu;
    const double phiwt = phi_eval(fam, wt);
    const double dphiwt = phi_eval(fam, wt, 1);

    double bregman = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
        bregman += (phi_eval(fam, std::max(w[i], 0.0)) - phiwt - dphiwt * (w[i] - wt)) *
                   mu.weights[i];

    std::vector<double> integrand(w.size(), 0.0);
    for (int a = 0; a < g.dim(); ++a) {
        auto dw = gradient_axis(g, w, a, 4);
        for (std::size_t i = 0; i < w.size(); ++i) integrand[i] += dw[i] * dw[i];
    }
    double rhs = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
        rhs += phi_eval(fam, std::max(w[i], 1e-14), 2) * integrand[i] * mu.weights[i];

    const double lhs = std::exp(mu.a - mu.b) * lambda_measured * bregman;
    return rhs - lhs;
}

InterpolationReport check_interpolation_family(const GaussianGrid& g,
                                               const std::vector<double>& f, double q) {
    if (q < 1.0 || q >= 2.0)
        throw std::invalid_argument("check_interpolation_family: q must lie in [1,2)");
    InterpolationReport rep{};
    const double n2 = lq_norm(g, f, 2.0);
    const double nq = (q == 1.0) ? g.integrate(f)  // the q=1 endpoint uses the mean
                                 : lq_norm(g, f, q);
    rep.lhs = (n2 * n2 - nq * nq) / (2.0 - q);
    rep.rhs = 0.0;
    for (int a = 0; a < g.dim(); ++a) rep.rhs += grad_sq_axis(g, f, a);
    rep.degenerate = rep.rhs < 1e-14;
    rep.ratio = rep.degenerate ? 0.0 : rep.lhs / rep.rhs;
    const double strengthened =
        (n2 * n2 - std::pow(std::abs(nq), 2.0 * (2.0 - q)) * std::pow(n2, 2.0 * (q - 1.0))) /
        (2.0 - q);
    rep.strengthened_margin = rep.rhs - strengthened;
    return rep;
}

std::vector<CheckResult> run_inequality_suite(const std::string& selector, int n_seeds,
                                              std::uint64_t base_seed) {
    static const GaussianGrid g1(1, 8.0, 257);
    static const GaussianGrid g2(2, 8.0, 129);
    const std::vector<double> p_list{1.0, 1.25, 1.5, 1.75, 2.0};

    static const std::vector<std::string> known{
        "all",    "ck",        "tensorization",  "subadditivity",     "jensen",
        "convexity", "holley_stroock", "interpolation", "lemma31", "selftest-violation"};
    if (std::find(known.begin(), known.end(), selector) == known.end())
        throw std::invalid_argument("run_inequality_suite: unknown selector '" + selector + "'");

    auto want = [&](const std::string& name) { return selector == "all" || selector == name; };
    std::vector<CheckResult> results;

    auto record = [&](const std::string& check, double p_or_q, int seeds, double min_margin,
                      std::uint64_t argmin) {
        results.push_back({check, p_or_q, seeds, min_margin, argmin});
    };

    for (double p : p_list) {
        const PhiFamily fam(p);

        if (want("ck") || selector == "selftest-violation") {
            double mn = 1e300;
            std::uint64_t arg = 0;
            for (int s = 0; s < n_seeds; ++s) {
                const std::uint64_t seed = base_seed + s;
                auto w = generate_field(g1, field_family_from_index(static_cast<int>(seed % 4)), seed);
                const double mass = g1.integrate(w);
                for (auto& v : w) v /= mass;
                const auto ck = csiszar_kullback_bound(g1, fam, w);
                double margin = ck.entropy - ck.bound;
                if (selector == "selftest-violation") margin = -margin;  // harness self-test
                if (margin < mn) {
                    mn = margin;
                    arg = seed;
                }
            }
            record(selector == "selftest-violation" ? "selftest-violation" : "ck", p, n_seeds,
                   mn, arg);
        }
        if (selector == "selftest-violation") continue;

        if (want("tensorization")) {
            double mn = 1e300;
            std::uint64_t arg = 0;
            for (int s = 0; s < n_seeds; ++s) {
                const std::uint64_t seed = base_seed + s;
                auto w = generate_field(g2, field_family_from_index(static_cast<int>(seed % 4)), seed);
                const double m = check_tensorization(g2, fam, w);
                if (m < mn) {
                    mn = m;
                    arg = seed;
                }
            }
            record("tensorization", p, n_seeds, mn, arg);
        }

        if (want("subadditivity")) {
            const double lam = measure_lambda(g1, fam, 32);
            double mn = 1e300;
            std::uint64_t arg = 0;
            for (int s = 0; s < n_seeds; ++s) {
                const std::uint64_t seed = base_seed + s;
                auto w = generate_field(g2, field_family_from_index(static_cast<int>(seed % 4)), seed);
                const double m = fisher_information(g2, fam, w) - lam * phi_entropy(g2, fam, w);
                if (m < mn) {
                    mn = m;
                    arg = seed;
                }
            }
            record("subadditivity", p, n_seeds, mn, arg);
        }

        if (want("jensen")) {
            double mn = 1e300;
            std::uint64_t arg = 0;
            for (int s = 0; s < n_seeds; ++s) {
                const std::uint64_t seed = base_seed + s;
                auto w = generate_field(g2, field_family_from_index(static_cast<int>(seed % 4)), seed);
                const double m = check_jensen_lemma(g2, fam, w);
                if (m < mn) {
                    mn = m;
                    arg = seed;
                }
            }
            record("jensen", p, n_seeds, mn, arg);
        }

        if (want("convexity")) {
            double mn = 1e300;
            std::uint64_t arg = 0;
            for (int s = 0; s < n_seeds; ++s) {
                const std::uint64_t seed = base_seed + s;
                auto w0 = generate_field(g1, field_family_from_index(static_cast<int>(seed % 4)), seed);
                auto w1 = generate_field(g1, field_family_from_index(static_cast<int>((seed + 1) % 4)), seed + 777);
                for (double t : {0.25, 0.5, 0.75}) {
                    const double m = check_entropy_convexity(g1, fam, w0, w1, t);
                    if (m < mn) {
                        mn = m;
                        arg = seed;
                    }
                }
            }
            record("convexity", p, n_seeds, mn, arg);
        }

        if (want("holley_stroock")) {
            const double lam = measure_lambda(g1, fam, 32);
            std::vector<double> chi(g1.size());
            for (std::size_t i = 0; i < g1.size(); ++i) chi[i] = 0.3 * std::sin(g1.nodes()[i]);
            const auto mu = make_perturbed_measure(g1, chi);
            double mn = 1e300;
            std::uint64_t arg = 0;
            for (int s = 0; s < n_seeds; ++s) {
                const std::uint64_t seed = base_seed + s;
                auto w = generate_field(g1, field_family_from_index(static_cast<int>(seed % 4)), seed);
                const double m = check_holley_stroock(g1, fam, w, mu, lam);
                if (m < mn) {
                    mn = m;
                    arg = seed;
                }
            }
            record("holley_stroock", p, n_seeds, mn, arg);
        }
    }

    if (want("interpolation")) {
        for (double q : {1.0, 1.25, 1.5, 1.75}) {
            double mn = 1e300;
            std::uint64_t arg = 0;
            for (int s = 0; s < n_seeds; ++s) {
                const std::uint64_t seed = base_seed + s;
                auto f = generate_field(g1, field_family_from_index(static_cast<int>(seed % 4)), seed);
                const auto rep = check_interpolation_family(g1, f, q);
                if (rep.degenerate) continue;
                const double m = std::min(rep.rhs - rep.lhs, rep.strengthened_margin);
                if (m < mn) {
                    mn = m;
                    arg = seed;
                }
            }
            record("interpolation", q, n_seeds, mn, arg);
        }
    }

    if (want("lemma31")) {
        static const GaussianGrid gk(2, 8.0, 129);
        for (double p : {1.25, 1.5, 1.75}) {
            const PhiFamily fam(p);
            double mn = 1e300;
            double arg_t = 0.0;
            for (double t : {0.5, 1.0, 2.0}) {
                const auto g = exact_kfp_oracle(gk, 1.0, 0.0, t);
                const auto rep = check_lemma_quadratic_form(gk, fam, g);
                if (rep.margin < mn) {
                    mn = rep.margin;
                    arg_t = t;
                }
            }
            record("lemma31", p, 3, mn, static_cast<std::uint64_t>(arg_t * 1000));
        }
    }

    return results;
}

}  // namespace hypoflow
