// hypoflow: numerical laboratory for phi-entropies, Fokker-Planck and
// kinetic Fokker-Planck dynamics with harmonic confinement.
//
// Exit codes: 0 success, 1 scientific-check failure, 2 usage/config error.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <mutex>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hypoflow/fp_dynamics.hpp"
#include "hypoflow/functionals.hpp"
#include "hypoflow/grid.hpp"
#include "hypoflow/hypo_algebra.hpp"
#include "hypoflow/inequality_suite.hpp"
#include "hypoflow/io.hpp"
#include "hypoflow/kfp_dynamics.hpp"
#include "hypoflow/phi.hpp"

using nlohmann::json;
using namespace hypoflow;

namespace {

struct GlobalOpts {
    std::string out_dir = "out";
    std::uint64_t seed = 12345;
    std::vector<double> p_override;
    bool quiet = false;
};

int worker_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("HYPOFLOW_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return static_cast<int>(n);
}

std::string file_header(const std::string& hash) {
    return std::string("# version=") + kArtifactVersion + " config_hash=" + hash + "\n";
}

void info(const GlobalOpts& g, const std::string& msg) {
    if (!g.quiet) std::cout << msg << "\n";
}

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    json j;
    in >> j;
    return j;
}

std::vector<double> hermite_initial(const GaussianGrid& g, double eps, int k) {
    const auto& x = g.nodes();
    std::vector<double> w(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double he;
        switch (k) {
            case 1: he = x[i]; break;
            case 2: he = (x[i] * x[i] - 1.0) / std::sqrt(2.0); break;
            case 3: he = (x[i] * x[i] * x[i] - 3.0 * x[i]) / std::sqrt(6.0); break;
            default: throw std::invalid_argument("initial.hermite_k must be 1..3");
        }
        w[i] = 1.0 + eps * he;
        if (w[i] < 0.0)
            throw std::invalid_argument("initial: hermite perturbation is not nonnegative; "
                                        "reduce eps");
    }
    return w;
}

int cmd_eigen(const GlobalOpts& g, double kmin, double kmax, double step) {
    std::ostringstream csv, rows_gp;
    json records = json::array();
    const json resolved{{"command", "eigen"}, {"min", kmin}, {"max", kmax}, {"step", step}};
    const std::string hash = config_hash(resolved);
    csv << file_header(hash) << "kappa,l1,l2,l3,l4\n";
    for (double k = kmin; k <= kmax + 1e-12; k += step) {
        const double kk = std::min(k, kmax);
        const auto ev = eigenvalues_m2_closed_form(kk);
        csv << format_double(kk);
        for (double e : ev) csv << ',' << format_double(e);
        csv << '\n';
        std::vector<double> numeric = sym_eigenvalues(hypo_M2(0.5, 1.0, kk));
        records.push_back({{"kappa", kk},
                           {"eigenvalues_closed", {ev[0], ev[1], ev[2], ev[3]}},
                           {"eigenvalues_numeric", numeric}});
    }
    write_text_file(g.out_dir + "/eigenvalues.csv", csv.str());

    json summary{{"version", kArtifactVersion},
                 {"config_hash", hash},
                 {"resolved_config", resolved},
                 {"records", records}};
    write_text_file(g.out_dir + "/eigen.json", summary.dump(2) + "\n");

    std::ostringstream gp;
    gp << file_header(hash)
       << "set datafile separator ','\n"
          "set xlabel 'kappa'\n"
          "set ylabel 'eigenvalues of M2(1/2,1)'\n"
          "set key left top\n"
          "plot 'eigenvalues.csv' skip 1 using 1:2 with lines title 'l1', \\\n"
          "     '' skip 1 using 1:3 with lines title 'l2', \\\n"
          "     '' skip 1 using 1:4 with lines title 'l3', \\\n"
          "     '' skip 1 using 1:5 with lines title 'l4'\n";
    write_text_file(g.out_dir + "/eigenvalues.gp", gp.str());
    info(g, "eigen: wrote " + std::to_string(records.size()) + " rows to " + g.out_dir);
    return 0;
}

int cmd_optimize(const GlobalOpts& g, double kappa) {
    const auto r = optimize_lambda_star(kappa);
    const json resolved{{"command", "optimize"}, {"kappa", kappa}};
    json out{{"version", kArtifactVersion},
             {"config_hash", config_hash(resolved)},
             {"kappa", kappa},
             {"lambda_opt", r.lambda},
             {"nu_opt", r.nu},
             {"value", r.rate}};
    write_text_file(g.out_dir + "/optimize.json", out.dump(2) + "\n");
    info(g, "optimize: lambda=" + format_double(r.lambda) + " nu=" + format_double(r.nu) +
                " value=" + format_double(r.rate));
    return 0;
}

int cmd_evolve_fp(const GlobalOpts& g, const std::string& config_path) {
    FpRunConfig cfg = parse_fp_config(load_config(config_path));
    if (!g.p_override.empty()) cfg.p_list = g.p_override;
    const json resolved = fp_config_to_json(cfg);
    const std::string hash = config_hash(resolved);

    const GaussianGrid grid(1, cfg.grid.L, cfg.grid.n);
    std::vector<double> w0;
    if (cfg.initial.kind == "shifted_gaussian")
        w0 = exact_fp_oracle(grid, cfg.initial.x0, 0.0);
    else if (cfg.initial.kind == "hermite_perturbation")
        w0 = hermite_initial(grid, cfg.initial.eps, cfg.initial.hermite_k);
    else
        w0 = generate_field(grid, FieldFamily::positive_mixture, g.seed);

    EvolveFpOptions opt;
    opt.T = cfg.T;
    opt.dt = cfg.dt;
    opt.sample_every = cfg.sample_every;
    opt.stencil_order = cfg.grid.stencil_order;

    DecayTrace tr;
    try {
        tr = evolve_fp(grid, w0, cfg.p_list, opt);
    } catch (const std::runtime_error& e) {
        std::cerr << "evolve-fp: invariant failure: " << e.what() << "\n";
        return 1;
    }

    std::ostringstream csv;
    csv << file_header(hash) << "t,p,entropy,fisher,improved_bound,ck_bound\n";
    for (std::size_t c = 0; c < cfg.p_list.size(); ++c) {
        const PhiFamily fam(cfg.p_list[c]);
        for (std::size_t k = 0; k < tr.times.size(); ++k) {
            const double E = tr.entropy[c][k];
            csv << format_double(tr.times[k]) << ',' << format_double(cfg.p_list[c]) << ','
                << format_double(E) << ',' << format_double(tr.fisher[c][k]) << ','
                << format_double(2.0 * improved_F(fam, E)) << ','
                << format_double(tr.ck_bound[c][k]) << '\n';
        }
    }
    write_text_file(g.out_dir + "/trace.csv", csv.str());

    json rates = json::object();
    json eep = json::object();
    const double wlo = std::min(2.0, 0.4 * cfg.T), whi = cfg.T;
    for (std::size_t c = 0; c < cfg.p_list.size(); ++c) {
        const std::string key = format_double(cfg.p_list[c]);
        try {
            rates[key] = fit_decay_rate(tr.times, tr.entropy[c], wlo, whi);
        } catch (const std::invalid_argument&) {
            rates[key] = nullptr;  // stationary or short run
        }
        if (cfg.p_list[c] > 1.0 && cfg.p_list[c] < 2.0) {
            const PhiFamily fam(cfg.p_list[c]);
            const auto rep = check_improved_eep(tr, c, fam);
            const auto env = integrate_improved_ode(fam, tr.entropy[c][0], tr.times);
            double min_env_slack = 1e300;
            for (std::size_t k = 0; k < tr.times.size(); ++k)
                min_env_slack = std::min(min_env_slack, env[k] - tr.entropy[c][k]);
            eep[key] = {{"min_margin_static", rep.min_margin_static},
                        {"min_margin_dynamic", rep.min_margin_dynamic},
                        {"min_envelope_slack", min_env_slack}};
        }
    }
    json summary{{"version", kArtifactVersion},
                 {"config_hash", hash},
                 {"fitted_rates", rates},
                 {"fit_window", {wlo, whi}},
                 {"improved_eep", eep},
                 {"max_raw_mass_defect", tr.max_raw_mass_defect}};
    write_text_file(g.out_dir + "/summary.json", summary.dump(2) + "\n");
    write_text_file(g.out_dir + "/resolved_config.json", resolved.dump(2) + "\n");
    info(g, "evolve-fp: " + std::to_string(tr.times.size()) + " samples written to " + g.out_dir);
    return 0;
}

int cmd_evolve_kfp(const GlobalOpts& g, const std::string& config_path) {
    KfpRunConfig cfg = parse_kfp_config(load_config(config_path));
    if (!g.p_override.empty()) cfg.p_list = g.p_override;
    const json resolved = kfp_config_to_json(cfg);
    const std::string hash = config_hash(resolved);

    const GaussianGrid grid(2, cfg.grid.L, cfg.grid.n);
    std::vector<double> g0;
    if (cfg.initial.kind == "decentred")
        g0 = exact_kfp_oracle(grid, cfg.initial.x0, cfg.initial.v0, 0.0);
    else if (cfg.initial.kind == "v_independent") {
        const std::size_t n = grid.points_per_axis();
        g0.resize(n * n);
        const auto& x = grid.nodes();
        for (std::size_t i = 0; i < n; ++i) {
            const double wx = std::exp(x[i] * cfg.initial.x0 - 0.5 * cfg.initial.x0 * cfg.initial.x0);
            for (std::size_t k = 0; k < n; ++k) g0[i * n + k] = wx;
        }
    } else {
        g0 = generate_field(grid, FieldFamily::positive_mixture, g.seed);
    }

    EvolveKfpOptions opt;
    opt.T = cfg.T;
    opt.dt = cfg.dt;
    opt.sample_every = cfg.sample_every;
    opt.stencil_order = cfg.grid.stencil_order;
    opt.controller.enabled = cfg.controller.enabled;
    opt.controller.nu_choice = cfg.controller.nu_choice;
    opt.controller.a_star_fraction = cfg.controller.a_star_fraction;
    // drive the controller by the first p in (1,2) if present, else 1.5
    opt.controller_p = 1.5;
    for (double p : cfg.p_list)
        if (p > 1.0 && p < 2.0) {
            opt.controller_p = p;
            break;
        }

    KineticTrace tr;
    try {
        tr = evolve_kfp(grid, g0, cfg.p_list, opt);
    } catch (const std::runtime_error& e) {
        std::cerr << "evolve-kfp: invariant failure: " << e.what() << "\n";
        return 1;
    }

    std::ostringstream csv;
    csv << file_header(hash) << "t,p,entropy,J_half,J_lambda,lambda_t,rho_t,a,b,c,j,tau_partial\n";
    for (std::size_t c = 0; c < cfg.p_list.size(); ++c) {
        for (std::size_t k = 0; k < tr.times.size(); ++k) {
            const auto& d = tr.channels[c][k];
            const double lam = tr.controller.empty() ? 0.5 : tr.controller[k].lambda_t;
            const double rho = tr.controller.empty() ? 0.5 : tr.controller[k].rho_t;
            const double tau = tr.controller.empty() ? 0.0 : tr.controller[k].tau_partial;
            csv << format_double(d.t) << ',' << format_double(cfg.p_list[c]) << ','
                << format_double(d.entropy) << ',' << format_double(d.J_half) << ','
                << format_double(d.J_lambda) << ',' << format_double(lam) << ','
                << format_double(rho) << ',' << format_double(d.a) << ',' << format_double(d.b)
                << ',' << format_double(d.c) << ',' << format_double(d.j) << ','
                << format_double(tau) << '\n';
        }
    }
    write_text_file(g.out_dir + "/trace.csv", csv.str());

    json rates = json::object();
    json jslopes = json::object();
    const double wlo = std::min(3.0, 0.4 * cfg.T), whi = cfg.T;
    for (std::size_t c = 0; c < cfg.p_list.size(); ++c) {
        const std::string key = format_double(cfg.p_list[c]);
        std::vector<double> E(tr.times.size()), J(tr.times.size());
        for (std::size_t k = 0; k < tr.times.size(); ++k) {
            E[k] = tr.channels[c][k].entropy;
            J[k] = tr.channels[c][k].J_half;
        }
        try {
            rates[key] = fit_decay_rate(tr.times, E, wlo, whi);
        } catch (const std::invalid_argument&) {
            rates[key] = nullptr;
        }
        double max_slope = -1e300;
        for (std::size_t k = 1; k + 1 < tr.times.size(); ++k)
            if (J[k - 1] > 0.0 && J[k + 1] > 0.0)
                max_slope = std::max(max_slope, (std::log(J[k + 1]) - std::log(J[k - 1])) /
                                                    (tr.times[k + 1] - tr.times[k - 1]));
        jslopes[key] = max_slope;
    }

    json ctrl = json::object();
    if (!tr.controller.empty()) {
        double min_rho = 1e300;
        std::size_t below = 0;
        for (const auto& s : tr.controller) {
            min_rho = std::min(min_rho, s.rho_t);
            if (s.rho_t <= 0.5) ++below;
        }
        const auto tau = estimate_tau(tr);
        ctrl = {{"min_rho", min_rho},
                {"frac_rho_at_or_below_half",
                 static_cast<double>(below) / static_cast<double>(tr.controller.size())},
                {"final_lambda", tr.controller.back().lambda_t},
                {"tau", tau.tau},
                {"tau_converged", tau.converged}};
    }

    json summary{{"version", kArtifactVersion},
                 {"config_hash", hash},
                 {"fitted_rates", rates},
                 {"fit_window", {wlo, whi}},
                 {"max_J_half_log_slope", jslopes},
                 {"controller", ctrl},
                 {"zero_crossings", tr.zero_crossings},
                 {"max_raw_mass_defect", tr.max_raw_mass_defect}};
    write_text_file(g.out_dir + "/summary.json", summary.dump(2) + "\n");
    write_text_file(g.out_dir + "/resolved_config.json", resolved.dump(2) + "\n");
    info(g, "evolve-kfp: " + std::to_string(tr.times.size()) + " samples written to " + g.out_dir);
    return 0;
}

int cmd_check(const GlobalOpts& g, const std::string& suite, int n_seeds) {
    // fan seed blocks out to workers; results merge by (check, p) taking the
    // min margin, so the outcome is independent of the thread count
    const int workers = std::min(worker_count(), std::max(1, n_seeds / 4));
    std::vector<std::vector<CheckResult>> partial(workers);
    std::exception_ptr worker_error;
    {
        std::vector<std::thread> pool;
        std::mutex err_mutex;
        const int block = (n_seeds + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const int lo = w * block;
            const int cnt = std::min(block, n_seeds - lo);
            if (cnt <= 0) break;
            pool.emplace_back([&, w, lo, cnt] {
                try {
                    partial[w] =
                        run_inequality_suite(suite, cnt, g.seed + static_cast<std::uint64_t>(lo));
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(err_mutex);
                    if (!worker_error) worker_error = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
    }
    if (worker_error) std::rethrow_exception(worker_error);
    std::vector<CheckResult> merged;
    for (const auto& block : partial) {
        for (const auto& r : block) {
            bool found = false;
            for (auto& m : merged) {
                if (m.check == r.check && m.p_or_q == r.p_or_q) {
                    m.seeds += r.seeds;
                    if (r.min_margin < m.min_margin) {
                        m.min_margin = r.min_margin;
                        m.argmin_seed = r.argmin_seed;
                    }
                    found = true;
                    break;
                }
            }
            if (!found) merged.push_back(r);
        }
    }
    std::sort(merged.begin(), merged.end(), [](const CheckResult& a, const CheckResult& b) {
        return a.check != b.check ? a.check < b.check : a.p_or_q < b.p_or_q;
    });

    const json resolved{{"command", "check"}, {"suite", suite}, {"seeds", n_seeds},
                        {"seed", g.seed}};
    json checks = json::array();
    int violations = 0;
    for (const auto& r : merged) {
        if (r.min_margin < -1e-8) ++violations;
        checks.push_back({{"check", r.check},
                          {"p_or_q", r.p_or_q},
                          {"seeds", r.seeds},
                          {"min_margin", r.min_margin},
                          {"argmin_seed", r.argmin_seed}});
    }
    json report{{"version", kArtifactVersion},
                {"config_hash", config_hash(resolved)},
                {"suite", suite},
                {"violations", violations},
                {"checks", checks}};
    write_text_file(g.out_dir + "/report.json", report.dump(2) + "\n");
    info(g, "check: " + std::to_string(merged.size()) + " checks, " +
                std::to_string(violations) + " violations");
    return violations == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hypoflow: phi-entropy / kinetic Fokker-Planck laboratory"};
    app.require_subcommand(1);
    app.fallthrough();  // accept the global options after a subcommand name

    GlobalOpts g;
    app.add_option("--out", g.out_dir, "output directory");
    app.add_option("--seed", g.seed, "RNG seed / base seed");
    app.add_option("--p", g.p_override, "override p list")->delimiter(',');
    app.add_flag("--quiet", g.quiet, "suppress progress output");

    double kmin = 0.0, kmax = 8.0, step = 1.0 / 16.0, kappa = 0.0;
    std::string config_path, suite = "all";
    int n_seeds = 200;

    auto* eigen = app.add_subcommand("eigen", "eigenvalue sweep of M2(1/2,1,kappa)");
    eigen->add_option("--min", kmin, "kappa range start");
    eigen->add_option("--max", kmax, "kappa range end");
    eigen->add_option("--step", step, "kappa step");

    auto* optimize = app.add_subcommand("optimize", "maximise the certified rate over (lambda,nu)");
    optimize->add_option("--kappa", kappa, "kappa value")->required();

    auto* efp = app.add_subcommand("evolve-fp", "1-D Fokker-Planck run");
    efp->add_option("--config", config_path, "JSON run config")->required();

    auto* ekfp = app.add_subcommand("evolve-kfp", "phase-space kinetic run");
    ekfp->add_option("--config", config_path, "JSON run config")->required();

    auto* check = app.add_subcommand("check", "static inequality suite");
    check->add_option("--suite", suite, "selector (default all)");
    check->add_option("--seeds", n_seeds, "seeds per check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (eigen->parsed()) {
            if (kmin < 0.0 || kmax > 8.0 || kmin > kmax || step <= 0.0) {
                std::cerr << "eigen: range must satisfy 0 <= min <= max <= 8, step > 0\n";
                return 2;
            }
            return cmd_eigen(g, kmin, kmax, step);
        }
        if (optimize->parsed()) {
            if (kappa < 0.0 || kappa > 8.0) {
                std::cerr << "optimize: kappa must lie in [0,8]\n";
                return 2;
            }
            return cmd_optimize(g, kappa);
        }
        if (efp->parsed()) return cmd_evolve_fp(g, config_path);
        if (ekfp->parsed()) return cmd_evolve_kfp(g, config_path);
        if (check->parsed()) {
            if (n_seeds < 1) {
                std::cerr << "check: --seeds must be positive\n";
                return 2;
            }
            return cmd_check(g, suite, n_seeds);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
