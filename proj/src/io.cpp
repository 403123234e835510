#include "hypoflow/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace hypoflow {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string config_hash(const json& j) {
    const std::string s = j.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void reject_unknown_keys(const json& j, const std::vector<std::string>& allowed,
                         const std::string& context) {
    if (!j.is_object()) throw std::invalid_argument(context + ": expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const auto& k : allowed)
            if (it.key() == k) {
                ok = true;
                break;
            }
        if (!ok) throw std::invalid_argument(context + ": unknown key '" + it.key() + "'");
    }
}

namespace {

GridConfig parse_grid(const json& j, const GridConfig& defaults) {
    reject_unknown_keys(j, {"L", "n", "stencil_order"}, "grid");
    GridConfig g = defaults;
    if (j.contains("L")) g.L = j.at("L").get<double>();
    if (j.contains("n")) g.n = j.at("n").get<std::size_t>();
    if (j.contains("stencil_order")) g.stencil_order = j.at("stencil_order").get<int>();
    if (g.stencil_order != 2 && g.stencil_order != 4)
        throw std::invalid_argument("grid.stencil_order must be 2 or 4");
    return g;
}

}  // namespace

FpRunConfig parse_fp_config(const json& j) {
    reject_unknown_keys(j, {"grid", "dt", "T", "sample_every", "p_list", "initial"}, "config");
    FpRunConfig c;
    if (j.contains("grid")) c.grid = parse_grid(j.at("grid"), c.grid);
    if (j.contains("dt")) c.dt = j.at("dt").get<double>();
    if (j.contains("T")) c.T = j.at("T").get<double>();
    if (j.contains("sample_every")) c.sample_every = j.at("sample_every").get<std::size_t>();
    if (j.contains("p_list")) c.p_list = j.at("p_list").get<std::vector<double>>();
    if (j.contains("initial")) {
        const auto& ji = j.at("initial");
        reject_unknown_keys(ji, {"kind", "x0", "eps", "hermite_k"}, "initial");
        if (ji.contains("kind")) c.initial.kind = ji.at("kind").get<std::string>();
        if (ji.contains("x0")) c.initial.x0 = ji.at("x0").get<double>();
        if (ji.contains("eps")) c.initial.eps = ji.at("eps").get<double>();
        if (ji.contains("hermite_k")) c.initial.hermite_k = ji.at("hermite_k").get<int>();
    }
    if (c.initial.kind != "shifted_gaussian" && c.initial.kind != "hermite_perturbation" &&
        c.initial.kind != "random_mixture")
        throw std::invalid_argument("initial.kind: unknown value '" + c.initial.kind + "'");
    if (c.dt <= 0.0 || c.T <= 0.0 || c.sample_every == 0)
        throw std::invalid_argument("config: dt, T, sample_every must be positive");
    if (c.p_list.empty()) throw std::invalid_argument("config: p_list must not be empty");
    return c;
}

KfpRunConfig parse_kfp_config(const json& j) {
    reject_unknown_keys(j, {"grid", "v_axis", "dt", "T", "sample_every", "p_list", "initial",
                            "controller"},
                        "config");
    KfpRunConfig c;
    if (j.contains("grid")) c.grid = parse_grid(j.at("grid"), c.grid);
    if (j.contains("v_axis")) {
        const auto& jv = j.at("v_axis");
        reject_unknown_keys(jv, {"L", "n"}, "v_axis");
        const double vl = jv.contains("L") ? jv.at("L").get<double>() : c.grid.L;
        const std::size_t vn = jv.contains("n") ? jv.at("n").get<std::size_t>() : c.grid.n;
        if (vl != c.grid.L || vn != c.grid.n)
            throw std::invalid_argument("v_axis must match the x axis (square phase grid)");
    }
    if (j.contains("dt")) c.dt = j.at("dt").get<double>();
    if (j.contains("T")) c.T = j.at("T").get<double>();
    if (j.contains("sample_every")) c.sample_every = j.at("sample_every").get<std::size_t>();
    if (j.contains("p_list")) c.p_list = j.at("p_list").get<std::vector<double>>();
    if (j.contains("initial")) {
        const auto& ji = j.at("initial");
        reject_unknown_keys(ji, {"kind", "x0", "v0"}, "initial");
        if (ji.contains("kind")) c.initial.kind = ji.at("kind").get<std::string>();
        if (ji.contains("x0")) c.initial.x0 = ji.at("x0").get<double>();
        if (ji.contains("v0")) c.initial.v0 = ji.at("v0").get<double>();
    }
    if (j.contains("controller")) {
        const auto& jc = j.at("controller");
        reject_unknown_keys(jc, {"enabled", "nu_choice", "a_star_fraction"}, "controller");
        if (jc.contains("enabled")) c.controller.enabled = jc.at("enabled").get<bool>();
        if (jc.contains("nu_choice")) c.controller.nu_choice = jc.at("nu_choice").get<double>();
        if (jc.contains("a_star_fraction"))
            c.controller.a_star_fraction = jc.at("a_star_fraction").get<double>();
    }
    if (c.initial.kind != "decentred" && c.initial.kind != "v_independent" &&
        c.initial.kind != "random")
        throw std::invalid_argument("initial.kind: unknown value '" + c.initial.kind + "'");
    if (c.dt <= 0.0 || c.T <= 0.0 || c.sample_every == 0)
        throw std::invalid_argument("config: dt, T, sample_every must be positive");
    if (c.p_list.empty()) throw std::invalid_argument("config: p_list must not be empty");
    if (c.controller.nu_choice <= 0.0 || c.controller.nu_choice >= 1.0 + std::sqrt(3.0) / 2.0)
        throw std::invalid_argument("controller.nu_choice must lie in (0, 1 + sqrt(3)/2)");
    return c;
}

json fp_config_to_json(const FpRunConfig& c) {
    return json{
        {"grid", {{"L", c.grid.L}, {"n", c.grid.n}, {"stencil_order", c.grid.stencil_order}}},
        {"dt", c.dt},
        {"T", c.T},
        {"sample_every", c.sample_every},
        {"p_list", c.p_list},
        {"initial",
         {{"kind", c.initial.kind},
          {"x0", c.initial.x0},
          {"eps", c.initial.eps},
          {"hermite_k", c.initial.hermite_k}}},
    };
}

json kfp_config_to_json(const KfpRunConfig& c) {
    return json{
        {"grid", {{"L", c.grid.L}, {"n", c.grid.n}, {"stencil_order", c.grid.stencil_order}}},
        {"v_axis", {{"L", c.grid.L}, {"n", c.grid.n}}},
        {"dt", c.dt},
        {"T", c.T},
        {"sample_every", c.sample_every},
        {"p_list", c.p_list},
        {"initial", {{"kind", c.initial.kind}, {"x0", c.initial.x0}, {"v0", c.initial.v0}}},
        {"controller",
         {{"enabled", c.controller.enabled},
          {"nu_choice", c.controller.nu_choice},
          {"a_star_fraction", c.controller.a_star_fraction}}},
    };
}

void write_text_file(const std::string& path, const std::string& text) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("write_text_file: cannot open " + path);
    out << text;
}

}  // namespace hypoflow
