#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace hypoflow {

inline constexpr const char* kArtifactVersion = "hypoflow 0.1.0";

/// 17-significant-digit, locale-independent float formatting; round-trips
/// every double exactly.
std::string format_double(double v);

/// FNV-1a 64-bit hash of the canonical (dumped) JSON text, hex-encoded.
std::string config_hash(const nlohmann::json& j);

/// Throws std::invalid_argument naming the first unknown key; `allowed` is
/// checked at this level only (nested objects validate themselves).
void reject_unknown_keys(const nlohmann::json& j, const std::vector<std::string>& allowed,
                         const std::string& context);

struct GridConfig {
    double L = 8.0;
    std::size_t n = 513;
    int stencil_order = 4;
};

struct FpInitialConfig {
    std::string kind = "shifted_gaussian";  // | hermite_perturbation | random_mixture
    double x0 = 1.0;                        // shifted_gaussian
    double eps = 0.5;                       // hermite_perturbation
    int hermite_k = 2;                      // hermite_perturbation
};

struct FpRunConfig {
    GridConfig grid;
    double dt = 1e-3;
    double T = 5.0;
    std::size_t sample_every = 50;
    std::vector<double> p_list{2.0};
    FpInitialConfig initial;
};

struct KfpInitialConfig {
    std::string kind = "decentred";  // | v_independent | random
    double x0 = 1.0;
    double v0 = 0.0;
};

struct KfpControllerConfig {
    bool enabled = false;
    double nu_choice = 1.0;
    double a_star_fraction = 0.1;
};

struct KfpRunConfig {
    GridConfig grid{8.0, 129, 4};  // x axis; v axis must match
    double dt = 2e-3;
    double T = 8.0;
    std::size_t sample_every = 50;
    std::vector<double> p_list{2.0};
    KfpInitialConfig initial;
    KfpControllerConfig controller;
};

FpRunConfig parse_fp_config(const nlohmann::json& j);
KfpRunConfig parse_kfp_config(const nlohmann::json& j);

nlohmann::json fp_config_to_json(const FpRunConfig& c);
nlohmann::json kfp_config_to_json(const KfpRunConfig& c);

/// Write text to path, creating parent directories.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace hypoflow
