#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace fcp {

enum class ExperimentKind {
    DarcyMc,
    PoissonQuantile,
    NsForecast,
    GridAblation,
    Superres,
    VolumeAblation,
};

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

/// Full experiment configuration. Defaults are desk scale: the whole
/// suite runs in minutes on one core while keeping the reference split
/// ratios. Every key can come from the config file ([section] headers,
/// flat key = value lines) or from the matching --section.key CLI flag.
struct ExperimentConfig {
    // [experiment]
    ExperimentKind kind = ExperimentKind::PoissonQuantile;
    std::uint64_t seed = 42;
    double alpha = 0.1;
    std::string out; ///< output directory; FCP_OUT_ROOT/<kind> when empty

    // [data]
    std::size_t n_train = 500;
    std::size_t n_cal = 100;
    std::size_t n_test = 100;
    std::size_t resolution = 32; ///< cells per axis (Darcy default below)
    std::string geometry = "uniform";
    std::size_t field_modes = 8;
    double field_decay = 1.0;
    double field_amplitude = 1.0;

    // [surrogate]
    std::size_t modes = 8;
    double ridge = 1e-8;
    std::size_t ensemble_size = 64;
    double noise_scale = 0.05;
    double q_lo = 0.1;
    double q_hi = 0.9;
    std::size_t pinball_steps = 120;
    double pinball_step_size = 0.1;

    // [solver]
    std::string poisson_method = "direct";
    double jacobi_tol = 1e-10;
    double ns_viscosity = 1e-3;
    double ns_dt = 0.0;
    double ns_forcing_amplitude = 0.1;
    double ns_cfl = 0.5;

    // [forecast]
    std::size_t forecast_steps = 8;
    double step_time = 0.4;
    std::size_t members = 20;
    double ic_perturbation = 0.05;

    // [transport]
    std::vector<std::size_t> cal_resolutions = {36, 40, 44, 48};
    std::vector<std::size_t> target_factors = {2, 4};
};

/// Darcy generation runs 1D at a higher default resolution; callers use
/// this when the config's resolution was left at the generic default.
constexpr std::size_t kDarcyDefaultResolution = 256;

/// Parse `key = value` lines under `[section]` headers. Unknown keys,
/// malformed lines, and unparsable values are hard errors.
void apply_config_file(ExperimentConfig& cfg, const std::filesystem::path& path);

/// Set one key (spelled section.key) from its string value.
void apply_config_value(ExperimentConfig& cfg, const std::string& dotted_key,
                        const std::string& value);

/// All keys in canonical order, with current values rendered as strings.
std::vector<std::pair<std::string, std::string>> config_items(const ExperimentConfig& cfg);

/// Canonical text form (sorted fixed order); identical configs hash
/// identically across runs and platforms.
std::string serialize_config(const ExperimentConfig& cfg);

/// FNV-1a 64-bit hash of the canonical serialization, in hex.
std::string config_hash(const ExperimentConfig& cfg);

} // namespace fcp
