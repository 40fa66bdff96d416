#include "fcp/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fcp {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad numeric value for " + key + ": '" + value + "'");
    }
    if (pos != value.size()) {
        throw std::invalid_argument("config: trailing characters in " + key + ": '" + value + "'");
    }
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(value, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad integer value for " + key + ": '" + value + "'");
    }
    if (pos != value.size()) {
        throw std::invalid_argument("config: trailing characters in " + key + ": '" + value + "'");
    }
    return v;
}

std::vector<std::size_t> parse_size_list(const std::string& key, const std::string& value) {
    std::vector<std::size_t> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(static_cast<std::size_t>(parse_u64(key, item)));
    }
    if (out.empty()) throw std::invalid_argument("config: empty list for " + key);
    return out;
}

std::string format_size_list(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s;
}

} // namespace

std::string to_string(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::DarcyMc: return "darcy_mc";
    case ExperimentKind::PoissonQuantile: return "poisson_quantile";
    case ExperimentKind::NsForecast: return "ns_forecast";
    case ExperimentKind::GridAblation: return "grid_ablation";
    case ExperimentKind::Superres: return "superres";
    case ExperimentKind::VolumeAblation: return "volume_ablation";
    }
    throw std::invalid_argument("unknown experiment kind");
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
    for (auto k : {ExperimentKind::DarcyMc, ExperimentKind::PoissonQuantile,
                   ExperimentKind::NsForecast, ExperimentKind::GridAblation,
                   ExperimentKind::Superres, ExperimentKind::VolumeAblation}) {
        if (to_string(k) == name) return k;
    }
    throw std::invalid_argument("config: unknown experiment kind '" + name + "'");
}

void apply_config_value(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value) {
    const auto as_size = [&] { return static_cast<std::size_t>(parse_u64(key, value)); };
    if (key == "experiment.kind") {
        cfg.kind = experiment_kind_from_string(value);
    } else if (key == "experiment.seed") {
        cfg.seed = parse_u64(key, value);
    } else if (key == "experiment.alpha") {
        cfg.alpha = parse_double(key, value);
    } else if (key == "experiment.out") {
        cfg.out = value;
    } else if (key == "data.n_train") {
        cfg.n_train = as_size();
    } else if (key == "data.n_cal") {
        cfg.n_cal = as_size();
    } else if (key == "data.n_test") {
        cfg.n_test = as_size();
    } else if (key == "data.resolution") {
        cfg.resolution = as_size();
    } else if (key == "data.geometry") {
        if (value != "uniform" && value != "center" && value != "boundary") {
            throw std::invalid_argument("config: geometry must be uniform|center|boundary");
        }
        cfg.geometry = value;
    } else if (key == "data.field_modes") {
        cfg.field_modes = as_size();
    } else if (key == "data.field_decay") {
        cfg.field_decay = parse_double(key, value);
    } else if (key == "data.field_amplitude") {
        cfg.field_amplitude = parse_double(key, value);
    } else if (key == "surrogate.modes") {
        cfg.modes = as_size();
    } else if (key == "surrogate.ridge") {
        cfg.ridge = parse_double(key, value);
    } else if (key == "surrogate.ensemble_size") {
        cfg.ensemble_size = as_size();
    } else if (key == "surrogate.noise_scale") {
        cfg.noise_scale = parse_double(key, value);
    } else if (key == "surrogate.q_lo") {
        cfg.q_lo = parse_double(key, value);
    } else if (key == "surrogate.q_hi") {
        cfg.q_hi = parse_double(key, value);
    } else if (key == "surrogate.pinball_steps") {
        cfg.pinball_steps = as_size();
    } else if (key == "surrogate.pinball_step_size") {
        cfg.pinball_step_size = parse_double(key, value);
    } else if (key == "solver.poisson_method") {
        if (value != "direct" && value != "jacobi") {
            throw std::invalid_argument("config: poisson_method must be direct|jacobi");
        }
        cfg.poisson_method = value;
    } else if (key == "solver.jacobi_tol") {
        cfg.jacobi_tol = parse_double(key, value);
    } else if (key == "solver.ns_viscosity") {
        cfg.ns_viscosity = parse_double(key, value);
    } else if (key == "solver.ns_dt") {
        cfg.ns_dt = parse_double(key, value);
    } else if (key == "solver.ns_forcing_amplitude") {
        cfg.ns_forcing_amplitude = parse_double(key, value);
    } else if (key == "solver.ns_cfl") {
        cfg.ns_cfl = parse_double(key, value);
    } else if (key == "forecast.steps") {
        cfg.forecast_steps = as_size();
    } else if (key == "forecast.step_time") {
        cfg.step_time = parse_double(key, value);
    } else if (key == "forecast.members") {
        cfg.members = as_size();
    } else if (key == "forecast.ic_perturbation") {
        cfg.ic_perturbation = parse_double(key, value);
    } else if (key == "transport.cal_resolutions") {
        cfg.cal_resolutions = parse_size_list(key, value);
    } else if (key == "transport.target_factors") {
        cfg.target_factors = parse_size_list(key, value);
    } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
    }
}

void apply_config_file(ExperimentConfig& cfg, const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("config: cannot open " + path.string());
    std::string line;
    std::string section;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') {
                throw std::invalid_argument("config: malformed section header at line " +
                                            std::to_string(lineno));
            }
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: expected key = value at line " +
                                        std::to_string(lineno));
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (section.empty()) {
            throw std::invalid_argument("config: key '" + key + "' outside any [section]");
        }
        apply_config_value(cfg, section + "." + key, value);
    }
}

std::vector<std::pair<std::string, std::string>> config_items(const ExperimentConfig& cfg) {
    return {
        {"experiment.kind", to_string(cfg.kind)},
        {"experiment.seed", std::to_string(cfg.seed)},
        {"experiment.alpha", format_double(cfg.alpha)},
        {"experiment.out", cfg.out},
        {"data.n_train", std::to_string(cfg.n_train)},
        {"data.n_cal", std::to_string(cfg.n_cal)},
        {"data.n_test", std::to_string(cfg.n_test)},
        {"data.resolution", std::to_string(cfg.resolution)},
        {"data.geometry", cfg.geometry},
        {"data.field_modes", std::to_string(cfg.field_modes)},
        {"data.field_decay", format_double(cfg.field_decay)},
        {"data.field_amplitude", format_double(cfg.field_amplitude)},
        {"surrogate.modes", std::to_string(cfg.modes)},
        {"surrogate.ridge", format_double(cfg.ridge)},
        {"surrogate.ensemble_size", std::to_string(cfg.ensemble_size)},
        {"surrogate.noise_scale", format_double(cfg.noise_scale)},
        {"surrogate.q_lo", format_double(cfg.q_lo)},
        {"surrogate.q_hi", format_double(cfg.q_hi)},
        {"surrogate.pinball_steps", std::to_string(cfg.pinball_steps)},
        {"surrogate.pinball_step_size", format_double(cfg.pinball_step_size)},
        {"solver.poisson_method", cfg.poisson_method},
        {"solver.jacobi_tol", format_double(cfg.jacobi_tol)},
        {"solver.ns_viscosity", format_double(cfg.ns_viscosity)},
        {"solver.ns_dt", format_double(cfg.ns_dt)},
        {"solver.ns_forcing_amplitude", format_double(cfg.ns_forcing_amplitude)},
        {"solver.ns_cfl", format_double(cfg.ns_cfl)},
        {"forecast.steps", std::to_string(cfg.forecast_steps)},
        {"forecast.step_time", format_double(cfg.step_time)},
        {"forecast.members", std::to_string(cfg.members)},
        {"forecast.ic_perturbation", format_double(cfg.ic_perturbation)},
        {"transport.cal_resolutions", format_size_list(cfg.cal_resolutions)},
        {"transport.target_factors", format_size_list(cfg.target_factors)},
    };
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::string out;
    for (const auto& [k, v] : config_items(cfg)) {
        out += k;
        out += " = ";
        out += v;
        out += "\n";
    }
    return out;
}

std::string config_hash(const ExperimentConfig& cfg) {
    const std::string text = serialize_config(cfg);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace fcp
