#include "rotorrec/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace rotorrec {

ReferenceKind ExperimentConfig::reference_kind() const {
    return method == "self" ? ReferenceKind::SelfInterference : ReferenceKind::Holographic;
}

NoiseModel ExperimentConfig::noise_model() const {
    if (delta_w > 0.0) return NoiseModel::RelativeNoise;
    if (events > 0) return NoiseModel::MonteCarlo;
    return NoiseModel::Exact;
}

double ExperimentConfig::resolved_epsilon_peak() const {
    if (epsilon_peak) return *epsilon_peak;
    return noise_model() == NoiseModel::Exact ? 1e-13 : 1e-4;
}

double ExperimentConfig::resolved_tau_floor() const {
    if (tau_floor) return *tau_floor;
    return noise_model() == NoiseModel::Exact ? 1e-8 : 1e-2;
}

std::vector<int> ExperimentConfig::resolved_kicks(bool sweep_command) const {
    if (!kicks.empty()) return kicks;
    if (sweep_command) return {9};
    return {1, 2, 5};
}

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw validation_error(message);
}

}  // namespace

void validate_config(const ExperimentConfig& cfg) {
    require(std::isfinite(cfg.K) && cfg.K >= 0.0, "config key 'K' must be >= 0");
    require(std::isfinite(cfg.kbar) && cfg.kbar > 0.0, "config key 'kbar' must be positive");
    require(std::isfinite(cfg.sigma) && cfg.sigma > 0.0, "config key 'sigma' must be positive");
    require(cfg.num_points > 0, "config key 'num_points' must be positive");
    require(std::isfinite(cfg.rho_max) && cfg.rho_max > 0.0,
            "config key 'rho_max' must be positive");
    for (int n : cfg.kicks) require(n >= 0, "config key 'kicks' entries must be >= 0");
    require(cfg.method == "self" || cfg.method == "holo",
            "config key 'method' must be \"self\" or \"holo\"");
    require(cfg.events >= 0, "config key 'events' must be >= 0");
    require(std::isfinite(cfg.delta_w) && cfg.delta_w >= 0.0,
            "config key 'delta_w' must be >= 0");
    require(cfg.realizations >= 1, "config key 'realizations' must be >= 1");
    if (cfg.epsilon_peak) {
        require(*cfg.epsilon_peak > 0.0 && *cfg.epsilon_peak < 1.0,
                "config key 'epsilon_peak' must be in (0, 1)");
    }
    if (cfg.tau_floor) {
        require(*cfg.tau_floor > 0.0 && *cfg.tau_floor < 1.0,
                "config key 'tau_floor' must be in (0, 1)");
    }
    require(!cfg.accuracy.empty(), "config key 'accuracy' must be a nonempty list");
    for (double a : cfg.accuracy) {
        require(std::isfinite(a) && a > 0.0, "config key 'accuracy' entries must be positive");
    }
    require(!cfg.output_dir.empty(), "config key 'output_dir' must be nonempty");
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["K"] = cfg.K;
    j["kbar"] = cfg.kbar;
    j["sigma"] = cfg.sigma;
    j["num_points"] = cfg.num_points;
    j["rho_max"] = cfg.rho_max;
    if (!cfg.kicks.empty()) j["kicks"] = cfg.kicks;
    j["method"] = cfg.method;
    j["events"] = cfg.events;
    j["delta_w"] = cfg.delta_w;
    j["realizations"] = cfg.realizations;
    j["master_seed"] = cfg.master_seed;
    if (cfg.epsilon_peak) j["epsilon_peak"] = *cfg.epsilon_peak;
    if (cfg.tau_floor) j["tau_floor"] = *cfg.tau_floor;
    j["accuracy"] = cfg.accuracy;
    j["output_dir"] = cfg.output_dir;
    return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw validation_error("config must be a JSON object of flat keys");
    ExperimentConfig cfg;
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "K") {
                cfg.K = value.get<double>();
            } else if (key == "kbar") {
                cfg.kbar = value.get<double>();
            } else if (key == "sigma") {
                cfg.sigma = value.get<double>();
            } else if (key == "num_points") {
                cfg.num_points = value.get<int>();
            } else if (key == "rho_max") {
                cfg.rho_max = value.get<double>();
            } else if (key == "kicks") {
                if (value.is_number_integer()) {
                    cfg.kicks = {value.get<int>()};
                } else {
                    cfg.kicks = value.get<std::vector<int>>();
                    if (cfg.kicks.empty()) {
                        throw validation_error("config key 'kicks' must be nonempty if given");
                    }
                }
            } else if (key == "method") {
                cfg.method = value.get<std::string>();
            } else if (key == "events") {
                cfg.events = value.get<long>();
            } else if (key == "delta_w") {
                cfg.delta_w = value.get<double>();
            } else if (key == "realizations") {
                cfg.realizations = value.get<int>();
            } else if (key == "master_seed") {
                cfg.master_seed = value.get<std::uint64_t>();
            } else if (key == "epsilon_peak") {
                cfg.epsilon_peak = value.get<double>();
            } else if (key == "tau_floor") {
                cfg.tau_floor = value.get<double>();
            } else if (key == "accuracy") {
                cfg.accuracy = value.get<std::vector<double>>();
            } else if (key == "output_dir") {
                cfg.output_dir = value.get<std::string>();
            } else {
                std::ostringstream msg;
                msg << "unknown config key '" << key << "'";
                throw validation_error(msg.str());
            }
        } catch (const nlohmann::json::exception& e) {
            std::ostringstream msg;
            msg << "config key '" << key << "': " << e.what();
            throw validation_error(msg.str());
        }
    }
    validate_config(cfg);
    return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("config parse error: ") + e.what());
    }
    return config_from_json(j);
}

nlohmann::ordered_json RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["code_version"] = kCodeVersion;
    j["config"] = config_to_json(config);
    j["resolved"] = {
        {"noise_model", config.noise_model() == NoiseModel::Exact        ? "exact"
                        : config.noise_model() == NoiseModel::MonteCarlo ? "monte_carlo"
                                                                         : "relative_noise"},
        {"epsilon_peak", config.resolved_epsilon_peak()},
        {"tau_floor", config.resolved_tau_floor()},
    };
    j["conventions"] = {
        {"units", "hbar = k0 = m = T = 1, so p0 = 1 and momenta are in units of p0"},
        {"kick_ordering", "one free period then a kick; no kick acts at t = 0"},
        {"free_phase_per_period", "exp(-i (kbar/2) rho^2)"},
        {"momentum_window", "rho in [-rho_max, rho_max), a choice the grid does not pin down"},
        {"readout_sign", "a readout shift of b bins realizes phi(p) -> phi(p + b*drho)"},
    };
    j["seed_rule"] =
        "per-histogram seed = splitmix64 chain over (master_seed, realization, setting_index, "
        "array_index); arrays are 0:w_theta0 1:w_theta_pi2 2:w_upper 3:w_lower";
    j["outputs"] = outputs;
    j["timings"] = {{"total_seconds", total_seconds}};
    return j;
}

}  // namespace rotorrec
