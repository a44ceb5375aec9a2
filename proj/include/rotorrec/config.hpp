#ifndef ROTORREC_CONFIG_HPP
#define ROTORREC_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rotorrec/dynamics.hpp"

namespace rotorrec {

inline constexpr const char* kCodeVersion = "rotorrec 0.1.0";

enum class NoiseModel { Exact, MonteCarlo, RelativeNoise };

/// Full description of a run. Flat key-value config files (JSON object) use
/// exactly the field names below; unknown keys are rejected.
struct ExperimentConfig {
    double K = 14.0;
    double kbar = 15.0;
    double sigma = 0.1;
    int num_points = 4096;
    double rho_max = 64.0;
    std::vector<int> kicks;  // empty = command default ({1,2,5}; sweep {9})
    std::string method = "holo";  // "self" | "holo"
    long events = 1000000;        // Monte-Carlo atoms per histogram; 0 = exact
    double delta_w = 0.0;         // relative noise; > 0 selects the noise model
    int realizations = 25;
    std::uint64_t master_seed = 12345;
    std::optional<double> epsilon_peak;  // default depends on the noise model
    std::optional<double> tau_floor;
    std::vector<double> accuracy = {10.0, 30.0, 100.0, 300.0, 1000.0};
    std::string output_dir = "out";

    bool operator==(const ExperimentConfig&) const = default;

    RotorParams rotor_params() const { return RotorParams{K, kbar, sigma}; }
    ReferenceKind reference_kind() const;

    /// delta_w > 0 wins, then events > 0, else exact.
    NoiseModel noise_model() const;

    /// Peak-selection threshold: user value, else 1e-4 (1e-13 for exact data,
    /// where coverage is free of noise amplification).
    double resolved_epsilon_peak() const;
    /// Holographic division floor: user value, else 1e-2 (1e-8 for exact data).
    double resolved_tau_floor() const;

    std::vector<int> resolved_kicks(bool sweep_command) const;
};

/// Throws validation_error naming the offending key.
void validate_config(const ExperimentConfig& cfg);

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Reads and validates a JSON config file.
ExperimentConfig parse_config(const std::string& path);

/// Run provenance written next to the data files. Every emitted file is
/// listed in `outputs`; timings are the only fields that vary between
/// identically-seeded reruns.
struct RunManifest {
    std::string command;
    ExperimentConfig config;
    std::vector<std::string> outputs;
    double total_seconds = 0.0;

    nlohmann::ordered_json to_json() const;
};

}  // namespace rotorrec

#endif
