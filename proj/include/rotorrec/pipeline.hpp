#ifndef ROTORREC_PIPELINE_HPP
#define ROTORREC_PIPELINE_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "rotorrec/config.hpp"
#include "rotorrec/reconstruct.hpp"

namespace rotorrec {

/// Exact evolution shared by every noise realization of a run.
struct PipelineContext {
    ExperimentConfig cfg;
    GridSpec grid;
    WaveFunction phi0;
    int num_kicks = 0;
    ReferenceKind kind = ReferenceKind::Holographic;
    TwoBranchState pair;  // branches after num_kicks, before readout
    WaveFunction exact;   // system branch, the state to reconstruct
};

PipelineContext make_context(const ExperimentConfig& cfg, ReferenceKind kind, int num_kicks);

struct ReconstructionRun {
    int num_kicks = 0;
    ReconstructedState rec;          // as inverted
    ReconstructedState rec_aligned;  // global phase aligned to the exact state
    FidelityReport report;
    std::vector<Histogram> histograms;  // kept for Monte-Carlo runs on request
    int planning_distributions = 0;     // sampled/noisy arrays used by plan_peaks
};

/// Measurement (per the config's noise model) + inversion + fidelity.
/// `realization` indexes the noise realization in the seed derivation.
ReconstructionRun run_reconstruction(const PipelineContext& ctx, int realization,
                                     bool keep_histograms = false);

struct SweepPoint {
    std::string method;
    double accuracy = 0.0;  // +infinity encodes the exact delta_w = 0 point
    double mean_fidelity = 0.0;
    double std_fidelity = 0.0;
    int n_realizations = 0;
};

/// Fidelity-vs-accuracy sweep over both methods: cfg.accuracy grid with
/// delta_w = 1/a plus the exact point, cfg.realizations realizations each.
std::vector<SweepPoint> run_fidelity_sweep(const ExperimentConfig& cfg, int jobs);

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Propagator-equivalence, unitarity, interference-identity, parity,
/// resonance and sideband checks at the config's parameters.
std::vector<CheckResult> run_oracle_checks(const ExperimentConfig& cfg);

// Command drivers behind the CLI. They write data files plus manifest.json
// under cfg.output_dir and log one line per result. Errors are thrown:
// validation_error (usage, exit 1), alignment/leakage (numerical, exit 2),
// origin_vanishes/empty_mask (reconstruction, exit 3).
int cmd_evolve(const ExperimentConfig& cfg, std::ostream& log);
int cmd_reconstruct(const ExperimentConfig& cfg, std::ostream& log);
int cmd_fidelity_sweep(const ExperimentConfig& cfg, int jobs, std::ostream& log);
int cmd_oracle_check(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace rotorrec

#endif
