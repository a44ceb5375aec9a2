#ifndef ROTORREC_RECONSTRUCT_HPP
#define ROTORREC_RECONSTRUCT_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rotorrec/measurement.hpp"

namespace rotorrec {

/// Complex interference term per bin,
///   M_N(p; P) = 2 W^(0) + 2i W^(pi/2) - (1+i) [W_N(p) + curly-W_N(p+P)],
/// which for exact inputs equals phi_N(p) * conj(vphi_N(p+P)).
struct InterferenceTerm {
    GridSpec grid;
    int shift_bins = 0;
    std::vector<cplx> values;
};

InterferenceTerm interference_term(const MeasuredSet& set);

/// How the reconstruction was produced, plus the audit trail the mask and
/// budget checks need.
struct ReconMetadata {
    ReferenceKind method = ReferenceKind::Holographic;
    int num_kicks = 0;
    RotorParams params;
    std::string noise = "exact";
    std::uint64_t master_seed = 0;
    int realization = 0;
    int num_sets = 0;           // measured sets consumed
    int num_distributions = 0;  // histograms/arrays consumed (4 per set + planning)
    double tau_floor = 0.0;     // holographic division floor (relative to max |phi0|)
    double min_ref_ratio_used = 1.0;  // smallest |phi0(p+nP0)|/max used in a division
    bool absolute_phase_known = true; // false: result carries exp(i arg vphi_N(0))
    double w_ref_origin = 0.0;        // self-interference normalization input
};

/// Complex estimate of phi_N. amps is zero wherever valid_mask is false.
struct ReconstructedState {
    GridSpec grid;
    std::vector<cplx> amps;
    std::vector<std::uint8_t> valid_mask;
    ReconMetadata meta;

    /// Copy normalized to unit norm over the valid bins.
    WaveFunction normalized() const;
};

struct PeakFidelity {
    int cell = 0;          // integer momentum the unit cell is centered on
    double exact_mass = 0.0;
    double fidelity = 0.0; // overlap^2 of the normalized restrictions
};

struct FidelityReport {
    double fidelity = 0.0;     // |<rec_normalized | exact>|^2 against the full state
    double global_phase = 0.0; // arg of the aligning inner product
    std::vector<PeakFidelity> per_peak;
};

/// Bins of the unit momentum cell [m - 1/2, m + 1/2), clipped to the grid.
std::vector<int> comb_cell_bins(const GridSpec& grid, int cell);

/// Partitions the grid into unit cells centered on integer rho = m and
/// returns the readout shifts n = -m of every cell whose mass exceeds
/// mass_threshold * total, sorted by descending mass (ties: smaller |n|
/// first, then positive n).
std::vector<int> plan_peaks(const GridSpec& grid, const std::vector<double>& w_upper_estimate,
                            double mass_threshold);

/// Self-interference inversion along the diagonal P = -p (+ optional offset):
///   phi_N(p) = M_N(p; -p + p_off) / sqrt(2 curly-W_N(p_off)).
/// `diagonal_sets` maps the target bin index to the MeasuredSet recorded with
/// shift_bins = p_off_bins - (target - origin). The result equals the true
/// state only up to the unobservable phase of vphi_N(p_off). Throws
/// origin_vanishes_error when w_ref_at_offset is at or below the floor.
ReconstructedState reconstruct_self_interference(const std::map<int, MeasuredSet>& diagonal_sets,
                                                 double w_ref_at_offset, int p_off_bins = 0);

/// Holographic inversion from sets recorded at shifts P = n p0:
///   phi_N(p) = exp(-i N beta(p + n p0)) M_N(p; n p0) / conj(phi0(p + n p0)),
/// beta(rho) = (kbar/2) rho^2. Bins where |phi0(p + n p0)| < tau_floor * max
/// stay masked; bins covered by several shifts take the one with the larger
/// reference amplitude. The absolute phase is fully determined.
ReconstructedState reconstruct_holographic(const std::vector<MeasuredSet>& sets,
                                           const WaveFunction& phi0, double kbar, int num_kicks,
                                           double tau_floor);

/// Headline fidelity |<rec_normalized|exact>|^2, the aligning global phase,
/// and per-peak fidelities of the normalized cell restrictions.
FidelityReport fidelity(const ReconstructedState& rec, const WaveFunction& exact);

/// Multiplies amps by exp(-i arg <rec|reference>) so plotted phases are
/// comparable; fidelity is unchanged.
ReconstructedState align_global_phase(const ReconstructedState& rec,
                                      const WaveFunction& reference);

}  // namespace rotorrec

#endif
