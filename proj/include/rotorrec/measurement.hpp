#ifndef ROTORREC_MEASUREMENT_HPP
#define ROTORREC_MEASUREMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rotorrec/dynamics.hpp"

namespace rotorrec {

/// One interferometric readout setting: projection phase theta, readout
/// shift P in grid bins, number of atoms, and the RNG seed used to sample.
struct MeasurementSetting {
    double theta = 0.0;
    int shift_bins = 0;
    long num_events = 0;
    std::uint64_t seed = 0;
};

/// Counted measurement events per momentum bin. Atoms projected onto the
/// orthogonal internal state contribute to total_atoms but not to counts.
struct Histogram {
    MeasurementSetting setting;
    GridSpec grid;
    std::vector<long> counts;
    long total_atoms = 0;
    std::string label;  // which distribution was sampled, for exports

    /// Unbiased per-bin density estimate counts / (M * drho).
    std::vector<double> estimate() const;
};

enum class Provenance { Exact, MonteCarlo, RelativeNoise };

/// The four distributions Eq.-style inversion consumes, all for one readout
/// shift P: W^(0), W^(pi/2), the system density W_N(p) and the (shifted)
/// reference density as measured, i.e. curly-W_N(p + P) per bin.
struct MeasuredSet {
    GridSpec grid;
    int shift_bins = 0;
    std::vector<double> w_theta0;
    std::vector<double> w_theta_pi2;
    std::vector<double> w_upper;
    std::vector<double> w_lower;
    Provenance provenance = Provenance::Exact;
    long events = 0;      // MonteCarlo only
    double delta_w = 0.0; // RelativeNoise only
};

/// W_upper[j] = |upper_j|^2 / 2 and W_lower[j] = |lower_j|^2 / 2; each
/// integrates to 1/2 (the branch weight).
std::pair<std::vector<double>, std::vector<double>> branch_distributions(
    const TwoBranchState& state);

/// Probability density to find the atom in (|1> + e^{-i theta} |2>)/sqrt(2)
/// with momentum p:
///   W^(theta)(p) = 1/2 { W_N(p) + curly-W(p) + Re[phi(p) conj(vphi(p)) e^{-i theta}] }
/// where vphi is the (already shifted) lower branch. A nonzero shift_bins
/// applies the readout shift on the fly. Tiny negative rounding is clamped.
std::vector<double> theta_distribution(const TwoBranchState& state_after_readout, double theta,
                                       int shift_bins = 0);

/// Packages the four exact distributions for readout shift P = shift_bins*drho
/// from the pre-readout pair state.
MeasuredSet exact_measured_set(const TwoBranchState& state, int shift_bins);

/// Simulates M single-atom events from `density` whose total mass mu must be
/// <= 1: each atom is recorded in some momentum bin with probability mu
/// (otherwise it only counts toward total_atoms). Identical seeds give
/// bitwise-identical histograms.
Histogram sample_histogram(const GridSpec& grid, const std::vector<double>& density,
                           const MeasurementSetting& setting);

/// Per-bin multiplicative Gaussian noise: out[j] = max(0, d[j]*(1 + dw*xi_j)).
/// delta_w = 0 returns the input exactly.
std::vector<double> apply_relative_noise(const std::vector<double>& density, double delta_w,
                                         std::uint64_t seed);

/// MeasuredSet estimated from M-event histograms of each of the four exact
/// distributions. Seeds derive from (master_seed, realization, setting_index,
/// array_index); sampled histograms are appended to *histograms when given.
MeasuredSet monte_carlo_measured_set(const TwoBranchState& state, int shift_bins, long events,
                                     std::uint64_t master_seed, std::uint64_t realization,
                                     std::uint64_t setting_index,
                                     std::vector<Histogram>* histograms = nullptr);

/// MeasuredSet with independent relative noise on each of the four exact
/// distributions; same seed derivation scheme as the Monte-Carlo variant.
MeasuredSet noisy_measured_set(const TwoBranchState& state, int shift_bins, double delta_w,
                               std::uint64_t master_seed, std::uint64_t realization,
                               std::uint64_t setting_index);

/// CSV with columns (rho_bin_center, counts, density_estimate) preceded by
/// `# key=value` metadata lines for the setting.
void write_histogram_csv(std::ostream& os, const Histogram& hist);

}  // namespace rotorrec

#endif
