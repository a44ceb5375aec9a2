#ifndef ROTORREC_DYNAMICS_HPP
#define ROTORREC_DYNAMICS_HPP

#include <vector>

#include "rotorrec/grid_state.hpp"

namespace rotorrec {

/// Dynamics of the reference branch.
///   SelfInterference: kicked rotor with the potential phase-shifted by pi.
///   Holographic:      free evolution, |reference| stays equal to |phi0|.
enum class ReferenceKind { SelfInterference, Holographic };

/// Internal levels |1> (system, kicked rotor) and |2> (reference). Both
/// branches are stored unit-norm; the physical branch weight 1/2 enters only
/// in the measurement formulas.
struct TwoBranchState {
    WaveFunction upper;
    WaveFunction lower;
};

/// Multiplies amps[j] by exp(-i * periods * (kbar/2) * rho_j^2).
WaveFunction free_propagate(const WaveFunction& wf, double kbar, int periods);

/// One delta kick: multiplies the position representation by
/// exp(-i * kick_strength * sin(xi + phase_offset)). phase_offset pi equals
/// strength -kick_strength at offset 0.
WaveFunction kick(const WaveFunction& wf, double kick_strength, double phase_offset = 0.0);

/// Iterates phi_n = kick(free_propagate(phi_{n-1})) starting from phi0 and
/// returns the states after each kick, [phi_1, ..., phi_N]. No kick acts at
/// t = 0. Aborts with leakage_error if edge mass exceeds 1e-6 at any step.
std::vector<WaveFunction> evolve_rotor(const WaveFunction& phi0, const RotorParams& params,
                                       int num_kicks);

/// Bessel function of the first kind, J_order(z). Power series for |z| <= 12,
/// downward recurrence normalized by sum_l J_l^2 = 1 otherwise. |z| <= 50.
double bessel_j(int order, double z);

/// One step of the momentum-space map
///   phi_N(p) = sum_l J_l(-kappa/hbar) exp(-i beta(p - l p0)) phi_{N-1}(p - l p0)
/// with beta(rho) = (kbar/2) rho^2, truncated where |J_l| < tol. Independent
/// of the FFT split-step route; shifts land on bins exactly.
WaveFunction bessel_map_step(const WaveFunction& phi_prev, const RotorParams& params,
                             double tol = 1e-14);

/// Evolves both branches through N kick periods. Upper branch is the kicked
/// rotor; lower branch follows `kind`.
TwoBranchState evolve_pair(const WaveFunction& phi0, const RotorParams& params,
                           ReferenceKind kind, int num_kicks);

/// Final linear-potential kick on the reference: lower(p) -> lower(p + P)
/// with P = shift_bins * drho. The upper branch is untouched.
TwoBranchState readout_kick(const TwoBranchState& state, int shift_bins);

}  // namespace rotorrec

#endif
