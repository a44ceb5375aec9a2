#ifndef ROTORREC_GRID_STATE_HPP
#define ROTORREC_GRID_STATE_HPP

#include <complex>
#include <vector>

#include "rotorrec/errors.hpp"

namespace rotorrec {

using cplx = std::complex<double>;

/// Uniform momentum grid in units of p0 = hbar*k0. Bins sit at
/// rho_j = -rho_max + j*drho, j = 0..num_points-1, with no half-bin offset.
/// The dual position grid has xi_k = k * 2*pi/(num_points*drho) and spans
/// exactly `subdivisions_per_p0` full periods of the kick potential, so the
/// spectral transform diagonalizes sin(xi) shifts exactly on bins.
struct GridSpec {
    int num_points = 0;
    double rho_max = 0.0;
    double drho = 0.0;
    int subdivisions_per_p0 = 0;  // s = 1/drho; shifts by p0 are s bins

    double rho(int j) const { return -rho_max + j * drho; }
    int origin_index() const { return num_points / 2; }  // bin of rho = 0
    double position_step() const;
    double position(int k) const { return k * position_step(); }

    bool operator==(const GridSpec&) const = default;
};

/// Validates and builds a GridSpec. num_points must be a power of two and
/// 2*rho_max/num_points must equal 1/s for a positive integer s.
GridSpec make_grid(int num_points, double rho_max);

/// Momentum-space wave function on a GridSpec; amps[j] ~ phi(rho_j).
/// Canonical normalization: sum_j |amps[j]|^2 * drho = 1.
struct WaveFunction {
    GridSpec grid;
    std::vector<cplx> amps;
};

/// Dimensionless kicked-rotor parameters. K is the stochasticity parameter,
/// kbar the effective Planck constant; the kick phase amplitude is
/// kick_strength() = K/kbar and the free phase per period is (kbar/2)*rho^2.
struct RotorParams {
    double K = 14.0;
    double kbar = 15.0;
    double sigma = 0.1;

    double kick_strength() const { return K / kbar; }
};

/// Throws validation_error naming the offending field. K = 0 is allowed
/// (kick-free evolution); kbar and sigma must be positive.
void validate(const RotorParams& params);

/// Normalized Gaussian amps[j] ~ exp(-rho_j^2/(4 sigma^2)), real positive.
/// Requires 2*drho <= sigma <= rho_max/10 (resolvable and contained).
WaveFunction gaussian_state(const GridSpec& grid, double sigma);

double norm_squared(const WaveFunction& wf);

/// Probability mass in the outermost 2% of bins (1% per side).
double boundary_mass(const WaveFunction& wf);

/// sum_j conj(a_j) b_j * drho. Throws grid_mismatch_error on different grids.
cplx inner_product(const WaveFunction& a, const WaveFunction& b);

/// sqrt(sum_j |a_j - b_j|^2 * drho).
double l2_distance(const WaveFunction& a, const WaveFunction& b);

/// out[j] = amps[j + shift_bins], zero fill at the exposed edge. Realizes
/// the readout map phi(p) -> phi(p + P) with P = shift_bins * drho, i.e. a
/// state centered at 0 moves to -P. Throws leakage_error if more than 1e-8
/// of the probability mass falls off-grid.
WaveFunction shift_momentum(const WaveFunction& wf, int shift_bins);

/// Unitary spectral transform to the periodic position grid:
/// psi_k = drho/sqrt(2 pi) * sum_j exp(i rho_j xi_k) amps[j].
std::vector<cplx> to_position(const WaveFunction& wf);

/// Inverse of to_position.
WaveFunction to_momentum(const GridSpec& grid, const std::vector<cplx>& position_amps);

}  // namespace rotorrec

#endif
