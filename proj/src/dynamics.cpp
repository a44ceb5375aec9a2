#include "rotorrec/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace rotorrec {

namespace {

double bessel_series(int order, double half_z) {
    // J_l(z) = sum_k (-1)^k (z/2)^(l+2k) / (k! (l+k)!), l >= 0
    double term = 1.0;
    for (int i = 1; i <= order; ++i) term *= half_z / i;
    if (term == 0.0) return 0.0;
    double sum = term;
    const double hz2 = half_z * half_z;
    for (int k = 1; k <= 400; ++k) {
        term *= -hz2 / (static_cast<double>(k) * (order + k));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

double bessel_miller(int order, double z) {
    // Downward recurrence f_{k-1} = (2k/z) f_k - f_{k+1}, normalized with
    // sum_l J_l(z)^2 = J_0^2 + 2 sum_{k>=1} J_k^2 = 1.
    const int start = ((order > static_cast<int>(z) ? order : static_cast<int>(z)) + 40) & ~1;
    double fkp1 = 0.0;
    double fk = 1e-30;
    double result = (order == start) ? fk : 0.0;
    double sum2 = 0.0;
    for (int k = start; k > 0; --k) {
        const double fkm1 = (2.0 * k / z) * fk - fkp1;
        fkp1 = fk;
        fk = fkm1;
        sum2 += 2.0 * fkp1 * fkp1;
        if (k - 1 == order) result = fk;
        if (std::abs(fk) > 1e100) {
            fk *= 1e-100;
            fkp1 *= 1e-100;
            result *= 1e-100;
            sum2 *= 1e-200;
        }
    }
    sum2 += fk * fk;
    return result / std::sqrt(sum2);
}

}  // namespace

WaveFunction free_propagate(const WaveFunction& wf, double kbar, int periods) {
    WaveFunction out{wf.grid, std::vector<cplx>(wf.grid.num_points)};
    const double half_kbar = 0.5 * kbar * periods;
    for (int j = 0; j < wf.grid.num_points; ++j) {
        const double rho = wf.grid.rho(j);
        out.amps[j] = wf.amps[j] * std::polar(1.0, -half_kbar * rho * rho);
    }
    return out;
}

WaveFunction kick(const WaveFunction& wf, double kick_strength, double phase_offset) {
    std::vector<cplx> pos = to_position(wf);
    const int n = wf.grid.num_points;
    const std::int64_t s = wf.grid.subdivisions_per_p0;
    // xi_k = 2 pi k s / N; reduce k s mod N before the sine so the argument
    // stays small regardless of grid size.
    const double step = 2.0 * std::numbers::pi / n;
    for (int k = 0; k < n; ++k) {
        const double angle = step * static_cast<double>((k * s) % n) + phase_offset;
        pos[k] *= std::polar(1.0, -kick_strength * std::sin(angle));
    }
    return to_momentum(wf.grid, pos);
}

namespace {

std::vector<WaveFunction> evolve_kicked(const WaveFunction& phi0, const RotorParams& params,
                                        int num_kicks, double phase_offset) {
    validate(params);
    if (num_kicks < 0) throw validation_error("num_kicks must be >= 0");
    std::vector<WaveFunction> states;
    states.reserve(num_kicks);
    WaveFunction phi = phi0;
    for (int n = 1; n <= num_kicks; ++n) {
        phi = kick(free_propagate(phi, params.kbar, 1), params.kick_strength(), phase_offset);
        const double edge = boundary_mass(phi);
        if (edge > 1e-6) {
            std::ostringstream msg;
            msg << "evolution aborted: edge mass " << edge << " after kick " << n
                << " exceeds 1e-6; enlarge rho_max to avoid aliasing";
            throw leakage_error(msg.str());
        }
        states.push_back(phi);
    }
    return states;
}

}  // namespace

std::vector<WaveFunction> evolve_rotor(const WaveFunction& phi0, const RotorParams& params,
                                       int num_kicks) {
    return evolve_kicked(phi0, params, num_kicks, 0.0);
}

double bessel_j(int order, double z) {
    if (!(std::abs(z) <= 50.0)) {
        std::ostringstream msg;
        msg << "bessel_j: |z| = " << std::abs(z) << " outside the implemented range [0, 50]";
        throw validation_error(msg.str());
    }
    // Reduce to l >= 0, z >= 0 via J_{-l}(z) = (-1)^l J_l(z) = J_l(-z).
    double sign = 1.0;
    if (order < 0) {
        order = -order;
        if (order & 1) sign = -sign;
    }
    if (z < 0.0) {
        z = -z;
        if (order & 1) sign = -sign;
    }
    if (z == 0.0) return order == 0 ? 1.0 : 0.0;
    if (z <= 12.0) return sign * bessel_series(order, 0.5 * z);
    return sign * bessel_miller(order, z);
}

WaveFunction bessel_map_step(const WaveFunction& phi_prev, const RotorParams& params,
                             double tol) {
    validate(params);
    const GridSpec& grid = phi_prev.grid;
    const int s = grid.subdivisions_per_p0;
    if (s < 1) {
        throw alignment_error("bessel_map_step: p0 is not an integer number of bins");
    }
    const double kappa = params.kick_strength();

    int l_max = 0;
    while (l_max < 60 && std::abs(bessel_j(l_max, kappa)) >= tol) ++l_max;

    // Free evolution over one period, then the Bessel comb.
    const WaveFunction g = free_propagate(phi_prev, params.kbar, 1);

    const int n = grid.num_points;
    WaveFunction out{grid, std::vector<cplx>(n, cplx{0.0, 0.0})};
    for (int l = -l_max; l <= l_max; ++l) {
        // J_l(-kappa) = (-1)^l J_l(kappa)
        double coeff = bessel_j(l, kappa);
        if (l & 1) coeff = -coeff;
        if (coeff == 0.0) continue;
        const int offset = l * s;
        const int j_lo = std::max(0, offset);
        const int j_hi = std::min(n, n + offset);
        for (int j = j_lo; j < j_hi; ++j) {
            out.amps[j] += coeff * g.amps[j - offset];
        }
    }
    return out;
}

TwoBranchState evolve_pair(const WaveFunction& phi0, const RotorParams& params,
                           ReferenceKind kind, int num_kicks) {
    if (num_kicks < 0) throw validation_error("num_kicks must be >= 0");
    TwoBranchState state{phi0, phi0};
    if (num_kicks == 0) return state;

    auto upper_states = evolve_kicked(phi0, params, num_kicks, 0.0);
    state.upper = std::move(upper_states.back());

    switch (kind) {
        case ReferenceKind::SelfInterference: {
            auto lower_states = evolve_kicked(phi0, params, num_kicks, std::numbers::pi);
            state.lower = std::move(lower_states.back());
            break;
        }
        case ReferenceKind::Holographic:
            state.lower = free_propagate(phi0, params.kbar, num_kicks);
            break;
    }
    return state;
}

TwoBranchState readout_kick(const TwoBranchState& state, int shift_bins) {
    if (state.upper.grid != state.lower.grid) {
        throw grid_mismatch_error("readout_kick: branches live on different grids");
    }
    return TwoBranchState{state.upper, shift_momentum(state.lower, shift_bins)};
}

}  // namespace rotorrec
