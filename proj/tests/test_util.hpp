#ifndef ROTORREC_TEST_UTIL_HPP
#define ROTORREC_TEST_UTIL_HPP

// Shared test fixtures and independent oracles. Everything here is
// deliberately separate from the library implementation so that the checks
// in the test suites do not reuse the code paths they verify.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "rotorrec/grid_state.hpp"

namespace testutil {

/// Plain power-series Bessel oracle, sum_k (-1)^k (z/2)^(l+2k) / (k! (l+k)!).
/// Accurate to ~1e-15 for the |z| <= 3 arguments the tests use.
inline double bessel_series_oracle(int order, double z) {
    double sign = 1.0;
    if (order < 0) {
        order = -order;
        if (order % 2 == 1) sign = -sign;
    }
    if (z < 0.0) {
        z = -z;
        if (order % 2 == 1) sign = -sign;
    }
    const double h = 0.5 * z;
    double term = 1.0;
    for (int i = 1; i <= order; ++i) term *= h / i;
    double sum = term;
    for (int k = 1; k < 60; ++k) {
        term *= -(h * h) / (static_cast<double>(k) * (order + k));
        sum += term;
    }
    return sign * sum;
}

/// Pseudo-random normalized state; mt19937 keeps it reproducible.
inline rotorrec::WaveFunction random_state(const rotorrec::GridSpec& grid, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    rotorrec::WaveFunction wf{grid, std::vector<rotorrec::cplx>(grid.num_points)};
    double norm2 = 0.0;
    for (auto& a : wf.amps) {
        a = rotorrec::cplx{uni(gen), uni(gen)};
        norm2 += std::norm(a);
    }
    const double scale = 1.0 / std::sqrt(norm2 * grid.drho);
    for (auto& a : wf.amps) a *= scale;
    return wf;
}

/// Random state with mass concentrated near the origin so shifts do not leak.
inline rotorrec::WaveFunction random_localized_state(const rotorrec::GridSpec& grid,
                                                     unsigned seed, double envelope_width) {
    rotorrec::WaveFunction wf = random_state(grid, seed);
    double norm2 = 0.0;
    for (int j = 0; j < grid.num_points; ++j) {
        const double rho = grid.rho(j);
        wf.amps[j] *= std::exp(-rho * rho / (2.0 * envelope_width * envelope_width));
        norm2 += std::norm(wf.amps[j]);
    }
    const double scale = 1.0 / std::sqrt(norm2 * grid.drho);
    for (auto& a : wf.amps) a *= scale;
    return wf;
}

/// Upper chi-square quantile by the Wilson-Hilferty cube approximation;
/// z is the standard-normal quantile of the same tail.
inline double chi2_upper_quantile(double dof, double z) {
    const double t = 2.0 / (9.0 * dof);
    const double c = 1.0 - t + z * std::sqrt(t);
    return dof * c * c * c;
}

inline int bin_of_rho(const rotorrec::GridSpec& grid, double rho) {
    return grid.origin_index() + static_cast<int>(std::llround(rho / grid.drho));
}

}  // namespace testutil

#endif
