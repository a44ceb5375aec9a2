#include "rotorrec/grid_state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "test_util.hpp"

using namespace rotorrec;

TEST_CASE("make_grid produces consistent spacings") {
    const GridSpec grid = make_grid(4096, 64.0);
    CHECK(grid.drho == doctest::Approx(1.0 / 32.0).epsilon(1e-15));
    CHECK(grid.subdivisions_per_p0 == 32);
    CHECK(grid.drho * grid.num_points == doctest::Approx(2.0 * grid.rho_max));
    CHECK(grid.rho(grid.origin_index()) == 0.0);

    const GridSpec small = make_grid(8, 2.0);
    CHECK(small.drho == doctest::Approx(0.5));
    CHECK(small.subdivisions_per_p0 == 2);

    // Position window covers s full periods of the kick potential.
    CHECK(grid.position_step() * grid.num_points ==
          doctest::Approx(2.0 * std::numbers::pi / grid.drho));
}

TEST_CASE("make_grid rejects bad geometry") {
    CHECK_THROWS_AS(make_grid(4096, 63.0), alignment_error);
    CHECK_THROWS_AS(make_grid(4095, 64.0), validation_error);
    CHECK_THROWS_AS(make_grid(0, 64.0), validation_error);
    CHECK_THROWS_AS(make_grid(4096, -1.0), validation_error);
}

TEST_CASE("gaussian_state is normalized with the right width") {
    const GridSpec grid = make_grid(4096, 64.0);
    const WaveFunction g = gaussian_state(grid, 0.1);

    CHECK(norm_squared(g) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(boundary_mass(g) < 1e-8);
    for (const auto& a : g.amps) {
        CHECK(a.imag() == 0.0);
        CHECK(a.real() >= 0.0);
    }

    // |phi|^2 is a Gaussian of variance sigma^2.
    double second_moment = 0.0;
    for (int j = 0; j < grid.num_points; ++j) {
        const double rho = grid.rho(j);
        second_moment += rho * rho * std::norm(g.amps[j]);
    }
    second_moment *= grid.drho;
    CHECK(second_moment == doctest::Approx(0.01).epsilon(1e-3));
}

TEST_CASE("gaussian_state rejects unresolvable or uncontained widths") {
    const GridSpec grid = make_grid(4096, 64.0);
    CHECK_THROWS_AS(gaussian_state(grid, 0.5 * grid.drho), validation_error);
    CHECK_THROWS_AS(gaussian_state(grid, 10.0), validation_error);
}

TEST_CASE("inner_product basics") {
    const GridSpec grid = make_grid(4096, 64.0);
    const WaveFunction g = gaussian_state(grid, 0.1);

    const cplx self = inner_product(g, g);
    CHECK(std::abs(self - cplx{1.0, 0.0}) < 1e-12);

    WaveFunction ig = g;
    for (auto& a : ig.amps) a *= cplx{0.0, 1.0};
    const cplx rotated = inner_product(g, ig);
    CHECK(std::abs(rotated - cplx{0.0, 1.0}) < 1e-12);

    // Conjugate symmetry on random states.
    const WaveFunction a = testutil::random_state(grid, 11);
    const WaveFunction b = testutil::random_state(grid, 12);
    CHECK(std::abs(inner_product(a, b) - std::conj(inner_product(b, a))) < 1e-14);

    const GridSpec other = make_grid(2048, 32.0);
    CHECK_THROWS_AS(inner_product(g, gaussian_state(other, 0.1)), grid_mismatch_error);
}

TEST_CASE("overlap of Gaussians one p0 apart matches the closed form") {
    // Independent oracle: <g | g shifted by d> = exp(-d^2 / (8 sigma^2)),
    // here exp(-12.5) = 3.726653172078671e-6 for sigma = 0.1, d = 1.
    const GridSpec grid = make_grid(4096, 64.0);
    const WaveFunction g = gaussian_state(grid, 0.1);
    const WaveFunction shifted = shift_momentum(g, grid.subdivisions_per_p0);
    const cplx overlap = inner_product(g, shifted);
    CHECK(std::abs(overlap.imag()) < 1e-15);
    CHECK(overlap.real() == doctest::Approx(3.726653172078671e-6).epsilon(1e-9));
}

TEST_CASE("shift_momentum translation semantics") {
    const GridSpec grid = make_grid(4096, 64.0);
    const WaveFunction g = gaussian_state(grid, 0.1);
    const int s = grid.subdivisions_per_p0;

    SUBCASE("zero shift is the identity") {
        const WaveFunction same = shift_momentum(g, 0);
        CHECK(same.amps == g.amps);
    }

    SUBCASE("a shift by s bins moves the peak to -1 and preserves norm") {
        const WaveFunction shifted = shift_momentum(g, s);
        const auto peak = std::max_element(
            shifted.amps.begin(), shifted.amps.end(),
            [](const cplx& x, const cplx& y) { return std::abs(x) < std::abs(y); });
        const int peak_bin = static_cast<int>(peak - shifted.amps.begin());
        CHECK(grid.rho(peak_bin) == doctest::Approx(-1.0));
        CHECK(norm_squared(shifted) == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("shift then unshift restores the state") {
        const WaveFunction back = shift_momentum(shift_momentum(g, 7), -7);
        double max_err = 0.0;
        for (int j = 0; j < grid.num_points; ++j) {
            max_err = std::max(max_err, std::abs(back.amps[j] - g.amps[j]));
        }
        CHECK(max_err < 1e-14);
    }

    SUBCASE("bin arithmetic is exact where no fill occurs") {
        const WaveFunction shifted = shift_momentum(g, 5);
        for (int j = 0; j + 5 < grid.num_points; ++j) {
            CHECK(shifted.amps[j] == g.amps[j + 5]);
        }
    }

    SUBCASE("off-grid leakage is an error") {
        WaveFunction edge{grid, std::vector<cplx>(grid.num_points, cplx{0.0, 0.0})};
        edge.amps[10] = 1.0 / std::sqrt(grid.drho);
        CHECK_THROWS_AS(shift_momentum(edge, 200), leakage_error);
    }

    SUBCASE("shifts beyond half the window are rejected") {
        CHECK_THROWS_AS(shift_momentum(g, grid.num_points / 4 + 1), validation_error);
    }
}

TEST_CASE("spectral transform is unitary and physically scaled") {
    const GridSpec grid = make_grid(4096, 64.0);

    SUBCASE("delta at rho = 0 maps to a flat position magnitude") {
        WaveFunction delta{grid, std::vector<cplx>(grid.num_points, cplx{0.0, 0.0})};
        delta.amps[grid.origin_index()] = 1.0 / std::sqrt(grid.drho);
        const auto pos = to_position(delta);
        const double expected = std::sqrt(grid.drho / (2.0 * std::numbers::pi));
        for (const auto& p : pos) {
            CHECK(std::abs(p) == doctest::Approx(expected).epsilon(1e-12));
        }
    }

    SUBCASE("round trip and Parseval on random states") {
        double max_rt = 0.0;
        double max_parseval = 0.0;
        for (unsigned seed = 0; seed < 1000; ++seed) {
            const WaveFunction wf = testutil::random_state(grid, 1000 + seed);
            const auto pos = to_position(wf);
            double pos_norm2 = 0.0;
            for (const auto& p : pos) pos_norm2 += std::norm(p);
            pos_norm2 *= grid.position_step();
            max_parseval = std::max(max_parseval, std::abs(pos_norm2 - norm_squared(wf)));
            max_rt = std::max(max_rt, l2_distance(wf, to_momentum(grid, pos)));
        }
        CHECK(max_rt < 1e-13);
        CHECK(max_parseval < 1e-13);
    }

    SUBCASE("Gaussian maps to a Gaussian envelope of reciprocal width") {
        // Analytic transform: amplitude envelope exp(-sigma^2 xi^2), i.e. a
        // Gaussian of width 1/(2 sigma) in xi, periodic over the window.
        const double sigma = 0.1;
        const WaveFunction g = gaussian_state(grid, sigma);
        const auto pos = to_position(g);
        const double length = grid.position_step() * grid.num_points;
        const double peak = std::abs(pos[0]);
        for (int k = 0; k < grid.num_points; ++k) {
            double xi = grid.position(k);
            if (xi > length / 2.0) xi -= length;  // wrapped distance to 0
            const double envelope = peak * std::exp(-sigma * sigma * xi * xi);
            if (envelope > 1e-6 * peak) {
                CHECK(std::abs(pos[k]) == doctest::Approx(envelope).epsilon(1e-6));
            }
        }
    }
}
