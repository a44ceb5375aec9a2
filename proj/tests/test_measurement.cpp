#include "rotorrec/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "rotorrec/rng.hpp"
#include "test_util.hpp"

using namespace rotorrec;

namespace {

const RotorParams kPaperParams{14.0, 15.0, 0.1};

TwoBranchState random_pair(const GridSpec& grid, unsigned seed) {
    return TwoBranchState{testutil::random_localized_state(grid, seed, 8.0),
                          testutil::random_localized_state(grid, seed + 1, 8.0)};
}

}  // namespace

TEST_CASE("branch_distributions carries the branch weight 1/2") {
    const GridSpec grid = make_grid(4096, 64.0);
    const WaveFunction g = gaussian_state(grid, 0.1);

    SUBCASE("equal branches at N = 0") {
        const TwoBranchState state{g, g};
        const auto [upper, lower] = branch_distributions(state);
        CHECK(upper == lower);
    }

    SUBCASE("the two branch distributions integrate to one") {
        const TwoBranchState state = evolve_pair(g, kPaperParams, ReferenceKind::Holographic, 3);
        const auto [upper, lower] = branch_distributions(state);
        double total = 0.0;
        for (int j = 0; j < grid.num_points; ++j) total += upper[j] + lower[j];
        total *= grid.drho;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("self-interference distributions are parity mirrors") {
        const TwoBranchState state =
            evolve_pair(g, kPaperParams, ReferenceKind::SelfInterference, 3);
        const auto [upper, lower] = branch_distributions(state);
        const int n = grid.num_points;
        double max_err = 0.0;
        for (int j = 0; j < n; ++j) {
            max_err = std::max(max_err, std::abs(lower[j] - upper[(n - j) % n]));
        }
        CHECK(max_err < 1e-12);
    }
}

TEST_CASE("theta_distribution interference extremes and identities") {
    const GridSpec grid = make_grid(4096, 64.0);
    const WaveFunction g = gaussian_state(grid, 0.1);

    SUBCASE("identical branches: constructive at theta = 0, dark at theta = pi") {
        const TwoBranchState state{g, g};
        const auto bright = theta_distribution(state, 0.0);
        const auto dark = theta_distribution(state, std::numbers::pi);
        double max_err = 0.0;
        double max_dark = 0.0;
        for (int j = 0; j < grid.num_points; ++j) {
            max_err = std::max(max_err, std::abs(bright[j] - std::norm(g.amps[j])));
            max_dark = std::max(max_dark, dark[j]);
        }
        CHECK(max_err < 1e-14);
        CHECK(max_dark < 1e-14);
    }

    SUBCASE("theta sum restores the incoherent distributions") {
        const TwoBranchState pair = random_pair(grid, 21);
        const TwoBranchState state = readout_kick(pair, 5);
        const auto [upper, lower] = branch_distributions(state);
        for (double theta : {0.0, 0.5 * std::numbers::pi, 1.234}) {
            const auto w_plus = theta_distribution(state, theta);
            const auto w_minus = theta_distribution(state, theta + std::numbers::pi);
            double max_err = 0.0;
            for (int j = 0; j < grid.num_points; ++j) {
                max_err = std::max(max_err,
                                   std::abs(w_plus[j] + w_minus[j] - upper[j] - lower[j]));
            }
            CHECK(max_err < 1e-14);
        }
    }

    SUBCASE("completeness: the two theta outcomes integrate to one") {
        const TwoBranchState pair =
            evolve_pair(g, kPaperParams, ReferenceKind::SelfInterference, 2);
        const auto w_plus = theta_distribution(pair, 0.0, 32);
        const auto w_minus = theta_distribution(pair, std::numbers::pi, 32);
        double total = 0.0;
        for (int j = 0; j < grid.num_points; ++j) total += w_plus[j] + w_minus[j];
        total *= grid.drho;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("exact_measured_set packages the inversion inputs") {
    const GridSpec grid = make_grid(4096, 64.0);

    SUBCASE("provenance tag round-trips") {
        const WaveFunction g = gaussian_state(grid, 0.1);
        const MeasuredSet set = exact_measured_set({g, g}, 0);
        CHECK(set.provenance == Provenance::Exact);
        CHECK(set.shift_bins == 0);
    }

    SUBCASE("interference magnitude identity on random states") {
        // |W0 - (W + curlyW)/2|^2 + |Wpi2 - (W + curlyW)/2|^2 = W * curlyW
        const TwoBranchState pair = random_pair(grid, 5);
        const MeasuredSet set = exact_measured_set(pair, 7);
        double max_err = 0.0;
        for (int j = 0; j < grid.num_points; ++j) {
            const double mean = 0.5 * (set.w_upper[j] + set.w_lower[j]);
            const double lhs = std::pow(set.w_theta0[j] - mean, 2) +
                               std::pow(set.w_theta_pi2[j] - mean, 2);
            max_err = std::max(max_err, std::abs(lhs - set.w_upper[j] * set.w_lower[j]));
        }
        CHECK(max_err < 1e-12);
    }

    SUBCASE("an empty reference branch removes all interference") {
        const WaveFunction g = gaussian_state(grid, 0.1);
        WaveFunction zero{grid, std::vector<cplx>(grid.num_points, cplx{0.0, 0.0})};
        const MeasuredSet set = exact_measured_set({g, zero}, 0);
        double max_err = 0.0;
        for (int j = 0; j < grid.num_points; ++j) {
            max_err = std::max(max_err, std::abs(set.w_theta0[j] - 0.5 * set.w_upper[j]));
            max_err = std::max(max_err, std::abs(set.w_theta_pi2[j] - 0.5 * set.w_upper[j]));
        }
        CHECK(max_err < 1e-15);
    }
}

TEST_CASE("sample_histogram statistics and determinism") {
    const GridSpec grid = make_grid(4096, 64.0);
    const WaveFunction g = gaussian_state(grid, 0.1);
    const TwoBranchState pair = evolve_pair(g, kPaperParams, ReferenceKind::Holographic, 5);
    const MeasuredSet exact = exact_measured_set(pair, 0);

    SUBCASE("fixed seed reproduces the histogram bitwise") {
        MeasurementSetting setting{0.0, 0, 100000, 42};
        const Histogram a = sample_histogram(grid, exact.w_theta0, setting);
        const Histogram b = sample_histogram(grid, exact.w_theta0, setting);
        CHECK(a.counts == b.counts);
        CHECK(a.total_atoms == b.total_atoms);
    }

    SUBCASE("zero density gives zero counts but accounts all atoms") {
        const std::vector<double> zero(grid.num_points, 0.0);
        MeasurementSetting setting{0.0, 0, 1000, 7};
        const Histogram hist = sample_histogram(grid, zero, setting);
        CHECK(hist.total_atoms == 1000);
        CHECK(std::all_of(hist.counts.begin(), hist.counts.end(),
                          [](long c) { return c == 0; }));
    }

    SUBCASE("estimator is unbiased at the binomial scale, M = 1e6") {
        MeasurementSetting setting{0.0, 0, 1000000, 20260809};
        const Histogram hist = sample_histogram(grid, exact.w_theta0, setting);
        const auto estimate = hist.estimate();

        // Max-expectation bin within 5 binomial standard errors.
        int max_bin = 0;
        for (int j = 0; j < grid.num_points; ++j) {
            if (exact.w_theta0[j] > exact.w_theta0[max_bin]) max_bin = j;
        }
        const double p = exact.w_theta0[max_bin] * grid.drho;
        const double se = std::sqrt(p * (1.0 - p) * setting.num_events);
        CHECK(std::abs(hist.counts[max_bin] - setting.num_events * p) <= 5.0 * se);

        // Internal-state stage: detected atoms ~ Binomial(M, mu).
        const double mu = [&] {
            double m = 0.0;
            for (double d : exact.w_theta0) m += d;
            return m * grid.drho;
        }();
        long detected = 0;
        for (long c : hist.counts) detected += c;
        const double se_mu = std::sqrt(mu * (1.0 - mu) * setting.num_events);
        CHECK(std::abs(detected - setting.num_events * mu) <= 5.0 * se_mu);
        CHECK(estimate[max_bin] ==
              doctest::Approx(static_cast<double>(hist.counts[max_bin]) /
                              (setting.num_events * grid.drho)));
    }

    SUBCASE("chi-square goodness of fit at M = 1e6") {
        MeasurementSetting setting{0.0, 0, 1000000, 991};
        const Histogram hist = sample_histogram(grid, exact.w_theta0, setting);

        // Pearson chi-square over bins with expectation >= 10, pooling the
        // rest (plus the undetected class). p-value must exceed 1e-4, i.e.
        // chi2 below the Wilson-Hilferty upper quantile at z = 3.719.
        const double M = static_cast<double>(setting.num_events);
        double chi2 = 0.0;
        int classes = 0;
        double pooled_expected = 0.0;
        long pooled_observed = 0;
        double mass = 0.0;
        for (int j = 0; j < grid.num_points; ++j) {
            const double expected = M * exact.w_theta0[j] * grid.drho;
            mass += exact.w_theta0[j] * grid.drho;
            if (expected >= 10.0) {
                chi2 += std::pow(hist.counts[j] - expected, 2) / expected;
                ++classes;
            } else {
                pooled_expected += expected;
                pooled_observed += hist.counts[j];
            }
        }
        long detected = 0;
        for (long c : hist.counts) detected += c;
        pooled_expected += M * (1.0 - mass);  // undetected class
        pooled_observed += setting.num_events - detected;
        if (pooled_expected >= 10.0) {
            chi2 += std::pow(pooled_observed - pooled_expected, 2) / pooled_expected;
            ++classes;
        }
        const double dof = classes - 1;
        CHECK(chi2 < testutil::chi2_upper_quantile(dof, 3.7190164854557088));
    }

    SUBCASE("input validation") {
        std::vector<double> negative(grid.num_points, 0.0);
        negative[5] = -1e-3;
        MeasurementSetting setting{0.0, 0, 10, 1};
        CHECK_THROWS_AS(sample_histogram(grid, negative, setting), validation_error);

        std::vector<double> heavy(grid.num_points, 1.0);
        CHECK_THROWS_AS(sample_histogram(grid, heavy, setting), validation_error);
    }
}

TEST_CASE("apply_relative_noise model") {
    const GridSpec grid = make_grid(4096, 64.0);
    const WaveFunction g = gaussian_state(grid, 0.1);
    std::vector<double> density(grid.num_points);
    for (int j = 0; j < grid.num_points; ++j) density[j] = std::norm(g.amps[j]);

    SUBCASE("delta_w = 0 is the exact identity") {
        CHECK(apply_relative_noise(density, 0.0, 9) == density);
    }

    SUBCASE("no negative output") {
        const auto noisy = apply_relative_noise(density, 2.0, 17);
        CHECK(std::all_of(noisy.begin(), noisy.end(), [](double d) { return d >= 0.0; }));
    }

    SUBCASE("unbiased before clamping: mean over 1e4 draws within 3 SE") {
        const int origin = grid.origin_index();
        const double value = density[origin];
        const double delta_w = 0.05;  // small enough that clamping never fires
        const int draws = 10000;
        double sum = 0.0;
        for (int i = 0; i < draws; ++i) {
            sum += apply_relative_noise({value}, delta_w, 1000 + i)[0];
        }
        const double mean = sum / draws;
        const double se = value * delta_w / std::sqrt(static_cast<double>(draws));
        CHECK(std::abs(mean - value) <= 3.0 * se);
    }

    SUBCASE("a = 100 perturbs at the percent scale") {
        const auto noisy = apply_relative_noise(density, 0.01, 33);
        double max_rel = 0.0;
        for (int j = 0; j < grid.num_points; ++j) {
            if (density[j] > 1e-6) {
                max_rel = std::max(max_rel, std::abs(noisy[j] - density[j]) / density[j]);
            }
        }
        CHECK(max_rel > 1e-4);
        CHECK(max_rel < 0.1);  // ~1% times a few sigmas
    }
}

TEST_CASE("histogram CSV export carries setting metadata") {
    const GridSpec grid = make_grid(8, 2.0);
    std::vector<double> density(8, 0.0);
    density[4] = 0.5;
    MeasurementSetting setting{0.5 * std::numbers::pi, -3, 1000, 77};
    Histogram hist = sample_histogram(grid, density, setting);
    hist.label = "w_theta_pi2";

    std::ostringstream os;
    write_histogram_csv(os, hist);
    const std::string text = os.str();
    CHECK(text.find("# label=w_theta_pi2") != std::string::npos);
    CHECK(text.find("# shift_bins=-3") != std::string::npos);
    CHECK(text.find("# events=1000") != std::string::npos);
    CHECK(text.find("# seed=77") != std::string::npos);
    CHECK(text.find("rho_bin_center,counts,density_estimate") != std::string::npos);

    // Deterministic rerun produces the identical file.
    std::ostringstream os2;
    write_histogram_csv(os2, sample_histogram(grid, density, setting));
    std::ostringstream os3;
    Histogram again = sample_histogram(grid, density, setting);
    again.label = "w_theta_pi2";
    write_histogram_csv(os3, again);
    CHECK(text == os3.str());
}

TEST_CASE("monte_carlo_measured_set derives one stream per distribution") {
    const GridSpec grid = make_grid(4096, 64.0);
    const WaveFunction g = gaussian_state(grid, 0.1);
    const TwoBranchState pair = evolve_pair(g, kPaperParams, ReferenceKind::Holographic, 1);

    std::vector<Histogram> histograms;
    const MeasuredSet set = monte_carlo_measured_set(pair, 32, 20000, 99, 0, 1, &histograms);
    CHECK(set.provenance == Provenance::MonteCarlo);
    CHECK(set.events == 20000);
    REQUIRE(histograms.size() == 4);
    CHECK(histograms[0].setting.seed != histograms[1].setting.seed);
    CHECK(histograms[2].setting.seed != histograms[3].setting.seed);

    // Reproducible from the same seed tuple.
    const MeasuredSet set2 = monte_carlo_measured_set(pair, 32, 20000, 99, 0, 1);
    CHECK(set.w_theta0 == set2.w_theta0);
    CHECK(set.w_lower == set2.w_lower);
}
