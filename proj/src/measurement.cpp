#include "rotorrec/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "rotorrec/csv.hpp"
#include "rotorrec/rng.hpp"

namespace rotorrec {

std::vector<double> Histogram::estimate() const {
    std::vector<double> density(counts.size());
    const double scale = 1.0 / (static_cast<double>(total_atoms) * grid.drho);
    for (std::size_t j = 0; j < counts.size(); ++j) {
        density[j] = static_cast<double>(counts[j]) * scale;
    }
    return density;
}

std::pair<std::vector<double>, std::vector<double>> branch_distributions(
    const TwoBranchState& state) {
    if (state.upper.grid != state.lower.grid) {
        throw grid_mismatch_error("branch_distributions: branches live on different grids");
    }
    const int n = state.upper.grid.num_points;
    std::vector<double> upper(n), lower(n);
    for (int j = 0; j < n; ++j) {
        upper[j] = 0.5 * std::norm(state.upper.amps[j]);
        lower[j] = 0.5 * std::norm(state.lower.amps[j]);
    }
    return {std::move(upper), std::move(lower)};
}

std::vector<double> theta_distribution(const TwoBranchState& state_after_readout, double theta,
                                       int shift_bins) {
    const TwoBranchState* state = &state_after_readout;
    TwoBranchState shifted;
    if (shift_bins != 0) {
        shifted = readout_kick(state_after_readout, shift_bins);
        state = &shifted;
    }
    if (state->upper.grid != state->lower.grid) {
        throw grid_mismatch_error("theta_distribution: branches live on different grids");
    }
    const int n = state->upper.grid.num_points;
    const cplx phase = std::polar(1.0, -theta);
    std::vector<double> w(n);
    for (int j = 0; j < n; ++j) {
        const cplx u = state->upper.amps[j];
        const cplx l = state->lower.amps[j];
        const double value =
            0.5 * (0.5 * std::norm(u) + 0.5 * std::norm(l) + std::real(u * std::conj(l) * phase));
        w[j] = value < 0.0 ? 0.0 : value;
    }
    return w;
}

MeasuredSet exact_measured_set(const TwoBranchState& state, int shift_bins) {
    const TwoBranchState shifted = readout_kick(state, shift_bins);
    MeasuredSet set;
    set.grid = state.upper.grid;
    set.shift_bins = shift_bins;
    set.w_theta0 = theta_distribution(shifted, 0.0);
    set.w_theta_pi2 = theta_distribution(shifted, 0.5 * std::numbers::pi);
    auto [upper, lower] = branch_distributions(shifted);
    set.w_upper = std::move(upper);
    set.w_lower = std::move(lower);
    set.provenance = Provenance::Exact;
    return set;
}

Histogram sample_histogram(const GridSpec& grid, const std::vector<double>& density,
                           const MeasurementSetting& setting) {
    if (static_cast<int>(density.size()) != grid.num_points) {
        throw grid_mismatch_error("sample_histogram: density size does not match grid");
    }
    if (setting.num_events < 1) {
        throw validation_error("sample_histogram: num_events must be >= 1");
    }
    std::vector<double> cumulative(density.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < density.size(); ++j) {
        if (density[j] < 0.0) {
            throw validation_error("sample_histogram: negative density");
        }
        acc += density[j] * grid.drho;
        cumulative[j] = acc;
    }
    if (acc > 1.0 + 1e-9) {
        std::ostringstream msg;
        msg << "sample_histogram: total mass " << acc << " exceeds 1";
        throw validation_error(msg.str());
    }

    Histogram hist;
    hist.setting = setting;
    hist.grid = grid;
    hist.counts.assign(density.size(), 0);
    hist.total_atoms = setting.num_events;

    // One uniform per atom decides both the internal-state projection
    // (probability acc of being recorded) and, jointly, the momentum bin.
    Rng rng(setting.seed);
    for (long atom = 0; atom < setting.num_events; ++atom) {
        const double u = rng.uniform();
        if (u >= acc) continue;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        ++hist.counts[static_cast<std::size_t>(it - cumulative.begin())];
    }
    return hist;
}

std::vector<double> apply_relative_noise(const std::vector<double>& density, double delta_w,
                                         std::uint64_t seed) {
    if (delta_w < 0.0) throw validation_error("apply_relative_noise: delta_w must be >= 0");
    if (delta_w == 0.0) return density;
    std::vector<double> out(density.size());
    Rng rng(seed);
    for (std::size_t j = 0; j < density.size(); ++j) {
        out[j] = std::max(0.0, density[j] * (1.0 + delta_w * rng.normal()));
    }
    return out;
}

namespace {

const char* array_label(int index) {
    switch (index) {
        case 0: return "w_theta0";
        case 1: return "w_theta_pi2";
        case 2: return "w_upper";
        default: return "w_lower";
    }
}

}  // namespace

MeasuredSet monte_carlo_measured_set(const TwoBranchState& state, int shift_bins, long events,
                                     std::uint64_t master_seed, std::uint64_t realization,
                                     std::uint64_t setting_index,
                                     std::vector<Histogram>* histograms) {
    MeasuredSet exact = exact_measured_set(state, shift_bins);
    MeasuredSet set = exact;
    set.provenance = Provenance::MonteCarlo;
    set.events = events;

    const std::vector<double>* sources[4] = {&exact.w_theta0, &exact.w_theta_pi2, &exact.w_upper,
                                             &exact.w_lower};
    std::vector<double>* targets[4] = {&set.w_theta0, &set.w_theta_pi2, &set.w_upper,
                                       &set.w_lower};
    const double thetas[4] = {0.0, 0.5 * std::numbers::pi, 0.0, 0.0};
    for (int a = 0; a < 4; ++a) {
        MeasurementSetting setting;
        setting.theta = thetas[a];
        setting.shift_bins = shift_bins;
        setting.num_events = events;
        setting.seed = derive_seed(master_seed, {realization, setting_index,
                                                 static_cast<std::uint64_t>(a)});
        Histogram hist = sample_histogram(set.grid, *sources[a], setting);
        *targets[a] = hist.estimate();
        if (histograms) {
            hist.label = array_label(a);
            histograms->push_back(std::move(hist));
        }
    }
    return set;
}

MeasuredSet noisy_measured_set(const TwoBranchState& state, int shift_bins, double delta_w,
                               std::uint64_t master_seed, std::uint64_t realization,
                               std::uint64_t setting_index) {
    MeasuredSet set = exact_measured_set(state, shift_bins);
    set.provenance = Provenance::RelativeNoise;
    set.delta_w = delta_w;
    std::vector<double>* arrays[4] = {&set.w_theta0, &set.w_theta_pi2, &set.w_upper, &set.w_lower};
    for (int a = 0; a < 4; ++a) {
        const std::uint64_t seed =
            derive_seed(master_seed, {realization, setting_index, static_cast<std::uint64_t>(a)});
        *arrays[a] = apply_relative_noise(*arrays[a], delta_w, seed);
    }
    return set;
}

void write_histogram_csv(std::ostream& os, const Histogram& hist) {
    os << "# label=" << (hist.label.empty() ? "histogram" : hist.label) << "\n";
    os << "# theta=" << csv::fmt(hist.setting.theta) << "\n";
    os << "# shift_bins=" << hist.setting.shift_bins << "\n";
    os << "# events=" << hist.setting.num_events << "\n";
    os << "# seed=" << hist.setting.seed << "\n";
    os << "rho_bin_center,counts,density_estimate\n";
    const std::vector<double> density = hist.estimate();
    for (int j = 0; j < hist.grid.num_points; ++j) {
        os << csv::fmt(hist.grid.rho(j)) << ',' << hist.counts[j] << ',' << csv::fmt(density[j])
           << "\n";
    }
}

}  // namespace rotorrec
