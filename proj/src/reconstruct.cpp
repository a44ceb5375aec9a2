#include "rotorrec/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rotorrec {

namespace {

constexpr double kOriginFloor = 1e-12;

cplx interference_value(const MeasuredSet& set, int j) {
    return cplx{2.0 * set.w_theta0[j], 2.0 * set.w_theta_pi2[j]} -
           cplx{1.0, 1.0} * (set.w_upper[j] + set.w_lower[j]);
}

}  // namespace

InterferenceTerm interference_term(const MeasuredSet& set) {
    InterferenceTerm term;
    term.grid = set.grid;
    term.shift_bins = set.shift_bins;
    term.values.resize(set.grid.num_points);
    for (int j = 0; j < set.grid.num_points; ++j) {
        term.values[j] = interference_value(set, j);
    }
    return term;
}

WaveFunction ReconstructedState::normalized() const {
    double norm2 = 0.0;
    bool any = false;
    for (int j = 0; j < grid.num_points; ++j) {
        if (valid_mask[j]) {
            norm2 += std::norm(amps[j]);
            any = true;
        }
    }
    if (!any || norm2 <= 0.0) {
        throw empty_mask_error("reconstructed state has no valid amplitude to normalize");
    }
    WaveFunction wf{grid, std::vector<cplx>(grid.num_points, cplx{0.0, 0.0})};
    const double scale = 1.0 / std::sqrt(norm2 * grid.drho);
    for (int j = 0; j < grid.num_points; ++j) {
        if (valid_mask[j]) wf.amps[j] = amps[j] * scale;
    }
    return wf;
}

std::vector<int> comb_cell_bins(const GridSpec& grid, int cell) {
    const int s = grid.subdivisions_per_p0;
    const int center = grid.origin_index() + cell * s;
    const int lo = std::max(0, center - s / 2);
    const int hi = std::min(grid.num_points, center - s / 2 + s);
    std::vector<int> bins;
    bins.reserve(std::max(0, hi - lo));
    for (int j = lo; j < hi; ++j) bins.push_back(j);
    return bins;
}

std::vector<int> plan_peaks(const GridSpec& grid, const std::vector<double>& w_upper_estimate,
                            double mass_threshold) {
    if (static_cast<int>(w_upper_estimate.size()) != grid.num_points) {
        throw grid_mismatch_error("plan_peaks: density size does not match grid");
    }
    double total = 0.0;
    for (double d : w_upper_estimate) {
        if (d < 0.0) throw validation_error("plan_peaks: negative density");
        total += d;
    }
    total *= grid.drho;
    if (total <= 0.0) return {};

    struct CellMass {
        int cell;
        double mass;
    };
    std::vector<CellMass> cells;
    const int m_span = static_cast<int>(std::ceil(grid.rho_max)) + 1;
    for (int m = -m_span; m <= m_span; ++m) {
        const auto bins = comb_cell_bins(grid, m);
        if (bins.empty()) continue;
        double mass = 0.0;
        for (int j : bins) mass += w_upper_estimate[j];
        mass *= grid.drho;
        if (mass > mass_threshold * total) cells.push_back({m, mass});
    }
    std::sort(cells.begin(), cells.end(), [](const CellMass& a, const CellMass& b) {
        if (a.mass != b.mass) return a.mass > b.mass;
        if (std::abs(a.cell) != std::abs(b.cell)) return std::abs(a.cell) < std::abs(b.cell);
        return a.cell < b.cell;  // peak at -|m| first, i.e. shift +|n| first
    });
    std::vector<int> shifts;
    shifts.reserve(cells.size());
    for (const auto& c : cells) shifts.push_back(-c.cell);
    return shifts;
}

ReconstructedState reconstruct_self_interference(const std::map<int, MeasuredSet>& diagonal_sets,
                                                 double w_ref_at_offset, int p_off_bins) {
    if (w_ref_at_offset <= kOriginFloor) {
        std::ostringstream msg;
        msg << "self-interference inversion impossible: measured reference density "
            << w_ref_at_offset << " at the normalization point is consistent with zero; "
            << "record the diagonal with another offset P = -p + p_off and pass p_off_bins";
        throw origin_vanishes_error(msg.str());
    }

    ReconstructedState rec;
    if (diagonal_sets.empty()) {
        throw validation_error("reconstruct_self_interference: no measured sets supplied");
    }
    rec.grid = diagonal_sets.begin()->second.grid;
    rec.amps.assign(rec.grid.num_points, cplx{0.0, 0.0});
    rec.valid_mask.assign(rec.grid.num_points, 0);

    const double norm = std::sqrt(2.0 * w_ref_at_offset);
    const int origin = rec.grid.origin_index();
    for (const auto& [target, set] : diagonal_sets) {
        if (set.grid != rec.grid) {
            throw grid_mismatch_error("reconstruct_self_interference: mixed grids");
        }
        if (target < 0 || target >= rec.grid.num_points) {
            throw validation_error("reconstruct_self_interference: target bin outside grid");
        }
        const int expected_shift = p_off_bins - (target - origin);
        if (set.shift_bins != expected_shift) {
            std::ostringstream msg;
            msg << "diagonal set for target bin " << target << " was recorded at shift "
                << set.shift_bins << ", expected " << expected_shift;
            throw validation_error(msg.str());
        }
        rec.amps[target] = interference_value(set, target) / norm;
        rec.valid_mask[target] = 1;
    }

    rec.meta.method = ReferenceKind::SelfInterference;
    rec.meta.absolute_phase_known = false;  // result carries exp(i arg vphi_N(p_off))
    rec.meta.w_ref_origin = w_ref_at_offset;
    rec.meta.num_sets = static_cast<int>(diagonal_sets.size());
    rec.meta.num_distributions = 4 * rec.meta.num_sets;
    return rec;
}

ReconstructedState reconstruct_holographic(const std::vector<MeasuredSet>& sets,
                                           const WaveFunction& phi0, double kbar, int num_kicks,
                                           double tau_floor) {
    if (sets.empty()) {
        throw validation_error("reconstruct_holographic: no measured sets supplied");
    }
    const GridSpec& grid = phi0.grid;
    const int n = grid.num_points;
    const int s = grid.subdivisions_per_p0;

    double max_ref = 0.0;
    for (const auto& a : phi0.amps) max_ref = std::max(max_ref, std::abs(a));
    if (max_ref <= 0.0) throw validation_error("reconstruct_holographic: phi0 is zero");
    const double floor = tau_floor * max_ref;

    struct Candidate {
        double ref_amp = -1.0;
        int set_index = -1;
        int offset_bins = 0;  // n * s
    };
    std::vector<Candidate> best(n);

    for (std::size_t si = 0; si < sets.size(); ++si) {
        const MeasuredSet& set = sets[si];
        if (set.grid != grid) throw grid_mismatch_error("reconstruct_holographic: mixed grids");
        if (set.shift_bins % s != 0) {
            std::ostringstream msg;
            msg << "holographic set shift " << set.shift_bins
                << " bins is not an integer multiple of p0 (= " << s << " bins)";
            throw alignment_error(msg.str());
        }
        const int offset = set.shift_bins;  // n * s bins
        for (int j = 0; j < n; ++j) {
            const int ref_index = j + offset;
            if (ref_index < 0 || ref_index >= n) continue;
            const double ref_amp = std::abs(phi0.amps[ref_index]);
            if (ref_amp < floor) continue;  // division floor: bin stays masked
            Candidate& c = best[j];
            const bool better =
                ref_amp > c.ref_amp ||
                (ref_amp == c.ref_amp && std::abs(offset) < std::abs(c.offset_bins));
            if (better) c = Candidate{ref_amp, static_cast<int>(si), offset};
        }
    }

    ReconstructedState rec;
    rec.grid = grid;
    rec.amps.assign(n, cplx{0.0, 0.0});
    rec.valid_mask.assign(n, 0);

    const double half_nkbar = 0.5 * kbar * num_kicks;
    double min_ratio = 1.0;
    for (int j = 0; j < n; ++j) {
        const Candidate& c = best[j];
        if (c.set_index < 0) continue;
        const int ref_index = j + c.offset_bins;
        const double x = grid.rho(ref_index);  // p + n p0, exact on bins
        const cplx m = interference_value(sets[c.set_index], j);
        rec.amps[j] =
            std::polar(1.0, -half_nkbar * x * x) * m / std::conj(phi0.amps[ref_index]);
        rec.valid_mask[j] = 1;
        min_ratio = std::min(min_ratio, c.ref_amp / max_ref);
    }

    rec.meta.method = ReferenceKind::Holographic;
    rec.meta.num_kicks = num_kicks;
    rec.meta.tau_floor = tau_floor;
    rec.meta.min_ref_ratio_used = min_ratio;
    rec.meta.absolute_phase_known = true;
    rec.meta.num_sets = static_cast<int>(sets.size());
    rec.meta.num_distributions = 4 * rec.meta.num_sets;
    return rec;
}

namespace {

cplx overlap(const ReconstructedState& rec, const WaveFunction& other,
             const std::vector<cplx>& amps) {
    cplx sum = 0.0;
    for (int j = 0; j < rec.grid.num_points; ++j) {
        if (rec.valid_mask[j]) sum += std::conj(amps[j]) * other.amps[j];
    }
    return sum * rec.grid.drho;
}

}  // namespace

FidelityReport fidelity(const ReconstructedState& rec, const WaveFunction& exact) {
    if (rec.grid != exact.grid) throw grid_mismatch_error("fidelity: grids differ");
    const WaveFunction rec_norm = rec.normalized();  // throws on empty mask

    FidelityReport report;
    const cplx ov = inner_product(rec_norm, exact);
    report.fidelity = std::norm(ov);
    report.global_phase = std::arg(ov);

    // Per-peak: both restrictions renormalized over the valid bins of each
    // unit cell; headline fidelity above is against the full exact state.
    const int m_span = static_cast<int>(std::ceil(rec.grid.rho_max)) + 1;
    for (int m = -m_span; m <= m_span; ++m) {
        const auto bins = comb_cell_bins(rec.grid, m);
        if (bins.empty()) continue;
        bool any_valid = false;
        double exact_cell_mass = 0.0;
        double rec2 = 0.0, exact2 = 0.0;
        cplx cell_ov = 0.0;
        for (int j : bins) {
            exact_cell_mass += std::norm(exact.amps[j]);
            if (!rec.valid_mask[j]) continue;
            any_valid = true;
            rec2 += std::norm(rec.amps[j]);
            exact2 += std::norm(exact.amps[j]);
            cell_ov += std::conj(rec.amps[j]) * exact.amps[j];
        }
        if (!any_valid) continue;
        PeakFidelity peak;
        peak.cell = m;
        peak.exact_mass = exact_cell_mass * rec.grid.drho;
        peak.fidelity = (rec2 > 0.0 && exact2 > 0.0) ? std::norm(cell_ov) / (rec2 * exact2) : 0.0;
        report.per_peak.push_back(peak);
    }
    return report;
}

ReconstructedState align_global_phase(const ReconstructedState& rec,
                                      const WaveFunction& reference) {
    if (rec.grid != reference.grid) {
        throw grid_mismatch_error("align_global_phase: grids differ");
    }
    const cplx ov = overlap(rec, reference, rec.amps);
    if (std::abs(ov) <= std::numeric_limits<double>::min()) {
        throw validation_error("align_global_phase: zero overlap with the reference");
    }
    ReconstructedState out = rec;
    const cplx factor = std::polar(1.0, std::arg(ov));
    for (int j = 0; j < out.grid.num_points; ++j) {
        if (out.valid_mask[j]) out.amps[j] *= factor;
    }
    return out;
}

}  // namespace rotorrec
