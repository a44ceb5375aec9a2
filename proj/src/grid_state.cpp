#include "rotorrec/grid_state.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

namespace rotorrec {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// FFTW plan creation is not thread-safe; executing distinct or identical
// plans on caller-provided arrays is. Plans are cached per transform size.
class FftEngine {
  public:
    static FftEngine& instance() {
        static FftEngine engine;
        return engine;
    }

    void forward(int n, const cplx* in, cplx* out) { execute(n, in, out, FFTW_FORWARD); }
    void backward(int n, const cplx* in, cplx* out) { execute(n, in, out, FFTW_BACKWARD); }

  private:
    void execute(int n, const cplx* in, cplx* out, int sign) {
        fftw_plan plan = nullptr;
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto key = std::make_pair(n, sign);
            auto it = plans_.find(key);
            if (it == plans_.end()) {
                std::vector<cplx> a(n), b(n);
                plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(a.data()),
                                        reinterpret_cast<fftw_complex*>(b.data()), sign,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
                plans_.emplace(key, plan);
            } else {
                plan = it->second;
            }
        }
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                         reinterpret_cast<fftw_complex*>(out));
    }

    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

}  // namespace

double GridSpec::position_step() const {
    return 2.0 * std::numbers::pi / (num_points * drho);
}

GridSpec make_grid(int num_points, double rho_max) {
    if (!is_power_of_two(num_points)) {
        std::ostringstream msg;
        msg << "num_points must be a power of two, got " << num_points;
        throw validation_error(msg.str());
    }
    if (!(rho_max > 0.0)) {
        throw validation_error("rho_max must be positive");
    }
    const double drho = 2.0 * rho_max / num_points;
    const double s_real = 1.0 / drho;
    const long long s = std::llround(s_real);
    if (s < 1 || std::abs(s * drho - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << "grid misaligned: 1/drho = " << s_real
            << " is not an integer, so shifts by p0 would not land on bins "
            << "(num_points=" << num_points << ", rho_max=" << rho_max << ")";
        throw alignment_error(msg.str());
    }
    GridSpec grid;
    grid.num_points = num_points;
    grid.rho_max = rho_max;
    grid.drho = drho;
    grid.subdivisions_per_p0 = static_cast<int>(s);
    return grid;
}

void validate(const RotorParams& params) {
    if (!(params.K >= 0.0) || !std::isfinite(params.K)) {
        throw validation_error("K must be nonnegative and finite");
    }
    if (!(params.kbar > 0.0) || !std::isfinite(params.kbar)) {
        throw validation_error("kbar must be positive and finite");
    }
    if (!(params.sigma > 0.0) || !std::isfinite(params.sigma)) {
        throw validation_error("sigma must be positive and finite");
    }
}

WaveFunction gaussian_state(const GridSpec& grid, double sigma) {
    if (!(sigma >= 2.0 * grid.drho)) {
        std::ostringstream msg;
        msg << "sigma = " << sigma << " is unresolvable on this grid (needs sigma >= 2*drho = "
            << 2.0 * grid.drho << ")";
        throw validation_error(msg.str());
    }
    if (!(sigma <= grid.rho_max / 10.0)) {
        std::ostringstream msg;
        msg << "sigma = " << sigma << " is not contained (needs sigma <= rho_max/10 = "
            << grid.rho_max / 10.0 << ")";
        throw validation_error(msg.str());
    }
    WaveFunction wf{grid, std::vector<cplx>(grid.num_points)};
    double norm2 = 0.0;
    for (int j = 0; j < grid.num_points; ++j) {
        const double rho = grid.rho(j);
        const double a = std::exp(-rho * rho / (4.0 * sigma * sigma));
        wf.amps[j] = a;
        norm2 += a * a;
    }
    const double scale = 1.0 / std::sqrt(norm2 * grid.drho);
    for (auto& a : wf.amps) a *= scale;
    return wf;
}

double norm_squared(const WaveFunction& wf) {
    double sum = 0.0;
    for (const auto& a : wf.amps) sum += std::norm(a);
    return sum * wf.grid.drho;
}

double boundary_mass(const WaveFunction& wf) {
    const int n = wf.grid.num_points;
    const int edge = std::max(1, n / 100);
    double sum = 0.0;
    for (int j = 0; j < edge; ++j) sum += std::norm(wf.amps[j]);
    for (int j = n - edge; j < n; ++j) sum += std::norm(wf.amps[j]);
    return sum * wf.grid.drho;
}

cplx inner_product(const WaveFunction& a, const WaveFunction& b) {
    if (a.grid != b.grid) {
        throw grid_mismatch_error("inner_product: states live on different grids");
    }
    cplx sum = 0.0;
    for (int j = 0; j < a.grid.num_points; ++j) {
        sum += std::conj(a.amps[j]) * b.amps[j];
    }
    return sum * a.grid.drho;
}

double l2_distance(const WaveFunction& a, const WaveFunction& b) {
    if (a.grid != b.grid) {
        throw grid_mismatch_error("l2_distance: states live on different grids");
    }
    double sum = 0.0;
    for (int j = 0; j < a.grid.num_points; ++j) {
        sum += std::norm(a.amps[j] - b.amps[j]);
    }
    return std::sqrt(sum * a.grid.drho);
}

WaveFunction shift_momentum(const WaveFunction& wf, int shift_bins) {
    const int n = wf.grid.num_points;
    if (std::abs(shift_bins) * wf.grid.drho >= wf.grid.rho_max / 2.0) {
        std::ostringstream msg;
        msg << "shift of " << shift_bins << " bins (" << shift_bins * wf.grid.drho
            << " p0) exceeds rho_max/2";
        throw validation_error(msg.str());
    }
    WaveFunction out{wf.grid, std::vector<cplx>(n, cplx{0.0, 0.0})};
    double lost = 0.0;
    for (int j = 0; j < n; ++j) {
        const int src = j + shift_bins;
        if (src >= 0 && src < n) {
            out.amps[j] = wf.amps[src];
        }
    }
    // Mass in bins with no destination falls off-grid.
    if (shift_bins > 0) {
        for (int src = 0; src < std::min(shift_bins, n); ++src) lost += std::norm(wf.amps[src]);
    } else if (shift_bins < 0) {
        for (int src = std::max(0, n + shift_bins); src < n; ++src) lost += std::norm(wf.amps[src]);
    }
    lost *= wf.grid.drho;
    if (lost > 1e-8) {
        std::ostringstream msg;
        msg << "shift_momentum: " << lost << " probability mass pushed off-grid by a shift of "
            << shift_bins << " bins";
        throw leakage_error(msg.str());
    }
    return out;
}

// The physical kernel exp(i rho_j xi_k) factorizes into the plain DFT kernel
// exp(2 pi i jk/N) times exp(-i rho_max xi_k); rho_max * position_step == pi
// exactly, so the extra factor is (-1)^k.
std::vector<cplx> to_position(const WaveFunction& wf) {
    const int n = wf.grid.num_points;
    std::vector<cplx> out(n);
    FftEngine::instance().backward(n, wf.amps.data(), out.data());
    const double scale = wf.grid.drho / std::sqrt(2.0 * std::numbers::pi);
    for (int k = 0; k < n; ++k) {
        out[k] *= (k & 1) ? -scale : scale;
    }
    return out;
}

WaveFunction to_momentum(const GridSpec& grid, const std::vector<cplx>& position_amps) {
    const int n = grid.num_points;
    if (static_cast<int>(position_amps.size()) != n) {
        throw grid_mismatch_error("to_momentum: array size does not match grid");
    }
    std::vector<cplx> tmp(n);
    const double scale = grid.position_step() / std::sqrt(2.0 * std::numbers::pi);
    for (int k = 0; k < n; ++k) {
        tmp[k] = position_amps[k] * ((k & 1) ? -scale : scale);
    }
    WaveFunction out{grid, std::vector<cplx>(n)};
    FftEngine::instance().forward(n, tmp.data(), out.amps.data());
    return out;
}

}  // namespace rotorrec
