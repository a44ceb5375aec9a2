#ifndef ROTORREC_RNG_HPP
#define ROTORREC_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace rotorrec {

/// Derives a child seed from a master seed and a path of indices
/// (e.g. {realization, setting, array}). Each index is absorbed with a
/// splitmix64 round, so distinct paths give independent streams and sweeps
/// stay reproducible from the master seed alone.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

/// mt19937_64 with explicit output transforms. The standard pins down the
/// engine bit-for-bit; the std distributions are implementation-defined, so
/// uniform and normal variates are produced here instead for byte-identical
/// results across platforms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; caches the second variate.
    double normal();

  private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace rotorrec

#endif
