#include "rotorrec/rng.hpp"

#include <cmath>
#include <numbers>

namespace rotorrec {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = splitmix64(master);
    for (std::uint64_t index : path) {
        h = splitmix64(h ^ (index + 0x9e3779b97f4a7c15ULL));
    }
    return h;
}

double Rng::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    // u1 in (0, 1] keeps the log finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(angle);
    has_cached_ = true;
    return r * std::cos(angle);
}

}  // namespace rotorrec
