#include "delmar/rng.hpp"

#include <cmath>

namespace delmar {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream) {
    // Fold the key into one well-mixed state; the three mixing rounds keep
    // nearby (seed, stream, substream) triples statistically independent.
    std::uint64_t x = seed;
    splitmix64(x);
    x ^= 0xA076'1D64'78BD'642FULL * (stream + 1);
    splitmix64(x);
    x ^= 0xE703'7ED1'A0B4'28DBULL * (substream + 1);
    splitmix64(x);
    state_ = x;
}

std::uint64_t Rng::next_u64() {
    return splitmix64(state_);
}

double Rng::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_double_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double Rng::next_normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double two_pi = 6.283185307179586476925286766559;
    double u1 = next_double_open();
    double u2 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(two_pi * u2);
    has_spare_ = true;
    return r * std::cos(two_pi * u2);
}

} // namespace delmar
