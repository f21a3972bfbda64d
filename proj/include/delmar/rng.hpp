#ifndef DELMAR_RNG_HPP
#define DELMAR_RNG_HPP

#include <cstdint>

namespace delmar {

// Counter-free splittable generator. Every consumer derives its own stream from
// (seed, stream, substream) so results never depend on call interleaving; the
// same key always replays the same sequence bit for bit, on any platform.
//
// Core is splitmix64; normals come from the classic Box-Muller transform so we
// do not depend on the standard library's unspecified normal_distribution
// algorithm.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream);

    std::uint64_t next_u64();

    // Uniform in [0, 1).
    double next_double();

    // Uniform in (0, 1]; used where log() must not see zero.
    double next_double_open();

    // Standard normal via Box-Muller (pairs cached).
    double next_normal();

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace delmar

#endif
