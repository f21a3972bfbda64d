#ifndef DELMAR_SYNTH_HPP
#define DELMAR_SYNTH_HPP

#include <cstdint>
#include <vector>

#include "delmar/dense_matrix.hpp"

namespace delmar {

// Recipe for a hierarchical low-rank + sparse + noise signal. ranks lists the
// per-level component counts, strictly decreasing, deepest last. The noiseless
// composition is rescaled to unit RMS, so noise_sigma and background_amplitude
// are both expressed in units of signal RMS.
struct SynthSpec {
    std::size_t m = 0;
    std::size_t n = 0;
    std::vector<std::size_t> ranks;
    double noise_sigma = 0.0;
    double background_density = 0.0;    // fraction of entries carrying background
    double background_amplitude = 0.0;  // magnitude of each background entry
    std::uint64_t seed = 0;
};

// Everything the generator drew, kept for oracle checks:
//   x_true[k]   level-(k+1) weights (orthonormal columns),
//   y_levels[k] true feature matrix of level k+1 (deepest equals y_true),
//   y_true      deepest features, nonnegative rows with contiguous supports,
//   z_true      sparse background (exactly round(density*m*n) nonzeros),
//   signal      noiseless composition x_true[0] * y_levels[0],
//   s           signal + z_true + noise.
//
// Each level occupies its own singular-value band: in-band profile
// [1, 0.25*0.85^(i-2)] with a dominant leading component, and consecutive
// bands separated by a ratio >= 100 at the composition (120 by construction),
// so every declared rank boundary is detectable by a gap test.
struct GroundTruth {
    std::vector<DenseMatrix> x_true;
    std::vector<DenseMatrix> y_levels;
    DenseMatrix y_true;
    DenseMatrix z_true;
    DenseMatrix signal;
    DenseMatrix s;
};

GroundTruth generate(const SynthSpec& spec);

// In-band singular-value profile, exposed for tests: position i (1-based) of a
// band gets amplitude profile * band amplitude.
double band_profile(std::size_t i);

} // namespace delmar

#endif
