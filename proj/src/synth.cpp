#include "delmar/synth.hpp"

#include <algorithm>
#include <cmath>

#include "delmar/errors.hpp"
#include "delmar/kernels.hpp"
#include "delmar/rng.hpp"

namespace delmar {

namespace {

// Stream tags so every random draw has its own reproducible source.
enum Stream : std::uint64_t {
    kWeights = 1000,
    kFeatures = 2000,
    kComplement = 3000,
    kBackground = 4000,
    kNoise = 5000,
};

constexpr double kBandGap = 120.0;  // spectral ratio across level boundaries

void check_spec(const SynthSpec& spec) {
    if (spec.m < 4 || spec.n < 4) throw InvalidSpec("generate: need m, n >= 4");
    if (spec.ranks.empty()) throw InvalidSpec("generate: ranks must be nonempty");
    for (std::size_t k = 0; k < spec.ranks.size(); ++k) {
        if (spec.ranks[k] < 1) throw InvalidSpec("generate: ranks must be >= 1");
        if (k > 0 && spec.ranks[k] >= spec.ranks[k - 1]) {
            throw InvalidSpec("generate: ranks must be strictly decreasing");
        }
    }
    if (spec.ranks[0] >= std::min(spec.m, spec.n)) {
        throw InvalidSpec("generate: ranks[0] must be < min(m, n)");
    }
    if (!(spec.noise_sigma >= 0.0)) throw InvalidSpec("generate: noise_sigma must be >= 0");
    if (!(spec.background_density >= 0.0) || spec.background_density >= 1.0) {
        throw InvalidSpec("generate: background_density must be in [0, 1)");
    }
    if (spec.background_density > 0.0 && !(spec.background_amplitude > 0.0)) {
        throw InvalidSpec("generate: background_amplitude must be > 0 when density > 0");
    }
}

DenseMatrix gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed,
                     std::uint64_t stream, std::uint64_t substream) {
    Rng rng(seed, stream, substream);
    DenseMatrix m(rows, cols);
    for (double& v : m.data) v = rng.next_normal();
    return m;
}

DenseMatrix orthonormal_columns(std::size_t rows, std::size_t cols, std::uint64_t seed,
                                std::uint64_t stream, std::uint64_t substream) {
    return qr_decompose(gaussian(rows, cols, seed, stream, substream)).q;
}

// Orthonormal basis of the complement of span(base) inside R^rows, width wide.
// QR of [base | gaussian] yields it in the trailing columns.
DenseMatrix orthonormal_complement(const DenseMatrix& base, std::size_t wide, std::uint64_t seed,
                                   std::uint64_t substream) {
    DenseMatrix g = gaussian(base.rows, wide, seed, kComplement, substream);
    DenseMatrix concat(base.rows, base.cols + wide);
    for (std::size_t i = 0; i < base.rows; ++i) {
        for (std::size_t j = 0; j < base.cols; ++j) concat(i, j) = base(i, j);
        for (std::size_t j = 0; j < wide; ++j) concat(i, base.cols + j) = g(i, j);
    }
    DenseMatrix q = qr_decompose(concat).q;
    DenseMatrix out(base.rows, wide);
    for (std::size_t i = 0; i < base.rows; ++i)
        for (std::size_t j = 0; j < wide; ++j) out(i, j) = q(i, base.cols + j);
    return out;
}

// Contiguous block supports covering [0, n) with at most 20% overlap between
// consecutive rows. Row values are uniform in [0.2, 1], then each row is
// normalized and scaled by amplitude * band_profile(row).
DenseMatrix block_rows(std::size_t r, std::size_t n, double amplitude, std::uint64_t seed,
                       std::uint64_t substream) {
    std::size_t blen = r == 1 ? n
                              : std::max<std::size_t>(
                                    1, static_cast<std::size_t>(std::floor(
                                           static_cast<double>(n) /
                                           (1.0 + 0.8 * static_cast<double>(r - 1)))));
    auto coverage = [&](std::size_t b) {
        const std::size_t stride = b - static_cast<std::size_t>(std::floor(0.2 * static_cast<double>(b)));
        return b + (r - 1) * stride;
    };
    while (blen > 1 && coverage(blen) > n) --blen;
    const std::size_t stride =
        blen - static_cast<std::size_t>(std::floor(0.2 * static_cast<double>(blen)));

    Rng rng(seed, kFeatures, substream);
    DenseMatrix y(r, n);
    for (std::size_t i = 0; i < r; ++i) {
        const std::size_t start = std::min(i * stride, n - blen);
        double norm2 = 0.0;
        for (std::size_t j = start; j < start + blen; ++j) {
            const double v = 0.2 + 0.8 * rng.next_double();
            y(i, j) = v;
            norm2 += v * v;
        }
        const double scal = amplitude * band_profile(i + 1) / std::sqrt(norm2);
        for (std::size_t j = start; j < start + blen; ++j) y(i, j) *= scal;
    }
    return y;
}

} // namespace

double band_profile(std::size_t i) {
    if (i <= 1) return 1.0;
    return 0.25 * std::pow(0.85, static_cast<double>(i - 2));
}

GroundTruth generate(const SynthSpec& spec) {
    check_spec(spec);
    const std::size_t depth = spec.ranks.size();
    GroundTruth gt;

    gt.x_true.reserve(depth);
    std::size_t prev = spec.m;
    for (std::size_t k = 0; k < depth; ++k) {
        gt.x_true.push_back(orthonormal_columns(prev, spec.ranks[k], spec.seed, kWeights, k));
        prev = spec.ranks[k];
    }

    // Deepest band first, then compose upward adding each level's own content
    // in the orthogonal complement of the deeper weights so band amplitudes
    // survive composition.
    // Level k owns ranks[k] - ranks[k+1] components (all of ranks[depth-1] for
    // the deepest); its amplitude sits kBandGap below the deeper band's floor.
    auto band_len = [&](std::size_t k) {
        return k + 1 < depth ? spec.ranks[k] - spec.ranks[k + 1] : spec.ranks[k];
    };
    std::vector<double> band_amp(depth);
    band_amp[depth - 1] = 1.0;
    for (std::size_t k = depth - 1; k-- > 0;) {
        band_amp[k] = band_amp[k + 1] * band_profile(band_len(k + 1)) / kBandGap;
    }

    std::vector<DenseMatrix> y_levels(depth);
    y_levels[depth - 1] =
        block_rows(spec.ranks[depth - 1], spec.n, band_amp[depth - 1], spec.seed, depth - 1);
    for (std::size_t k = depth - 1; k-- > 0;) {
        DenseMatrix composed = multiply(gt.x_true[k + 1], y_levels[k + 1]);
        const std::size_t extra = spec.ranks[k] - spec.ranks[k + 1];
        DenseMatrix extra_y = block_rows(extra, spec.n, band_amp[k], spec.seed, k);
        DenseMatrix basis = orthonormal_complement(gt.x_true[k + 1], extra, spec.seed, k);
        y_levels[k] = add_scaled(composed, 1.0, multiply(basis, extra_y));
    }

    gt.signal = multiply(gt.x_true[0], y_levels[0]);

    // Unit-RMS normalization of the noiseless composition.
    const double norm = frobenius_norm(gt.signal);
    const double factor = std::sqrt(static_cast<double>(spec.m * spec.n)) / norm;
    gt.signal = scale(gt.signal, factor);
    for (auto& y : y_levels) y = scale(y, factor);
    gt.y_true = y_levels[depth - 1];
    gt.y_levels = std::move(y_levels);

    // Sparse background: exactly round(density * m * n) entries at +-amplitude.
    gt.z_true = zeros(spec.m, spec.n);
    const std::size_t total = spec.m * spec.n;
    const std::size_t count = static_cast<std::size_t>(
        std::llround(spec.background_density * static_cast<double>(total)));
    if (count > 0) {
        Rng rng(spec.seed, kBackground, 0);
        std::vector<std::size_t> idx(total);
        for (std::size_t i = 0; i < total; ++i) idx[i] = i;
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.next_u64() % (total - i));
            std::swap(idx[i], idx[j]);
            const double sign = rng.next_double() < 0.5 ? -1.0 : 1.0;
            gt.z_true.data[idx[i]] = sign * spec.background_amplitude;
        }
    }

    gt.s = add_scaled(gt.signal, 1.0, gt.z_true);
    if (spec.noise_sigma > 0.0) {
        Rng rng(spec.seed, kNoise, 0);
        for (double& v : gt.s.data) v += spec.noise_sigma * rng.next_normal();
    }
    return gt;
}

} // namespace delmar
