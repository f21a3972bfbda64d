// Timings for the OpenMP kernels against their serial twins. The twins share
// loop bodies and accumulation order, so outputs must match bitwise; the
// benchmark exits nonzero if they ever drift.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>

#include "delmar/kernels.hpp"
#include "delmar/reference.hpp"

using namespace delmar;

namespace {

DenseMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    DenseMatrix m(rows, cols);
    for (double& v : m.data) v = dist(gen);
    return m;
}

double best_ms(const std::function<void()>& f, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

int failures = 0;

void row(const std::string& name, const std::function<void()>& serial,
         const std::function<void()>& parallel, double drift, int reps) {
    const double ts = best_ms(serial, reps);
    const double tp = best_ms(parallel, reps);
    const bool ok = drift == 0.0;
    std::printf("%-28s serial %8.2f ms   omp %8.2f ms   speedup %5.2fx   %s\n",
                name.c_str(), ts, tp, ts / tp, ok ? "bitwise" : "DRIFT");
    if (!ok) ++failures;
}

double qr_drift(const QrResult& a, const QrResult& b) {
    return max_abs_diff(a.q, b.q) + max_abs_diff(a.r, b.r);
}

} // namespace

int main(int argc, char** argv) {
    const int reps = argc > 1 ? std::atoi(argv[1]) : 5;

    const DenseMatrix a = random_matrix(150, 800, 1);
    const DenseMatrix b = random_matrix(800, 150, 2);
    const DenseMatrix sq1 = random_matrix(400, 400, 3);
    const DenseMatrix sq2 = random_matrix(400, 400, 4);
    const DenseMatrix tall = random_matrix(800, 120, 5);
    const DenseMatrix wide = random_matrix(1000, 1200, 6);

    row("multiply 150x800 * 800x150",
        [&] { reference::multiply(a, b); }, [&] { multiply(a, b); },
        max_abs_diff(reference::multiply(a, b), multiply(a, b)), reps);
    row("multiply 400x400 * 400x400",
        [&] { reference::multiply(sq1, sq2); }, [&] { multiply(sq1, sq2); },
        max_abs_diff(reference::multiply(sq1, sq2), multiply(sq1, sq2)), reps);
    row("qr 800x120",
        [&] { reference::qr_decompose(tall); }, [&] { qr_decompose(tall); },
        qr_drift(reference::qr_decompose(tall), qr_decompose(tall)), reps);
    row("shrink 1000x1200",
        [&] { reference::shrink(wide, 0.4); }, [&] { shrink(wide, 0.4); },
        max_abs_diff(reference::shrink(wide, 0.4), shrink(wide, 0.4)), reps);
    const SignSplit ss = reference::split_signs(wide);
    const SignSplit sp = split_signs(wide);
    row("split_signs 1000x1200",
        [&] { reference::split_signs(wide); }, [&] { split_signs(wide); },
        max_abs_diff(ss.pos, sp.pos) + max_abs_diff(ss.neg, sp.neg), reps);

    return failures == 0 ? 0 : 1;
}
