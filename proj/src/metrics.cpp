#include "delmar/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "delmar/errors.hpp"
#include "delmar/pipeline.hpp"
#include "delmar/rng.hpp"

namespace delmar {

namespace {

std::vector<double> matrix_row(const DenseMatrix& m, std::size_t i) {
    return {m.data.begin() + static_cast<std::ptrdiff_t>(i * m.cols),
            m.data.begin() + static_cast<std::ptrdiff_t>((i + 1) * m.cols)};
}

// Column indices of entries strictly above threshold, as 1-d points.
std::vector<std::vector<double>> row_support(const std::vector<double>& row,
                                             double threshold) {
    std::vector<std::vector<double>> pts;
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (row[j] > threshold) {
            pts.push_back({static_cast<double>(j)});
        }
    }
    return pts;
}

DenseMatrix take_rows(const DenseMatrix& m, const std::vector<std::size_t>& idx) {
    DenseMatrix out(idx.size(), m.cols);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) {
            out(i, j) = m(idx[i], j);
        }
    }
    return out;
}

} // namespace

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw ShapeMismatch("pearson: length mismatch");
    }
    if (a.size() < 2) {
        throw VectorTooShort("pearson: need at least 2 samples");
    }
    const double n = static_cast<double>(a.size());
    const double mean_a = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mean_b = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - mean_a;
        const double db = b[i] - mean_b;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) {
        return 0.0;
    }
    return sab / std::sqrt(saa * sbb);
}

double overlap_similarity(const DenseMatrix& a, const DenseMatrix& b,
                          double threshold) {
    if (!a.same_shape(b)) {
        throw ShapeMismatch("overlap_similarity: shapes differ");
    }
    std::size_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const bool in_a = a.data[i] > threshold;
        const bool in_b = b.data[i] > threshold;
        inter += in_a && in_b;
        uni += in_a || in_b;
    }
    if (uni == 0) {
        return 1.0;
    }
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double hausdorff_distance(const std::vector<std::vector<double>>& a,
                          const std::vector<std::vector<double>>& b) {
    if (a.empty() || b.empty()) {
        throw EmptySupport("hausdorff_distance: empty point set");
    }
    const std::size_t dim = a.front().size();
    for (const auto* set : {&a, &b}) {
        for (const auto& p : *set) {
            if (p.size() != dim) {
                throw ShapeMismatch("hausdorff_distance: mixed point dimensions");
            }
        }
    }
    auto directed = [dim](const std::vector<std::vector<double>>& from,
                          const std::vector<std::vector<double>>& to) {
        double worst = 0.0;
        for (const auto& p : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : to) {
                double d2 = 0.0;
                for (std::size_t c = 0; c < dim; ++c) {
                    const double diff = p[c] - q[c];
                    d2 += diff * diff;
                }
                best = std::min(best, d2);
            }
            worst = std::max(worst, best);
        }
        return std::sqrt(worst);
    };
    return std::max(directed(a, b), directed(b, a));
}

std::vector<std::pair<std::size_t, std::size_t>> greedy_match(const DenseMatrix& score) {
    const std::size_t want = std::min(score.rows, score.cols);
    std::vector<bool> row_used(score.rows, false), col_used(score.cols, false);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    while (pairs.size() < want) {
        double best = -std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < score.rows; ++i) {
            if (row_used[i]) continue;
            for (std::size_t j = 0; j < score.cols; ++j) {
                if (col_used[j]) continue;
                if (score(i, j) > best) {
                    best = score(i, j);
                    bi = i;
                    bj = j;
                }
            }
        }
        row_used[bi] = true;
        col_used[bj] = true;
        pairs.emplace_back(bi, bj);
    }
    return pairs;
}

SimilarityReport similarity_report(const DenseMatrix& features,
                                   const DenseMatrix& templates,
                                   double threshold) {
    if (features.cols != templates.cols) {
        throw ShapeMismatch("similarity_report: column counts differ");
    }
    if (features.rows == 0 || templates.rows == 0) {
        throw DegenerateInput("similarity_report: empty matrix");
    }

    DenseMatrix raw(features.rows, templates.rows);
    DenseMatrix score(features.rows, templates.rows);
    for (std::size_t i = 0; i < features.rows; ++i) {
        const std::vector<double> fi = matrix_row(features, i);
        for (std::size_t j = 0; j < templates.rows; ++j) {
            raw(i, j) = pearson(fi, matrix_row(templates, j));
            score(i, j) = std::abs(raw(i, j));
        }
    }

    SimilarityReport report;
    for (const auto& [i, j] : greedy_match(score)) {
        MatchedPair pair;
        pair.feature_row = i;
        pair.template_row = j;
        pair.abs_pearson = score(i, j);

        std::vector<double> fi = matrix_row(features, i);
        if (raw(i, j) < 0.0) {
            for (double& v : fi) v = -v; // align sign with the template
        }
        const std::vector<double> tj = matrix_row(templates, j);
        DenseMatrix fa(1, features.cols), tb(1, templates.cols);
        fa.data = fi;
        tb.data = tj;
        pair.overlap = overlap_similarity(fa, tb, threshold);

        const auto sa = row_support(fi, threshold);
        const auto sb = row_support(tj, threshold);
        if (!sa.empty() && !sb.empty()) {
            pair.has_hausdorff = true;
            pair.hausdorff = hausdorff_distance(sa, sb);
            report.mean_hausdorff += pair.hausdorff;
            ++report.hausdorff_pairs;
        }
        report.mean_abs_pearson += pair.abs_pearson;
        report.mean_overlap += pair.overlap;
        report.pairs.push_back(std::move(pair));
    }
    const double count = static_cast<double>(report.pairs.size());
    report.mean_abs_pearson /= count;
    report.mean_overlap /= count;
    if (report.hausdorff_pairs > 0) {
        report.mean_hausdorff /= static_cast<double>(report.hausdorff_pairs);
    }
    return report;
}

SplitHalfResult split_half_details(const DenseMatrix& s, const AdmmConfig& config,
                                   std::size_t rank, std::uint64_t split_seed) {
    if (s.rows < 4) {
        throw DegenerateInput("split_half_reproducibility: need at least 4 rows");
    }
    std::vector<std::size_t> order(s.rows);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(split_seed, 7000, 0);
    for (std::size_t i = s.rows; i-- > 1;) {
        const std::size_t j = static_cast<std::size_t>(rng.next_u64() % (i + 1));
        std::swap(order[i], order[j]);
    }
    const std::size_t half = s.rows / 2;
    std::vector<std::size_t> first(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(half));
    std::vector<std::size_t> second(order.begin() + static_cast<std::ptrdiff_t>(half), order.end());
    std::sort(first.begin(), first.end());
    std::sort(second.begin(), second.end());

    const std::size_t limit = std::min({first.size(), second.size(),
                                        static_cast<std::size_t>(s.cols)});
    if (rank < 1 || rank >= limit) {
        throw RankTooLarge("split_half_reproducibility: rank too large for halves");
    }

    const DenseMatrix sa = take_rows(s, first);
    const DenseMatrix sb = take_rows(s, second);
    const DecomposeResult da = decompose(sa, config, rank, 1, false);
    const DecomposeResult db = decompose(sb, config, rank, 1, false);
    const DenseMatrix& ya = da.stack.layers[0].y;
    const DenseMatrix& yb = db.stack.layers[0].y;

    DenseMatrix score(ya.rows, yb.rows);
    for (std::size_t i = 0; i < ya.rows; ++i) {
        const std::vector<double> ri = matrix_row(ya, i);
        for (std::size_t j = 0; j < yb.rows; ++j) {
            score(i, j) = std::abs(pearson(ri, matrix_row(yb, j)));
        }
    }
    SplitHalfResult result;
    for (const auto& [i, j] : greedy_match(score)) {
        result.pairs.push_back({i, j, score(i, j)});
        result.mean_abs_pearson += score(i, j);
    }
    result.mean_abs_pearson /= static_cast<double>(result.pairs.size());
    return result;
}

double split_half_reproducibility(const DenseMatrix& s, const AdmmConfig& config,
                                  std::size_t rank, std::uint64_t split_seed) {
    return split_half_details(s, config, rank, split_seed).mean_abs_pearson;
}

} // namespace delmar
