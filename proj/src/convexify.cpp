// Extreme-point pruning without a linear-program solver.
//
// By Caratheodory's theorem a point of an affine space of dimension d that
// lies in the convex hull of a set S lies in the hull of at most d + 1
// affinely independent points of S. Membership is therefore decided by
// solving S_k * lambda = v over every subset S_k of size <= d + 1 and
// accepting a nonnegative solution with vanishing residual. Since all
// points are probability vectors, sum(lambda) = 1 follows from the system.

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "regula/error.hpp"
#include "regula/measure.hpp"

namespace regula {

namespace {

constexpr double kPivotTol = 1e-12;
constexpr double kNegativeTol = 1e-10;
constexpr std::uint64_t kMaxSubsetSolves = 5'000'000;

// Solves the normal equations (S^T S) lambda = S^T v for the columns
// `subset` of `points`. Returns false when the columns are (numerically)
// linearly dependent.
bool solve_subset(const std::vector<Measure>& points, const std::vector<std::size_t>& subset,
                  std::span<const double> v, std::vector<double>& lambda) {
    const std::size_t k = subset.size();
    const std::size_t n = v.size();
    std::vector<double> a(k * (k + 1), 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        const auto wi = points[subset[i]].weights();
        for (std::size_t j = 0; j < k; ++j) {
            const auto wj = points[subset[j]].weights();
            double s = 0.0;
            for (std::size_t x = 0; x < n; ++x) s += wi[x] * wj[x];
            a[i * (k + 1) + j] = s;
        }
        double s = 0.0;
        for (std::size_t x = 0; x < n; ++x) s += wi[x] * v[x];
        a[i * (k + 1) + k] = s;
    }
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < k; ++r)
            if (std::fabs(a[r * (k + 1) + c]) > std::fabs(a[piv * (k + 1) + c])) piv = r;
        if (std::fabs(a[piv * (k + 1) + c]) < kPivotTol) return false;
        if (piv != c)
            for (std::size_t j = 0; j <= k; ++j) std::swap(a[c * (k + 1) + j], a[piv * (k + 1) + j]);
        for (std::size_t r = 0; r < k; ++r) {
            if (r == c) continue;
            const double f = a[r * (k + 1) + c] / a[c * (k + 1) + c];
            for (std::size_t j = c; j <= k; ++j) a[r * (k + 1) + j] -= f * a[c * (k + 1) + j];
        }
    }
    lambda.assign(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) lambda[i] = a[i * (k + 1) + k] / a[i * (k + 1) + i];
    return true;
}

bool is_convex_combination(const std::vector<Measure>& points, const std::vector<std::size_t>& others,
                           std::span<const double> v, std::size_t max_subset, std::uint64_t& budget) {
    std::vector<double> lambda;
    std::vector<double> residual(v.size());
    for (std::size_t size = 2; size <= std::min(max_subset, others.size()); ++size) {
        // Enumerate index combinations of `others` of the given size.
        std::vector<std::size_t> pick(size);
        for (std::size_t i = 0; i < size; ++i) pick[i] = i;
        while (true) {
            if (budget == 0) throw PreconditionError("convexify: too many points for exhaustive hull test");
            --budget;
            std::vector<std::size_t> subset(size);
            for (std::size_t i = 0; i < size; ++i) subset[i] = others[pick[i]];
            if (solve_subset(points, subset, v, lambda) &&
                std::all_of(lambda.begin(), lambda.end(), [](double l) { return l >= -kNegativeTol; })) {
                std::copy(v.begin(), v.end(), residual.begin());
                for (std::size_t i = 0; i < size; ++i) {
                    const auto w = points[subset[i]].weights();
                    for (std::size_t x = 0; x < v.size(); ++x) residual[x] -= lambda[i] * w[x];
                }
                double worst = 0.0;
                for (double r : residual) worst = std::max(worst, std::fabs(r));
                if (worst <= kArithmeticTol) return true;
            }
            std::size_t i = size;
            while (i > 0 && pick[i - 1] == others.size() - size + (i - 1)) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    return false;
}

}  // namespace

Regularity convexify(const Regularity& regularity) {
    std::vector<Measure> unique;
    for (const auto& p : regularity.points()) {
        const bool dup = std::any_of(unique.begin(), unique.end(),
                                     [&](const Measure& q) { return tv_distance(p, q) <= kIdentityTol; });
        if (!dup) unique.push_back(p);
    }
    const std::size_t max_subset = regularity.alphabet().size();  // affine dim + 1
    std::uint64_t budget = kMaxSubsetSolves;

    std::vector<bool> alive(unique.size(), true);
    for (std::size_t i = 0; i < unique.size(); ++i) {
        std::vector<std::size_t> others;
        for (std::size_t j = 0; j < unique.size(); ++j)
            if (j != i && alive[j]) others.push_back(j);
        if (others.size() < 2) continue;
        if (is_convex_combination(unique, others, unique[i].weights(), max_subset, budget)) alive[i] = false;
    }
    std::vector<Measure> vertices;
    for (std::size_t i = 0; i < unique.size(); ++i)
        if (alive[i]) vertices.push_back(unique[i]);
    return Regularity(regularity.alphabet(), std::move(vertices), true);
}

}  // namespace regula
