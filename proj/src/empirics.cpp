#include "regula/empirics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "regula/error.hpp"
#include "regula/kernels.hpp"

namespace regula {

void Trajectory::push_back(std::uint64_t index, std::span<const double> point) {
    if (!indices_.empty() && index <= indices_.back()) throw DataError("trajectory indices must increase strictly");
    points_.push_back(point);
    indices_.push_back(index);
}

Measure empirical_measure(const Alphabet& alphabet, std::span<const SymbolIndex> tuple) {
    if (tuple.empty()) throw PreconditionError("empirical measure of an empty tuple");
    std::vector<double> counts(alphabet.size(), 0.0);
    for (SymbolIndex s : tuple) {
        if (s >= alphabet.size()) throw DataError("tuple symbol outside the alphabet");
        counts[s] += 1.0;
    }
    const auto n = static_cast<double>(tuple.size());
    for (double& c : counts) c /= n;
    return make_measure(alphabet, counts);
}

Trajectory prefix_trajectory(const SymbolSequence& sequence, std::size_t stride) {
    if (stride < 1) throw PreconditionError("prefix trajectory stride must be at least 1");
    const std::size_t dim = sequence.alphabet().size();
    Trajectory out(dim, Metric::TotalVariation);
    std::vector<std::uint64_t> counts(dim, 0);
    std::vector<double> point(dim);
    const auto& symbols = sequence.symbols();
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        ++counts[symbols[i]];
        const std::uint64_t n = i + 1;
        if (n % stride != 0) continue;
        for (std::size_t x = 0; x < dim; ++x) point[x] = static_cast<double>(counts[x]) / static_cast<double>(n);
        out.push_back(n, point);
    }
    return out;
}

Trajectory net_trajectory(const SamplingNet& net) {
    Trajectory out(net.alphabet().size(), Metric::TotalVariation);
    std::uint64_t lambda = 0;
    for (const auto& item : net.items()) out.push_back(++lambda, empirical_measure(net.alphabet(), item.tuple).weights());
    return out;
}

Trajectory average_trajectory(const SamplingNet& net, const TestFunction& gamma) {
    if (!(net.alphabet() == gamma.alphabet())) throw DataError("average_trajectory: alphabet mismatch");
    Trajectory out(gamma.rows(), Metric::Chebyshev);
    std::uint64_t lambda = 0;
    for (const auto& item : net.items())
        out.push_back(++lambda, expectation(empirical_measure(net.alphabet(), item.tuple), gamma));
    return out;
}

LimitSetEstimate estimate_limit_set(const Trajectory& trajectory, const EstimatorParams& params) {
    if (!(params.epsilon > 0.0)) throw PreconditionError("estimate_limit_set: epsilon must be positive");
    if (params.windows < 1) throw PreconditionError("estimate_limit_set: need at least one window");
    if (!(params.tail_fraction > 0.0 && params.tail_fraction <= 1.0))
        throw PreconditionError("estimate_limit_set: tail fraction must lie in (0, 1]");
    const std::size_t n = trajectory.size();
    if (n < 10 * params.windows)
        throw PreconditionError("estimate_limit_set: trajectory has " + std::to_string(n) + " points, needs at least " +
                                std::to_string(10 * params.windows));

    const double wanted = std::ceil(params.tail_fraction * static_cast<double>(n) - 1e-9);
    const std::size_t tail = std::clamp(static_cast<std::size_t>(wanted), params.windows, n);
    const std::size_t begin = n - tail;
    const Metric metric = trajectory.metric();

    struct Cluster {
        std::size_t founder;
        std::size_t latest;
        std::vector<std::size_t> visits;
    };
    std::vector<Cluster> clusters;
    for (std::size_t k = 0; k < tail; ++k) {
        const std::size_t i = begin + k;
        const std::size_t window = k * params.windows / tail;
        const auto point = trajectory[i];
        auto it = std::find_if(clusters.begin(), clusters.end(), [&](const Cluster& c) {
            return distance(metric, trajectory[c.founder], point) <= params.epsilon;
        });
        if (it == clusters.end()) {
            clusters.push_back(Cluster{i, i, std::vector<std::size_t>(params.windows, 0)});
            it = std::prev(clusters.end());
        }
        it->latest = i;
        ++it->visits[window];
    }

    LimitSetEstimate out{PointCloud(trajectory.dim()), params.epsilon, params.windows, {}, begin, tail};
    for (const auto& c : clusters) {
        if (std::any_of(c.visits.begin(), c.visits.end(), [](std::size_t v) { return v == 0; })) continue;
        out.centers.push_back(trajectory[c.latest]);
        out.visits.push_back(c.visits);
    }
    return out;
}

Regularity to_regularity(const LimitSetEstimate& estimate, const Alphabet& alphabet) {
    if (estimate.centers.dim() != alphabet.size()) throw DataError("estimate dimension does not match the alphabet");
    if (estimate.centers.empty()) throw PreconditionError("limit-set estimate retained no centers");
    std::vector<Measure> points;
    for (std::size_t i = 0; i < estimate.centers.size(); ++i) {
        Measure m = make_measure(alphabet, estimate.centers[i]);
        // Centers closer than the identity tolerance are one point.
        const bool dup = std::any_of(points.begin(), points.end(),
                                     [&](const Measure& q) { return tv_distance(q, m) <= kIdentityTol; });
        if (!dup) points.push_back(std::move(m));
    }
    return Regularity(alphabet, std::move(points), false);
}

bool tail_path_connects(const Trajectory& trajectory, const LimitSetEstimate& estimate, double epsilon) {
    const std::size_t begin = estimate.tail_begin;
    const std::size_t end = begin + estimate.tail_size;
    if (end > trajectory.size()) throw DataError("estimate does not belong to this trajectory");
    const Metric metric = trajectory.metric();
    for (std::size_t i = begin + 1; i < end; ++i)
        if (distance(metric, trajectory[i - 1], trajectory[i]) > epsilon) return false;
    for (std::size_t c = 0; c < estimate.centers.size(); ++c) {
        bool near = false;
        for (std::size_t i = begin; i < end && !near; ++i) near = distance(metric, trajectory[i], estimate.centers[c]) <= epsilon;
        if (!near) return false;
    }
    return true;
}

namespace {

struct Line {
    std::vector<double> points;  // sorted
    bool interval;               // [front, back] when set
};

Line as_line(const ImageSet& s) {
    const auto d = s.points.data();
    Line l{std::vector<double>(d.begin(), d.end()), s.convex};
    std::sort(l.points.begin(), l.points.end());
    if (l.interval) l.points = {l.points.front(), l.points.back()};
    return l;
}

double nearest(const Line& l, double t) {
    if (l.interval) return std::max({0.0, l.points.front() - t, t - l.points.back()});
    const auto it = std::lower_bound(l.points.begin(), l.points.end(), t);
    double d = std::numeric_limits<double>::infinity();
    if (it != l.points.end()) d = *it - t;
    if (it != l.points.begin()) d = std::min(d, t - *std::prev(it));
    return d;
}

double directed_1d(const Line& from, const Line& to) {
    double worst = 0.0;
    for (double t : from.points) worst = std::max(worst, nearest(to, t));
    if (from.interval && !to.interval) {
        // Inside an interval the distance to a finite set peaks at the
        // midpoints between consecutive points.
        for (std::size_t i = 0; i + 1 < to.points.size(); ++i) {
            const double mid = 0.5 * (to.points[i] + to.points[i + 1]);
            if (mid >= from.points.front() && mid <= from.points.back()) worst = std::max(worst, nearest(to, mid));
        }
    }
    return worst;
}

// Exact Hausdorff distance between one-dimensional images, finite or
// intervals.
double hausdorff_1d(const ImageSet& a, const ImageSet& b) {
    const Line la = as_line(a);
    const Line lb = as_line(b);
    return std::max(directed_1d(la, lb), directed_1d(lb, la));
}

}  // namespace

Separator separating_function(const Regularity& a, const Regularity& b) {
    if (!(a.alphabet() == b.alphabet())) throw DataError("separating_function: alphabet mismatch");
    if (hausdorff(a, b) <= kIdentityTol) throw PreconditionError("separating_function: the regularities coincide");
    TestFunction gamma = TestFunction::coordinate_indicators(a.alphabet());
    std::size_t best_row = 0;
    double best = -1.0;
    for (std::size_t r = 0; r < gamma.rows(); ++r) {
        const auto row = TestFunction::single_row(a.alphabet(), std::vector<double>(gamma.row(r).begin(), gamma.row(r).end()));
        const double sep = hausdorff_1d(image(a, row), image(b, row));
        if (sep > best + kArithmeticTol) {
            best = sep;
            best_row = r;
        }
    }
    return Separator{std::move(gamma), best_row, best};
}

EquivalenceVerdict s_equivalent(const Alphabet& alphabet, const Trajectory& first, const Trajectory& second,
                                const EstimatorParams& params) {
    if (first.dim() != alphabet.size() || second.dim() != alphabet.size())
        throw DataError("s_equivalent: trajectory dimension does not match the alphabet");
    const Regularity pa = to_regularity(estimate_limit_set(first, params), alphabet);
    const Regularity pb = to_regularity(estimate_limit_set(second, params), alphabet);
    const double h = hausdorff(pa, pb);
    if (h <= 2.0 * params.epsilon) return Equivalent{h};
    Separator witness = separating_function(pa, pb);
    ImageSet ia = image(pa, witness.gamma);
    ImageSet ib = image(pb, witness.gamma);
    return Distinct{h, std::move(witness), std::move(ia), std::move(ib)};
}

EquivalenceVerdict s_equivalent(const SamplingNet& first, const SamplingNet& second, const EstimatorParams& params) {
    if (!(first.alphabet() == second.alphabet())) throw DataError("s_equivalent: alphabet mismatch");
    return s_equivalent(first.alphabet(), net_trajectory(first), net_trajectory(second), params);
}

EquivalenceVerdict s_equivalent(const SymbolSequence& first, const SymbolSequence& second, std::size_t stride,
                                const EstimatorParams& params) {
    if (!(first.alphabet() == second.alphabet())) throw DataError("s_equivalent: alphabet mismatch");
    return s_equivalent(first.alphabet(), prefix_trajectory(first, stride), prefix_trajectory(second, stride), params);
}

}  // namespace regula
