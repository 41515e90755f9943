#pragma once
// Estimating regularities from observed streams.
//
// A finite observer cannot see limit points, only recurrence. A point is
// accepted as a limit point when the tail of the trajectory returns to its
// epsilon-ball in every one of W consecutive tail windows.

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "regula/measure.hpp"
#include "regula/realization.hpp"

namespace regula {

/// Points indexed by strictly increasing integers. Measure trajectories use
/// the total variation metric; averages in R^m use the Chebyshev metric.
class Trajectory {
public:
    Trajectory(std::size_t dim, Metric metric) : points_(dim), metric_(metric) {}

    void push_back(std::uint64_t index, std::span<const double> point);

    std::size_t size() const noexcept { return indices_.size(); }
    std::size_t dim() const noexcept { return points_.dim(); }
    Metric metric() const noexcept { return metric_; }
    std::uint64_t index(std::size_t i) const { return indices_.at(i); }
    const std::vector<std::uint64_t>& indices() const noexcept { return indices_; }
    std::span<const double> operator[](std::size_t i) const { return points_[i]; }
    const PointCloud& points() const noexcept { return points_; }

private:
    std::vector<std::uint64_t> indices_;
    PointCloud points_;
    Metric metric_;
};

struct EstimatorParams {
    double epsilon = 0.02;
    std::size_t windows = 5;
    double tail_fraction = 0.5;
};

struct LimitSetEstimate {
    /// Retained centers. Membership of a tail point is decided against the
    /// founding point of a cluster; the reported location is the latest
    /// tail point assigned to it.
    PointCloud centers;
    double epsilon;
    std::size_t windows;
    /// visits[c][w]: tail points of window w assigned to retained center c.
    std::vector<std::vector<std::size_t>> visits;
    /// First tail position (into the trajectory) and tail length.
    std::size_t tail_begin = 0;
    std::size_t tail_size = 0;
};

Measure empirical_measure(const Alphabet& alphabet, std::span<const SymbolIndex> tuple);

/// p_n at n = stride, 2 stride, ... computed in one pass.
Trajectory prefix_trajectory(const SymbolSequence& sequence, std::size_t stride);

/// Per-item empirical measures indexed by lambda = 1, 2, ...
Trajectory net_trajectory(const SamplingNet& net);

/// y_lambda = average of gamma over item lambda = p_lambda(gamma).
Trajectory average_trajectory(const SamplingNet& net, const TestFunction& gamma);

/// Requires at least 10 * windows points, epsilon > 0 and tail_fraction in
/// (0, 1]; throws PreconditionError otherwise.
LimitSetEstimate estimate_limit_set(const Trajectory& trajectory, const EstimatorParams& params = {});

/// Retained centers as a finite regularity (measure trajectories only).
Regularity to_regularity(const LimitSetEstimate& estimate, const Alphabet& alphabet);

/// Whether the estimate is consistent with a connected limit set: every
/// step of the tail is at most `epsilon` and every retained center lies
/// within `epsilon` of the tail, so any two centers are joined by a tail
/// path of small steps.
bool tail_path_connects(const Trajectory& trajectory, const LimitSetEstimate& estimate, double epsilon);

struct Separator {
    TestFunction gamma;
    /// Row of gamma whose one-dimensional images are farthest apart, and
    /// that Hausdorff distance.
    std::size_t best_row;
    double best_separation;
};

/// Coordinate indicators separate any two distinct regularities on a finite
/// alphabet. Throws PreconditionError when hausdorff(a, b) <= 1e-12.
Separator separating_function(const Regularity& a, const Regularity& b);

struct Equivalent {
    double hausdorff;
};

struct Distinct {
    double hausdorff;
    Separator witness;
    ImageSet image_first;
    ImageSet image_second;
};

using EquivalenceVerdict = std::variant<Equivalent, Distinct>;

/// Compares the regularities estimated from two measure trajectories:
/// equivalent when their Hausdorff distance is at most 2 epsilon.
EquivalenceVerdict s_equivalent(const Alphabet& alphabet, const Trajectory& first, const Trajectory& second,
                                const EstimatorParams& params = {});

EquivalenceVerdict s_equivalent(const SamplingNet& first, const SamplingNet& second,
                                const EstimatorParams& params = {});

/// Prefix mode: sequences are compared through their prefix trajectories.
EquivalenceVerdict s_equivalent(const SymbolSequence& first, const SymbolSequence& second, std::size_t stride,
                                const EstimatorParams& params = {});

}  // namespace regula
