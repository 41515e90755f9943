#pragma once
// Probability measures and regularities on a finite alphabet.
//
// A regularity is a nonempty closed set of probability vectors. Two exact
// finite representations are supported: a finite point set, and a polytope
// given by its vertices (`convex == true`). Everything else is approximated
// by a finite net of points.
//
// Distances between measures are total variation,
//   tv(p, q) = max_A |p(A) - q(A)| = 1/2 * sum_x |p(x) - q(x)|,
// which metrizes the weak-* topology on the finite simplex.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace regula {

using SymbolIndex = std::uint32_t;

/// Slack accepted on raw input weights (negativity and sum).
inline constexpr double kInputSlack = 1e-6;
/// Arithmetic tolerance for derived quantities.
inline constexpr double kArithmeticTol = 1e-9;
/// Two measures closer than this in total variation are the same point.
inline constexpr double kIdentityTol = 1e-12;

/// Ordered set of distinct symbol labels. Copies share the label storage.
class Alphabet {
public:
    explicit Alphabet(std::vector<std::string> symbols);

    std::size_t size() const noexcept;
    const std::string& symbol(SymbolIndex i) const;
    const std::vector<std::string>& symbols() const noexcept;
    std::optional<SymbolIndex> index_of(std::string_view symbol) const;

    friend bool operator==(const Alphabet& a, const Alphabet& b);

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

class Measure {
public:
    static Measure dirac(const Alphabet& alphabet, SymbolIndex at);
    static Measure uniform(const Alphabet& alphabet);

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::span<const double> weights() const noexcept { return weights_; }
    double operator[](SymbolIndex i) const { return weights_.at(i); }
    /// p(A) for A given as a bitmask over symbol indices (alphabets <= 64).
    double probability(std::uint64_t subset_mask) const;

private:
    Measure(Alphabet alphabet, std::vector<double> weights)
        : alphabet_(std::move(alphabet)), weights_(std::move(weights)) {}
    friend Measure make_measure(const Alphabet&, std::span<const double>);

    Alphabet alphabet_;
    std::vector<double> weights_;
};

/// Validates and normalizes: weights may be any positive multiple of a
/// probability vector; entries down to -1e-12 are clamped to zero.
/// Throws DataError on dimension mismatch, negative entries, a zero or
/// non-finite sum.
Measure make_measure(const Alphabet& alphabet, std::span<const double> weights);

/// Measure with weights numerators[x] / denominator, numerators summing to
/// the denominator exactly.
class RationalMeasure {
public:
    RationalMeasure(Alphabet alphabet, std::vector<std::uint64_t> numerators);

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::span<const std::uint64_t> numerators() const noexcept { return numerators_; }
    std::uint64_t denominator() const noexcept { return denominator_; }
    Measure to_measure() const;

private:
    Alphabet alphabet_;
    std::vector<std::uint64_t> numerators_;
    std::uint64_t denominator_ = 0;
};

/// Bounded map gamma: X -> R^m stored as an m x |X| row-major matrix.
class TestFunction {
public:
    TestFunction(Alphabet alphabet, std::size_t rows, std::vector<double> values);

    /// The |X| coordinate indicators 1_{x}; image(P, .) embeds P itself.
    static TestFunction coordinate_indicators(const Alphabet& alphabet);
    static TestFunction single_row(const Alphabet& alphabet, std::vector<double> row);

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return alphabet_.size(); }
    std::span<const double> row(std::size_t r) const;
    std::span<const double> values() const noexcept { return values_; }
    /// gamma(x) as a column vector.
    std::vector<double> at(SymbolIndex x) const;

private:
    Alphabet alphabet_;
    std::size_t rows_;
    std::vector<double> values_;
};

class Regularity {
public:
    /// `convex == false`: exactly the given points, which must be pairwise
    /// distinct. `convex == true`: their convex hull.
    Regularity(Alphabet alphabet, std::vector<Measure> points, bool convex);

    static Regularity singleton(const Measure& p);
    /// Convex hull of all Dirac measures, i.e. the whole simplex.
    static Regularity simplex(const Alphabet& alphabet);

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    const std::vector<Measure>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool convex() const noexcept { return convex_; }

private:
    Alphabet alphabet_;
    std::vector<Measure> points_;
    bool convex_;
};

/// Flat storage for a finite list of points in R^dim.
class PointCloud {
public:
    explicit PointCloud(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return count_; }
    bool empty() const noexcept { return count_ == 0; }
    std::span<const double> operator[](std::size_t i) const {
        return std::span<const double>(data_).subspan(i * dim_, dim_);
    }
    void push_back(std::span<const double> point);
    std::span<const double> data() const noexcept { return data_; }

private:
    std::size_t dim_;
    std::size_t count_ = 0;
    std::vector<double> data_;
};

enum class Metric {
    TotalVariation,  ///< 1/2 * L1; used for probability vectors
    Chebyshev,       ///< L-infinity; used for averages in R^m
};

double distance(Metric metric, std::span<const double> a, std::span<const double> b);

/// Max of the two directed Hausdorff distances between finite point sets.
double hausdorff(const PointCloud& a, const PointCloud& b, Metric metric);
/// sup over a of the distance from a to the nearest point of b.
double directed_hausdorff(const PointCloud& a, const PointCloud& b, Metric metric);

PointCloud to_cloud(const Regularity& regularity);

/// (p(gamma_1), ..., p(gamma_m)).
std::vector<double> expectation(const Measure& p, const TestFunction& gamma);

double tv_distance(const Measure& p, const Measure& q);

/// Hausdorff distance under total variation. Two convex regularities are
/// compared through their vertex sets (exact for vertex-irredundant
/// representations such as convexify output). When only one side is
/// convex it is replaced by its barycentric mesh of the given step.
double hausdorff(const Regularity& a, const Regularity& b, double mesh_step = 1.0 / 64.0);

struct ImageSet {
    PointCloud points;
    /// When set, the image is the convex hull of `points`.
    bool convex;
};

/// P(gamma) = {p(gamma) : p in P}. For convex P the vertex images span the
/// image by linearity.
ImageSet image(const Regularity& regularity, const TestFunction& gamma);

/// Vertex-irredundant convex representation: duplicates and points lying
/// in the convex hull of the others are removed. Throws PreconditionError
/// if the exhaustive hull-membership search would be too large.
Regularity convexify(const Regularity& regularity);

/// Barycentric grid of mixtures sum_i (k_i / N) v_i over the points of P
/// with N = ceil(1/step); for a non-convex P the points themselves.
/// Coinciding mixtures are emitted once, in first-generated order.
std::vector<Measure> barycentric_mesh(const Regularity& regularity, double step);

/// Events on which every measure of P agrees.
struct StochasticStructure {
    /// Subsets as bitmasks over symbol indices, ascending.
    std::vector<std::uint32_t> agreed_sets;
    std::vector<double> agreed_values;
    /// Whether the agreed sets are closed under complement and union.
    bool agreed_sets_form_algebra = false;
    /// Atoms of the algebra of agreed events (the agreed sets themselves
    /// when they form an algebra; otherwise a maximal algebra inside them
    /// grown greedily in ascending mask order).
    std::vector<std::uint32_t> atoms;
    std::vector<double> atom_values;
    /// True iff some agreed event other than the empty set and X exists.
    bool stochastic = false;
};

inline constexpr std::size_t kMaxEnumerableAlphabet = 20;

/// Enumerates all 2^|X| events. Throws PreconditionError when |X| > 20.
StochasticStructure stochastic_subalgebra(const Regularity& regularity, double tol = kArithmeticTol);

}  // namespace regula
