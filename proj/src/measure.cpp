#include "regula/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <unordered_map>

#include "regula/error.hpp"
#include "regula/kernels.hpp"

namespace regula {

struct Alphabet::Impl {
    std::vector<std::string> symbols;
    std::unordered_map<std::string, SymbolIndex> index;
};

Alphabet::Alphabet(std::vector<std::string> symbols) {
    if (symbols.empty()) throw DataError("alphabet must contain at least one symbol");
    if (symbols.size() > std::numeric_limits<SymbolIndex>::max())
        throw DataError("alphabet too large");
    auto impl = std::make_shared<Impl>();
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (!impl->index.emplace(symbols[i], static_cast<SymbolIndex>(i)).second)
            throw DataError("duplicate alphabet symbol '" + symbols[i] + "'");
    }
    impl->symbols = std::move(symbols);
    impl_ = std::move(impl);
}

std::size_t Alphabet::size() const noexcept { return impl_->symbols.size(); }

const std::string& Alphabet::symbol(SymbolIndex i) const { return impl_->symbols.at(i); }

const std::vector<std::string>& Alphabet::symbols() const noexcept { return impl_->symbols; }

std::optional<SymbolIndex> Alphabet::index_of(std::string_view symbol) const {
    const auto it = impl_->index.find(std::string(symbol));
    if (it == impl_->index.end()) return std::nullopt;
    return it->second;
}

bool operator==(const Alphabet& a, const Alphabet& b) {
    return a.impl_ == b.impl_ || a.impl_->symbols == b.impl_->symbols;
}

namespace {

void require_same(const Alphabet& a, const Alphabet& b, const char* what) {
    if (!(a == b)) throw DataError(std::string(what) + ": alphabet mismatch");
}

}  // namespace

// ---------------------------------------------------------------------------
// Measure

Measure make_measure(const Alphabet& alphabet, std::span<const double> weights) {
    if (weights.size() != alphabet.size())
        throw DataError("measure has " + std::to_string(weights.size()) + " weights for an alphabet of " +
                        std::to_string(alphabet.size()) + " symbols");
    std::vector<double> w(weights.begin(), weights.end());
    double sum = 0.0;
    for (double& x : w) {
        if (!std::isfinite(x)) throw DataError("measure weight is not finite");
        if (x < -1e-12) throw DataError("measure weight is negative");
        x = std::max(x, 0.0);
        sum += x;
    }
    if (!(sum > 0.0) || !std::isfinite(sum)) throw DataError("measure weights sum to zero");
    for (double& x : w) x /= sum;
    return Measure(alphabet, std::move(w));
}

Measure Measure::dirac(const Alphabet& alphabet, SymbolIndex at) {
    if (at >= alphabet.size()) throw DataError("Dirac index outside the alphabet");
    std::vector<double> w(alphabet.size(), 0.0);
    w[at] = 1.0;
    return Measure(alphabet, std::move(w));
}

Measure Measure::uniform(const Alphabet& alphabet) {
    return Measure(alphabet, std::vector<double>(alphabet.size(), 1.0 / static_cast<double>(alphabet.size())));
}

double Measure::probability(std::uint64_t subset_mask) const {
    double s = 0.0;
    for (std::size_t i = 0; i < weights_.size() && i < 64; ++i)
        if ((subset_mask >> i) & 1u) s += weights_[i];
    return s;
}

RationalMeasure::RationalMeasure(Alphabet alphabet, std::vector<std::uint64_t> numerators)
    : alphabet_(std::move(alphabet)), numerators_(std::move(numerators)) {
    if (numerators_.size() != alphabet_.size()) throw DataError("rational measure: dimension mismatch");
    for (auto n : numerators_) {
        if (n > std::numeric_limits<std::uint64_t>::max() - denominator_)
            throw DataError("rational measure: denominator overflow");
        denominator_ += n;
    }
    if (denominator_ == 0) throw DataError("rational measure: zero denominator");
}

Measure RationalMeasure::to_measure() const {
    std::vector<double> w(numerators_.size());
    const auto d = static_cast<double>(denominator_);
    std::transform(numerators_.begin(), numerators_.end(), w.begin(),
                   [d](std::uint64_t n) { return static_cast<double>(n) / d; });
    return make_measure(alphabet_, w);
}

// ---------------------------------------------------------------------------
// TestFunction

TestFunction::TestFunction(Alphabet alphabet, std::size_t rows, std::vector<double> values)
    : alphabet_(std::move(alphabet)), rows_(rows), values_(std::move(values)) {
    if (rows_ == 0) throw DataError("test function needs at least one row");
    if (values_.size() != rows_ * alphabet_.size()) throw DataError("test function: shape mismatch");
    for (double v : values_)
        if (!std::isfinite(v)) throw DataError("test function entries must be finite");
}

TestFunction TestFunction::coordinate_indicators(const Alphabet& alphabet) {
    const std::size_t n = alphabet.size();
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
    return TestFunction(alphabet, n, std::move(v));
}

TestFunction TestFunction::single_row(const Alphabet& alphabet, std::vector<double> row) {
    return TestFunction(alphabet, 1, std::move(row));
}

std::span<const double> TestFunction::row(std::size_t r) const {
    if (r >= rows_) throw DataError("test function row out of range");
    return std::span<const double>(values_).subspan(r * cols(), cols());
}

std::vector<double> TestFunction::at(SymbolIndex x) const {
    std::vector<double> col(rows_);
    for (std::size_t r = 0; r < rows_; ++r) col[r] = values_.at(r * cols() + x);
    return col;
}

// ---------------------------------------------------------------------------
// Regularity

Regularity::Regularity(Alphabet alphabet, std::vector<Measure> points, bool convex)
    : alphabet_(std::move(alphabet)), points_(std::move(points)), convex_(convex) {
    if (points_.empty()) throw DataError("regularity must contain at least one measure");
    for (const auto& p : points_) require_same(alphabet_, p.alphabet(), "regularity");
    if (!convex_) {
        for (std::size_t i = 0; i < points_.size(); ++i)
            for (std::size_t j = i + 1; j < points_.size(); ++j)
                if (tv_distance(points_[i], points_[j]) <= kIdentityTol)
                    throw DataError("regularity points " + std::to_string(i) + " and " + std::to_string(j) +
                                    " coincide");
    }
}

Regularity Regularity::singleton(const Measure& p) { return Regularity(p.alphabet(), {p}, false); }

Regularity Regularity::simplex(const Alphabet& alphabet) {
    std::vector<Measure> v;
    v.reserve(alphabet.size());
    for (SymbolIndex i = 0; i < alphabet.size(); ++i) v.push_back(Measure::dirac(alphabet, i));
    return Regularity(alphabet, std::move(v), true);
}

// ---------------------------------------------------------------------------
// Point sets and distances

void PointCloud::push_back(std::span<const double> point) {
    if (point.size() != dim_) throw DataError("point dimension mismatch");
    data_.insert(data_.end(), point.begin(), point.end());
    ++count_;
}

double distance(Metric metric, std::span<const double> a, std::span<const double> b) {
    switch (metric) {
        case Metric::TotalVariation: return 0.5 * kernels::l1_distance(a, b);
        case Metric::Chebyshev: return kernels::linf_distance(a, b);
    }
    return 0.0;
}

double directed_hausdorff(const PointCloud& a, const PointCloud& b, Metric metric) {
    if (a.dim() != b.dim()) throw DataError("hausdorff: dimension mismatch");
    if (a.empty() || b.empty()) throw DataError("hausdorff: empty point set");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < b.size() && best > worst; ++j)
            best = std::min(best, distance(metric, a[i], b[j]));
        worst = std::max(worst, best);
    }
    return worst;
}

double hausdorff(const PointCloud& a, const PointCloud& b, Metric metric) {
    return std::max(directed_hausdorff(a, b, metric), directed_hausdorff(b, a, metric));
}

PointCloud to_cloud(const Regularity& regularity) {
    PointCloud cloud(regularity.alphabet().size());
    for (const auto& p : regularity.points()) cloud.push_back(p.weights());
    return cloud;
}

std::vector<double> expectation(const Measure& p, const TestFunction& gamma) {
    require_same(p.alphabet(), gamma.alphabet(), "expectation");
    std::vector<double> out(gamma.rows());
    kernels::gemv(gamma.values(), p.weights(), out);
    return out;
}

double tv_distance(const Measure& p, const Measure& q) {
    require_same(p.alphabet(), q.alphabet(), "tv_distance");
    return 0.5 * kernels::l1_distance(p.weights(), q.weights());
}

namespace {

// Largest mesh that keeps the mixed-representation Hausdorff comparison
// at desk scale.
constexpr double kMaxMeshPoints = 2e5;

double binomial(double n, double k) {
    double r = 1.0;
    for (double i = 1.0; i <= k; i += 1.0) r = r * (n - k + i) / i;
    return r;
}

PointCloud hull_cloud(const Regularity& r, double step) {
    const double v = static_cast<double>(r.size());
    double divisions = std::ceil(1.0 / step - 1e-9);
    while (divisions > 1.0 && binomial(divisions + v - 1.0, v - 1.0) > kMaxMeshPoints) divisions = std::floor(divisions / 2.0);
    PointCloud cloud(r.alphabet().size());
    for (const auto& m : barycentric_mesh(r, 1.0 / divisions)) cloud.push_back(m.weights());
    return cloud;
}

}  // namespace

double hausdorff(const Regularity& a, const Regularity& b, double mesh_step) {
    require_same(a.alphabet(), b.alphabet(), "hausdorff");
    if (!a.convex() && !b.convex()) return hausdorff(to_cloud(a), to_cloud(b), Metric::TotalVariation);
    if (a.convex() && b.convex())
        return hausdorff(to_cloud(convexify(a)), to_cloud(convexify(b)), Metric::TotalVariation);
    if (!(mesh_step > 0.0 && mesh_step <= 1.0)) throw PreconditionError("hausdorff: mesh step must lie in (0, 1]");
    const PointCloud ca = a.convex() ? hull_cloud(a, mesh_step) : to_cloud(a);
    const PointCloud cb = b.convex() ? hull_cloud(b, mesh_step) : to_cloud(b);
    return hausdorff(ca, cb, Metric::TotalVariation);
}

ImageSet image(const Regularity& regularity, const TestFunction& gamma) {
    require_same(regularity.alphabet(), gamma.alphabet(), "image");
    ImageSet out{PointCloud(gamma.rows()), regularity.convex()};
    for (const auto& p : regularity.points()) out.points.push_back(expectation(p, gamma));
    return out;
}

std::vector<Measure> barycentric_mesh(const Regularity& regularity, double step) {
    if (!regularity.convex()) return regularity.points();
    if (!(step > 0.0 && step <= 1.0)) throw PreconditionError("mesh step must lie in (0, 1]");
    const auto divisions = static_cast<std::uint64_t>(std::ceil(1.0 / step - 1e-9));
    const auto& vertices = regularity.points();
    const std::size_t nv = vertices.size();
    const std::size_t dim = regularity.alphabet().size();

    std::vector<Measure> out;
    // Affinely dependent vertices produce coinciding mixtures.
    std::set<std::vector<long long>> seen;
    // Compositions of `divisions` into nv parts, in lexicographic order of
    // the leading coordinates (descending first part).
    std::vector<std::uint64_t> parts(nv, 0);
    parts[0] = divisions;
    std::vector<double> mix(dim);
    while (true) {
        std::fill(mix.begin(), mix.end(), 0.0);
        for (std::size_t i = 0; i < nv; ++i)
            if (parts[i] != 0)
                kernels::axpy(static_cast<double>(parts[i]) / static_cast<double>(divisions), vertices[i].weights(),
                              mix);
        Measure m = make_measure(regularity.alphabet(), mix);
        std::vector<long long> key(dim);
        std::transform(m.weights().begin(), m.weights().end(), key.begin(),
                       [](double w) { return std::llround(w * 1e11); });
        if (seen.insert(std::move(key)).second) out.push_back(std::move(m));

        // Next composition: take the last part, drop one unit from the
        // rightmost nonzero part before it and move last + 1 just after it.
        const std::uint64_t last = parts[nv - 1];
        parts[nv - 1] = 0;
        std::size_t j = nv - 1;
        while (j > 0 && parts[j - 1] == 0) --j;
        if (j == 0) break;
        --parts[j - 1];
        parts[j] = last + 1;
    }
    return out;
}

}  // namespace regula
