#include "regula/realization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "regula/error.hpp"

namespace regula {

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Index in [0, n); the fixed formula keeps streams identical across
// standard library implementations.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)));
}

void validate_symbols(const Alphabet& alphabet, const std::vector<SymbolIndex>& symbols, const char* what) {
    for (SymbolIndex s : symbols)
        if (s >= alphabet.size()) throw DataError(std::string(what) + ": symbol index outside the alphabet");
}

}  // namespace

double RealizationSchedule::epsilon(std::size_t round) const { return std::ldexp(epsilon0, -static_cast<int>(round)); }

std::uint64_t RealizationSchedule::denominator(std::size_t round) const { return denominator0 << round; }

void RealizationSchedule::validate() const {
    if (rounds == 0) throw PreconditionError("schedule needs at least one round");
    if (!(epsilon0 > 0.0 && epsilon0 <= 1.0)) throw PreconditionError("schedule epsilon0 must lie in (0, 1]");
    if (denominator0 == 0) throw PreconditionError("schedule denominator0 must be positive");
    if (sweeps == 0) throw PreconditionError("schedule needs at least one sweep per round");
    if (rounds > 40 || (denominator0 >> (63 - (rounds - 1))) != 0)
        throw PreconditionError("schedule denominators overflow");
}

SymbolSequence::SymbolSequence(Alphabet alphabet, std::vector<SymbolIndex> symbols, GeneratorMeta meta)
    : alphabet_(std::move(alphabet)), symbols_(std::move(symbols)), meta_(std::move(meta)) {
    if (symbols_.empty()) throw DataError("symbol sequence is empty");
    validate_symbols(alphabet_, symbols_, "symbol sequence");
}

SamplingNet::SamplingNet(Alphabet alphabet, std::vector<NetItem> items, GeneratorMeta meta)
    : alphabet_(std::move(alphabet)), items_(std::move(items)), meta_(std::move(meta)) {
    if (items_.empty()) throw DataError("sampling net has no items");
    std::size_t previous = 0;
    for (std::size_t i = 0; i < items_.size(); ++i) {
        const auto& t = items_[i].tuple;
        if (t.empty()) throw DataError("sampling net item " + std::to_string(i + 1) + " is empty");
        if (t.size() < previous)
            throw DataError("sampling net tuple lengths must be nondecreasing (item " + std::to_string(i + 1) + ")");
        previous = t.size();
        validate_symbols(alphabet_, t, "sampling net");
    }
}

RationalMeasure rationalize(const Measure& p, std::uint64_t denominator) {
    if (denominator == 0) throw PreconditionError("rationalize: denominator must be positive");
    const auto w = p.weights();
    const std::size_t n = w.size();
    const auto d = static_cast<double>(denominator);
    std::vector<std::uint64_t> num(n);
    std::vector<double> remainder(n);
    std::uint64_t assigned = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double scaled = w[i] * d;
        num[i] = static_cast<std::uint64_t>(std::floor(scaled));
        remainder[i] = scaled - static_cast<double>(num[i]);
        assigned += num[i];
    }
    // Rounding in w * d can push the floors one unit over.
    while (assigned > denominator) {
        const auto it = std::max_element(num.begin(), num.end());
        --*it;
        remainder[static_cast<std::size_t>(it - num.begin())] += 1.0;
        --assigned;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t k = 0; assigned < denominator; k = (k + 1) % n) {
        ++num[order[k]];
        ++assigned;
    }
    return RationalMeasure(p.alphabet(), std::move(num));
}

std::vector<SymbolIndex> tuple_from_rational(const RationalMeasure& q) {
    // Weighted round-robin: position k goes to the symbol furthest behind
    // its quota k * n_x / D, lower index first. Equal numerators give plain
    // cycling.
    __extension__ using Wide = __int128;
    const auto num = q.numerators();
    const std::uint64_t d = q.denominator();
    std::vector<std::uint64_t> used(num.size(), 0);
    std::vector<SymbolIndex> out;
    out.reserve(d);
    for (std::uint64_t k = 0; k < d; ++k) {
        std::size_t pick = num.size();
        Wide best = 0;
        for (std::size_t x = 0; x < num.size(); ++x) {
            if (used[x] == num[x]) continue;
            const Wide lag = static_cast<Wide>(num[x]) * k - static_cast<Wide>(d) * used[x];
            if (pick == num.size() || lag > best) {
                pick = x;
                best = lag;
            }
        }
        ++used[pick];
        out.push_back(static_cast<SymbolIndex>(pick));
    }
    return out;
}

std::vector<Measure> round_targets(const Regularity& regularity, const RealizationSchedule& schedule,
                                   std::size_t round) {
    return barycentric_mesh(regularity, schedule.epsilon(round));
}

SamplingNet net_realize(const Regularity& regularity, const RealizationSchedule& schedule,
                        std::optional<std::uint64_t> shuffle_seed) {
    schedule.validate();
    std::mt19937_64 rng(shuffle_seed.value_or(0));
    std::vector<NetItem> items;
    for (std::size_t r = 0; r < schedule.rounds; ++r) {
        const auto targets = round_targets(regularity, schedule, r);
        std::vector<std::vector<SymbolIndex>> tuples;
        tuples.reserve(targets.size());
        for (const auto& t : targets) tuples.push_back(tuple_from_rational(rationalize(t, schedule.denominator(r))));

        std::vector<std::size_t> order(targets.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        for (std::size_t s = 0; s < schedule.sweeps; ++s) {
            if (shuffle_seed)
                for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng, i)]);
            for (std::size_t j : order) items.push_back(NetItem{tuples[j], r, j});
        }
    }
    GeneratorMeta meta{"net_realize", shuffle_seed, schedule, std::nullopt};
    return SamplingNet(regularity.alphabet(), std::move(items), std::move(meta));
}

std::uint64_t steering_block_length(std::uint64_t n, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw PreconditionError("steering epsilon must lie in (0, 1)");
    // The slack absorbs rounding in (1 - epsilon) / epsilon.
    const double exact = static_cast<double>(n) * (1.0 - epsilon) / epsilon;
    return static_cast<std::uint64_t>(std::ceil(exact - 1e-9 * std::max(1.0, exact)));
}

namespace {

std::vector<Measure> path_targets(const Regularity& regularity, double epsilon) {
    // Waypoints joined by segments of mesh step epsilon, swept forward then
    // backward so the prefix trajectory traces the polyline only.
    const auto& pts = regularity.points();
    std::vector<Measure> forward;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const Regularity segment(regularity.alphabet(), {pts[i], pts[i + 1]}, true);
        auto mesh = barycentric_mesh(segment, epsilon);
        if (i > 0) mesh.erase(mesh.begin());
        forward.insert(forward.end(), mesh.begin(), mesh.end());
    }
    std::vector<Measure> out = forward;
    for (std::size_t i = forward.size() - 1; i-- > 1;) out.push_back(forward[i]);
    return out;
}

}  // namespace

SymbolSequence sequence_realize(const Regularity& regularity, std::uint64_t total_length, double epsilon,
                                SequenceOptions options) {
    if (total_length == 0) throw PreconditionError("sequence_realize: total length must be positive");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw PreconditionError("sequence_realize: epsilon must lie in (0, 1)");

    std::vector<Measure> targets;
    if (regularity.size() == 1) {
        targets = regularity.points();
    } else if (regularity.convex()) {
        targets = barycentric_mesh(regularity, epsilon);
    } else if (options.as_path) {
        targets = path_targets(regularity, epsilon);
    } else {
        throw PreconditionError(
            "sequence_realize: a finite set of " + std::to_string(regularity.size()) +
            " distinct measures is disconnected, but the prefix empirical measures of a single sequence move by "
            "at most 1/(n+1) per symbol, so their limit set is connected; realize it with a sampling net or "
            "declare the points a path");
    }

    const std::size_t alphabet_size = regularity.alphabet().size();
    std::vector<SymbolIndex> symbols;
    symbols.reserve(total_length);
    const auto initial = std::max<std::uint64_t>(alphabet_size, static_cast<std::uint64_t>(std::ceil(1.0 / epsilon)));
    std::size_t t = 0;
    while (symbols.size() < total_length) {
        const std::uint64_t n = symbols.size();
        std::uint64_t block = n == 0 ? initial : std::max<std::uint64_t>(1, steering_block_length(n, epsilon));
        block = std::min<std::uint64_t>(block, total_length - n);
        const auto tuple = tuple_from_rational(rationalize(targets[t], block));
        symbols.insert(symbols.end(), tuple.begin(), tuple.end());
        t = (t + 1) % targets.size();
    }
    GeneratorMeta meta{"sequence_realize", std::nullopt, std::nullopt, epsilon};
    return SymbolSequence(regularity.alphabet(), std::move(symbols), std::move(meta));
}

SymbolSequence iid_generate(const Measure& mu, std::uint64_t n, std::uint64_t seed) {
    if (n < 1) throw PreconditionError("iid_generate: n must be at least 1");
    const auto w = mu.weights();
    std::vector<double> cdf(w.size());
    std::partial_sum(w.begin(), w.end(), cdf.begin());
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i] > 0.0) last_positive = i;

    std::mt19937_64 rng(seed);
    std::vector<SymbolIndex> symbols(n);
    for (auto& s : symbols) {
        const double u = uniform01(rng);
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const auto idx = static_cast<std::size_t>(it - cdf.begin());
        s = static_cast<SymbolIndex>(std::min(idx, last_positive));
    }
    GeneratorMeta meta{"iid_generate", seed, std::nullopt, std::nullopt};
    return SymbolSequence(mu.alphabet(), std::move(symbols), std::move(meta));
}

}  // namespace regula
