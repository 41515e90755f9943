#pragma once
// Streams whose statistical regularity is prescribed.
//
// Sampling nets are indexed by the naturals. Item lambda is a fresh tuple
// (not a prefix extension of earlier items), so any closed set of measures,
// connected or not, is reachable as the limit set of the per-item empirical
// measures. A single sequence can only reach connected sets: its prefix
// empirical measures move by at most 1/(n+1) per symbol.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "regula/measure.hpp"

namespace regula {

/// Precision ladder for net_realize: round r (0-based) uses mesh step
/// epsilon0 * 2^-r and denominator denominator0 * 2^r, and sweeps the
/// round's targets `sweeps` times.
struct RealizationSchedule {
    std::size_t rounds = 8;
    double epsilon0 = 0.5;
    std::uint64_t denominator0 = 16;
    std::size_t sweeps = 1;

    double epsilon(std::size_t round) const;
    std::uint64_t denominator(std::size_t round) const;
    /// Throws PreconditionError on an invalid or overflowing schedule.
    void validate() const;
};

/// Provenance recorded with every generated stream so it can be replayed.
struct GeneratorMeta {
    std::string generator;
    std::optional<std::uint64_t> seed;
    std::optional<RealizationSchedule> schedule;
    std::optional<double> epsilon;
};

class SymbolSequence {
public:
    SymbolSequence(Alphabet alphabet, std::vector<SymbolIndex> symbols, GeneratorMeta meta = {});

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    const std::vector<SymbolIndex>& symbols() const noexcept { return symbols_; }
    std::size_t size() const noexcept { return symbols_.size(); }
    const GeneratorMeta& meta() const noexcept { return meta_; }

private:
    Alphabet alphabet_;
    std::vector<SymbolIndex> symbols_;
    GeneratorMeta meta_;
};

struct NetItem {
    std::vector<SymbolIndex> tuple;
    /// Schedule round and target index within that round's target list.
    std::size_t round = 0;
    std::size_t target = 0;
};

/// Items are indexed lambda = 1, 2, ... in storage order; n_lambda is the
/// tuple length, which must be nondecreasing.
class SamplingNet {
public:
    SamplingNet(Alphabet alphabet, std::vector<NetItem> items, GeneratorMeta meta = {});

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    const std::vector<NetItem>& items() const noexcept { return items_; }
    std::size_t size() const noexcept { return items_.size(); }
    const GeneratorMeta& meta() const noexcept { return meta_; }

private:
    Alphabet alphabet_;
    std::vector<NetItem> items_;
    GeneratorMeta meta_;
};

/// Nearest measure with the given denominator: largest-remainder rounding,
/// ties to the lower symbol index. tv(p, result) <= |X| / (2D).
RationalMeasure rationalize(const Measure& p, std::uint64_t denominator);

/// numerators[x] copies of each symbol, interleaved by weighted round-robin
/// so that every prefix of the tuple is close to q: (3,1)/4 -> a,b,a,a.
std::vector<SymbolIndex> tuple_from_rational(const RationalMeasure& q);

/// Targets of round r: P itself for a finite point set, the barycentric
/// mesh of step epsilon(r) for a polytope.
std::vector<Measure> round_targets(const Regularity& regularity, const RealizationSchedule& schedule,
                                   std::size_t round);

/// Net whose per-item empirical measures accumulate exactly on P. With a
/// seed, the visiting order of targets is shuffled within each sweep.
SamplingNet net_realize(const Regularity& regularity, const RealizationSchedule& schedule,
                        std::optional<std::uint64_t> shuffle_seed = std::nullopt);

/// Block length that steers a prefix of length n to within epsilon of any
/// target: ceil(n (1 - epsilon) / epsilon).
std::uint64_t steering_block_length(std::uint64_t n, double epsilon);

struct SequenceOptions {
    /// Treat a finite point set as waypoints of a path; the stream then
    /// sweeps the polyline through them back and forth.
    bool as_path = false;
};

/// Single sequence whose prefix empirical measures cycle through an
/// epsilon-net of P. Rejects finite sets of two or more points (unless
/// declared a path) with PreconditionError.
SymbolSequence sequence_realize(const Regularity& regularity, std::uint64_t total_length, double epsilon,
                                SequenceOptions options = {});

/// n independent draws from mu driven by a 64-bit Mersenne Twister seeded
/// with `seed`, sampled by inverse CDF on 53-bit uniforms.
SymbolSequence iid_generate(const Measure& mu, std::uint64_t n, std::uint64_t seed);

}  // namespace regula
