#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>

#include "regula/error.hpp"
#include "regula/measure.hpp"

namespace regula {

namespace {

// Algebra generated by a partition of the alphabet: all unions of blocks.
bool algebra_within(const std::vector<std::uint32_t>& blocks, const std::vector<bool>& agreed) {
    const std::size_t b = blocks.size();
    for (std::uint64_t pick = 1; pick < (std::uint64_t{1} << b); ++pick) {
        std::uint32_t set = 0;
        for (std::size_t i = 0; i < b; ++i)
            if ((pick >> i) & 1u) set |= blocks[i];
        if (!agreed[set]) return false;
    }
    return true;
}

bool is_union_of_blocks(std::uint32_t set, const std::vector<std::uint32_t>& blocks) {
    return std::all_of(blocks.begin(), blocks.end(), [set](std::uint32_t blk) {
        const std::uint32_t in = blk & set;
        return in == 0 || in == blk;
    });
}

std::vector<std::uint32_t> refine(const std::vector<std::uint32_t>& blocks, std::uint32_t set) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t blk : blocks) {
        if (blk & set) out.push_back(blk & set);
        if (blk & ~set) out.push_back(blk & ~set);
    }
    std::sort(out.begin(), out.end(), [](std::uint32_t a, std::uint32_t b) {
        return std::countr_zero(a) < std::countr_zero(b);
    });
    return out;
}

}  // namespace

StochasticStructure stochastic_subalgebra(const Regularity& regularity, double tol) {
    const std::size_t n = regularity.alphabet().size();
    if (n > kMaxEnumerableAlphabet)
        throw PreconditionError("stochastic_subalgebra enumerates 2^|X| events; |X| = " + std::to_string(n) +
                                " exceeds " + std::to_string(kMaxEnumerableAlphabet));
    const std::size_t count = std::size_t{1} << n;
    const std::uint32_t full = static_cast<std::uint32_t>(count - 1);

    // Extremes over P of p(A). For a convex regularity the vertices attain
    // them since p(A) is linear in p.
    std::vector<double> lo(count, std::numeric_limits<double>::infinity());
    std::vector<double> hi(count, -std::numeric_limits<double>::infinity());
    std::vector<double> value(count);
    for (const auto& p : regularity.points()) {
        const auto w = p.weights();
        value[0] = 0.0;
        for (std::size_t mask = 1; mask < count; ++mask)
            value[mask] = value[mask & (mask - 1)] + w[std::countr_zero(mask)];
        for (std::size_t mask = 0; mask < count; ++mask) {
            lo[mask] = std::min(lo[mask], value[mask]);
            hi[mask] = std::max(hi[mask], value[mask]);
        }
    }

    StochasticStructure out;
    std::vector<bool> agreed(count, false);
    for (std::size_t mask = 0; mask < count; ++mask) {
        if (hi[mask] - lo[mask] <= tol) {
            agreed[mask] = true;
            out.agreed_sets.push_back(static_cast<std::uint32_t>(mask));
            out.agreed_values.push_back(0.5 * (lo[mask] + hi[mask]));
        }
    }
    // The empty set and X are agreed by normalization even under rounding.
    agreed[0] = agreed[full] = true;
    if (out.agreed_sets.front() != 0) {
        out.agreed_sets.insert(out.agreed_sets.begin(), 0);
        out.agreed_values.insert(out.agreed_values.begin(), 0.0);
    }
    if (out.agreed_sets.back() != full) {
        out.agreed_sets.push_back(full);
        out.agreed_values.push_back(1.0);
    }

    // Grow an algebra inside the agreed events by partition refinement.
    std::vector<std::uint32_t> blocks{full};
    for (std::uint32_t set : out.agreed_sets) {
        if (is_union_of_blocks(set, blocks)) continue;
        auto candidate = refine(blocks, set);
        if (algebra_within(candidate, agreed)) blocks = std::move(candidate);
    }
    out.atoms = blocks;
    std::sort(out.atoms.begin(), out.atoms.end());
    for (std::uint32_t atom : out.atoms) out.atom_values.push_back(0.5 * (lo[atom] + hi[atom]));

    const std::size_t algebra_size = std::size_t{1} << out.atoms.size();
    out.agreed_sets_form_algebra = algebra_size == out.agreed_sets.size();
    out.stochastic = out.agreed_sets.size() > 2;
    return out;
}

}  // namespace regula
