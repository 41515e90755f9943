#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "oracle.hpp"
#include "regula/empirics.hpp"
#include "regula/error.hpp"
#include "regula/realization.hpp"

using namespace regula;
using namespace testing_support;

namespace {

std::vector<std::uint64_t> nums(const RationalMeasure& q) { return {q.numerators().begin(), q.numerators().end()}; }

std::string spell(const Alphabet& x, const std::vector<SymbolIndex>& t) {
    std::string s;
    for (auto i : t) s += x.symbol(i);
    return s;
}

}  // namespace

TEST_CASE("rationalize examples") {
    const Alphabet x = ab();
    CHECK(nums(rationalize(m(x, {0.5, 0.5}), 2)) == std::vector<std::uint64_t>{1, 1});
    CHECK(nums(rationalize(m(x, {1.0 / 3, 2.0 / 3}), 3)) == std::vector<std::uint64_t>{1, 2});
    const RationalMeasure q = rationalize(m(x, {0.7, 0.3}), 4);
    CHECK(nums(q) == std::vector<std::uint64_t>{3, 1});
    CHECK(q.denominator() == 4);
    CHECK(tv_distance(m(x, {0.7, 0.3}), q.to_measure()) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK_THROWS_AS(rationalize(m(x, {0.7, 0.3}), 0), PreconditionError);
}

TEST_CASE("rationalize ties go to the lower index") {
    const Alphabet x = abc();
    CHECK(nums(rationalize(Measure::uniform(x), 2)) == std::vector<std::uint64_t>{1, 1, 0});
    CHECK(nums(rationalize(Measure::uniform(x), 4)) == std::vector<std::uint64_t>{2, 1, 1});
}

TEST_CASE("rationalize meets the error bound and the brute-force optimum") {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<std::uint64_t> dd(1, 200);
    for (std::size_t n = 1; n <= 5; ++n) {
        std::vector<std::string> names;
        for (std::size_t i = 0; i < n; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
        const Alphabet x(names);
        for (int k = 0; k < 200; ++k) {
            const auto w = oracle::random_simplex_point(n, rng);
            const Measure p = m(x, w);
            const std::uint64_t D = dd(rng);
            const RationalMeasure q = rationalize(p, D);
            std::uint64_t total = 0;
            for (auto v : q.numerators()) total += v;
            CHECK(total == D);
            CHECK(tv_distance(p, q.to_measure()) <= static_cast<double>(n) / (2.0 * D) + 1e-12);
            if (n <= 3 && D <= 12)
                CHECK(2.0 * tv_distance(p, q.to_measure()) <= oracle::best_rational_l1(vec(p.weights()), D) + 1e-12);
        }
    }
}

TEST_CASE("tuple_from_rational examples") {
    const Alphabet x = ab();
    CHECK(spell(x, tuple_from_rational(RationalMeasure(x, {1, 1}))) == "ab");
    CHECK(spell(x, tuple_from_rational(RationalMeasure(x, {3, 1}))) == "abaa");
    CHECK(spell(x, tuple_from_rational(RationalMeasure(x, {0, 2}))) == "bb");
}

TEST_CASE("tuple_from_rational round-trips exactly") {
    std::mt19937_64 rng(22);
    std::uniform_int_distribution<std::uint64_t> c(0, 9);
    const Alphabet x({"a", "b", "c", "d"});
    for (int k = 0; k < 300; ++k) {
        std::vector<std::uint64_t> n(4);
        for (auto& v : n) v = c(rng);
        if (n[0] + n[1] + n[2] + n[3] == 0) n[2] = 1;
        const RationalMeasure q(x, n);
        const auto t = tuple_from_rational(q);
        REQUIRE(t.size() == q.denominator());
        std::vector<std::uint64_t> counts(4, 0);
        for (auto s : t) ++counts[s];
        CHECK(counts == n);
        CHECK(tv_distance(empirical_measure(x, t), q.to_measure()) == 0.0);
    }
}

TEST_CASE("schedule ladders") {
    RealizationSchedule s;
    CHECK(s.epsilon(0) == 0.5);
    CHECK(s.epsilon(3) == 0.0625);
    CHECK(s.denominator(0) == 16);
    CHECK(s.denominator(3) == 128);
    s.rounds = 0;
    CHECK_THROWS_AS(s.validate(), PreconditionError);
}

TEST_CASE("net_realize on a singleton") {
    const Alphabet x = abc();
    const Measure q = m(x, {0.61, 0.27, 0.12});
    RealizationSchedule s;
    s.rounds = 3;
    const SamplingNet net = net_realize(Regularity::singleton(q), s);
    REQUIRE(net.size() == 3);
    for (const auto& item : net.items()) {
        CHECK(item.tuple.size() == s.denominator(item.round));
        CHECK(tv_distance(empirical_measure(x, item.tuple), q) <= 3.0 / (2.0 * s.denominator(item.round)) + 1e-12);
    }
    CHECK(net.meta().generator == "net_realize");
}

TEST_CASE("net_realize alternates between two Diracs") {
    const Alphabet x = ab();
    RealizationSchedule s;
    s.rounds = 6;
    const SamplingNet net = net_realize(Regularity(x, {Measure::dirac(x, 0), Measure::dirac(x, 1)}, false), s);
    REQUIRE(net.size() == 12);
    for (std::size_t i = 0; i < net.size(); ++i) {
        const auto& t = net.items()[i].tuple;
        CHECK(std::all_of(t.begin(), t.end(), [&](SymbolIndex v) { return v == i % 2; }));
    }
    s.rounds = 8;
    s.sweeps = 8;
    const SamplingNet longer = net_realize(Regularity(x, {Measure::dirac(x, 0), Measure::dirac(x, 1)}, false), s);
    const auto est = estimate_limit_set(net_trajectory(longer));
    CHECK(est.centers.size() == 2);
}

TEST_CASE("net_realize meshes a polytope at each round") {
    const Alphabet x = ab();
    RealizationSchedule s;
    s.rounds = 5;
    s.epsilon0 = 1.0;
    const SamplingNet net = net_realize(Regularity::simplex(x), s);
    std::vector<std::size_t> per_round(s.rounds, 0);
    for (const auto& item : net.items()) ++per_round[item.round];
    for (std::size_t r = 0; r < s.rounds; ++r) CHECK(per_round[r] == (std::size_t{1} << r) + 1);
}

TEST_CASE("net_realize items satisfy the per-round bound") {
    std::mt19937_64 rng(23);
    const Alphabet x = abc();
    std::vector<Measure> pts;
    for (int i = 0; i < 3; ++i) pts.push_back(m(x, oracle::random_simplex_point(3, rng)));
    const Regularity P(x, pts, true);
    RealizationSchedule s;
    s.rounds = 4;
    const SamplingNet net = net_realize(P, s);
    for (const auto& item : net.items()) {
        const auto targets = round_targets(P, s, item.round);
        CHECK(tv_distance(empirical_measure(x, item.tuple), targets.at(item.target)) <=
              3.0 / (2.0 * s.denominator(item.round)) + 1e-12);
    }
}

TEST_CASE("shuffled nets permute targets within a sweep") {
    const Alphabet x = abc();
    const Regularity P(x, {m(x, {0.6, 0.3, 0.1}), m(x, {0.1, 0.3, 0.6}), m(x, {0.3, 0.4, 0.3})}, false);
    RealizationSchedule s;
    s.rounds = 3;
    s.sweeps = 4;
    const SamplingNet a = net_realize(P, s, 1), b = net_realize(P, s, 1), c = net_realize(P, s, 2);
    REQUIRE(a.size() == c.size());
    bool same_ab = true, same_ac = true;
    for (std::size_t i = 0; i < a.size(); ++i) {
        same_ab = same_ab && a.items()[i].target == b.items()[i].target;
        same_ac = same_ac && a.items()[i].target == c.items()[i].target;
    }
    CHECK(same_ab);
    CHECK_FALSE(same_ac);
}

TEST_CASE("steering block length") {
    CHECK(steering_block_length(100, 0.1) == 900);
    CHECK(steering_block_length(10, 0.5) == 10);
    CHECK(steering_block_length(3, 0.25) == 9);
}

TEST_CASE("sequence_realize on a singleton stays near the target") {
    const Alphabet x = abc();
    const Measure mu = m(x, {0.5, 0.3, 0.2});
    const double eps = 0.05;
    const SymbolSequence seq = sequence_realize(Regularity::singleton(mu), 20000, eps);
    REQUIRE(seq.size() == 20000);
    const Trajectory traj = prefix_trajectory(seq, 1);
    for (std::size_t i = traj.size() / 2; i < traj.size(); ++i)
        CHECK(tv_distance(make_measure(x, traj[i]), mu) <= eps);
}

TEST_CASE("sequence_realize meets the steering bound at every block end") {
    const Alphabet x = abc();
    const double eps = 0.2;
    const Regularity P = Regularity::simplex(x);
    const auto targets = barycentric_mesh(P, eps);
    const SymbolSequence seq = sequence_realize(P, 400000, eps);
    const Trajectory t = prefix_trajectory(seq, 1);
    std::uint64_t n = std::max<std::uint64_t>(3, 5);
    std::size_t target = 1;
    std::size_t checked = 0;
    while (true) {
        const std::uint64_t m = steering_block_length(n, eps);
        if (n + m > seq.size()) break;
        n += m;
        CHECK(tv_distance(make_measure(x, t[n - 1]), targets[target]) <= eps + 3.0 / (2.0 * m) + 1e-12);
        target = (target + 1) % targets.size();
        ++checked;
    }
    CHECK(checked >= 3);
}

TEST_CASE("tuple prefixes track the rational measure") {
    std::mt19937_64 rng(25);
    std::uniform_int_distribution<std::uint64_t> c(0, 40);
    const Alphabet x({"a", "b", "c", "d"});
    for (int k = 0; k < 200; ++k) {
        std::vector<std::uint64_t> n(4);
        for (auto& v : n) v = c(rng);
        if (n[0] + n[1] + n[2] + n[3] == 0) n[0] = 1;
        const RationalMeasure q(x, n);
        const double D = static_cast<double>(q.denominator());
        std::vector<double> count(4, 0.0);
        const auto t = tuple_from_rational(q);
        for (std::size_t i = 0; i < t.size(); ++i) {
            count[t[i]] += 1.0;
            for (std::size_t s = 0; s < 4; ++s)
                CHECK(std::fabs(count[s] - static_cast<double>(i + 1) * static_cast<double>(n[s]) / D) < 2.0);
        }
    }
}

TEST_CASE("sequence_realize rejects disconnected targets") {
    const Alphabet x = ab();
    const Regularity two(x, {Measure::dirac(x, 0), Measure::dirac(x, 1)}, false);
    CHECK_THROWS_AS(sequence_realize(two, 1000, 0.1), PreconditionError);
    SequenceOptions path;
    path.as_path = true;
    CHECK_NOTHROW(sequence_realize(two, 1000, 0.1, path));
    CHECK_THROWS_AS(sequence_realize(Regularity::singleton(Measure::uniform(x)), 1000, 0.0), PreconditionError);
}

TEST_CASE("iid_generate examples") {
    const Alphabet x = ab();
    const SymbolSequence d = iid_generate(Measure::dirac(x, 0), 5, 99);
    CHECK(d.symbols() == std::vector<SymbolIndex>(5, 0));
    const SymbolSequence s = iid_generate(Measure::uniform(x), 100000, 42);
    std::vector<SymbolIndex> all(s.symbols());
    CHECK(tv_distance(empirical_measure(x, all), Measure::uniform(x)) <= 0.01);
    CHECK_THROWS_AS(iid_generate(Measure::uniform(x), 0, 1), PreconditionError);
    CHECK(s.meta().seed == 42u);
}

TEST_CASE("generators are deterministic") {
    const Alphabet x = abc();
    const Measure mu = m(x, {0.2, 0.5, 0.3});
    CHECK(iid_generate(mu, 5000, 7).symbols() == iid_generate(mu, 5000, 7).symbols());
    CHECK(iid_generate(mu, 5000, 7).symbols() != iid_generate(mu, 5000, 8).symbols());
    const SymbolSequence a = sequence_realize(Regularity::simplex(x), 5000, 0.2);
    const SymbolSequence b = sequence_realize(Regularity::simplex(x), 5000, 0.2);
    CHECK(a.symbols() == b.symbols());
}

TEST_CASE("prefix steps are bounded by 1/(n+1)") {
    std::mt19937_64 rng(24);
    const Alphabet x({"a", "b", "c", "d"});
    for (int k = 0; k < 20; ++k) {
        const SymbolSequence seq = iid_generate(m(x, oracle::random_simplex_point(4, rng)), 500, rng());
        const Trajectory t = prefix_trajectory(seq, 1);
        for (std::size_t i = 0; i + 1 < t.size(); ++i) {
            const double n = static_cast<double>(t.index(i));
            CHECK(oracle::tv_events(vec(t[i]), vec(t[i + 1])) <= 1.0 / (n + 1.0) + 1e-12);
        }
    }
}
