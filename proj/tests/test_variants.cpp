#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "oracles.hpp"
#include "roulette/error.hpp"
#include "roulette/stats.hpp"
#include "roulette/variants.hpp"

using namespace roulette;

namespace {

Errc error_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected roulette::Error");
    return Errc::IoError;
}

std::vector<std::size_t> exhaust(const WeightTable& table, RandomSource& rng, MaxPolicy policy = MaxPolicy::stale)
{
    WithoutReplacementSampler sampler(table, policy);
    std::vector<std::size_t> order;
    while (sampler.remaining() > 0) {
        order.push_back(sampler.draw(rng).index);
    }
    return order;
}

} // namespace

TEST_CASE("without replacement leaves the caller's table alone")
{
    const WeightTable t{1, 2, 3, 4};
    WithoutReplacementSampler sampler(t);
    RandomSource rng(1);
    (void)sampler.draw(rng);
    CHECK(t.total() == 10.0);
    CHECK(sampler.remaining() == 3);
    CHECK(sampler.table().count_positive() == 3);
}

TEST_CASE("without replacement [1,1] always yields both indices")
{
    const WeightTable t{1, 1};
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        RandomSource rng(seed);
        auto order = exhaust(t, rng);
        std::sort(order.begin(), order.end());
        REQUIRE(order == std::vector<std::size_t>{0, 1});
    }
}

TEST_CASE("fifth draw on four individuals is Exhausted")
{
    const WeightTable t{1, 2, 3, 4};
    WithoutReplacementSampler sampler(t);
    RandomSource rng(3);
    for (int i = 0; i < 4; ++i) (void)sampler.draw(rng);
    CHECK(error_of([&] { sampler.draw(rng); }) == Errc::Exhausted);
}

TEST_CASE("zero-weight individuals are never drawn")
{
    const WeightTable t{0, 2, 0, 1};
    RandomSource rng(4);
    for (int run = 0; run < 500; ++run) {
        auto order = exhaust(t, rng);
        std::sort(order.begin(), order.end());
        REQUIRE(order == std::vector<std::size_t>{1, 3});
    }
}

TEST_CASE("property: exhaustion is a permutation for N <= 8")
{
    RandomSource gen(5);
    for (std::size_t n = 1; n <= 8; ++n) {
        std::vector<double> w(n);
        for (double& x : w) x = gen.open_unit() * (gen.unit() < 0.2 ? 100.0 : 1.0);
        const WeightTable t(w);
        for (std::uint64_t seed = 0; seed < 10'000; ++seed) {
            RandomSource rng(seed * 8 + n);
            auto order = exhaust(t, rng, seed % 2 ? MaxPolicy::stale : MaxPolicy::rebuild_on_max_removal);
            std::sort(order.begin(), order.end());
            std::vector<std::size_t> expected(n);
            std::iota(expected.begin(), expected.end(), std::size_t{0});
            REQUIRE(order == expected);
        }
    }
}

TEST_CASE("rebuild policy keeps the bound tight")
{
    const WeightTable t{1, 5, 2, 5, 3};
    WithoutReplacementSampler sampler(t, MaxPolicy::rebuild_on_max_removal);
    RandomSource rng(6);
    while (sampler.remaining() > 0) {
        (void)sampler.draw(rng);
        const auto w = sampler.table().weights();
        CHECK(sampler.acceptance_bound() == *std::max_element(w.begin(), w.end()));
    }
}

TEST_CASE("first draw follows the full-table distribution")
{
    const WeightTable t{1, 2, 3, 4};
    std::vector<double> f(4, 0.0);
    RandomSource rng(7);
    constexpr int trials = 1'000'000;
    for (int i = 0; i < trials; ++i) {
        WithoutReplacementSampler sampler(t);
        f[sampler.draw(rng).index] += 1.0 / trials;
    }
    CHECK(std::abs(f[0] - 0.1) <= 0.005);
    CHECK(std::abs(f[1] - 0.2) <= 0.005);
    CHECK(std::abs(f[2] - 0.3) <= 0.005);
    CHECK(std::abs(f[3] - 0.4) <= 0.005);
}

TEST_CASE("sequential order distribution matches brute-force enumeration")
{
    // Oracle: probability of every draw order as the product of renormalized weights.
    const std::vector<double> w{1, 2, 3, 4};
    CHECK(oracle::sequential_product(w, {3, 2, 1, 0}) + oracle::sequential_product(w, {3, 2, 0, 1}) ==
          doctest::Approx(0.2).epsilon(1e-12));

    for (std::size_t n : {3u, 4u, 5u}) {
        std::vector<double> weights(w.begin(), w.end());
        weights.resize(n, 2.5);
        const WeightTable t(weights);
        for (auto policy : {MaxPolicy::stale, MaxPolicy::rebuild_on_max_removal}) {
            std::map<std::vector<std::size_t>, std::uint64_t> counts;
            RandomSource rng(100 + n);
            constexpr std::uint64_t runs = 300'000;
            for (std::uint64_t r = 0; r < runs; ++r) {
                ++counts[exhaust(t, rng, policy)];
            }
            std::vector<std::size_t> perm(n);
            std::iota(perm.begin(), perm.end(), std::size_t{0});
            std::size_t outside = 0;
            do {
                const double p = oracle::sequential_product(weights, perm);
                const double observed = static_cast<double>(counts[perm]) / runs;
                const double se = std::sqrt(p * (1 - p) / runs);
                outside += std::abs(observed - p) > 3.0 * se ? 1 : 0;
            } while (std::next_permutation(perm.begin(), perm.end()));
            // 3-sigma bands: allow the odd excursion among up to 120 orders.
            CHECK(outside <= 3);
        }
    }
}

TEST_CASE("P(index 3 then index 2) over 1e5 exhaustions")
{
    const WeightTable t{1, 2, 3, 4};
    RandomSource rng(8);
    int hits = 0;
    for (int r = 0; r < 100'000; ++r) {
        const auto order = exhaust(t, rng);
        hits += order[0] == 3 && order[1] == 2 ? 1 : 0;
    }
    CHECK(std::abs(hits / 1e5 - 0.2) <= 0.005);
}

TEST_CASE("stale maximum costs attempts, not correctness")
{
    const WeightTable t{1, 2, 3, 40};
    AttemptStats stale;
    AttemptStats rebuild;
    RandomSource a(9);
    RandomSource b(10);
    for (int r = 0; r < 20'000; ++r) {
        WithoutReplacementSampler s1(t, MaxPolicy::stale);
        WithoutReplacementSampler s2(t, MaxPolicy::rebuild_on_max_removal);
        while (s1.remaining() > 0) stale.record(s1.draw(a));
        while (s2.remaining() > 0) rebuild.record(s2.draw(b));
    }
    CHECK(stale.mean_attempts() > rebuild.mean_attempts());
}

TEST_CASE("draw_bounded")
{
    SUBCASE("[1,1] with B = 2")
    {
        const WeightTable t{1, 1};
        RandomSource rng(11);
        AttemptStats s;
        std::vector<double> f(2, 0.0);
        for (int i = 0; i < 1'000'000; ++i) {
            const auto sel = draw_bounded(t, 2.0, rng);
            s.record(sel);
            f[sel.index] += 1e-6;
        }
        CHECK(std::abs(s.mean_attempts() - 2.0) <= 0.01);
        CHECK(std::abs(f[0] - 0.5) <= 0.005);
        CHECK(oracle::monte_carlo_attempts({1, 1}, 2.0, 200'000, 3) == doctest::Approx(2.0).epsilon(0.01));
    }
    SUBCASE("bound below a weight is reported lazily")
    {
        const WeightTable t{1, 2};
        RandomSource rng(12);
        CHECK(error_of([&] {
                  for (int i = 0; i < 1000; ++i) (void)draw_bounded(t, 1.5, rng);
              }) == Errc::InvalidBound);
        CHECK(error_of([&] { validate_bound(t, 1.5); }) == Errc::InvalidBound);
        CHECK_NOTHROW(validate_bound(t, 2.0));
    }
    SUBCASE("weight equal to the bound is always accepted")
    {
        const WeightTable t{3, 3, 3};
        RandomSource rng(13);
        for (int i = 0; i < 1000; ++i) REQUIRE(draw_bounded(t, 3.0, rng).attempts == 1);
    }
    SUBCASE("invalid bounds")
    {
        const WeightTable t{1};
        RandomSource rng(14);
        CHECK(error_of([&] { draw_bounded(t, 0.0, rng); }) == Errc::InvalidBound);
        CHECK(error_of([&] { draw_bounded(t, INFINITY, rng); }) == Errc::InvalidBound);
    }
}

TEST_CASE("cutoff selects proportionally to min(w, A)")
{
    const WeightTable t{1, 5, 10};
    const CutoffSampler sampler(t, 5.0);
    const auto clipped = sampler.clipped_distribution();
    CHECK(clipped[0] == doctest::Approx(1.0 / 11));
    CHECK(clipped[1] == doctest::Approx(5.0 / 11));
    CHECK(clipped[2] == doctest::Approx(5.0 / 11));
    CHECK(sampler.expected_attempts() == doctest::Approx(15.0 / 11));

    std::vector<double> f(3, 0.0);
    AttemptStats s;
    RandomSource rng(15);
    for (int i = 0; i < 1'000'000; ++i) {
        const auto sel = sampler.select(rng);
        s.record(sel);
        f[sel.index] += 1e-6;
    }
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(std::abs(f[i] - clipped[i]) <= 0.005);
    }
    // Independent rejection loop on the clipped weights.
    CHECK(s.mean_attempts() == doctest::Approx(oracle::monte_carlo_attempts({1, 5, 5}, 5.0, 1'000'000, 16))
                                   .epsilon(0.01));
}

TEST_CASE("cutoff edge cases")
{
    const WeightTable twin{10, 10};
    const CutoffSampler clip_all(twin, 1.0);
    RandomSource rng(17);
    for (int i = 0; i < 1000; ++i) REQUIRE(clip_all.select(rng).attempts == 1);

    // A above the maximum: same stream as plain acceptance with that bound.
    const WeightTable t{1, 2, 3};
    const CutoffSampler loose(t, 3.0);
    const AcceptanceEngine plain(t);
    RandomSource a(18);
    RandomSource b(18);
    for (int i = 0; i < 1000; ++i) {
        REQUIRE(loose.select(a).index == plain.select(b).index);
    }

    // A below the minimum weight: uniform.
    const auto uniform = CutoffSampler(t, 0.5).clipped_distribution();
    for (double p : uniform) CHECK(p == doctest::Approx(1.0 / 3));

    CHECK(error_of([&] { CutoffSampler(t, 0.0); }) == Errc::InvalidBound);
}

TEST_CASE("property: lowering the cut-off compresses p_max / p_min")
{
    RandomSource gen(19);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> w(2 + gen.index(30));
        for (double& x : w) x = 0.01 + gen.unit() * 10.0;
        const WeightTable t(w);
        double previous = INFINITY;
        for (double a : {20.0, 8.0, 4.0, 2.0, 1.0, 0.5, 0.1, 0.005}) {
            const auto p = CutoffSampler(t, a).clipped_distribution();
            const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
            const double ratio = *hi / *lo;
            CHECK(ratio <= previous * (1 + 1e-12));
            previous = ratio;
        }
    }
}
