#include <doctest.h>

#include <algorithm>
#include <sstream>
#include <vector>

#include "roulette/error.hpp"
#include "roulette/netgen.hpp"
#include "roulette/stats.hpp"

using namespace roulette;
using namespace roulette::netgen;

namespace {

// Degrees recounted from the edge list, independent of the degree table.
std::vector<double> recount(const GrowingNetwork& g)
{
    std::vector<double> d(g.node_count(), 0.0);
    for (const auto& e : g.edges()) {
        d[e.u] += 1;
        d[e.v] += 1;
    }
    return d;
}

GrowthParams params(std::size_t n, std::size_t m, EngineKind kind, std::size_t m0 = 3)
{
    GrowthParams p;
    p.seed_nodes = m0;
    p.edges_per_node = m;
    p.final_size = n;
    p.engine = kind;
    return p;
}

} // namespace

TEST_CASE("initial ring")
{
    const auto ring = GrowingNetwork::ring(3);
    CHECK(ring.node_count() == 3);
    CHECK(ring.edges().size() == 3);
    const auto p = ring.degrees().target_distribution();
    for (double x : p) CHECK(x == doctest::Approx(1.0 / 3));
    CHECK(degree_histogram(ring) == std::vector<std::pair<std::size_t, std::size_t>>{{2, 3}});
}

TEST_CASE("star histogram")
{
    const auto star = GrowingNetwork::from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    CHECK(degree_histogram(star) == std::vector<std::pair<std::size_t, std::size_t>>{{1, 4}, {4, 1}});
}

TEST_CASE("first attachment on a 3-ring is uniform")
{
    std::vector<std::uint64_t> counts(3, 0);
    for (std::uint64_t seed = 0; seed < 30'000; ++seed) {
        RandomSource rng(seed);
        const auto g = grow(params(4, 1, EngineKind::acceptance), rng);
        ++counts[g.edges().back().v];
    }
    const auto r = stats::evaluate_frequencies(counts, std::vector<double>(3, 1.0 / 3));
    CHECK(r.p_value > 1e-3);
}

TEST_CASE("degree bookkeeping after one attachment")
{
    RandomSource rng(5);
    const auto g = grow(params(4, 1, EngineKind::linear), rng);
    const std::size_t target = g.edges().back().v;
    const auto d = recount(g);
    CHECK(d[target] == 3);
    CHECK(d[3] == 1);
    CHECK(std::vector<double>(g.degrees().weights().begin(), g.degrees().weights().end()) == d);
    const auto p = g.degrees().target_distribution();
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(p[i] == doctest::Approx(d[i] / 8.0));
    }
    CHECK(p[target] == doctest::Approx(3.0 / 8));
    CHECK(p[3] == doctest::Approx(1.0 / 8));
}

TEST_CASE("degree-sum identity and distinct targets at every step")
{
    for (auto kind : kAllEngineKinds) {
        CAPTURE(to_string(kind));
        RandomSource rng(11);
        std::size_t steps = 0;
        const auto g = grow(params(600, 3, kind, 4), rng, [&](const GrowingNetwork& net) {
            ++steps;
            REQUIRE(net.degrees().total() == 2.0 * static_cast<double>(net.edges().size()));
            const auto& e = net.edges();
            const std::size_t v = net.node_count() - 1;
            std::vector<std::size_t> targets;
            for (std::size_t k = e.size() - 3; k < e.size(); ++k) {
                REQUIRE(e[k].u == v);
                targets.push_back(e[k].v);
            }
            std::sort(targets.begin(), targets.end());
            REQUIRE(std::adjacent_find(targets.begin(), targets.end()) == targets.end());
        });
        CHECK(steps == 596);
        CHECK(g.node_count() == 600);
        CHECK(g.edges().size() == 4 + 596 * 3);
        const auto degrees = recount(g);
        CHECK(std::vector<double>(g.degrees().weights().begin(), g.degrees().weights().end()) == degrees);
        CHECK(g.degrees().max_bound() == *std::max_element(degrees.begin(), degrees.end()));
    }
}

TEST_CASE("growth parameter checks")
{
    RandomSource rng(1);
    CHECK_THROWS_AS(grow(params(10, 0, EngineKind::linear), rng), Error);
    CHECK_THROWS_AS(grow(params(10, 4, EngineKind::linear), rng), Error);
    CHECK_THROWS_AS(grow(params(3, 1, EngineKind::linear), rng), Error);
    CHECK_THROWS_AS(grow(params(10, 2, EngineKind::linear, 2), rng), Error);
    CHECK_THROWS_AS(parse_engine_kind("alias"), Error);
}

TEST_CASE("heavy tail shows up at N = 10^4, m = 2")
{
    int big_hub = 0;
    int tail_in_band = 0;
    constexpr int seeds = 100;
    for (int seed = 0; seed < seeds; ++seed) {
        RandomSource rng(seed);
        const auto g = grow(params(10'000, 2, EngineKind::acceptance), rng);
        big_hub += g.degrees().max_bound() >= 50 ? 1 : 0;
        std::size_t tail = 0;
        for (const auto& [degree, count] : degree_histogram(g)) {
            if (degree > 20) tail += count;
        }
        const double fraction = static_cast<double>(tail) / 10'000.0;
        tail_in_band += fraction >= 0.01 && fraction <= 0.10 ? 1 : 0;
    }
    CHECK(big_hub >= 90);
    CHECK(tail_in_band >= 90);
}

TEST_CASE("linear and acceptance growth give the same degree statistics")
{
    // Pooled degree buckets over 50 seeds: 1..2, 3, 4, 5-6, 7-10, 11+ (m = 2).
    auto bucket = [](std::size_t d) -> std::size_t {
        if (d <= 2) return 0;
        if (d == 3) return 1;
        if (d == 4) return 2;
        if (d <= 6) return 3;
        if (d <= 10) return 4;
        return 5;
    };
    std::vector<std::uint64_t> lin(6, 0), acc(6, 0);
    for (int seed = 0; seed < 50; ++seed) {
        RandomSource r1(1000 + seed);
        RandomSource r2(5000 + seed);
        for (const auto& [d, c] : degree_histogram(grow(params(2000, 2, EngineKind::linear), r1))) lin[bucket(d)] += c;
        for (const auto& [d, c] : degree_histogram(grow(params(2000, 2, EngineKind::acceptance), r2))) acc[bucket(d)] += c;
    }
    // Two-sample chi-square homogeneity test.
    double chi = 0.0;
    const double n1 = 100'000.0, n2 = 100'000.0;
    for (std::size_t k = 0; k < 6; ++k) {
        const double pooled = static_cast<double>(lin[k] + acc[k]) / (n1 + n2);
        const double e1 = pooled * n1, e2 = pooled * n2;
        chi += (lin[k] - e1) * (lin[k] - e1) / e1 + (acc[k] - e2) * (acc[k] - e2) / e2;
    }
    CHECK(stats::chi_square_p_value(chi, 5) > 1e-3);
}

TEST_CASE("acceptance attempts rise as the network gets more heterogeneous")
{
    int rising = 0;
    for (int seed = 0; seed < 20; ++seed) {
        RandomSource rng(seed);
        const auto g = grow(params(10'000, 2, EngineKind::acceptance), rng);
        const auto& steps = g.step_stats();
        const std::size_t tenth = steps.size() / 10;
        AttemptStats early, late;
        for (std::size_t i = 0; i < tenth; ++i) early.merge(steps[i]);
        for (std::size_t i = steps.size() - tenth; i < steps.size(); ++i) late.merge(steps[i]);
        rising += late.mean_attempts() > early.mean_attempts() ? 1 : 0;
    }
    CHECK(rising > 10);
}

TEST_CASE("hybrid growth needs fewer attempts than plain acceptance")
{
    int wins = 0;
    for (int seed = 0; seed < 10; ++seed) {
        RandomSource r1(seed), r2(seed);
        const auto acc = grow(params(5'000, 2, EngineKind::acceptance), r1);
        const auto hyb = grow(params(5'000, 2, EngineKind::hybrid), r2);
        wins += hyb.total_stats().mean_attempts() <= acc.total_stats().mean_attempts() ? 1 : 0;
    }
    CHECK(wins >= 9);
}

TEST_CASE("edge list export")
{
    const auto ring = GrowingNetwork::ring(3);
    std::ostringstream out;
    write_edge_list(ring, out);
    CHECK(out.str() == "0 1\n1 2\n2 0\n");
}
