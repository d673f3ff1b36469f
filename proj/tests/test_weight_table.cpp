#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "oracles.hpp"
#include "roulette/error.hpp"
#include "roulette/random_source.hpp"
#include "roulette/weight_table.hpp"

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

} // namespace

TEST_CASE("build_table aggregates")
{
    const WeightTable t{1, 2, 3, 4};
    CHECK(t.size() == 4);
    CHECK(t.total() == 10.0);
    CHECK(t.max_bound() == 4.0);
    CHECK(t.count_positive() == 4);
    CHECK(t.mean() == 2.5);

    const WeightTable single{5};
    CHECK(single.total() == 5.0);
    CHECK(single.max_bound() == 5.0);

    const WeightTable sparse{0, 0, 1};
    CHECK(sparse.total() == 1.0);
    CHECK(sparse.max_bound() == 1.0);
    CHECK(sparse.count_positive() == 1);
}

TEST_CASE("build_table rejects invalid input")
{
    CHECK(error_of([] { WeightTable({1, -1}); }) == Errc::InvalidWeight);
    CHECK(error_of([] { WeightTable({1, std::numeric_limits<double>::quiet_NaN()}); }) == Errc::InvalidWeight);
    CHECK(error_of([] { WeightTable({std::numeric_limits<double>::infinity()}); }) == Errc::InvalidWeight);
    CHECK(error_of([] { WeightTable(std::vector<double>{}); }) == Errc::EmptyPopulation);
    CHECK(error_of([] { WeightTable({0, 0}); }) == Errc::AllZero);
}

TEST_CASE("set_weight updates aggregates and keeps a stale max")
{
    WeightTable t{1, 2, 3};
    t.set_weight(1, 10);
    CHECK(t.max_bound() == 10.0);
    CHECK(t.total() == 14.0);

    WeightTable u{1, 2, 3};
    const auto v0 = u.version();
    u.set_weight(2, 0);
    CHECK(u.max_bound() == 3.0);
    CHECK(u.total() == 3.0);
    CHECK(u.count_positive() == 2);
    CHECK(u.version() > v0);

    CHECK(error_of([&] { u.set_weight(3, 1.0); }) == Errc::IndexOutOfRange);
    CHECK(error_of([&] { u.set_weight(0, -0.5); }) == Errc::InvalidWeight);
}

TEST_CASE("emptying a table surfaces AllZero on use")
{
    WeightTable t{1};
    t.set_weight(0, 0);
    CHECK(t.count_positive() == 0);
    CHECK(t.total() == 0.0);
    CHECK(error_of([&] { t.require_positive(); }) == Errc::AllZero);
    CHECK(error_of([&] { (void)t.target_distribution(); }) == Errc::AllZero);
}

TEST_CASE("rebuild_max")
{
    WeightTable t{1, 2, 3};
    t.set_weight(2, 0);
    CHECK(t.max_bound() == 3.0);
    t.rebuild_max();
    CHECK(t.max_bound() == 2.0);

    WeightTable same{4, 4};
    same.rebuild_max();
    CHECK(same.max_bound() == 4.0);

    WeightTable p{0.1, 0.9, 0.5};
    p.set_weight(1, 0);
    p.rebuild_max();
    CHECK(p.max_bound() == 0.5);
}

TEST_CASE("target_distribution")
{
    const auto p = WeightTable{1, 2, 3, 4}.target_distribution();
    REQUIRE(p.size() == 4);
    CHECK(p[0] == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(p[2] == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(p[3] == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(WeightTable{7}.target_distribution() == std::vector<double>{1.0});
    CHECK(WeightTable{0, 1, 0}.target_distribution() == std::vector<double>{0.0, 1.0, 0.0});
}

TEST_CASE("property: random update sequences keep total, max bound and distribution sane")
{
    RandomSource rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.index(100);
        std::vector<double> w(n);
        for (double& x : w) x = rng.unit() * 100.0;
        w[rng.index(n)] = 1.0 + rng.unit();
        WeightTable t(w);
        // Enough updates to cross the 4N resummation point at least once.
        for (std::size_t step = 0; step < 10 * n; ++step) {
            const auto i = rng.index(n);
            const double u = rng.unit();
            const double value = u < 0.2 ? 0.0 : (u > 0.95 ? rng.unit() * 1e6 : rng.unit() * 100.0);
            t.set_weight(i, value);
            w[i] = value;
            for (std::size_t j = 0; j < n; ++j) {
                REQUIRE(t.max_bound() >= w[j]);
            }
        }
        if (t.count_positive() == 0) {
            continue;
        }
        const long double exact = oracle::wide_sum(w);
        double abs_sum = 0.0;
        for (double x : w) abs_sum += std::abs(x);
        const double eps = std::numeric_limits<double>::epsilon() / 2;
        CHECK(std::abs(static_cast<long double>(t.total()) - exact) <= 4.0L * eps * abs_sum);
        CHECK(t.total() == doctest::Approx(compensated_total(w)).epsilon(4 * eps));

        const auto p = t.target_distribution();
        double sum = 0.0;
        for (double x : p) {
            CHECK(x >= 0.0);
            sum += x;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("append grows the table")
{
    WeightTable t{2, 2, 2};
    const auto v0 = t.version();
    t.append(5);
    CHECK(t.size() == 4);
    CHECK(t.total() == 11.0);
    CHECK(t.max_bound() == 5.0);
    CHECK(t.count_positive() == 4);
    CHECK(t.version() > v0);
    t.append(0);
    CHECK(t.count_positive() == 4);
    CHECK(error_of([&] { t.append(-1); }) == Errc::InvalidWeight);
}
