#include "roulette/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "roulette/bench.hpp"
#include "roulette/error.hpp"
#include "roulette/selectors.hpp"
#include "roulette/stats.hpp"
#include "roulette/variants.hpp"

namespace roulette::verify {

namespace {

constexpr std::uint64_t kFrequencyDraws = 1'000'000;
constexpr double kFrequencyTv = 0.005;
constexpr std::size_t kRandomTables = 20;

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0)
{
    RandomSource mix(seed ^ (a * 0x9e3779b97f4a7c15ULL) ^ (b * 0xc2b2ae3d27d4eb4fULL));
    return mix.next();
}

std::string label(std::span<const double> weights)
{
    std::string out = "[";
    for (std::size_t i = 0; i < weights.size(); ++i) {
        out += (i ? "," : "") + bench::format_double(weights[i]);
    }
    return out + "]";
}

class Checks {
public:
    void within(std::string name, double observed, double expected, double tolerance)
    {
        list.push_back({std::move(name), std::abs(observed - expected) <= tolerance, observed, expected, tolerance});
    }
    void above(std::string name, double observed, double threshold)
    {
        list.push_back({std::move(name), observed > threshold, observed, threshold, 0.0});
    }
    void below(std::string name, double observed, double threshold)
    {
        list.push_back({std::move(name), observed < threshold, observed, threshold, 0.0});
    }
    void at_most(std::string name, double observed, double threshold)
    {
        list.push_back({std::move(name), observed <= threshold, observed, threshold, 0.0});
    }
    void at_least(std::string name, double observed, double threshold)
    {
        list.push_back({std::move(name), observed >= threshold, observed, threshold, 0.0});
    }

    // p_value and total-variation pair for one frequency report.
    void frequency(const std::string& prefix, const stats::FrequencyReport& report, double tv_limit)
    {
        above(prefix + " p_value", report.p_value, stats::kSignificance);
        below(prefix + " total_variation", report.total_variation, tv_limit);
    }

    // Largest |empirical - target| over all indices.
    void max_deviation(const std::string& name, std::span<const std::uint64_t> counts,
                       std::span<const double> target, double tolerance)
    {
        const double draws = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}));
        double worst = 0.0;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            worst = std::max(worst, std::abs(static_cast<double>(counts[i]) / draws - target[i]));
        }
        within(name, worst, 0.0, tolerance);
    }

    std::vector<Check> list;
};

std::vector<std::vector<double>> frequency_tables(std::uint64_t seed)
{
    std::vector<std::vector<double>> tables{{1, 2, 3, 4}, {0, 1, 0}, {9, 1}};
    RandomSource rng(derive_seed(seed, 0xf7));
    for (std::size_t k = 0; k < kRandomTables; ++k) {
        const std::size_t n = 2 + rng.index(63);
        std::vector<double> w(n);
        for (double& x : w) {
            const double u = rng.unit();
            // Mix in zeros and a few dominant entries so the hybrid heavy set is exercised.
            x = u < 0.1 ? 0.0 : (u > 0.95 ? 20.0 * rng.open_unit() : rng.open_unit());
        }
        if (std::all_of(w.begin(), w.end(), [](double x) { return x == 0.0; })) {
            w.front() = 1.0;
        }
        tables.push_back(std::move(w));
    }
    return tables;
}

template <Selector E>
void frequency_for(Checks& checks, const std::string& prefix, const E& engine, const WeightTable& table,
                   std::uint64_t seed)
{
    checks.frequency(prefix, stats::run_frequency_test(engine, table, kFrequencyDraws, seed), kFrequencyTv);
}

Report frequency_suite(std::uint64_t seed)
{
    Checks checks;
    const auto tables = frequency_tables(seed);
    for (std::size_t k = 0; k < tables.size(); ++k) {
        const WeightTable table(tables[k]);
        const std::string name = k < 3 ? label(tables[k]) : "random#" + std::to_string(k - 3) + "(N=" +
                                                                  std::to_string(tables[k].size()) + ")";
        frequency_for(checks, "linear " + name, LinearScanEngine(table), table, derive_seed(seed, k, 0));
        frequency_for(checks, "binary " + name, PrefixSumEngine(table), table, derive_seed(seed, k, 1));
        frequency_for(checks, "acceptance " + name, AcceptanceEngine(table), table, derive_seed(seed, k, 2));
        frequency_for(checks, "hybrid " + name, HybridEngine(table), table, derive_seed(seed, k, 3));
    }
    return {"frequency", std::move(checks.list)};
}

Report attempts_suite(std::uint64_t seed)
{
    Checks checks;
    {
        const auto table = bench::generate_weights(bench::DistributionSpec::uniform01(), 10'000, seed);
        const auto report = stats::run_attempt_test(AcceptanceEngine(table), 1'000'000, derive_seed(seed, 1));
        checks.within("uniform01 N=10000 mean_attempts", report.mean_attempts, 2.0, 0.05);
        checks.within("uniform01 N=10000 z_score vs w_max/<w>", report.z_score, 0.0, 4.0);
    }
    {
        const auto table = bench::generate_weights(bench::DistributionSpec::constant(), 1000, seed);
        const auto report = stats::run_attempt_test(AcceptanceEngine(table), 10'000, derive_seed(seed, 2));
        checks.within("constant N=1000 mean_attempts", report.mean_attempts, 1.0, 0.0);
        checks.within("constant N=1000 predicted_q", report.predicted_q, 0.0, 0.0);
    }
    {
        const WeightTable table{1, 3};
        const auto report = stats::run_attempt_test(AcceptanceEngine(table), 1'000'000, derive_seed(seed, 3));
        checks.within("[1,3] mean_attempts", report.mean_attempts, 1.5, 0.01);
        checks.within("[1,3] predicted_q", report.predicted_q, 1.0 / 3.0, 1e-12);
    }
    {
        // Raising A above w_max costs attempts but leaves the distribution alone.
        const WeightTable table{1, 2, 3, 4};
        const AcceptanceEngine tight(table);
        const AcceptanceEngine loose(table, 8.0);
        const auto tight_report = stats::run_attempt_test(tight, 1'000'000, derive_seed(seed, 4));
        const auto loose_report = stats::run_attempt_test(loose, 1'000'000, derive_seed(seed, 5));
        checks.within("[1,2,3,4] A=4 mean_attempts", tight_report.mean_attempts, 1.6, 0.01);
        checks.within("[1,2,3,4] A=8 mean_attempts", loose_report.mean_attempts, 3.2, 0.02);
        checks.above("[1,2,3,4] A=8 minus A=4 mean_attempts", loose_report.mean_attempts - tight_report.mean_attempts,
                     0.0);
        checks.frequency("[1,2,3,4] A=8", stats::run_frequency_test(loose, table, 1'000'000, derive_seed(seed, 6)),
                         kFrequencyTv);
    }
    return {"attempts", std::move(checks.list)};
}

// Probability of drawing `order` sequentially with renormalized weights.
double sequential_probability(std::span<const double> weights, std::span<const std::size_t> order)
{
    double remaining = std::accumulate(weights.begin(), weights.end(), 0.0);
    double p = 1.0;
    for (auto i : order) {
        p *= weights[i] / remaining;
        remaining -= weights[i];
    }
    return p;
}

struct OrderStats {
    std::map<std::vector<std::size_t>, std::uint64_t> counts;
    AttemptStats attempts;
};

OrderStats exhaust_many(const WeightTable& table, MaxPolicy policy, std::uint64_t runs, std::uint64_t seed)
{
    OrderStats out;
    RandomSource rng(seed);
    std::vector<std::size_t> order;
    for (std::uint64_t r = 0; r < runs; ++r) {
        WithoutReplacementSampler sampler(table, policy);
        order.clear();
        while (sampler.remaining() > 0) {
            const auto s = sampler.draw(rng);
            out.attempts.record(s);
            order.push_back(s.index);
        }
        ++out.counts[order];
    }
    return out;
}

stats::FrequencyReport order_fit(const OrderStats& orders, std::span<const double> weights)
{
    std::vector<std::size_t> perm(weights.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::vector<std::uint64_t> counts;
    std::vector<double> expected;
    do {
        const auto it = orders.counts.find(perm);
        counts.push_back(it == orders.counts.end() ? 0 : it->second);
        expected.push_back(sequential_probability(weights, perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return stats::evaluate_frequencies(counts, expected);
}

Report variants_suite(std::uint64_t seed)
{
    Checks checks;
    {
        const auto table = bench::generate_weights(bench::DistributionSpec::uniform01(), 10'000, seed);
        AttemptStats b1_stats;
        RandomSource b1_rng(derive_seed(seed, 10));
        for (int i = 0; i < 1'000'000; ++i) {
            b1_stats.record(draw_bounded(table, 1.0, b1_rng));
        }
        const double b1 = b1_stats.mean_attempts();
        checks.within("bounded B=1 uniform01 N=10000 mean_attempts", b1, 2.0, 0.05);

        AttemptStats b2_stats;
        const auto fit = stats::run_frequency_test(
            [&](RandomSource& rng) {
                const auto s = draw_bounded(table, 2.0, rng);
                b2_stats.record(s);
                return s.index;
            },
            table.target_distribution(), 1'000'000, derive_seed(seed, 11));
        const double ratio = b2_stats.mean_attempts() / b1;
        checks.within("bounded B=2 / B=1 mean_attempts ratio", ratio, 2.0, 0.1);
        checks.frequency("bounded B=2 uniform01 N=10000", fit, stats::total_variation_limit(table.size(), 1'000'000));
    }
    {
        const WeightTable table{1, 1};
        AttemptStats s2;
        const auto fit = stats::run_frequency_test(
            [&](RandomSource& rng) {
                const auto s = draw_bounded(table, 2.0, rng);
                s2.record(s);
                return s.index;
            },
            table.target_distribution(), 1'000'000, derive_seed(seed, 12));
        checks.within("bounded [1,1] B=2 mean_attempts", s2.mean_attempts(), 2.0, 0.01);
        checks.max_deviation("bounded [1,1] B=2 max frequency deviation", fit.counts, std::vector{0.5, 0.5}, 0.005);
    }
    {
        // Every exhaustion must be a permutation of the positive-weight indices.
        std::uint64_t bad = 0;
        RandomSource wrng(derive_seed(seed, 20));
        for (std::size_t n = 1; n <= 8; ++n) {
            std::vector<double> w(n);
            for (double& x : w) x = wrng.open_unit();
            const WeightTable table(w);
            RandomSource rng(derive_seed(seed, 21, n));
            for (int run = 0; run < 10'000; ++run) {
                WithoutReplacementSampler sampler(table);
                std::vector<bool> seen(n, false);
                std::size_t drawn = 0;
                while (sampler.remaining() > 0) {
                    const auto i = sampler.draw(rng).index;
                    bad += seen[i] ? 1 : 0;
                    seen[i] = true;
                    ++drawn;
                }
                bad += drawn == n ? 0 : 1;
            }
        }
        checks.within("without replacement N<=8 non-permutations", static_cast<double>(bad), 0.0, 0.0);
    }
    const std::vector<double> w4{1, 2, 3, 4};
    const WeightTable t4(w4);
    {
        std::vector<std::uint64_t> first(4, 0);
        RandomSource rng(derive_seed(seed, 30));
        for (int trial = 0; trial < 1'000'000; ++trial) {
            WithoutReplacementSampler sampler(t4);
            ++first[sampler.draw(rng).index];
        }
        checks.max_deviation("without replacement [1,2,3,4] first draw max deviation", first,
                             std::vector{0.1, 0.2, 0.3, 0.4}, 0.005);
    }
    {
        const auto stale = exhaust_many(t4, MaxPolicy::stale, 100'000, derive_seed(seed, 31));
        const auto rebuild = exhaust_many(t4, MaxPolicy::rebuild_on_max_removal, 100'000, derive_seed(seed, 32));
        std::uint64_t three_then_two = 0;
        for (const auto& [order, count] : stale.counts) {
            if (order[0] == 3 && order[1] == 2) three_then_two += count;
        }
        checks.within("without replacement [1,2,3,4] P(3 then 2)", static_cast<double>(three_then_two) / 1e5, 0.2,
                      0.005);
        checks.frequency("without replacement stale order distribution", order_fit(stale, w4),
                         stats::total_variation_limit(24, 100'000));
        checks.frequency("without replacement rebuild order distribution", order_fit(rebuild, w4),
                         stats::total_variation_limit(24, 100'000));
        checks.at_least("without replacement stale minus rebuild mean_attempts",
                        stale.attempts.mean_attempts() - rebuild.attempts.mean_attempts(), 0.0);
    }
    {
        const WeightTable table{1, 5, 10};
        const CutoffSampler sampler(table, 5.0);
        AttemptStats s;
        const auto fit = stats::run_frequency_test(
            [&](RandomSource& rng) {
                const auto sel = sampler.select(rng);
                s.record(sel);
                return sel.index;
            },
            sampler.clipped_distribution(), 1'000'000, derive_seed(seed, 40));
        checks.max_deviation("cutoff [1,5,10] A=5 max frequency deviation", fit.counts,
                             std::vector{1.0 / 11, 5.0 / 11, 5.0 / 11}, 0.005);
        checks.frequency("cutoff [1,5,10] A=5", fit, kFrequencyTv);
        checks.within("cutoff [1,5,10] A=5 mean_attempts", s.mean_attempts(), sampler.expected_attempts(), 0.01);
    }
    {
        const WeightTable table{10, 10};
        const CutoffSampler sampler(table, 1.0);
        AttemptStats s;
        const auto fit = stats::run_frequency_test(
            [&](RandomSource& rng) {
                const auto sel = sampler.select(rng);
                s.record(sel);
                return sel.index;
            },
            sampler.clipped_distribution(), 100'000, derive_seed(seed, 41));
        checks.within("cutoff [10,10] A=1 mean_attempts", s.mean_attempts(), 1.0, 0.0);
        checks.frequency("cutoff [10,10] A=1", fit, kFrequencyTv);
    }
    return {"variants", std::move(checks.list)};
}

Report hybrid_suite(std::uint64_t seed)
{
    Checks checks;
    {
        const auto table = bench::generate_weights(bench::DistributionSpec::two_level(1e4, 1), 10'000, seed);
        const HybridEngine hybrid(table);
        checks.within("two-level heavy set size", static_cast<double>(hybrid.heavy_indices().size()), 1.0, 0.0);
        checks.within("two-level p_heavy", hybrid.heavy_probability(), 1e4 / 19'999.0, 1e-12);

        // ~5000 proposals per draw: the slowest check in the suite.
        constexpr std::uint64_t plain_draws = kFrequencyDraws;
        AttemptStats plain_stats;
        const AcceptanceEngine plain(table);
        const auto plain_fit = stats::run_frequency_test(
            [&](RandomSource& rng) {
                const auto s = plain.select(rng);
                plain_stats.record(s);
                return s.index;
            },
            table.target_distribution(), plain_draws, derive_seed(seed, 50));
        checks.above("two-level plain acceptance mean_attempts", plain_stats.mean_attempts(), 1000.0);
        checks.frequency("two-level plain acceptance", plain_fit,
                         stats::total_variation_limit(table.size(), plain_draws));

        AttemptStats hybrid_stats;
        const auto hybrid_fit = stats::run_frequency_test(
            [&](RandomSource& rng) {
                const auto s = hybrid.select(rng);
                hybrid_stats.record(s);
                return s.index;
            },
            table.target_distribution(), kFrequencyDraws, derive_seed(seed, 51));
        checks.at_most("two-level hybrid mean_attempts", hybrid_stats.mean_attempts(), 2.1);
        checks.frequency("two-level hybrid", hybrid_fit, stats::total_variation_limit(table.size(), kFrequencyDraws));
    }
    {
        const WeightTable table{9, 1};
        const HybridEngine hybrid(table, 0.5);
        const auto fit = stats::run_frequency_test(hybrid, table, kFrequencyDraws, derive_seed(seed, 52));
        checks.max_deviation("[9,1] hybrid max frequency deviation", fit.counts, std::vector{0.9, 0.1}, 0.005);
        checks.frequency("[9,1] hybrid", fit, kFrequencyTv);
    }
    return {"hybrid", std::move(checks.list)};
}

} // namespace

Suite parse_suite(std::string_view name)
{
    if (name == "frequency") return Suite::frequency;
    if (name == "attempts") return Suite::attempts;
    if (name == "variants") return Suite::variants;
    if (name == "hybrid") return Suite::hybrid;
    throw Error(Errc::InvalidParameters, "unknown verify suite '" + std::string(name) + "'");
}

std::string_view to_string(Suite suite) noexcept
{
    switch (suite) {
    case Suite::frequency: return "frequency";
    case Suite::attempts: return "attempts";
    case Suite::variants: return "variants";
    case Suite::hybrid: return "hybrid";
    }
    return "unknown";
}

bool Report::passed() const noexcept
{
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

namespace {

nlohmann::ordered_json report_json(const Report& report)
{
    nlohmann::ordered_json out;
    out["suite"] = report.suite;
    out["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : report.checks) {
        out["checks"].push_back({{"name", c.name},
                                 {"pass", c.pass},
                                 {"observed", c.observed},
                                 {"expected", c.expected},
                                 {"tolerance", c.tolerance}});
    }
    return out;
}

} // namespace

std::string Report::to_json(int indent) const
{
    return report_json(*this).dump(indent);
}

std::string to_json(const std::vector<Report>& reports, int indent)
{
    auto out = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        out.push_back(report_json(r));
    }
    return out.dump(indent);
}

Report run_verify(Suite suite, std::uint64_t seed)
{
    switch (suite) {
    case Suite::frequency: return frequency_suite(seed);
    case Suite::attempts: return attempts_suite(seed);
    case Suite::variants: return variants_suite(seed);
    case Suite::hybrid: return hybrid_suite(seed);
    }
    throw Error(Errc::InvalidParameters, "unknown verify suite");
}

} // namespace roulette::verify
