#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "roulette/error.hpp"
#include "roulette/random_source.hpp"
#include "roulette/selectors.hpp"
#include "roulette/weight_table.hpp"

namespace roulette::stats {

/// Default rejection level for goodness-of-fit checks.
inline constexpr double kSignificance = 1e-3;
/// Buckets with fewer expected hits than this are pooled.
inline constexpr double kMinExpectedCount = 5.0;

struct FrequencyReport {
    std::vector<std::uint64_t> counts;
    std::uint64_t total_draws = 0;
    double chi_square = 0.0;
    int degrees_of_freedom = 0;
    double p_value = 1.0;
    double total_variation = 0.0;

    /// p_value > alpha and total_variation < tv_limit.
    [[nodiscard]] bool passes(double alpha, double tv_limit) const noexcept
    {
        return p_value > alpha && total_variation < tv_limit;
    }
};

struct AttemptReport {
    std::uint64_t draws = 0;
    double mean_attempts = 0.0;
    double std_error = 0.0;
    double predicted_tau = 0.0;
    double predicted_q = 0.0;
    double z_score = 0.0;
};

/// Upper-tail probability of the chi-square distribution with `dof` degrees of
/// freedom. Throws InvalidDof for dof < 1.
double chi_square_p_value(double statistic, int dof);

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
double regularized_gamma_q(double a, double x);

/// Default total-variation allowance: 5 * sqrt(N / draws).
double total_variation_limit(std::size_t categories, std::uint64_t draws) noexcept;

/// Chi-square goodness of fit of observed counts against probabilities. Cells
/// expecting fewer than five hits are pooled into one bucket (folded into the
/// smallest regular bucket if the pool itself is still under five). Any hit on
/// a zero-probability cell gives chi_square = inf and p_value = 0.
FrequencyReport evaluate_frequencies(std::span<const std::uint64_t> counts, std::span<const double> expected);

/// Draw `draws` times from `sample` (a callable RandomSource& -> index) seeded
/// with `seed`, and compare against `expected`.
template <class Sample>
FrequencyReport run_frequency_test(Sample&& sample, std::span<const double> expected, std::uint64_t draws,
                                   std::uint64_t seed)
{
    if (draws < 10 * expected.size()) {
        throw Error(Errc::InsufficientDraws,
                    "need at least " + std::to_string(10 * expected.size()) + " draws, got " + std::to_string(draws));
    }
    std::vector<std::uint64_t> counts(expected.size(), 0);
    RandomSource rng(seed);
    for (std::uint64_t d = 0; d < draws; ++d) {
        ++counts[sample(rng)];
    }
    return evaluate_frequencies(counts, expected);
}

template <Selector E>
FrequencyReport run_frequency_test(const E& engine, const WeightTable& table, std::uint64_t draws,
                                   std::uint64_t seed)
{
    const auto expected = table.target_distribution();
    return run_frequency_test([&engine](RandomSource& rng) { return engine.select(rng).index; }, expected, draws,
                              seed);
}

/// Summarize a sample of per-draw attempt counts against a predicted mean.
AttemptReport summarize_attempts(std::span<const std::uint64_t> attempts, double predicted_tau,
                                 double predicted_q);

template <class E>
concept AcceptanceLike = Selector<E> && requires(const E& engine) {
    { engine.rejection_probability() } -> std::convertible_to<double>;
};

/// Mean proposals per draw against the engine's own prediction
/// (A * N / total for plain acceptance).
template <AcceptanceLike E>
AttemptReport run_attempt_test(const E& engine, std::uint64_t draws, std::uint64_t seed)
{
    if (draws < 10'000) {
        throw Error(Errc::InsufficientDraws, "attempt test needs at least 10^4 draws");
    }
    std::vector<std::uint64_t> attempts(draws);
    RandomSource rng(seed);
    for (auto& a : attempts) {
        a = engine.select(rng).attempts;
    }
    return summarize_attempts(attempts, engine.expected_attempts(), engine.rejection_probability());
}

} // namespace roulette::stats
