#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "roulette/attempt_stats.hpp"
#include "roulette/error.hpp"
#include "roulette/random_source.hpp"
#include "roulette/weight_table.hpp"

namespace roulette {

inline constexpr std::uint64_t kDefaultAttemptCap = 10'000'000;
inline constexpr double kDefaultHeavyFraction = 0.1;

/// Anything that draws one index with probability w_i / total from the table it
/// was built over.
template <class E>
concept Selector = requires(const E& engine, RandomSource& rng) {
    { engine.select(rng) } -> std::same_as<Selection>;
    { engine.table() } -> std::same_as<const WeightTable&>;
    { engine.expected_attempts() } -> std::convertible_to<double>;
};

namespace detail {

/// Running prefix c_i shared by the linear and binary engines so that both
/// see bit-identical sector boundaries. Clamped to be non-decreasing.
class PrefixAccumulator {
public:
    double push(double w) noexcept
    {
        sum_.add(w);
        last_ = std::max(last_, sum_.value());
        return last_;
    }

private:
    CompensatedSum sum_;
    double last_ = 0.0;
};

enum class RatioCheck { none, reject_above_one };

/// Propose i uniformly, accept with probability weights[i] / bound, repeat.
/// A ratio above one is accepted unconditionally under RatioCheck::none, which
/// is what makes the cut-off variant select proportionally to min(w_i, bound).
template <RatioCheck Check>
Selection accept_loop(std::span<const double> weights, double bound, std::uint64_t attempt_cap, RandomSource& rng)
{
    const std::uint64_t n = weights.size();
    for (std::uint64_t attempt = 1; attempt <= attempt_cap; ++attempt) {
        const auto i = static_cast<std::size_t>(rng.index(n));
        const double ratio = weights[i] / bound;
        if constexpr (Check == RatioCheck::reject_above_one) {
            if (ratio > 1.0) {
                throw Error(Errc::InvalidBound, "weight " + std::to_string(weights[i]) + " at index " +
                                                    std::to_string(i) + " exceeds bound " + std::to_string(bound));
            }
        }
        if (rng.unit() < ratio) {
            return {i, attempt};
        }
    }
    throw Error(Errc::AttemptCapExceeded, "no acceptance after " + std::to_string(attempt_cap) + " proposals");
}

} // namespace detail

/// O(N) roulette wheel: walk the sectors until the threshold r = u * total
/// falls inside [c_{i-1}, c_i). Reads the table live, so it never goes stale.
class LinearScanEngine {
public:
    explicit LinearScanEngine(const WeightTable& table) noexcept : table_(&table) {}

    [[nodiscard]] const WeightTable& table() const noexcept { return *table_; }
    [[nodiscard]] double expected_attempts() const noexcept { return 1.0; }

    Selection select(RandomSource& rng) const { return {locate(rng.unit()), 1}; }

    /// Sector containing u * total, for u in [0, 1).
    [[nodiscard]] std::size_t locate(double u) const;

private:
    const WeightTable* table_;
};

/// O(log N) roulette wheel over cached prefix sums. The cache is tied to the
/// table version it was built from; selecting after the table changed throws
/// StaleEngine instead of silently paying for a rebuild.
class PrefixSumEngine {
public:
    explicit PrefixSumEngine(const WeightTable& table);

    [[nodiscard]] const WeightTable& table() const noexcept { return *table_; }
    [[nodiscard]] double expected_attempts() const noexcept { return 1.0; }
    [[nodiscard]] std::span<const double> prefix() const noexcept { return prefix_; }
    [[nodiscard]] bool is_current() const noexcept { return version_ == table_->version(); }

    Selection select(RandomSource& rng) const { return {locate(rng.unit()), 1}; }

    [[nodiscard]] std::size_t locate(double u) const
    {
        if (!is_current()) {
            throw Error(Errc::StaleEngine, "table changed since prefix sums were built");
        }
        table_->require_positive();
        const double r = u * table_->total();
        const auto it = std::upper_bound(prefix_.begin(), prefix_.end(), r);
        return it == prefix_.end() ? last_positive_ : static_cast<std::size_t>(it - prefix_.begin());
    }

    /// Recompute the prefix sums against the table's current weights.
    void rebuild();

private:
    const WeightTable* table_;
    std::vector<double> prefix_;
    std::size_t last_positive_ = 0;
    std::uint64_t version_ = 0;
};

/// Stochastic acceptance: pick an individual uniformly and keep it with
/// probability w_i / A, otherwise try again. With A equal to the maximum
/// weight the expected number of proposals is w_max / <w>.
///
/// Without an explicit bound the engine follows the table's max_bound(), so it
/// stays valid across set_weight() calls (a stale max only costs efficiency).
/// An explicit bound must not be below max_bound() when selecting.
class AcceptanceEngine {
public:
    explicit AcceptanceEngine(const WeightTable& table, std::optional<double> bound = std::nullopt,
                              std::uint64_t attempt_cap = kDefaultAttemptCap);

    [[nodiscard]] const WeightTable& table() const noexcept { return *table_; }
    [[nodiscard]] double acceptance_bound() const noexcept { return bound_ ? *bound_ : table_->max_bound(); }
    [[nodiscard]] std::uint64_t attempt_cap() const noexcept { return attempt_cap_; }

    /// A * N / total.
    [[nodiscard]] double expected_attempts() const noexcept
    {
        return acceptance_bound() * static_cast<double>(table_->size()) / table_->total();
    }
    /// Probability a single proposal is rejected: 1 - total / (N * A).
    [[nodiscard]] double rejection_probability() const noexcept { return 1.0 - 1.0 / expected_attempts(); }

    Selection select(RandomSource& rng) const
    {
        table_->require_positive();
        const double bound = acceptance_bound();
        if (bound < table_->max_bound()) {
            throw Error(Errc::InvalidBound, "acceptance bound " + std::to_string(bound) + " below max weight bound " +
                                                std::to_string(table_->max_bound()));
        }
        return detail::accept_loop<detail::RatioCheck::none>(table_->weights(), bound, attempt_cap_, rng);
    }

private:
    const WeightTable* table_;
    std::optional<double> bound_;
    std::uint64_t attempt_cap_;
};

/// Hybrid of exact search and stochastic acceptance for tables dominated by a
/// few large weights. Indices with w_i > heavy_fraction * total form the heavy
/// set and are chosen by a binary search over their cumulative weights; the rest go through
/// acceptance against the residual maximum only.
///
/// Mutate the table through set_weight()/append() on the engine to keep the
/// partition in sync; any other mutation makes the engine stale. The partition
/// is recomputed when the table total has doubled or a residual weight grows
/// past the heavy threshold, which keeps updates amortized O(1).
class HybridEngine {
public:
    explicit HybridEngine(const WeightTable& table, double heavy_fraction = kDefaultHeavyFraction,
                          std::uint64_t attempt_cap = kDefaultAttemptCap);

    [[nodiscard]] const WeightTable& table() const noexcept { return *table_; }
    [[nodiscard]] double heavy_fraction() const noexcept { return heavy_fraction_; }
    [[nodiscard]] std::span<const std::size_t> heavy_indices() const noexcept { return heavy_ids_; }
    [[nodiscard]] std::span<const std::size_t> residual_indices() const noexcept { return residual_ids_; }
    [[nodiscard]] double residual_max() const noexcept { return residual_max_; }
    [[nodiscard]] double heavy_probability() const noexcept;
    [[nodiscard]] bool is_current() const noexcept { return version_ == table_->version(); }

    /// p_heavy + (1 - p_heavy) * residual_max * N_residual / residual_total.
    [[nodiscard]] double expected_attempts() const noexcept;
    /// Rejection probability of a single residual proposal.
    [[nodiscard]] double rejection_probability() const noexcept;

    Selection select(RandomSource& rng) const;

    void set_weight(WeightTable& table, std::size_t index, double value);
    void append(WeightTable& table, double value);

    /// Recompute the heavy/residual partition from the current table.
    void rebuild();

private:
    void check_owner(const WeightTable& table) const;
    void rebuild_heavy_prefix();
    void place(std::size_t index, double value);

    const WeightTable* table_;
    double heavy_fraction_;
    std::uint64_t attempt_cap_;
    std::uint64_t version_ = 0;
    double partition_total_ = 0.0;

    std::vector<std::size_t> heavy_ids_;
    std::vector<double> heavy_prefix_;
    double heavy_total_ = 0.0;

    std::vector<std::size_t> residual_ids_;
    std::vector<double> residual_weights_;
    CompensatedSum residual_sum_;
    double residual_max_ = 0.0;
    std::size_t residual_positive_ = 0;

    // slot_[i] >= 0: position in residual arrays; < 0: heavy position -(slot + 1).
    std::vector<std::ptrdiff_t> slot_;
};

} // namespace roulette
