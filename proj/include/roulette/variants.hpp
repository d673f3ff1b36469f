#pragma once

#include <cstddef>
#include <cstdint>

#include "roulette/attempt_stats.hpp"
#include "roulette/random_source.hpp"
#include "roulette/selectors.hpp"
#include "roulette/weight_table.hpp"

namespace roulette {

enum class MaxPolicy {
    stale,                  ///< keep the old maximum as acceptance bound
    rebuild_on_max_removal, ///< rescan when the drawn individual held the maximum
};

/// Weighted sampling without replacement by stochastic acceptance: a drawn
/// individual has its weight zeroed in a private copy of the table, so it can
/// never be accepted again. The caller's table is left untouched.
class WithoutReplacementSampler {
public:
    explicit WithoutReplacementSampler(const WeightTable& table, MaxPolicy policy = MaxPolicy::stale,
                                       std::uint64_t attempt_cap = kDefaultAttemptCap);

    /// Throws Exhausted once every positive-weight individual has been drawn.
    Selection draw(RandomSource& rng);

    [[nodiscard]] std::size_t remaining() const noexcept { return table_.count_positive(); }
    [[nodiscard]] MaxPolicy policy() const noexcept { return policy_; }
    [[nodiscard]] double acceptance_bound() const noexcept { return table_.max_bound(); }
    [[nodiscard]] const WeightTable& table() const noexcept { return table_; }

private:
    WeightTable table_;
    MaxPolicy policy_;
    std::uint64_t attempt_cap_;
};

/// Acceptance with a known constant bound B >= max w_i instead of the tracked
/// maximum. Expected proposals per draw are B * N / total. A proposal whose
/// weight exceeds B raises InvalidBound when it is encountered.
Selection draw_bounded(const WeightTable& table, double bound, RandomSource& rng,
                       std::uint64_t attempt_cap = kDefaultAttemptCap);

/// Up-front O(N) check that every weight is <= bound.
void validate_bound(const WeightTable& table, double bound);

/// Acceptance against a constant A that may lie below the maximum weight. The
/// realized distribution is proportional to min(w_i, A).
class CutoffSampler {
public:
    CutoffSampler(const WeightTable& table, double cutoff, std::uint64_t attempt_cap = kDefaultAttemptCap);

    [[nodiscard]] const WeightTable& table() const noexcept { return *table_; }
    [[nodiscard]] double cutoff() const noexcept { return cutoff_; }

    Selection select(RandomSource& rng) const;

    /// A * N / sum_i min(w_i, A). O(N).
    [[nodiscard]] double expected_attempts() const;

    /// min(w_i, A) / sum_j min(w_j, A).
    [[nodiscard]] std::vector<double> clipped_distribution() const;

private:
    const WeightTable* table_;
    double cutoff_;
    std::uint64_t attempt_cap_;
};

} // namespace roulette
