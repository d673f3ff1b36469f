#pragma once

#include <cstddef>
#include <cstdint>

namespace roulette {

/// Outcome of one selection: the chosen index and how many candidates were
/// proposed before one was accepted (always 1 for search-based engines).
struct Selection {
    std::size_t index = 0;
    std::uint64_t attempts = 1;
};

/// Running counters over a stream of selections.
struct AttemptStats {
    std::uint64_t draws = 0;
    std::uint64_t attempts = 0;

    void record(const Selection& s) noexcept
    {
        ++draws;
        attempts += s.attempts;
    }

    void merge(const AttemptStats& other) noexcept
    {
        draws += other.draws;
        attempts += other.attempts;
    }

    [[nodiscard]] double mean_attempts() const noexcept
    {
        return draws == 0 ? 0.0 : static_cast<double>(attempts) / static_cast<double>(draws);
    }

    // Fraction of proposals that were rejected.
    [[nodiscard]] double rejection_rate() const noexcept
    {
        return attempts == 0 ? 0.0 : 1.0 - static_cast<double>(draws) / static_cast<double>(attempts);
    }
};

} // namespace roulette
