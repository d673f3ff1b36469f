#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace roulette {

/// Neumaier-compensated accumulator. value() is the corrected sum.
class CompensatedSum {
public:
    void add(double x) noexcept
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    void reset() noexcept { sum_ = comp_ = 0.0; }

    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Fitness values of a population together with the aggregates every engine
/// needs: the total, an upper bound on the maximum and the number of positive
/// entries.
///
/// max_bound() is exact after construction, after rebuild_max() and after any
/// increase. Decreasing the maximal weight leaves the old maximum in place as
/// a stale upper bound, which keeps acceptance sampling correct at the cost
/// of extra rejections.
///
/// version() increments on every mutation of the weights; engines that cache
/// derived data use it to detect that they are out of date.
class WeightTable {
public:
    explicit WeightTable(std::span<const double> weights);
    WeightTable(std::initializer_list<double> weights)
        : WeightTable(std::span<const double>(weights.begin(), weights.size()))
    {
    }

    [[nodiscard]] std::size_t size() const noexcept { return weights_.size(); }
    [[nodiscard]] double weight(std::size_t i) const noexcept { return weights_[i]; }
    [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
    [[nodiscard]] double total() const noexcept { return total_; }
    [[nodiscard]] double max_bound() const noexcept { return max_bound_; }
    [[nodiscard]] double mean() const noexcept { return total_ / static_cast<double>(weights_.size()); }
    [[nodiscard]] std::size_t count_positive() const noexcept { return count_positive_; }
    [[nodiscard]] std::uint64_t version() const noexcept { return version_; }

    /// Throws Error(AllZero) unless at least one weight is positive.
    void require_positive() const;

    void set_weight(std::size_t index, double value);

    /// Appends a new individual at index size().
    void append(double value);

    /// O(N) rescan that makes max_bound() exact again.
    void rebuild_max() noexcept;

    /// p_i = w_i / total.
    [[nodiscard]] std::vector<double> target_distribution() const;

private:
    void resum() noexcept;
    void adjust_total(double removed, double added) noexcept;

    std::vector<double> weights_;
    CompensatedSum running_;
    double total_ = 0.0;
    double max_bound_ = 0.0;
    std::size_t count_positive_ = 0;
    std::size_t updates_since_resum_ = 0;
    std::uint64_t version_ = 0;
};

/// Exact compensated sum of a weight sequence.
[[nodiscard]] double compensated_total(std::span<const double> weights) noexcept;

/// Throws Error(InvalidWeight) for negative, NaN or infinite values.
void validate_weight(double value);

} // namespace roulette
