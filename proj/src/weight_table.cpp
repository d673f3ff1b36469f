#include "roulette/weight_table.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "roulette/error.hpp"

namespace roulette {

double compensated_total(std::span<const double> weights) noexcept
{
    CompensatedSum sum;
    for (double w : weights) {
        sum.add(w);
    }
    return sum.value();
}

void validate_weight(double value)
{
    if (!std::isfinite(value) || value < 0.0) {
        throw Error(Errc::InvalidWeight, "weight must be finite and non-negative, got " + std::to_string(value));
    }
}

WeightTable::WeightTable(std::span<const double> weights)
    : weights_(weights.begin(), weights.end())
{
    if (weights_.empty()) {
        throw Error(Errc::EmptyPopulation, "weight table needs at least one entry");
    }
    for (double w : weights_) {
        validate_weight(w);
        if (w > 0.0) {
            ++count_positive_;
        }
    }
    if (count_positive_ == 0) {
        throw Error(Errc::AllZero, "weight table needs at least one positive weight");
    }
    resum();
    rebuild_max();
}

void WeightTable::require_positive() const
{
    if (count_positive_ == 0) {
        throw Error(Errc::AllZero, "no individual has positive weight");
    }
}

void WeightTable::resum() noexcept
{
    running_.reset();
    for (double w : weights_) {
        running_.add(w);
    }
    total_ = count_positive_ == 0 ? 0.0 : running_.value();
    updates_since_resum_ = 0;
}

void WeightTable::adjust_total(double removed, double added) noexcept
{
    // Recompute from scratch once 4N incremental adjustments have piled up.
    if (++updates_since_resum_ > 4 * weights_.size()) {
        resum();
        return;
    }
    running_.add(-removed);
    running_.add(added);
    total_ = count_positive_ == 0 ? 0.0 : std::max(0.0, running_.value());
}

void WeightTable::set_weight(std::size_t index, double value)
{
    if (index >= weights_.size()) {
        throw Error(Errc::IndexOutOfRange,
                    "index " + std::to_string(index) + " outside table of size " + std::to_string(weights_.size()));
    }
    validate_weight(value);
    const double old = weights_[index];
    weights_[index] = value;
    if (old > 0.0 && value == 0.0) {
        --count_positive_;
    } else if (old == 0.0 && value > 0.0) {
        ++count_positive_;
    }
    if (value > max_bound_) {
        max_bound_ = value;
    }
    adjust_total(old, value);
    ++version_;
}

void WeightTable::append(double value)
{
    validate_weight(value);
    weights_.push_back(value);
    if (value > 0.0) {
        ++count_positive_;
    }
    if (value > max_bound_) {
        max_bound_ = value;
    }
    adjust_total(0.0, value);
    ++version_;
}

void WeightTable::rebuild_max() noexcept
{
    max_bound_ = *std::max_element(weights_.begin(), weights_.end());
}

std::vector<double> WeightTable::target_distribution() const
{
    require_positive();
    std::vector<double> p(weights_.size());
    std::transform(weights_.begin(), weights_.end(), p.begin(), [t = total_](double w) { return w / t; });
    return p;
}

} // namespace roulette
