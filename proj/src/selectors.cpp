#include "roulette/selectors.hpp"

#include <algorithm>
#include <cmath>

namespace roulette {

std::size_t LinearScanEngine::locate(double u) const
{
    table_->require_positive();
    const auto weights = table_->weights();
    const double r = u * table_->total();
    detail::PrefixAccumulator prefix;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (r < prefix.push(weights[i])) {
            return i;
        }
        if (weights[i] > 0.0) {
            last_positive = i;
        }
    }
    // r can only reach the end through rounding in total(); the final
    // non-empty sector absorbs it.
    return last_positive;
}

PrefixSumEngine::PrefixSumEngine(const WeightTable& table) : table_(&table) { rebuild(); }

void PrefixSumEngine::rebuild()
{
    const auto weights = table_->weights();
    prefix_.resize(weights.size());
    detail::PrefixAccumulator prefix;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        prefix_[i] = prefix.push(weights[i]);
        if (weights[i] > 0.0) {
            last_positive_ = i;
        }
    }
    version_ = table_->version();
}

AcceptanceEngine::AcceptanceEngine(const WeightTable& table, std::optional<double> bound, std::uint64_t attempt_cap)
    : table_(&table), bound_(bound), attempt_cap_(attempt_cap)
{
    if (bound_ && !(std::isfinite(*bound_) && *bound_ > 0.0)) {
        throw Error(Errc::InvalidBound, "acceptance bound must be finite and positive");
    }
    if (attempt_cap_ == 0) {
        throw Error(Errc::InvalidParameters, "attempt cap must be at least 1");
    }
}

HybridEngine::HybridEngine(const WeightTable& table, double heavy_fraction, std::uint64_t attempt_cap)
    : table_(&table), heavy_fraction_(heavy_fraction), attempt_cap_(attempt_cap)
{
    if (!(heavy_fraction > 0.0 && heavy_fraction < 1.0)) {
        throw Error(Errc::InvalidParameters, "heavy fraction must lie in (0, 1)");
    }
    if (attempt_cap_ == 0) {
        throw Error(Errc::InvalidParameters, "attempt cap must be at least 1");
    }
    table.require_positive();
    rebuild();
}

void HybridEngine::rebuild()
{
    const auto weights = table_->weights();
    const double threshold = heavy_fraction_ * table_->total();

    heavy_ids_.clear();
    residual_ids_.clear();
    residual_weights_.clear();
    residual_sum_.reset();
    residual_max_ = 0.0;
    residual_positive_ = 0;
    slot_.assign(weights.size(), 0);

    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double w = weights[i];
        if (w > threshold) {
            slot_[i] = -static_cast<std::ptrdiff_t>(heavy_ids_.size()) - 1;
            heavy_ids_.push_back(i);
        } else {
            slot_[i] = static_cast<std::ptrdiff_t>(residual_ids_.size());
            residual_ids_.push_back(i);
            residual_weights_.push_back(w);
            residual_sum_.add(w);
            residual_max_ = std::max(residual_max_, w);
            residual_positive_ += w > 0.0 ? 1 : 0;
        }
    }
    rebuild_heavy_prefix();
    partition_total_ = table_->total();
    version_ = table_->version();
}

void HybridEngine::rebuild_heavy_prefix()
{
    heavy_prefix_.resize(heavy_ids_.size());
    detail::PrefixAccumulator prefix;
    for (std::size_t k = 0; k < heavy_ids_.size(); ++k) {
        heavy_prefix_[k] = prefix.push(table_->weight(heavy_ids_[k]));
    }
    heavy_total_ = heavy_prefix_.empty() ? 0.0 : heavy_prefix_.back();
}

double HybridEngine::heavy_probability() const noexcept
{
    const double residual_total = residual_positive_ == 0 ? 0.0 : std::max(0.0, residual_sum_.value());
    const double total = heavy_total_ + residual_total;
    return total > 0.0 ? heavy_total_ / total : 0.0;
}

double HybridEngine::expected_attempts() const noexcept
{
    const double p_heavy = heavy_probability();
    if (residual_positive_ == 0) {
        return 1.0;
    }
    const double residual_tau =
        residual_max_ * static_cast<double>(residual_weights_.size()) / residual_sum_.value();
    return p_heavy + (1.0 - p_heavy) * residual_tau;
}

double HybridEngine::rejection_probability() const noexcept
{
    if (residual_positive_ == 0) {
        return 0.0;
    }
    return 1.0 - residual_sum_.value() / (static_cast<double>(residual_weights_.size()) * residual_max_);
}

Selection HybridEngine::select(RandomSource& rng) const
{
    if (!is_current()) {
        throw Error(Errc::StaleEngine, "table changed outside the hybrid engine");
    }
    table_->require_positive();
    if (!heavy_ids_.empty()) {
        const double residual_total = residual_positive_ == 0 ? 0.0 : std::max(0.0, residual_sum_.value());
        const double r = rng.unit() * (heavy_total_ + residual_total);
        if (r < heavy_total_ || residual_positive_ == 0) {
            const auto it = std::upper_bound(heavy_prefix_.begin(), heavy_prefix_.end(), r);
            std::size_t pick = it == heavy_prefix_.end() ? heavy_ids_.size() - 1
                                                         : static_cast<std::size_t>(it - heavy_prefix_.begin());
            // Rounding fallback: walk back to a heavy entry that still has mass.
            while (pick > 0 && table_->weight(heavy_ids_[pick]) == 0.0) {
                --pick;
            }
            return {heavy_ids_[pick], 1};
        }
    }
    Selection s =
        detail::accept_loop<detail::RatioCheck::none>(residual_weights_, residual_max_, attempt_cap_, rng);
    s.index = residual_ids_[s.index];
    return s;
}

void HybridEngine::check_owner(const WeightTable& table) const
{
    if (&table != table_) {
        throw Error(Errc::InvalidParameters, "hybrid engine was built over a different table");
    }
    if (!is_current()) {
        throw Error(Errc::StaleEngine, "table changed outside the hybrid engine");
    }
}

void HybridEngine::place(std::size_t index, double value)
{
    const std::ptrdiff_t slot = slot_[index];
    if (slot < 0) {
        rebuild_heavy_prefix();
    } else {
        const auto pos = static_cast<std::size_t>(slot);
        const double old = residual_weights_[pos];
        residual_weights_[pos] = value;
        residual_sum_.add(-old);
        residual_sum_.add(value);
        if (old > 0.0 && value == 0.0) {
            --residual_positive_;
        } else if (old == 0.0 && value > 0.0) {
            ++residual_positive_;
        }
        residual_max_ = std::max(residual_max_, value);
    }
    version_ = table_->version();
    const double total = table_->total();
    const bool promoted = slot >= 0 && value > heavy_fraction_ * total;
    if (promoted || total >= 2.0 * partition_total_) {
        rebuild();
    }
}

void HybridEngine::set_weight(WeightTable& table, std::size_t index, double value)
{
    check_owner(table);
    table.set_weight(index, value);
    place(index, value);
}

void HybridEngine::append(WeightTable& table, double value)
{
    check_owner(table);
    table.append(value);
    const std::size_t index = table.size() - 1;
    slot_.push_back(static_cast<std::ptrdiff_t>(residual_ids_.size()));
    residual_ids_.push_back(index);
    residual_weights_.push_back(0.0);
    place(index, value);
}

} // namespace roulette
