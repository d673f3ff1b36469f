#include "roulette/variants.hpp"

#include <cmath>
#include <string>

#include "roulette/error.hpp"

namespace roulette {

WithoutReplacementSampler::WithoutReplacementSampler(const WeightTable& table, MaxPolicy policy,
                                                     std::uint64_t attempt_cap)
    : table_(table), policy_(policy), attempt_cap_(attempt_cap)
{
}

Selection WithoutReplacementSampler::draw(RandomSource& rng)
{
    if (table_.count_positive() == 0) {
        throw Error(Errc::Exhausted, "every individual has already been drawn");
    }
    const Selection s = AcceptanceEngine(table_, std::nullopt, attempt_cap_).select(rng);
    const double removed = table_.weight(s.index);
    table_.set_weight(s.index, 0.0);
    if (policy_ == MaxPolicy::rebuild_on_max_removal && removed == table_.max_bound()) {
        table_.rebuild_max();
    }
    return s;
}

void validate_bound(const WeightTable& table, double bound)
{
    if (!(std::isfinite(bound) && bound > 0.0)) {
        throw Error(Errc::InvalidBound, "bound must be finite and positive");
    }
    if (table.max_bound() > bound) {
        // max_bound may be stale; only an actual weight above the bound is a violation.
        for (std::size_t i = 0; i < table.size(); ++i) {
            if (table.weight(i) > bound) {
                throw Error(Errc::InvalidBound, "weight at index " + std::to_string(i) + " exceeds bound " +
                                                    std::to_string(bound));
            }
        }
    }
}

Selection draw_bounded(const WeightTable& table, double bound, RandomSource& rng, std::uint64_t attempt_cap)
{
    if (!(std::isfinite(bound) && bound > 0.0)) {
        throw Error(Errc::InvalidBound, "bound must be finite and positive");
    }
    table.require_positive();
    return detail::accept_loop<detail::RatioCheck::reject_above_one>(table.weights(), bound, attempt_cap, rng);
}

CutoffSampler::CutoffSampler(const WeightTable& table, double cutoff, std::uint64_t attempt_cap)
    : table_(&table), cutoff_(cutoff), attempt_cap_(attempt_cap)
{
    if (!(std::isfinite(cutoff) && cutoff > 0.0)) {
        throw Error(Errc::InvalidBound, "cut-off must be finite and positive");
    }
    if (attempt_cap_ == 0) {
        throw Error(Errc::InvalidParameters, "attempt cap must be at least 1");
    }
}

Selection CutoffSampler::select(RandomSource& rng) const
{
    table_->require_positive();
    return detail::accept_loop<detail::RatioCheck::none>(table_->weights(), cutoff_, attempt_cap_, rng);
}

std::vector<double> CutoffSampler::clipped_distribution() const
{
    table_->require_positive();
    std::vector<double> clipped(table_->size());
    for (std::size_t i = 0; i < clipped.size(); ++i) {
        clipped[i] = std::min(table_->weight(i), cutoff_);
    }
    const double sum = compensated_total(clipped);
    for (double& p : clipped) {
        p /= sum;
    }
    return clipped;
}

double CutoffSampler::expected_attempts() const
{
    table_->require_positive();
    CompensatedSum sum;
    for (double w : table_->weights()) {
        sum.add(std::min(w, cutoff_));
    }
    return cutoff_ * static_cast<double>(table_->size()) / sum.value();
}

} // namespace roulette
