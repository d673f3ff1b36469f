#include "roulette/stats.hpp"

#include <algorithm>
#include <limits>

namespace roulette::stats {

namespace {

constexpr double kEpsilon = 1e-15;
constexpr int kMaxIterations = 10'000;

// Q via the power series for P(a, x); converges fast for x < a + 1.
double gamma_q_series(double a, double x)
{
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < kMaxIterations; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEpsilon) {
            break;
        }
    }
    const double p = sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    return std::clamp(1.0 - p, 0.0, 1.0);
}

// Q via the continued fraction (modified Lentz); for x >= a + 1.
double gamma_q_continued_fraction(double a, double x)
{
    constexpr double tiny = std::numeric_limits<double>::min() / kEpsilon;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIterations; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) {
            d = tiny;
        }
        c = b + an / c;
        if (std::abs(c) < tiny) {
            c = tiny;
        }
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEpsilon) {
            break;
        }
    }
    return std::clamp(std::exp(-x + a * std::log(x) - std::lgamma(a)) * h, 0.0, 1.0);
}

} // namespace

double regularized_gamma_q(double a, double x)
{
    if (!(a > 0.0) || std::isnan(x) || x < 0.0) {
        throw Error(Errc::InvalidParameters, "incomplete gamma needs a > 0 and x >= 0");
    }
    if (x == 0.0) {
        return 1.0;
    }
    if (std::isinf(x)) {
        return 0.0;
    }
    return x < a + 1.0 ? gamma_q_series(a, x) : gamma_q_continued_fraction(a, x);
}

double chi_square_p_value(double statistic, int dof)
{
    if (dof < 1) {
        throw Error(Errc::InvalidDof, "degrees of freedom must be >= 1, got " + std::to_string(dof));
    }
    if (std::isnan(statistic) || statistic < 0.0) {
        throw Error(Errc::InvalidParameters, "chi-square statistic must be non-negative");
    }
    return regularized_gamma_q(0.5 * dof, 0.5 * statistic);
}

double total_variation_limit(std::size_t categories, std::uint64_t draws) noexcept
{
    return 5.0 * std::sqrt(static_cast<double>(categories) / static_cast<double>(draws));
}

FrequencyReport evaluate_frequencies(std::span<const std::uint64_t> counts, std::span<const double> expected)
{
    if (counts.size() != expected.size() || counts.empty()) {
        throw Error(Errc::InvalidParameters, "counts and expected probabilities must match in size");
    }
    FrequencyReport report;
    report.counts.assign(counts.begin(), counts.end());
    for (auto c : counts) {
        report.total_draws += c;
    }
    const auto draws = static_cast<double>(report.total_draws);

    double tv = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        tv += std::abs(static_cast<double>(counts[i]) / draws - expected[i]);
    }
    report.total_variation = std::min(1.0, 0.5 * tv);

    struct Bucket {
        double observed = 0.0;
        double expected = 0.0;
    };
    std::vector<Bucket> buckets;
    Bucket pool;
    bool impossible_hit = false;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double e = expected[i] * draws;
        const auto o = static_cast<double>(counts[i]);
        if (expected[i] <= 0.0) {
            impossible_hit = impossible_hit || counts[i] > 0;
        } else if (e >= kMinExpectedCount) {
            buckets.push_back({o, e});
        } else {
            pool.observed += o;
            pool.expected += e;
        }
    }
    if (pool.expected > 0.0) {
        if (pool.expected >= kMinExpectedCount || buckets.empty()) {
            buckets.push_back(pool);
        } else {
            auto smallest = std::min_element(buckets.begin(), buckets.end(),
                                             [](const Bucket& a, const Bucket& b) { return a.expected < b.expected; });
            smallest->observed += pool.observed;
            smallest->expected += pool.expected;
        }
    }

    report.degrees_of_freedom = static_cast<int>(buckets.size()) - 1;
    if (impossible_hit) {
        report.chi_square = std::numeric_limits<double>::infinity();
        report.p_value = 0.0;
        return report;
    }
    double chi = 0.0;
    for (const auto& b : buckets) {
        const double diff = b.observed - b.expected;
        chi += diff * diff / b.expected;
    }
    report.chi_square = chi;
    report.p_value = report.degrees_of_freedom >= 1 ? chi_square_p_value(chi, report.degrees_of_freedom) : 1.0;
    return report;
}

AttemptReport summarize_attempts(std::span<const std::uint64_t> attempts, double predicted_tau, double predicted_q)
{
    AttemptReport report;
    report.draws = attempts.size();
    report.predicted_tau = predicted_tau;
    report.predicted_q = predicted_q;
    if (attempts.empty()) {
        return report;
    }
    // Welford.
    double mean = 0.0;
    double m2 = 0.0;
    std::uint64_t n = 0;
    for (auto a : attempts) {
        ++n;
        const double x = static_cast<double>(a);
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }
    report.mean_attempts = mean;
    const double variance = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
    report.std_error = std::sqrt(variance / static_cast<double>(n));
    const double diff = mean - predicted_tau;
    if (report.std_error > 0.0) {
        report.z_score = diff / report.std_error;
    } else {
        report.z_score = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    }
    return report;
}

} // namespace roulette::stats
