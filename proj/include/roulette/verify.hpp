#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace roulette::verify {

enum class Suite { frequency, attempts, variants, hybrid };

Suite parse_suite(std::string_view name);
std::string_view to_string(Suite suite) noexcept;

/// One verification outcome. For threshold checks `expected` holds the
/// threshold and `tolerance` is 0; for band checks the pass condition is
/// |observed - expected| <= tolerance.
struct Check {
    std::string name;
    bool pass = false;
    double observed = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
};

struct Report {
    std::string suite;
    std::vector<Check> checks;

    [[nodiscard]] bool passed() const noexcept;
    /// {"suite": ..., "checks": [{"name", "pass", "observed", "expected", "tolerance"}, ...]}
    [[nodiscard]] std::string to_json(int indent = 2) const;
};

/// Serializes several reports as one JSON array.
std::string to_json(const std::vector<Report>& reports, int indent = 2);

/// Runs a statistical verification suite. Fully determined by (suite, seed).
Report run_verify(Suite suite, std::uint64_t seed);

} // namespace roulette::verify
