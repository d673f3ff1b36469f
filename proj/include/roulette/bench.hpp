#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "roulette/engine_kind.hpp"
#include "roulette/weight_table.hpp"

namespace roulette::bench {

/// Synthetic weight workload.
///
/// Textual form (as accepted by parse()):
///   uniform01               w ~ U(0, 1), never exactly 0
///   constant                w = 1
///   two-level:VALUE:COUNT   COUNT entries of VALUE first, the rest 1
///   power-law:EXPONENT      w = u^(-1/(EXPONENT-1)), truncated at 1e9
struct DistributionSpec {
    enum class Kind { uniform01, constant, two_level, power_law };

    Kind kind = Kind::uniform01;
    double heavy_value = 0.0;
    std::size_t heavy_count = 0;
    double exponent = 0.0;

    static DistributionSpec uniform01() { return {}; }
    static DistributionSpec constant() { return {Kind::constant}; }
    static DistributionSpec two_level(double value, std::size_t count) { return {Kind::two_level, value, count}; }
    static DistributionSpec power_law(double exponent) { return {Kind::power_law, 0.0, 0, exponent}; }

    static DistributionSpec parse(std::string_view text);
    [[nodiscard]] std::string to_string() const;

    /// Throws InvalidSpec on out-of-domain parameters.
    void validate() const;
};

inline constexpr double kPowerLawCap = 1e9;

WeightTable generate_weights(const DistributionSpec& spec, std::size_t n, std::uint64_t seed);

struct BenchRecord {
    std::string method;
    std::size_t n = 0;
    std::string dist;
    std::uint64_t samples = 0;
    double ns_per_select = 0.0;
    double mean_attempts = 1.0;
    std::uint64_t seed = 0;

    // Not part of the CSV.
    double build_ns = 0.0;
    std::uint64_t checksum = 0;
};

struct BenchConfig {
    std::vector<EngineKind> methods{kAllEngineKinds.begin(), kAllEngineKinds.end()};
    std::vector<std::size_t> n_list;
    DistributionSpec dist;
    std::uint64_t samples = 100'000;
    std::uint64_t warmup = 1'000;
    std::uint64_t seed = 1;
};

/// One record per (method, n), method-major. Weights are generated once per n
/// from `seed`; each cell then selects with a fresh RandomSource(seed), so
/// everything except ns_per_select and build_ns is reproducible.
std::vector<BenchRecord> run_bench(const BenchConfig& config);

/// Single timed cell over an existing table.
BenchRecord time_method(EngineKind method, const WeightTable& table, std::uint64_t samples, std::uint64_t warmup,
                        std::uint64_t seed);

inline constexpr std::string_view kCsvHeader = "method,n,dist,samples,ns_per_select,mean_attempts,seed";

void export_csv(std::span<const BenchRecord> records, const std::filesystem::path& path);
std::string format_csv(std::span<const BenchRecord> records);
std::vector<BenchRecord> parse_csv(std::string_view text);
std::vector<BenchRecord> read_csv(const std::filesystem::path& path);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

} // namespace roulette::bench
