#include "roulette/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "roulette/attempt_stats.hpp"
#include "roulette/error.hpp"
#include "roulette/random_source.hpp"
#include "roulette/selectors.hpp"

namespace roulette::bench {

namespace {

template <class T>
T parse_number(std::string_view text, std::string_view what)
{
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw Error(Errc::InvalidSpec, "cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
    }
    return value;
}

std::vector<std::string_view> split(std::string_view text, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) {
            return parts;
        }
        start = pos + 1;
    }
}

using Clock = std::chrono::steady_clock;

double elapsed_ns(Clock::time_point since)
{
    return std::chrono::duration<double, std::nano>(Clock::now() - since).count();
}

template <class Engine>
void timed_loop(const Engine& engine, std::uint64_t samples, std::uint64_t warmup, std::uint64_t seed,
                BenchRecord& record)
{
    RandomSource rng(seed);
    std::uint64_t checksum = 0;
    for (std::uint64_t i = 0; i < warmup; ++i) {
        checksum += engine.select(rng).index;
    }
    AttemptStats stats;
    const auto start = Clock::now();
    for (std::uint64_t i = 0; i < samples; ++i) {
        const Selection s = engine.select(rng);
        checksum += s.index;
        stats.record(s);
    }
    const double ns = elapsed_ns(start);
    record.samples = samples;
    // Clock granularity can make a tiny run read as zero.
    record.ns_per_select = std::max(ns, 1.0) / static_cast<double>(samples);
    record.mean_attempts = stats.mean_attempts();
    record.checksum = checksum;
}

} // namespace

DistributionSpec DistributionSpec::parse(std::string_view text)
{
    const auto parts = split(text, ':');
    const auto name = parts.front();
    DistributionSpec spec;
    if (name == "uniform01" && parts.size() == 1) {
        spec = uniform01();
    } else if (name == "constant" && parts.size() == 1) {
        spec = constant();
    } else if (name == "two-level" && parts.size() == 3) {
        spec = two_level(parse_number<double>(parts[1], "heavy value"),
                         parse_number<std::size_t>(parts[2], "heavy count"));
    } else if (name == "power-law" && parts.size() == 2) {
        spec = power_law(parse_number<double>(parts[1], "exponent"));
    } else {
        throw Error(Errc::InvalidSpec, "unknown distribution '" + std::string(text) + "'");
    }
    spec.validate();
    return spec;
}

std::string DistributionSpec::to_string() const
{
    switch (kind) {
    case Kind::uniform01: return "uniform01";
    case Kind::constant: return "constant";
    case Kind::two_level: return "two-level:" + format_double(heavy_value) + ":" + std::to_string(heavy_count);
    case Kind::power_law: return "power-law:" + format_double(exponent);
    }
    return "unknown";
}

void DistributionSpec::validate() const
{
    if (kind == Kind::two_level) {
        if (heavy_count < 1) {
            throw Error(Errc::InvalidSpec, "two-level needs at least one heavy entry");
        }
        if (!(std::isfinite(heavy_value) && heavy_value > 0.0)) {
            throw Error(Errc::InvalidSpec, "two-level heavy value must be finite and positive");
        }
    }
    if (kind == Kind::power_law && !(std::isfinite(exponent) && exponent > 1.0)) {
        throw Error(Errc::InvalidSpec, "power-law exponent must exceed 1");
    }
}

WeightTable generate_weights(const DistributionSpec& spec, std::size_t n, std::uint64_t seed)
{
    spec.validate();
    if (n < 1) {
        throw Error(Errc::InvalidSpec, "population size must be at least 1");
    }
    std::vector<double> weights(n, 1.0);
    RandomSource rng(seed);
    switch (spec.kind) {
    case DistributionSpec::Kind::uniform01:
        for (double& w : weights) {
            w = rng.open_unit();
        }
        break;
    case DistributionSpec::Kind::constant:
        break;
    case DistributionSpec::Kind::two_level:
        if (spec.heavy_count > n) {
            throw Error(Errc::InvalidSpec, "two-level heavy count exceeds population size");
        }
        std::fill_n(weights.begin(), spec.heavy_count, spec.heavy_value);
        break;
    case DistributionSpec::Kind::power_law: {
        const double inv = -1.0 / (spec.exponent - 1.0);
        for (double& w : weights) {
            w = std::min(std::pow(rng.open_unit(), inv), kPowerLawCap);
        }
        break;
    }
    }
    return WeightTable(weights);
}

BenchRecord time_method(EngineKind method, const WeightTable& table, std::uint64_t samples, std::uint64_t warmup,
                        std::uint64_t seed)
{
    BenchRecord record;
    record.method = std::string(to_string(method));
    record.n = table.size();
    record.seed = seed;

    const auto build_start = Clock::now();
    switch (method) {
    case EngineKind::linear: {
        const LinearScanEngine engine(table);
        record.build_ns = elapsed_ns(build_start);
        timed_loop(engine, samples, warmup, seed, record);
        break;
    }
    case EngineKind::binary: {
        const PrefixSumEngine engine(table);
        record.build_ns = elapsed_ns(build_start);
        timed_loop(engine, samples, warmup, seed, record);
        break;
    }
    case EngineKind::acceptance: {
        const AcceptanceEngine engine(table);
        record.build_ns = elapsed_ns(build_start);
        timed_loop(engine, samples, warmup, seed, record);
        break;
    }
    case EngineKind::hybrid: {
        const HybridEngine engine(table);
        record.build_ns = elapsed_ns(build_start);
        timed_loop(engine, samples, warmup, seed, record);
        break;
    }
    }
    return record;
}

std::vector<BenchRecord> run_bench(const BenchConfig& config)
{
    config.dist.validate();
    if (config.samples < 1) {
        throw Error(Errc::InvalidParameters, "samples must be at least 1");
    }
    std::vector<WeightTable> tables;
    tables.reserve(config.n_list.size());
    for (auto n : config.n_list) {
        tables.push_back(generate_weights(config.dist, n, config.seed));
    }
    const std::string dist = config.dist.to_string();
    std::vector<BenchRecord> records;
    for (auto method : config.methods) {
        for (const auto& table : tables) {
            BenchRecord record;
            try {
                record = time_method(method, table, config.samples, config.warmup, config.seed);
            } catch (const Error& e) {
                throw Error(e.code(), std::string(to_string(method)) + " at n=" + std::to_string(table.size()) +
                                          ": " + e.what());
            }
            record.dist = dist;
            records.push_back(std::move(record));
        }
    }
    return records;
}

std::string format_double(double value)
{
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, ptr);
}

std::string format_csv(std::span<const BenchRecord> records)
{
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& r : records) {
        out += r.method + ',' + std::to_string(r.n) + ',' + r.dist + ',' + std::to_string(r.samples) + ',' +
               format_double(r.ns_per_select) + ',' + format_double(r.mean_attempts) + ',' + std::to_string(r.seed) +
               '\n';
    }
    return out;
}

void export_csv(std::span<const BenchRecord> records, const std::filesystem::path& path)
{
    if (records.empty()) {
        throw Error(Errc::InvalidParameters, "no benchmark records to export");
    }
    const std::string text = format_csv(records);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(Errc::IoError, "cannot open " + path.string() + " for writing");
    }
    out << text;
    if (!out.flush()) {
        throw Error(Errc::IoError, "failed writing " + path.string());
    }
}

std::vector<BenchRecord> parse_csv(std::string_view text)
{
    auto lines = split(text, '\n');
    if (!lines.empty() && lines.back().empty()) {
        lines.pop_back();
    }
    if (lines.empty() || lines.front() != kCsvHeader) {
        throw Error(Errc::InvalidSpec, "missing benchmark CSV header");
    }
    std::vector<BenchRecord> records;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split(lines[i], ',');
        if (fields.size() != 7) {
            throw Error(Errc::InvalidSpec, "CSV row " + std::to_string(i) + " has " + std::to_string(fields.size()) +
                                               " fields, expected 7");
        }
        BenchRecord r;
        r.method = std::string(fields[0]);
        r.n = parse_number<std::size_t>(fields[1], "n");
        r.dist = std::string(fields[2]);
        r.samples = parse_number<std::uint64_t>(fields[3], "samples");
        r.ns_per_select = parse_number<double>(fields[4], "ns_per_select");
        r.mean_attempts = parse_number<double>(fields[5], "mean_attempts");
        r.seed = parse_number<std::uint64_t>(fields[6], "seed");
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<BenchRecord> read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::IoError, "cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_csv(buffer.str());
}

} // namespace roulette::bench
