// Command-line front end: benchmark selection engines, run verification
// suites, and grow preferential-attachment networks.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or I/O error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "roulette/bench.hpp"
#include "roulette/engine_kind.hpp"
#include "roulette/error.hpp"
#include "roulette/netgen.hpp"
#include "roulette/verify.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::vector<std::string> split_list(const std::vector<std::string>& items)
{
    std::vector<std::string> out;
    for (const auto& item : items) {
        std::stringstream ss(item);
        std::string part;
        while (std::getline(ss, part, ',')) {
            if (!part.empty()) {
                out.push_back(part);
            }
        }
    }
    return out;
}

int run_bench_command(const std::vector<std::string>& methods, const std::vector<std::string>& sizes,
                      const std::string& dist, std::uint64_t samples, std::uint64_t warmup, std::uint64_t seed,
                      const std::string& out_path)
{
    using namespace roulette;
    bench::BenchConfig config;
    if (!methods.empty()) {
        config.methods.clear();
        for (const auto& m : split_list(methods)) {
            config.methods.push_back(parse_engine_kind(m));
        }
    }
    for (const auto& n : split_list(sizes)) {
        // Accept 1e6-style sizes as well as plain integers.
        const double value = std::stod(n);
        if (!(value >= 1.0) || value != static_cast<double>(static_cast<std::size_t>(value))) {
            throw Error(Errc::InvalidParameters, "population size must be a positive integer, got " + n);
        }
        config.n_list.push_back(static_cast<std::size_t>(value));
    }
    if (config.n_list.empty()) {
        config.n_list = {1'000, 10'000, 100'000, 1'000'000};
    }
    config.dist = bench::DistributionSpec::parse(dist);
    config.samples = samples;
    config.warmup = warmup;
    config.seed = seed;

    const auto records = bench::run_bench(config);
    for (const auto& r : records) {
        std::cerr << r.method << " n=" << r.n << " build_ns=" << bench::format_double(r.build_ns)
                  << " ns_per_select=" << bench::format_double(r.ns_per_select)
                  << " mean_attempts=" << bench::format_double(r.mean_attempts) << " checksum=" << r.checksum << '\n';
    }
    if (out_path.empty()) {
        std::cout << bench::format_csv(records);
    } else {
        bench::export_csv(records, out_path);
    }
    return 0;
}

int run_verify_command(const std::string& suite_name, std::uint64_t seed, const std::string& out_path)
{
    using namespace roulette::verify;
    std::vector<Suite> suites;
    if (suite_name == "all") {
        suites = {Suite::frequency, Suite::attempts, Suite::variants, Suite::hybrid};
    } else {
        suites = {parse_suite(suite_name)};
    }
    std::vector<Report> reports;
    bool ok = true;
    for (auto suite : suites) {
        reports.push_back(run_verify(suite, seed));
        ok = ok && reports.back().passed();
    }
    const std::string json = (reports.size() == 1 ? reports.front().to_json() : to_json(reports)) + '\n';
    if (out_path.empty()) {
        std::cout << json;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out || !(out << json)) {
            throw roulette::Error(roulette::Errc::IoError, "cannot write " + out_path);
        }
    }
    return ok ? 0 : kExitFailure;
}

int run_netgen_command(std::size_t n, std::size_t m, std::size_t m0, const std::string& method, double heavy_fraction,
                       std::uint64_t seed, const std::string& out_path)
{
    using namespace roulette;
    netgen::GrowthParams params;
    params.final_size = n;
    params.edges_per_node = m;
    params.seed_nodes = m0;
    params.engine = parse_engine_kind(method);
    params.heavy_fraction = heavy_fraction;
    RandomSource rng(seed);
    const auto network = netgen::grow(params, rng);

    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            throw Error(Errc::IoError, "cannot open " + out_path);
        }
        netgen::write_edge_list(network, out);
        if (!out.flush()) {
            throw Error(Errc::IoError, "failed writing " + out_path);
        }
    }
    const auto stats = network.total_stats();
    nlohmann::ordered_json summary;
    summary["nodes"] = network.node_count();
    summary["edges"] = network.edges().size();
    summary["engine"] = method;
    summary["seed"] = seed;
    summary["max_degree"] = network.degrees().max_bound();
    summary["mean_attempts"] = stats.mean_attempts();
    auto& hist = summary["degree_histogram"] = nlohmann::ordered_json::array();
    for (const auto& [degree, count] : netgen::degree_histogram(network)) {
        hist.push_back({degree, count});
    }
    std::cout << summary.dump() << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Roulette-wheel selection engines: benchmark, verify, netgen"};
    app.require_subcommand(1);

    std::vector<std::string> methods;
    std::vector<std::string> sizes;
    std::string dist = "uniform01";
    std::uint64_t samples = 100'000;
    std::uint64_t warmup = 1'000;
    std::uint64_t seed = 1;
    std::string out_path;

    auto* bench = app.add_subcommand("bench", "Time selection per method across population sizes; emits CSV");
    bench->add_option("--method", methods, "linear, binary, acceptance, hybrid (repeatable or comma-separated)");
    bench->add_option("--n", sizes, "Population sizes (repeatable or comma-separated)");
    bench->add_option("--dist", dist, "uniform01 | constant | two-level:VALUE:COUNT | power-law:EXPONENT")
        ->capture_default_str();
    bench->add_option("--samples", samples, "Timed selections per cell")->capture_default_str();
    bench->add_option("--warmup", warmup, "Untimed selections per cell")->capture_default_str();
    bench->add_option("--seed", seed)->capture_default_str();
    bench->add_option("--out", out_path, "CSV output path (stdout if omitted)");

    std::string suite = "all";
    auto* verify = app.add_subcommand("verify", "Run statistical verification suites; emits JSON");
    verify->add_option("--suite", suite, "frequency | attempts | variants | hybrid | all")->capture_default_str();
    verify->add_option("--seed", seed)->capture_default_str();
    verify->add_option("--out", out_path, "JSON output path (stdout if omitted)");

    std::size_t nodes = 10'000;
    std::size_t m = 2;
    std::size_t m0 = 3;
    std::string engine = "acceptance";
    double heavy_fraction = roulette::netgen::kGrowthHeavyFraction;
    auto* net = app.add_subcommand("netgen", "Grow a preferential-attachment network; writes an edge list");
    net->add_option("--n", nodes, "Final node count")->capture_default_str();
    net->add_option("--m", m, "Edges per new node")->capture_default_str();
    net->add_option("--m0", m0, "Initial ring size")->capture_default_str();
    net->add_option("--method", engine, "linear | binary | acceptance | hybrid")->capture_default_str();
    net->add_option("--heavy-fraction", heavy_fraction, "Hybrid heavy-set threshold as a share of total degree")
        ->capture_default_str();
    net->add_option("--seed", seed)->capture_default_str();
    net->add_option("--out", out_path, "Edge-list output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (bench->parsed()) {
            return run_bench_command(methods, sizes, dist, samples, warmup, seed, out_path);
        }
        if (verify->parsed()) {
            return run_verify_command(suite, seed, out_path);
        }
        return run_netgen_command(nodes, m, m0, engine, heavy_fraction, seed, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}
