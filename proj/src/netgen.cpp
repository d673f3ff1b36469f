#include "roulette/netgen.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <string>

#include "roulette/error.hpp"

namespace roulette::netgen {

GrowingNetwork GrowingNetwork::ring(std::size_t m0)
{
    if (m0 < 3) {
        throw Error(Errc::InvalidParameters, "initial ring needs at least 3 nodes");
    }
    std::vector<double> degrees(m0, 2.0);
    GrowingNetwork network{WeightTable(degrees)};
    for (std::size_t i = 0; i < m0; ++i) {
        network.add_edge({i, (i + 1) % m0});
    }
    return network;
}

GrowingNetwork GrowingNetwork::from_edges(std::size_t node_count, std::vector<Edge> edges)
{
    std::vector<double> degrees(node_count, 0.0);
    for (const auto& e : edges) {
        if (e.u >= node_count || e.v >= node_count) {
            throw Error(Errc::InvalidParameters, "edge endpoint outside node range");
        }
        degrees[e.u] += 1.0;
        degrees[e.v] += 1.0;
    }
    if (std::find(degrees.begin(), degrees.end(), 0.0) != degrees.end()) {
        throw Error(Errc::InvalidParameters, "every node needs at least one edge");
    }
    GrowingNetwork network{WeightTable(degrees)};
    network.edges_ = std::move(edges);
    return network;
}

AttemptStats GrowingNetwork::total_stats() const noexcept
{
    AttemptStats total;
    for (const auto& s : step_stats_) {
        total.merge(s);
    }
    return total;
}

namespace {

// Engines hold pointers into network.degrees(), so the network is grown in place.
template <class Select, class Increment, class Append>
void grow_with(GrowingNetwork& network, const GrowthParams& params, RandomSource& rng, Select&& select,
               Increment&& increment, Append&& append, const StepObserver& observer)
{
    std::vector<std::size_t> targets;
    targets.reserve(params.edges_per_node);
    while (network.node_count() < params.final_size) {
        const std::size_t v = network.node_count();
        AttemptStats step;
        targets.clear();
        while (targets.size() < params.edges_per_node) {
            const Selection s = select(rng);
            step.record(s);
            if (std::find(targets.begin(), targets.end(), s.index) == targets.end()) {
                targets.push_back(s.index);
            }
        }
        for (std::size_t t : targets) {
            network.add_edge({v, t});
            increment(t);
        }
        append(static_cast<double>(params.edges_per_node));
        network.record_step(step);
        if (observer) {
            observer(network);
        }
    }
}

} // namespace

GrowingNetwork grow(const GrowthParams& params, RandomSource& rng, const StepObserver& observer)
{
    if (params.edges_per_node < 1 || params.seed_nodes < params.edges_per_node ||
        params.final_size <= params.seed_nodes) {
        throw Error(Errc::InvalidParameters, "growth needs m0 >= m >= 1 and final_size > m0");
    }
    GrowingNetwork network = GrowingNetwork::ring(params.seed_nodes);
    WeightTable& degrees = network.degrees();

    auto increment = [&degrees](std::size_t t) { degrees.set_weight(t, degrees.weight(t) + 1.0); };
    auto append = [&degrees](double d) { degrees.append(d); };

    switch (params.engine) {
    case EngineKind::linear: {
        LinearScanEngine engine(degrees);
        grow_with(
            network, params, rng, [&](RandomSource& r) { return engine.select(r); }, increment, append,
            observer);
        break;
    }
    case EngineKind::binary: {
        PrefixSumEngine engine(degrees);
        grow_with(
            network, params, rng,
            [&](RandomSource& r) {
                if (!engine.is_current()) {
                    engine.rebuild();
                }
                return engine.select(r);
            },
            increment, append, observer);
        break;
    }
    case EngineKind::acceptance: {
        AcceptanceEngine engine(degrees);
        grow_with(
            network, params, rng, [&](RandomSource& r) { return engine.select(r); }, increment, append,
            observer);
        break;
    }
    case EngineKind::hybrid: {
        HybridEngine engine(degrees, params.heavy_fraction);
        grow_with(
            network, params, rng, [&](RandomSource& r) { return engine.select(r); },
            [&](std::size_t t) { engine.set_weight(degrees, t, degrees.weight(t) + 1.0); },
            [&](double d) { engine.append(degrees, d); }, observer);
        break;
    }
    }
    return network;
}

std::vector<std::pair<std::size_t, std::size_t>> degree_histogram(const GrowingNetwork& network)
{
    std::map<std::size_t, std::size_t> counts;
    for (double d : network.degrees().weights()) {
        ++counts[static_cast<std::size_t>(d)];
    }
    return {counts.begin(), counts.end()};
}

void write_edge_list(const GrowingNetwork& network, std::ostream& out)
{
    for (const auto& e : network.edges()) {
        out << e.u << ' ' << e.v << '\n';
    }
}

} // namespace roulette::netgen
