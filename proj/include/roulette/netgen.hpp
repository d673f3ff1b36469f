#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "roulette/attempt_stats.hpp"
#include "roulette/engine_kind.hpp"
#include "roulette/random_source.hpp"
#include "roulette/selectors.hpp"
#include "roulette/weight_table.hpp"

namespace roulette::netgen {

struct Edge {
    std::size_t u = 0;
    std::size_t v = 0;
};

/// Undirected multigraph whose degree sequence doubles as a selection table.
class GrowingNetwork {
public:
    /// Cycle over m0 >= 3 nodes, every degree 2.
    static GrowingNetwork ring(std::size_t m0);

    /// Arbitrary graph; every node must have at least one edge.
    static GrowingNetwork from_edges(std::size_t node_count, std::vector<Edge> edges);

    [[nodiscard]] std::size_t node_count() const noexcept { return degrees_.size(); }
    [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }
    [[nodiscard]] const WeightTable& degrees() const noexcept { return degrees_; }
    [[nodiscard]] WeightTable& degrees() noexcept { return degrees_; }

    /// Attempt counters of each growth step, in order of node addition.
    [[nodiscard]] const std::vector<AttemptStats>& step_stats() const noexcept { return step_stats_; }
    [[nodiscard]] AttemptStats total_stats() const noexcept;

    void add_edge(Edge e) { edges_.push_back(e); }
    void record_step(const AttemptStats& s) { step_stats_.push_back(s); }

private:
    explicit GrowingNetwork(WeightTable degrees) : degrees_(std::move(degrees)) {}

    WeightTable degrees_;
    std::vector<Edge> edges_;
    std::vector<AttemptStats> step_stats_;
};

/// Degree shares in a grown network stay far below the selector default, so
/// growth uses a much smaller heavy fraction.
inline constexpr double kGrowthHeavyFraction = 0.001;

struct GrowthParams {
    std::size_t seed_nodes = 3;     ///< m0, size of the initial ring
    std::size_t edges_per_node = 2; ///< m, distinct targets per new node
    std::size_t final_size = 0;
    EngineKind engine = EngineKind::acceptance;
    double heavy_fraction = kGrowthHeavyFraction; ///< hybrid engine only
};

using StepObserver = std::function<void(const GrowingNetwork&)>;

/// Preferential attachment: every new node links to m distinct existing nodes,
/// each chosen with probability proportional to its current degree. Duplicate
/// targets within a step are redrawn. The binary engine rebuilds its prefix
/// sums once per step; the other engines follow the degree table
/// incrementally. `observer` (if set) runs after every step.
GrowingNetwork grow(const GrowthParams& params, RandomSource& rng, const StepObserver& observer = {});

/// (degree, node count) pairs, ascending by degree.
std::vector<std::pair<std::size_t, std::size_t>> degree_histogram(const GrowingNetwork& network);

/// One "u v" line per edge, 0-based, newline-terminated.
void write_edge_list(const GrowingNetwork& network, std::ostream& out);

} // namespace roulette::netgen
