#pragma once

#include <span>
#include <utility>
#include <vector>

#include "toposon/complex.hpp"
#include "toposon/geometry.hpp"
#include "toposon/rng.hpp"

namespace toposon {

/// Conflict edges between nodes that may not share a frequency.
class InterferenceGraph {
public:
    explicit InterferenceGraph(std::size_t n_nodes = 0) : adjacency_(n_nodes) {}

    /// Adds the undirected edge {u, v}; self-loops and repeats are ignored.
    void add_edge(int u, int v);

    std::size_t node_count() const { return adjacency_.size(); }
    std::size_t edge_count() const;
    const std::vector<int>& neighbors(int v) const { return adjacency_[v]; }
    bool connected(int u, int v) const;
    std::size_t max_degree() const;
    std::vector<std::pair<int, int>> edges() const;

    /// True when no edge joins two members of `sorted_ids`.
    bool independent(std::span<const int> sorted_ids) const;

private:
    std::vector<std::vector<int>> adjacency_;
};

/// Edge (u, v) iff either node lies strictly inside the other's rejection disk.
InterferenceGraph interference_graph(const NodeSet& ns);

struct FrequencyPlan {
    std::vector<int> freq; // indexed by node id
    int n_freqs = 0;
};

bool is_conflict_free(const FrequencyPlan& plan, const InterferenceGraph& ig);

/// Iterated index-ordered reduction: each pass strips vertices of maximal index
/// from the residual complex until the survivors are interference-free, gives
/// them the next frequency, and continues on the complex induced by the
/// stripped vertices. Vertices of X must be 0..N-1 with N = ig.node_count().
FrequencyPlan auto_plan(const SimplicialComplex& x, const InterferenceGraph& ig, Rng& rng);

/// Survivor sets of each auto_plan pass, in pass order (for inspection).
std::vector<std::vector<int>> auto_plan_passes(const SimplicialComplex& x, const InterferenceGraph& ig, Rng& rng);

/// First-fit coloring visiting nodes in `order`.
FrequencyPlan greedy_coloring(const InterferenceGraph& ig, std::span<const int> order);

/// Identity visiting order 0..N-1.
FrequencyPlan greedy_coloring(const InterferenceGraph& ig);

/// Share of the covered area served by each frequency: cell centers of a
/// resolution x resolution raster of the square that fall in a communication
/// disk of a node on that frequency, over cells covered by any node.
std::vector<double> coverage_per_frequency(const NodeSet& ns, const FrequencyPlan& plan, int resolution = 256);

} // namespace toposon
