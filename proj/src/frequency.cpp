#include "toposon/frequency.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "toposon/reduction.hpp"

namespace toposon {

void InterferenceGraph::add_edge(int u, int v)
{
    if (u == v) return;
    if (connected(u, v)) return;
    auto insert_sorted = [](std::vector<int>& row, int x) { row.insert(std::lower_bound(row.begin(), row.end(), x), x); };
    insert_sorted(adjacency_[u], v);
    insert_sorted(adjacency_[v], u);
}

std::size_t InterferenceGraph::edge_count() const
{
    std::size_t n = 0;
    for (const auto& row : adjacency_) n += row.size();
    return n / 2;
}

bool InterferenceGraph::connected(int u, int v) const
{
    const auto& row = adjacency_[u];
    return std::binary_search(row.begin(), row.end(), v);
}

std::size_t InterferenceGraph::max_degree() const
{
    std::size_t d = 0;
    for (const auto& row : adjacency_) d = std::max(d, row.size());
    return d;
}

std::vector<std::pair<int, int>> InterferenceGraph::edges() const
{
    std::vector<std::pair<int, int>> out;
    for (int u = 0; u < static_cast<int>(adjacency_.size()); ++u)
        for (int v : adjacency_[u])
            if (u < v) out.emplace_back(u, v);
    return out;
}

bool InterferenceGraph::independent(std::span<const int> sorted_ids) const
{
    for (int u : sorted_ids)
        for (int v : adjacency_[u])
            if (v > u && std::binary_search(sorted_ids.begin(), sorted_ids.end(), v)) return false;
    return true;
}

InterferenceGraph interference_graph(const NodeSet& ns)
{
    InterferenceGraph ig(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) {
        for (std::size_t j = i + 1; j < ns.size(); ++j) {
            const double d = (ns.nodes[i].pos - ns.nodes[j].pos).norm();
            if (d < ns.nodes[i].r_rej || d < ns.nodes[j].r_rej) ig.add_edge(static_cast<int>(i), static_cast<int>(j));
        }
    }
    return ig;
}

bool is_conflict_free(const FrequencyPlan& plan, const InterferenceGraph& ig)
{
    if (plan.freq.size() != ig.node_count()) return false;
    for (int f : plan.freq)
        if (f < 0 || f >= plan.n_freqs) return false;
    for (auto [u, v] : ig.edges())
        if (plan.freq[u] == plan.freq[v]) return false;
    return true;
}

std::vector<std::vector<int>> auto_plan_passes(const SimplicialComplex& x, const InterferenceGraph& ig, Rng& rng)
{
    const auto vs = x.vertices();
    if (vs.size() != ig.node_count()) throw std::invalid_argument("auto_plan: complex and interference graph disagree");
    for (std::size_t i = 0; i < vs.size(); ++i)
        if (vs[i] != static_cast<int>(i)) throw std::invalid_argument("auto_plan: vertex ids must be 0..N-1");

    // No boundary flags and no Betti veto: only the conflict test stops a pass.
    ReductionGuards guards;
    guards.stop = [&ig](const ReductionState& s) { return ig.independent(s.complex.vertices()); };
    // Without any 2-simplex left there is no index order; strip an endpoint
    // of a surviving conflict instead.
    guards.fallback = [&ig](const ReductionState& s) {
        const auto alive = s.complex.vertices();
        std::vector<int> pool;
        for (int u : alive)
            for (int v : ig.neighbors(u))
                if (std::binary_search(alive.begin(), alive.end(), v)) {
                    pool.push_back(u);
                    break;
                }
        return pool;
    };

    std::vector<std::vector<int>> passes;
    SimplicialComplex residual = x;
    while (!residual.empty()) {
        ReductionResult pass = reduce_with_guards(residual, {}, rng, guards);
        const auto survivors = pass.complex.vertices();
        passes.emplace_back(survivors.begin(), survivors.end());
        std::sort(pass.removed.begin(), pass.removed.end());
        residual = induced_subcomplex(residual, pass.removed);
    }
    return passes;
}

FrequencyPlan auto_plan(const SimplicialComplex& x, const InterferenceGraph& ig, Rng& rng)
{
    FrequencyPlan plan;
    plan.freq.assign(ig.node_count(), -1);
    const auto passes = auto_plan_passes(x, ig, rng);
    for (std::size_t f = 0; f < passes.size(); ++f)
        for (int v : passes[f]) plan.freq[v] = static_cast<int>(f);
    plan.n_freqs = static_cast<int>(passes.size());
    return plan;
}

FrequencyPlan greedy_coloring(const InterferenceGraph& ig, std::span<const int> order)
{
    const std::size_t n = ig.node_count();
    if (order.size() != n) throw std::invalid_argument("greedy_coloring: order must list every node");
    FrequencyPlan plan;
    plan.freq.assign(n, -1);
    std::vector<char> used;
    for (int v : order) {
        if (v < 0 || v >= static_cast<int>(n) || plan.freq[v] != -1)
            throw std::invalid_argument("greedy_coloring: order is not a permutation");
        used.assign(ig.neighbors(v).size() + 1, 0);
        for (int u : ig.neighbors(v))
            if (plan.freq[u] >= 0 && plan.freq[u] < static_cast<int>(used.size())) used[plan.freq[u]] = 1;
        int c = 0;
        while (used[c]) ++c;
        plan.freq[v] = c;
        plan.n_freqs = std::max(plan.n_freqs, c + 1);
    }
    return plan;
}

FrequencyPlan greedy_coloring(const InterferenceGraph& ig)
{
    std::vector<int> order(ig.node_count());
    std::iota(order.begin(), order.end(), 0);
    return greedy_coloring(ig, order);
}

std::vector<double> coverage_per_frequency(const NodeSet& ns, const FrequencyPlan& plan, int resolution)
{
    if (resolution < 16) throw std::invalid_argument("coverage_per_frequency: resolution must be >= 16");
    if (plan.freq.size() != ns.size()) throw std::invalid_argument("coverage_per_frequency: plan/node mismatch");
    CoverageRaster all(resolution, 0.0, ns.side);
    std::vector<CoverageRaster> per(static_cast<std::size_t>(plan.n_freqs), CoverageRaster(resolution, 0.0, ns.side));
    for (const Node& n : ns.nodes) {
        all.add_disk(n.pos, n.r_comm);
        per[plan.freq[n.id]].add_disk(n.pos, n.r_comm);
    }
    const double total = static_cast<double>(all.covered_count());
    std::vector<double> out;
    out.reserve(per.size());
    for (const auto& r : per) out.push_back(total > 0 ? static_cast<double>(r.covered_count()) / total : 0.0);
    return out;
}

} // namespace toposon
