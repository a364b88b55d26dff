#include "toposon/energy.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "toposon/reduction.hpp"

namespace toposon {

int QoSGroups::total_quota() const
{
    return std::accumulate(quota.begin(), quota.end(), 0);
}

QoSGroups make_qos_groups(const SimplicialComplex& x, Rng& rng)
{
    QoSGroups qg;
    const auto vs = x.vertices();
    if (vs.empty()) return qg;
    qg.group_of.assign(static_cast<std::size_t>(vs.back()) + 1, 0);

    std::vector<std::size_t> order;
    for (int k = x.dimension(); k >= 0; --k) {
        order.resize(x.count(k));
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order.begin(), order.end());
        for (std::size_t i : order) {
            const auto s = x.simplex(k, i);
            if (!std::all_of(s.begin(), s.end(), [&](int v) { return qg.group_of[v] == 0; })) continue;
            const int g = qg.group_count() + 1;
            for (int v : s) qg.group_of[v] = g;
            const int size = k + 1;
            qg.size.push_back(size);
            qg.quota.push_back(rng.uniform_int(1, size));
        }
    }
    return qg;
}

namespace {

// Shrinking one radius only deletes edges at that vertex, so the new Rips
// complex is the old one minus the simplices spanning a lost edge.
SimplicialComplex drop_lost_edges(const SimplicialComplex& x, const NodeSet& ns, const std::map<int, double>& radius,
                                  int v, double r_v)
{
    std::vector<int> lost;
    for (const auto& [u, r_u] : radius) {
        if (u == v) continue;
        const double reach = r_v + r_u;
        if ((ns.nodes[u].pos - ns.nodes[v].pos).squaredNorm() >= reach * reach) lost.push_back(u);
    }
    return x.filter([&](int k, std::span<const int> s) {
        if (k == 0 || std::find(s.begin(), s.end(), v) == s.end()) return true;
        return std::none_of(s.begin(), s.end(), [&](int u) { return std::binary_search(lost.begin(), lost.end(), u); });
    });
}

} // namespace

EnergyResult conserve(const SimplicialComplex& x, const NodeSet& ns, QoSGroups groups, Rng& rng,
                      const EnergyOptions& options)
{
    const auto vs = x.vertices();
    if (vs.size() != ns.size()) throw std::invalid_argument("conserve: complex vertices differ from node ids");
    for (std::size_t i = 0; i < vs.size(); ++i)
        if (vs[i] != static_cast<int>(i)) throw std::invalid_argument("conserve: complex vertices differ from node ids");
    for (int v : vs)
        if (v >= static_cast<int>(groups.group_of.size()) || groups.group(v) < 1)
            throw std::invalid_argument("conserve: node without a QoS group");

    EnergyResult result;
    result.betti = betti(x);
    const BettiPair target = result.betti;

    // Phase 1: guarded reduction.
    auto& S = groups.size;
    const auto& Q = groups.quota;
    ReductionGuards guards;
    guards.stop = [&](const ReductionState& s) {
        if (s.max_index <= 2) return true;
        if (options.halt_on_first_quota)
            for (std::size_t g = 0; g < S.size(); ++g)
                if (S[g] <= Q[g]) return true;
        return false;
    };
    guards.veto = [&](const SimplicialComplex& tentative, int w) {
        const auto g = static_cast<std::size_t>(groups.group(w) - 1);
        if (S[g] - 1 < Q[g]) return true;
        return betti(tentative) != target;
    };
    guards.on_commit = [&](int w) { --S[static_cast<std::size_t>(groups.group(w) - 1)]; };

    const auto flags = ns.boundary_ids();
    ReductionResult phase1 = reduce_with_guards(x, flags, rng, guards);
    result.removed = phase1.removed;
    const auto kept = phase1.complex.vertices();
    result.kept.assign(kept.begin(), kept.end());

    // Phase 2: per-node coverage shrink, kept nodes in random order.
    const double floor = options.radius_floor > 0.0 ? options.radius_floor : ns.side / 20.0;
    for (int v : result.kept) result.new_r_cov[v] = ns.nodes[v].r_cov;
    SimplicialComplex current = rips_from_disks(ns, result.kept, RadiusRole::cov, 2);

    std::vector<int> order = result.kept;
    rng.shuffle(order.begin(), order.end());
    for (int v : order) {
        double& r = result.new_r_cov[v];
        while (true) {
            const double next = std::max(r * options.shrink_factor, floor);
            if (!(next < r)) break;
            SimplicialComplex candidate = drop_lost_edges(current, ns, result.new_r_cov, v, next);
            if (betti(candidate) != target) break;
            r = next;
            current = std::move(candidate);
        }
    }
    return result;
}

double radius_energy(const NodeSet& ns)
{
    double e = 0.0;
    for (const Node& n : ns.nodes) e += n.r_cov * n.r_cov;
    return e;
}

double radius_energy(const EnergyResult& result)
{
    double e = 0.0;
    for (const auto& [id, r] : result.new_r_cov) e += r * r;
    return e;
}

} // namespace toposon
