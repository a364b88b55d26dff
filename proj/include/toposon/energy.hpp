#pragma once

#include <map>
#include <vector>

#include "toposon/complex.hpp"
#include "toposon/geometry.hpp"
#include "toposon/homology.hpp"
#include "toposon/rng.hpp"

namespace toposon {

/// Partition of the nodes into QoS groups. Groups are numbered from 1; each
/// group g has a current size S(g) and a quota Q(g) of nodes that must stay on.
struct QoSGroups {
    std::vector<int> group_of; // indexed by node id, 0 when the id is not a vertex
    std::vector<int> size;     // S(g) at size[g - 1]
    std::vector<int> quota;    // Q(g) at quota[g - 1]

    int group_count() const { return static_cast<int>(size.size()); }
    int group(int v) const { return group_of.at(static_cast<std::size_t>(v)); }
    /// Sum of all quotas: nodes needed for traffic alone.
    int total_quota() const;
};

/// Walks all simplices from largest to smallest (ties shuffled); a simplex
/// whose vertices are all still unassigned founds a new group with a quota
/// drawn uniformly from {1, ..., size}.
QoSGroups make_qos_groups(const SimplicialComplex& x, Rng& rng);

struct EnergyOptions {
    /// Multiplicative step applied to a coverage radius per shrink attempt.
    double shrink_factor = 0.95;
    /// Smallest coverage radius phase 2 may reach; <= 0 means side / 20.
    double radius_floor = 0.0;
    /// Stop the whole removal loop as soon as any group sits at its quota
    /// (the literal loop guard) instead of vetoing per candidate only.
    bool halt_on_first_quota = false;
};

struct EnergyResult {
    std::vector<int> kept;              // sorted ids
    std::map<int, double> new_r_cov;    // kept id -> final coverage radius
    std::vector<int> removed;           // in removal order
    BettiPair betti;                    // topology that was preserved
};

/// Switches off nodes while topology and every group quota survive, then
/// shrinks the coverage radius of each kept node (random order) while the
/// Betti numbers of the rebuilt Rips complex stay put.
///
/// `x` must be the Rips complex of `ns` on coverage radii, with boundary
/// nodes flagged in `ns`.
EnergyResult conserve(const SimplicialComplex& x, const NodeSet& ns, QoSGroups groups, Rng& rng,
                      const EnergyOptions& options = {});

/// Sum of squared coverage radii: a transmit-power proxy.
double radius_energy(const NodeSet& ns);
double radius_energy(const EnergyResult& result);

} // namespace toposon
