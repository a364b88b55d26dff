#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "toposon/energy.hpp"

using namespace toposon;

namespace {

struct Scenario {
    NodeSet ns;
    SimplicialComplex x;
};

Scenario energy_scenario(Rng& rng)
{
    NodeSet ns = sample_poisson(6.0, 2.0, rng);
    ns = assign_radii_uniform(std::move(ns), 0.2, 2.0 / std::sqrt(std::numbers::pi * 6.0), rng, RadiusRole::cov);
    ns = make_boundary(std::move(ns), BoundaryMode::square_perimeter, 0.5, 2.0 / 3.0);
    SimplicialComplex x = rips_from_disks(ns, RadiusRole::cov);
    return {std::move(ns), std::move(x)};
}

// Disjoint cliques with the given sizes, ids assigned consecutively.
SimplicialComplex disjoint_cliques(const std::vector<int>& sizes)
{
    std::vector<Simplex> s;
    int next = 0;
    for (int k : sizes) {
        std::vector<int> v(static_cast<std::size_t>(k));
        for (int& id : v) id = next++;
        s.emplace_back(v);
    }
    return SimplicialComplex::from_simplices(s);
}

} // namespace

TEST_CASE("QoS groups of a lone triangle and of isolated vertices")
{
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Rng rng(seed);
        const QoSGroups g = make_qos_groups(disjoint_cliques({3}), rng);
        REQUIRE(g.group_count() == 1);
        CHECK(g.size[0] == 3);
        CHECK(g.quota[0] >= 1);
        CHECK(g.quota[0] <= 3);
    }
    Rng rng(1);
    const QoSGroups two = make_qos_groups(disjoint_cliques({1, 1}), rng);
    CHECK(two.group_count() == 2);
    CHECK(two.size == std::vector<int>{1, 1});
    CHECK(two.quota == std::vector<int>{1, 1});
    CHECK(two.total_quota() == 2);
}

TEST_CASE("QoS groups on disjoint cliques reproduce the clique sizes largest first")
{
    const std::vector<int> sizes{8, 7, 6, 6, 5, 3, 2, 2, 2, 1};
    Rng rng(2);
    const QoSGroups g = make_qos_groups(disjoint_cliques(sizes), rng);
    CHECK(g.size == sizes);
    for (int i = 0; i < g.group_count(); ++i) {
        CHECK(g.quota[i] >= 1);
        CHECK(g.quota[i] <= g.size[i]);
    }
}

TEST_CASE("QoS quotas are uniform on 1..size")
{
    std::vector<int> hits(5, 0);
    for (std::uint64_t seed = 0; seed < 5000; ++seed) {
        Rng rng(seed);
        ++hits[make_qos_groups(disjoint_cliques({4}), rng).quota[0]];
    }
    CHECK(hits[0] == 0);
    for (int q = 1; q <= 4; ++q) {
        CHECK(hits[q] > 1100);
        CHECK(hits[q] < 1400);
    }
}

TEST_CASE("QoS groups partition random Rips complexes")
{
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        Rng rng(seed);
        const Scenario s = energy_scenario(rng);
        const QoSGroups g = make_qos_groups(s.x, rng);
        std::vector<int> count(static_cast<std::size_t>(g.group_count()), 0);
        for (int v : s.x.vertices()) {
            const int gid = g.group(v);
            REQUIRE(gid >= 1);
            REQUIRE(gid <= g.group_count());
            ++count[gid - 1];
        }
        CHECK(count == g.size);
        for (int i = 0; i < g.group_count(); ++i) {
            CHECK(g.quota[i] >= 1);
            CHECK(g.quota[i] <= g.size[i]);
        }
        for (std::size_t i = 1; i < g.size.size(); ++i) CHECK(g.size[i - 1] >= g.size[i]);
        // Each group spans a simplex of the complex.
        std::vector<std::vector<int>> members(count.size());
        for (int v : s.x.vertices()) members[g.group(v) - 1].push_back(v);
        for (const auto& m : members) CHECK(s.x.contains(Simplex(m)));
    }
}

TEST_CASE("saturated quotas leave every node on")
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Rng rng(seed);
        const Scenario s = energy_scenario(rng);
        QoSGroups g = make_qos_groups(s.x, rng);
        g.quota = g.size;
        const EnergyResult res = conserve(s.x, s.ns, g, rng);
        CHECK(res.removed.empty());
        CHECK(res.kept == s.ns.ids());
        for (auto [v, r] : res.new_r_cov) CHECK(r <= s.ns.nodes[v].r_cov);
    }
}

TEST_CASE("conserve keeps boundary, quotas, topology, and never grows a radius")
{
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        Rng rng(seed);
        const Scenario s = energy_scenario(rng);
        const QoSGroups g = make_qos_groups(s.x, rng);
        const EnergyResult res = conserve(s.x, s.ns, g, rng);

        for (int b : s.ns.boundary_ids()) CHECK(std::binary_search(res.kept.begin(), res.kept.end(), b));
        std::vector<int> kept_in(static_cast<std::size_t>(g.group_count()), 0);
        for (int v : res.kept) ++kept_in[g.group(v) - 1];
        for (int i = 0; i < g.group_count(); ++i) CHECK(kept_in[i] >= g.quota[i]);
        CHECK(static_cast<int>(res.kept.size()) >= g.total_quota());
        CHECK(res.kept.size() + res.removed.size() == s.ns.size());

        NodeSet after = s.ns;
        REQUIRE(res.new_r_cov.size() == res.kept.size());
        for (auto [v, r] : res.new_r_cov) {
            CHECK(r <= s.ns.nodes[v].r_cov);
            CHECK(r > 0.0);
            after.nodes[v].r_cov = r;
        }
        const SimplicialComplex final_x = rips_from_disks(after, res.kept, RadiusRole::cov);
        CHECK(res.betti == betti(s.x));
        CHECK(betti(final_x) == betti(s.x));
        CHECK(radius_energy(res) <= radius_energy(s.ns));
    }
}

TEST_CASE("the literal loop guard keeps at least as many nodes on average")
{
    double relaxed = 0.0, literal = 0.0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        Rng r1(seed), r2(seed);
        const Scenario s1 = energy_scenario(r1);
        const Scenario s2 = energy_scenario(r2);
        const EnergyResult a = conserve(s1.x, s1.ns, make_qos_groups(s1.x, r1), r1);
        EnergyOptions lit;
        lit.halt_on_first_quota = true;
        const EnergyResult b = conserve(s2.x, s2.ns, make_qos_groups(s2.x, r2), r2, lit);
        relaxed += static_cast<double>(a.kept.size());
        literal += static_cast<double>(b.kept.size());
    }
    CHECK(literal >= relaxed);
}

TEST_CASE("conserve rejects a complex that does not match the nodes")
{
    Rng rng(3);
    const Scenario s = energy_scenario(rng);
    const QoSGroups g = make_qos_groups(s.x, rng);
    const SimplicialComplex partial = delete_vertex(s.x, 0);
    CHECK_THROWS_AS(conserve(partial, s.ns, g, rng), std::invalid_argument);
}

TEST_CASE("radius energy is the sum of squared coverage radii")
{
    NodeSet ns;
    ns.side = 2.0;
    ns.append(Point(0, 0), 1.0, 0.5, 0.5, false);
    ns.append(Point(1, 1), 0.6, 0.3, 0.3, false);
    CHECK(radius_energy(ns) == doctest::Approx(0.34));
    EnergyResult r;
    r.new_r_cov = {{0, 0.1}, {1, 0.2}};
    CHECK(radius_energy(r) == doctest::Approx(0.05));
}
