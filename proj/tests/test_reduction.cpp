#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "toposon/reduction.hpp"

using namespace toposon;

namespace {

SimplicialComplex from(std::vector<Simplex> s) { return SimplicialComplex::from_simplices(s); }

// Dense Rips complex of the frequency scenario at the given seed.
SimplicialComplex scenario_complex(std::uint64_t seed)
{
    Rng rng(seed);
    NodeSet ns = sample_poisson(12.0, 2.0, rng);
    ns = assign_radii_uniform(std::move(ns), 0.2, 2.0 / std::sqrt(std::numbers::pi * 12.0), rng);
    return rips_from_disks(ns, RadiusRole::comm);
}

std::vector<int> brute_degrees(const SimplicialComplex& x)
{
    const auto all = oracle::as_set(x);
    std::vector<int> out;
    for (const auto& t : oracle::of_dim(all, 2)) {
        int d = 2;
        for (const auto& s : all)
            if (std::includes(s.begin(), s.end(), t.begin(), t.end())) d = std::max(d, static_cast<int>(s.size()) - 1);
        out.push_back(d);
    }
    return out;
}

} // namespace

TEST_CASE("degrees of small fixtures")
{
    CHECK(degrees(from({{0, 1, 2}})).degree == std::vector<int>{2});
    CHECK(degrees(from({{0, 1, 2, 3}})).degree == std::vector<int>(4, 3));
    const SimplicialComplex k5 = from({{0, 1, 2, 3, 4}});
    CHECK(degrees(k5).degree == std::vector<int>(10, 4));
    CHECK(degrees(k5).degree == brute_degrees(k5));
    CHECK(degrees(from({{0, 1}})).degree.empty());
}

TEST_CASE("degrees agree with a brute-force containment scan")
{
    Rng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        const SimplicialComplex x = rips_from_disks(oracle::random_nodes(20, 2.0, 0.4, rng), RadiusRole::cov);
        const DegreeTable d = degrees(x);
        CHECK(d.degree == brute_degrees(x));
        for (int v : d.degree) CHECK(v >= 2);
    }
}

TEST_CASE("indices of small fixtures")
{
    const SimplicialComplex k4 = from({{0, 1, 2, 3}});
    const IndexTable i4 = indices(k4, degrees(k4), {});
    for (int v = 0; v < 4; ++v) CHECK(i4.at(v) == 3);
    CHECK(i4.max() == 3);

    const SimplicialComplex tri = from({{0, 1, 2}});
    const std::vector<int> flag{1};
    const IndexTable it = indices(tri, degrees(tri), flag);
    CHECK(it.at(0) == 2);
    CHECK(it.at(1) == kUnremovable);
    CHECK(it.at(2) == 2);

    // Vertex 3 lies on a lone triangle and on a K4 face.
    const SimplicialComplex mixed = from({{0, 1, 2, 3}, {3, 4, 5}});
    const IndexTable im = indices(mixed, degrees(mixed), {});
    CHECK(im.at(3) == 2);
    CHECK(im.at(0) == 3);
    CHECK(im.with_index(3) == std::vector<int>{0, 1, 2});
}

TEST_CASE("vertices in no 2-simplex are unremovable")
{
    const SimplicialComplex x = from({{0, 1, 2}, {2, 3}, {4}});
    const IndexTable it = indices(x, degrees(x), {});
    CHECK(it.at(3) == kUnremovable);
    CHECK(it.at(4) == kUnremovable);
    CHECK(it.at(2) == 2);
}

TEST_CASE("reduce: lone triangle is untouched, K4 loses one vertex")
{
    Rng rng(42);
    const ReductionResult tri = reduce(from({{0, 1, 2}}), {}, rng);
    CHECK(tri.removed.empty());
    CHECK(tri.complex == from({{0, 1, 2}}));

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng r(seed);
        const ReductionResult k4 = reduce(from({{0, 1, 2, 3}}), {}, r);
        REQUIRE(k4.removed.size() == 1);
        CHECK(k4.complex.count(2) == 1);
        CHECK(k4.complex.dimension() == 2);
        CHECK(betti(k4.complex) == BettiPair{1, 0});
    }
}

TEST_CASE("reduce picks uniformly among maximal-index vertices")
{
    std::vector<int> hits(4, 0);
    for (std::uint64_t seed = 0; seed < 4000; ++seed) {
        Rng rng(seed);
        ++hits[reduce(from({{0, 1, 2, 3}}), {}, rng).removed.at(0)];
    }
    for (int h : hits) {
        CHECK(h > 900);
        CHECK(h < 1100);
    }
}

TEST_CASE("reduce_with_guards: always-stop and always-veto")
{
    const SimplicialComplex k5 = from({{0, 1, 2, 3, 4}});
    Rng rng(43);
    ReductionGuards stop_now;
    stop_now.stop = [](const ReductionState&) { return true; };
    const ReductionResult a = reduce_with_guards(k5, {}, rng, stop_now);
    CHECK(a.complex == k5);
    CHECK(a.removed.empty());

    ReductionGuards veto_all;
    veto_all.stop = [](const ReductionState& s) { return s.max_index <= 2; };
    veto_all.veto = [](const SimplicialComplex&, int) { return true; };
    const ReductionResult b = reduce_with_guards(k5, {}, rng, veto_all);
    CHECK(b.complex == k5);
    CHECK(b.removed.empty());
    CHECK(b.flagged == std::vector<int>{0, 1, 2, 3, 4});
}

TEST_CASE("reduce equals reduce_with_guards with the Betti veto, seed by seed")
{
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const SimplicialComplex x = scenario_complex(seed);
        const BettiPair target = betti(x);
        ReductionGuards g;
        g.stop = [](const ReductionState& s) { return s.max_index <= 2; };
        g.veto = [target](const SimplicialComplex& t, int) { return betti(t) != target; };
        Rng r1(seed), r2(seed);
        const ReductionResult a = reduce(x, {}, r1);
        const ReductionResult b = reduce_with_guards(x, {}, r2, g);
        CHECK(a.complex == b.complex);
        CHECK(a.removed == b.removed);
    }
}

TEST_CASE("reduce matches a naive set-based reduction, seed by seed")
{
    std::size_t total_removed = 0;
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        Rng gen(seed + 1000);
        const NodeSet ns = oracle::random_nodes(8 + gen.index(10), 1.5, 0.35, gen);
        const SimplicialComplex x = rips_from_disks(ns, RadiusRole::cov);
        std::vector<int> flags;
        for (int v = 0; v < static_cast<int>(ns.size()); ++v)
            if (gen.uniform() < 0.15) flags.push_back(v);
        Rng r1(seed), r2(seed);
        const ReductionResult lib = reduce(x, flags, r1);
        const oracle::NaiveReduction naive = oracle::naive_reduce(oracle::as_set(x), flags, r2);
        CHECK(oracle::as_set(lib.complex) == naive.complex);
        CHECK(lib.removed == naive.removed);
        total_removed += lib.removed.size();
    }
    CHECK(total_removed > 0);
}

TEST_CASE("reduce preserves Betti numbers, never removes flags, and is idempotent")
{
    Rng gen(44);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 5 + gen.index(56);
        const NodeSet ns = oracle::random_nodes(n, 2.0, gen.uniform(0.15, 0.3), gen);
        const SimplicialComplex x = rips_from_disks(ns, RadiusRole::cov);
        std::vector<int> flags;
        for (int v = 0; v < static_cast<int>(n); ++v)
            if (gen.uniform() < 0.2) flags.push_back(v);

        Rng rng(static_cast<std::uint64_t>(trial));
        const ReductionResult res = reduce(x, flags, rng);
        CHECK(betti(res.complex) == betti(x));
        CHECK(res.removed.size() <= x.count(0) - flags.size());
        for (int f : flags) CHECK(res.complex.has_vertex(f));
        CHECK(indices(res.complex, degrees(res.complex), res.flagged).max() <= 2);
        CHECK(res.complex == induced_subcomplex(x, res.complex.vertices()));

        Rng again(7);
        const ReductionResult twice = reduce(res.complex, res.flagged, again);
        CHECK(twice.removed.empty());
    }
}

TEST_CASE("trace records every iteration")
{
    const SimplicialComplex x = scenario_complex(5);
    Rng rng(5);
    const ReductionResult res = reduce(x, {}, rng, true);
    std::size_t removed = 0;
    for (std::size_t i = 0; i < res.trace.size(); ++i) {
        const TraceStep& t = res.trace[i];
        CHECK(t.step == i + 1);
        CHECK(t.index >= 3);
        if (t.removed) {
            ++removed;
            CHECK(t.betti == betti(x));
        } else {
            CHECK(t.betti != betti(x));
        }
    }
    CHECK(removed == res.removed.size());
}
