#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "toposon/homology.hpp"

using namespace toposon;

namespace {

SimplicialComplex from(std::vector<Simplex> s) { return SimplicialComplex::from_simplices(s); }

std::vector<std::vector<int>> as_rows(const BitMatrix& m)
{
    std::vector<std::vector<int>> rows(m.rows(), std::vector<int>(m.cols(), 0));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) rows[r][c] = m.get(r, c);
    return rows;
}

SimplicialComplex random_graph_complex(std::size_t n, double p, Rng& rng)
{
    NeighborLists nl(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng.uniform() < p) nl[i].push_back(static_cast<int>(j));
    return rips_from_neighbors(nl);
}

} // namespace

TEST_CASE("boundary matrix of a full triangle")
{
    const BitMatrix m = boundary_matrix(from({{0, 1, 2}}), 2);
    CHECK(m.rows() == 3);
    CHECK(m.cols() == 1);
    for (std::size_t r = 0; r < 3; ++r) CHECK(m.get(r, 0));
}

TEST_CASE("boundary matrix of a path is its incidence matrix")
{
    const BitMatrix m = boundary_matrix(from({{0, 1}, {1, 2}}), 1);
    CHECK(m.rows() == 3);
    CHECK(m.cols() == 2);
    CHECK(m.column_weight(0) == 2);
    CHECK(m.column_weight(1) == 2);
    CHECK(m.get(0, 0));
    CHECK(m.get(1, 0));
    CHECK(m.get(1, 1));
    CHECK(m.get(2, 1));
}

TEST_CASE("boundary matrix of K4 at k = 2")
{
    const SimplicialComplex k4 = from({{0, 1, 2, 3}});
    const BitMatrix m = boundary_matrix(k4, 2);
    CHECK(m.rows() == 6);
    CHECK(m.cols() == 4);
    for (std::size_t c = 0; c < 4; ++c) CHECK(m.column_weight(c) == 3);
    CHECK(rank_gf2(m) == 3);
    CHECK(oracle::naive_rank(as_rows(m)) == 3);
    CHECK(as_rows(m) == oracle::naive_boundary(oracle::as_set(k4), 2));
}

TEST_CASE("boundary matrix with no k-simplices has zero columns")
{
    const BitMatrix m = boundary_matrix(from({{0, 1}}), 2);
    CHECK(m.cols() == 0);
    CHECK(rank_gf2(m) == 0);
}

TEST_CASE("rank of zero and identity matrices")
{
    CHECK(rank_gf2(BitMatrix(7, 9)) == 0);
    for (std::size_t n : {1u, 63u, 64u, 65u, 130u}) {
        BitMatrix id(n, n);
        for (std::size_t i = 0; i < n; ++i) id.set(i, i, true);
        CHECK(rank_gf2(id) == n);
    }
}

TEST_CASE("rank of random matrices agrees with naive elimination")
{
    Rng rng(31);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t rows = trial < 100 ? 20 : 1 + rng.index(90);
        const std::size_t cols = trial < 100 ? 20 : 1 + rng.index(90);
        const double density = rng.uniform(0.05, 0.6);
        BitMatrix m(rows, cols);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) m.set(r, c, rng.uniform() < density);
        const std::size_t rank = rank_gf2(m);
        CHECK(rank == oracle::naive_rank(as_rows(m)));
        CHECK(rank <= std::min(rows, cols));
    }
}

TEST_CASE("BitMatrix row operations")
{
    BitMatrix m(2, 70);
    m.set(0, 69, true);
    m.set(1, 3, true);
    m.add_row(1, 0);
    CHECK(m.get(1, 69));
    CHECK(m.get(1, 3));
    m.swap_rows(0, 1);
    CHECK(m.get(0, 3));
    CHECK_FALSE(m.get(1, 3));
    m.flip(1, 69);
    CHECK_FALSE(m.get(1, 69));
}

TEST_CASE("betti numbers of small fixtures")
{
    CHECK(betti(from({{0, 1, 2}})) == BettiPair{1, 0});
    CHECK(betti(from({{0, 1}, {1, 2}, {2, 3}, {0, 3}})) == BettiPair{1, 1});
    CHECK(betti(from({{0, 1, 2}, {3, 4, 5}})) == BettiPair{2, 0});
    CHECK(betti(SimplicialComplex{}) == BettiPair{0, 0});
    CHECK(betti(from({{0, 1, 2, 3}})) == BettiPair{1, 0});
    // Hollow octahedron: beta2 = 1 does not leak into beta1.
    CHECK(betti(from({{0, 2, 4}, {0, 2, 5}, {0, 3, 4}, {0, 3, 5}, {1, 2, 4}, {1, 2, 5}, {1, 3, 4}, {1, 3, 5}})) ==
          BettiPair{1, 0});
    // Two squares sharing an edge.
    CHECK(betti(from({{0, 1}, {1, 2}, {2, 3}, {3, 0}, {1, 4}, {4, 5}, {5, 2}})) == BettiPair{1, 2});
}

TEST_CASE("union-find components")
{
    CHECK(beta0_unionfind(from({{0}, {1}, {2}, {3}, {4}})) == 5);
    CHECK(beta0_unionfind(from({{0, 1}, {1, 2}, {2, 3}})) == 1);
    CHECK(beta0_unionfind(SimplicialComplex{}) == 0);
}

TEST_CASE("union-find and rank-based beta0 agree on random graphs")
{
    Rng rng(32);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.index(50);
        const SimplicialComplex x = random_graph_complex(n, rng.uniform(0.0, 0.15), rng);
        std::vector<std::pair<int, int>> edges;
        for (const Simplex& e : x.simplices(1)) edges.emplace_back(e.vertices()[0], e.vertices()[1]);
        const std::size_t expected = oracle::components(static_cast<int>(n), edges);
        CHECK(beta0_unionfind(x) == expected);
        CHECK(betti(x).beta0 == expected);
    }
}

TEST_CASE("betti agrees with dense naive elimination and the Euler identity")
{
    Rng rng(33);
    for (int trial = 0; trial < 300; ++trial) {
        const NodeSet ns = oracle::random_nodes(1 + rng.index(25), 2.0, rng.uniform(0.15, 0.45), rng);
        const SimplicialComplex x = rips_from_disks(ns, RadiusRole::cov);
        const BettiPair b = betti(x);
        const auto [b0, b1] = oracle::naive_betti(oracle::as_set(x));
        CHECK(b.beta0 == b0);
        CHECK(b.beta1 == b1);
        CHECK(b.beta0 >= 1);
        // beta0 - beta1 = s0 - s1 + rank d2
        const auto lhs = static_cast<long>(b.beta0) - static_cast<long>(b.beta1);
        const auto rhs = static_cast<long>(x.count(0)) - static_cast<long>(x.count(1)) +
                         static_cast<long>(boundary_rank(x, 2));
        CHECK(lhs == rhs);
        for (int k = 1; k <= std::min(x.dimension(), 3); ++k)
            CHECK(boundary_rank(x, k) == rank_gf2(boundary_matrix(x, k)));
    }
}

TEST_CASE("deleting an isolated vertex lowers beta0 by one")
{
    Rng rng(34);
    int checked = 0;
    for (int trial = 0; trial < 300 && checked < 50; ++trial) {
        const NodeSet ns = oracle::random_nodes(12, 2.0, 0.2, rng);
        const SimplicialComplex x = rips_from_disks(ns, RadiusRole::cov);
        const auto adj = vertex_adjacency(x);
        for (int v = 0; v < static_cast<int>(adj.size()); ++v)
            if (x.has_vertex(v) && adj[v].empty()) {
                const BettiPair before = betti(x);
                const BettiPair after = betti(delete_vertex(x, v));
                CHECK(after.beta0 + 1 == before.beta0);
                CHECK(after.beta1 == before.beta1);
                ++checked;
                break;
            }
    }
    CHECK(checked == 50);
}

TEST_CASE("Čech beta1 counts the holes of a rasterized disk union")
{
    Rng rng(35);
    const double r = 0.5;
    int compared = 0;
    for (int trial = 0; trial < 2000 && compared < 25; ++trial) {
        const NodeSet ns = oracle::fenced_nodes(1 + rng.index(25), r, rng);
        if (oracle::near_degenerate(ns, r, 0.02)) continue;
        const auto holes = oracle::raster_holes(ns, r, 400, -0.6, 2.6);
        if (std::any_of(holes.begin(), holes.end(), [](std::size_t h) { return h <= 2; })) continue;
        CHECK(betti(cech(ns, r)).beta1 == holes.size());
        ++compared;
    }
    CHECK(compared == 25);
}
