#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "toposon/geometry.hpp"
#include "toposon/rng.hpp"

namespace toposon {

/// A k-simplex: k+1 strictly increasing vertex ids.
class Simplex {
public:
    Simplex() = default;
    /// Sorts the ids; throws std::invalid_argument on duplicates.
    explicit Simplex(std::vector<int> vertices);
    Simplex(std::initializer_list<int> vertices) : Simplex(std::vector<int>(vertices)) {}

    int dim() const { return static_cast<int>(vertices_.size()) - 1; }
    std::size_t size() const { return vertices_.size(); }
    std::span<const int> vertices() const { return vertices_; }
    bool contains(int v) const;

    auto operator<=>(const Simplex&) const = default;

private:
    std::vector<int> vertices_;
};

/// Per-node neighbor ids; symmetrized before use.
using NeighborLists = std::vector<std::vector<int>>;

inline constexpr int kUnboundedDim = std::numeric_limits<int>::max();

/// Abstract simplicial complex, closed under faces.
///
/// Simplices of each dimension k are stored flat, (k+1) ids per simplex, in
/// lexicographic order, so a simplex is addressed by (k, position) and looked
/// up by binary search.
class SimplicialComplex {
public:
    SimplicialComplex() = default;

    /// Closure of the given simplices.
    static SimplicialComplex from_simplices(std::span<const Simplex> simplices);

    /// -1 for the empty complex.
    int dimension() const { return static_cast<int>(flat_.size()) - 1; }
    int clique_number() const { return dimension() + 1; }
    bool empty() const { return flat_.empty(); }

    std::size_t count(int k) const;
    std::size_t total_count() const;
    std::span<const int> simplex(int k, std::size_t i) const;
    std::span<const int> vertices() const { return count(0) ? std::span<const int>(flat_[0]) : std::span<const int>(); }

    /// Position of `s` among the simplices of its dimension, or -1.
    std::ptrdiff_t find(std::span<const int> s) const;
    bool contains(std::span<const int> s) const { return find(s) >= 0; }
    bool contains(const Simplex& s) const { return contains(s.vertices()); }
    bool has_vertex(int v) const;

    std::vector<Simplex> simplices(int k) const;

    bool operator==(const SimplicialComplex&) const = default;

    /// Builds from per-dimension flat arrays that are already closed and sorted.
    static SimplicialComplex from_sorted_flat(std::vector<std::vector<int>> flat);

    /// Keeps the simplices for which `keep(k, simplex)` holds. The predicate
    /// must preserve closure (e.g. a vertex filter).
    SimplicialComplex filter(const std::function<bool(int, std::span<const int>)>& keep) const;

    /// Throws std::logic_error if some facet of a stored simplex is missing.
    void check_closure() const;

private:
    std::vector<std::vector<int>> flat_;
};

/// Clique complex of the symmetrized neighbor graph on ids 0..N-1.
SimplicialComplex rips_from_neighbors(const NeighborLists& nl, int max_dim = kUnboundedDim);

/// Clique complex of an undirected graph given by its vertex ids and edges.
SimplicialComplex clique_complex(std::span<const int> vertices, std::span<const std::pair<int, int>> edges,
                                 int max_dim = kUnboundedDim);

/// Vietoris-Rips complex: edge (u, v) iff |u - v| < r(u) + r(v).
SimplicialComplex rips_from_disks(const NodeSet& ns, RadiusRole role, int max_dim = kUnboundedDim);

/// Vietoris-Rips complex restricted to the listed node ids.
SimplicialComplex rips_from_disks(const NodeSet& ns, std::span<const int> ids, RadiusRole role,
                                  int max_dim = kUnboundedDim);

/// Čech complex of equal disks of radius r: a tuple is a simplex iff its
/// minimum enclosing ball has radius <= r.
SimplicialComplex cech(const NodeSet& ns, double r, int max_dim = kUnboundedDim);

/// Removes every simplex containing v. Throws std::invalid_argument if v is
/// not a vertex.
SimplicialComplex delete_vertex(const SimplicialComplex& x, int v);

/// Subcomplex of simplices whose vertices all lie in `keep` (sorted ids).
SimplicialComplex induced_subcomplex(const SimplicialComplex& x, std::span<const int> keep);

/// Simplices with no proper coface, largest first. Ties in size are shuffled
/// with `rng` when given, else kept in lexicographic order.
std::vector<Simplex> maximal_simplices(const SimplicialComplex& x, Rng* rng = nullptr);

/// 1-skeleton adjacency indexed by vertex id (size = largest id + 1).
std::vector<std::vector<int>> vertex_adjacency(const SimplicialComplex& x);

// One simplex per line, ids space separated, dimension ascending.
void write_complex(std::ostream& out, const SimplicialComplex& x);
SimplicialComplex read_complex(std::istream& in);

} // namespace toposon
