#pragma once

#include <functional>
#include <span>
#include <vector>

#include "toposon/complex.hpp"
#include "toposon/homology.hpp"
#include "toposon/rng.hpp"

namespace toposon {

/// Index of a vertex that may not be removed: flagged, boundary, or in no
/// 2-simplex.
inline constexpr int kUnremovable = -1;

/// Degree of each 2-simplex (aligned with the complex's 2-simplex order): the
/// dimension of the largest simplex containing it.
struct DegreeTable {
    std::vector<int> degree;
};

/// Per-vertex index: minimum degree over the vertex's 2-cofaces.
struct IndexTable {
    std::vector<int> vertex; // sorted ids
    std::vector<int> index;  // aligned with `vertex`

    int at(int v) const;
    int max() const;
    /// Vertices whose index equals `value`, ascending.
    std::vector<int> with_index(int value) const;
};

DegreeTable degrees(const SimplicialComplex& x);

/// Flagged vertices and vertices in no 2-simplex get kUnremovable.
IndexTable indices(const SimplicialComplex& x, const DegreeTable& d, std::span<const int> flags);

/// Snapshot handed to the stop guard before every iteration.
struct ReductionState {
    const SimplicialComplex& complex;
    const IndexTable& index;
    int max_index;
};

struct TraceStep {
    std::size_t step = 0;
    int vertex = 0;
    int index = 0;
    bool removed = false;
    BettiPair betti;
};

struct ReductionResult {
    SimplicialComplex complex;
    std::vector<int> removed;
    std::vector<int> flagged; // includes the initial flags
    std::vector<TraceStep> trace;
};

/// Hooks that specialise the removal loop.
///
/// The loop runs while `stop` is false. Each iteration draws a uniformly
/// random vertex of maximal index; when no vertex has a valid index the
/// `fallback` (if any) supplies the candidate pool instead, and an empty pool
/// ends the loop. A candidate for which `veto` returns true is flagged,
/// otherwise its deletion is committed and `on_commit` is called.
struct ReductionGuards {
    std::function<bool(const ReductionState&)> stop;
    std::function<bool(const SimplicialComplex& tentative, int candidate)> veto;
    std::function<void(int)> on_commit;
    std::function<std::vector<int>(const ReductionState&)> fallback;
    bool trace = false;
};

ReductionResult reduce_with_guards(const SimplicialComplex& x, std::span<const int> flags, Rng& rng,
                                   const ReductionGuards& guards);

/// Removes vertices of maximal index while that index exceeds 2, keeping a
/// removal only when (beta0, beta1) is unchanged; otherwise the vertex is
/// flagged for the rest of the run.
ReductionResult reduce(const SimplicialComplex& x, std::span<const int> flags, Rng& rng, bool trace = false);

} // namespace toposon
