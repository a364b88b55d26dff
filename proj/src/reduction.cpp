#include "toposon/reduction.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace toposon {

int IndexTable::at(int v) const
{
    const auto it = std::lower_bound(vertex.begin(), vertex.end(), v);
    if (it == vertex.end() || *it != v) throw std::invalid_argument("IndexTable: unknown vertex");
    return index[static_cast<std::size_t>(it - vertex.begin())];
}

int IndexTable::max() const
{
    return index.empty() ? kUnremovable : *std::max_element(index.begin(), index.end());
}

std::vector<int> IndexTable::with_index(int value) const
{
    std::vector<int> out;
    for (std::size_t i = 0; i < vertex.size(); ++i)
        if (index[i] == value) out.push_back(vertex[i]);
    return out;
}

DegreeTable degrees(const SimplicialComplex& x)
{
    const int top = x.dimension();
    if (top < 2) return {};

    // Push the dimension of every simplex down to its facets, top first; a
    // 2-simplex ends up with the largest dimension above it.
    std::vector<std::vector<int>> deg(static_cast<std::size_t>(top) + 1);
    for (int k = 2; k <= top; ++k) deg[k].assign(x.count(k), k);
    std::vector<int> facet;
    for (int k = top; k > 2; --k) {
        for (std::size_t i = 0; i < x.count(k); ++i) {
            const auto s = x.simplex(k, i);
            for (std::size_t drop = 0; drop < s.size(); ++drop) {
                facet.clear();
                for (std::size_t j = 0; j < s.size(); ++j)
                    if (j != drop) facet.push_back(s[j]);
                const auto pos = static_cast<std::size_t>(x.find(facet));
                deg[k - 1][pos] = std::max(deg[k - 1][pos], deg[k][i]);
            }
        }
    }
    return {std::move(deg[2])};
}

IndexTable indices(const SimplicialComplex& x, const DegreeTable& d, std::span<const int> flags)
{
    IndexTable t;
    const auto vs = x.vertices();
    t.vertex.assign(vs.begin(), vs.end());
    constexpr int unset = std::numeric_limits<int>::max();
    t.index.assign(t.vertex.size(), unset);

    auto slot = [&](int v) { return static_cast<std::size_t>(std::lower_bound(t.vertex.begin(), t.vertex.end(), v) - t.vertex.begin()); };
    for (std::size_t i = 0; i < x.count(2); ++i) {
        for (int v : x.simplex(2, i)) {
            int& idx = t.index[slot(v)];
            idx = std::min(idx, d.degree[i]);
        }
    }
    for (int& idx : t.index)
        if (idx == unset) idx = kUnremovable;
    for (int f : flags) {
        const std::size_t s = slot(f);
        if (s < t.vertex.size() && t.vertex[s] == f) t.index[s] = kUnremovable;
    }
    return t;
}

ReductionResult reduce_with_guards(const SimplicialComplex& x, std::span<const int> flags, Rng& rng,
                                   const ReductionGuards& guards)
{
    ReductionResult result;
    result.complex = x;
    result.flagged.assign(flags.begin(), flags.end());
    std::sort(result.flagged.begin(), result.flagged.end());
    result.flagged.erase(std::unique(result.flagged.begin(), result.flagged.end()), result.flagged.end());

    IndexTable index = indices(result.complex, degrees(result.complex), result.flagged);
    std::size_t step = 0;
    while (true) {
        const int max_index = index.max();
        const ReductionState state{result.complex, index, max_index};
        if (guards.stop && guards.stop(state)) break;

        std::vector<int> pool;
        if (max_index != kUnremovable)
            pool = index.with_index(max_index);
        else if (guards.fallback)
            pool = guards.fallback(state);
        if (pool.empty()) break;

        const int w = pool[rng.index(pool.size())];
        SimplicialComplex tentative = delete_vertex(result.complex, w);
        const bool vetoed = guards.veto && guards.veto(tentative, w);

        TraceStep ts;
        if (guards.trace) ts = TraceStep{++step, w, max_index, !vetoed, {}};
        if (vetoed) {
            result.flagged.insert(std::lower_bound(result.flagged.begin(), result.flagged.end(), w), w);
            const auto it = std::lower_bound(index.vertex.begin(), index.vertex.end(), w);
            index.index[static_cast<std::size_t>(it - index.vertex.begin())] = kUnremovable;
            if (guards.trace) ts.betti = betti(tentative);
        } else {
            result.complex = std::move(tentative);
            result.removed.push_back(w);
            if (guards.on_commit) guards.on_commit(w);
            index = indices(result.complex, degrees(result.complex), result.flagged);
            if (guards.trace) ts.betti = betti(result.complex);
        }
        if (guards.trace) result.trace.push_back(ts);
    }
    return result;
}

ReductionResult reduce(const SimplicialComplex& x, std::span<const int> flags, Rng& rng, bool trace)
{
    const BettiPair target = betti(x);
    ReductionGuards guards;
    guards.stop = [](const ReductionState& s) { return s.max_index <= 2; };
    guards.veto = [target](const SimplicialComplex& tentative, int) { return betti(tentative) != target; };
    guards.trace = trace;
    return reduce_with_guards(x, flags, rng, guards);
}

} // namespace toposon
