#include "toposon/complex.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

namespace toposon {

Simplex::Simplex(std::vector<int> vertices) : vertices_(std::move(vertices))
{
    std::sort(vertices_.begin(), vertices_.end());
    if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end())
        throw std::invalid_argument("Simplex: duplicate vertex");
}

bool Simplex::contains(int v) const
{
    return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

std::size_t SimplicialComplex::count(int k) const
{
    if (k < 0 || k >= static_cast<int>(flat_.size())) return 0;
    return flat_[k].size() / static_cast<std::size_t>(k + 1);
}

std::size_t SimplicialComplex::total_count() const
{
    std::size_t n = 0;
    for (int k = 0; k <= dimension(); ++k) n += count(k);
    return n;
}

std::span<const int> SimplicialComplex::simplex(int k, std::size_t i) const
{
    const std::size_t w = static_cast<std::size_t>(k) + 1;
    return std::span<const int>(flat_[k].data() + i * w, w);
}

std::ptrdiff_t SimplicialComplex::find(std::span<const int> s) const
{
    const int k = static_cast<int>(s.size()) - 1;
    if (k < 0 || k > dimension()) return -1;
    std::size_t lo = 0;
    std::size_t hi = count(k);
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        const auto row = simplex(k, mid);
        if (std::lexicographical_compare(row.begin(), row.end(), s.begin(), s.end()))
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo < count(k) && std::equal(s.begin(), s.end(), simplex(k, lo).begin())) return static_cast<std::ptrdiff_t>(lo);
    return -1;
}

bool SimplicialComplex::has_vertex(int v) const
{
    const auto vs = vertices();
    return std::binary_search(vs.begin(), vs.end(), v);
}

std::vector<Simplex> SimplicialComplex::simplices(int k) const
{
    std::vector<Simplex> out;
    out.reserve(count(k));
    for (std::size_t i = 0; i < count(k); ++i) {
        const auto s = simplex(k, i);
        out.emplace_back(std::vector<int>(s.begin(), s.end()));
    }
    return out;
}

SimplicialComplex SimplicialComplex::from_sorted_flat(std::vector<std::vector<int>> flat)
{
    while (!flat.empty() && flat.back().empty()) flat.pop_back();
    for (std::size_t k = 0; k < flat.size(); ++k) {
        const std::size_t w = k + 1;
        if (flat[k].size() % w != 0) throw std::logic_error("SimplicialComplex: ragged storage");
        for (std::size_t i = w; i < flat[k].size(); i += w) {
            const auto prev = flat[k].begin() + static_cast<std::ptrdiff_t>(i - w);
            const auto cur = flat[k].begin() + static_cast<std::ptrdiff_t>(i);
            if (!std::lexicographical_compare(prev, cur, cur, cur + static_cast<std::ptrdiff_t>(w)))
                throw std::logic_error("SimplicialComplex: simplices not strictly sorted");
        }
    }
    SimplicialComplex x;
    x.flat_ = std::move(flat);
    return x;
}

SimplicialComplex SimplicialComplex::from_simplices(std::span<const Simplex> simplices)
{
    std::vector<std::set<std::vector<int>>> faces;
    for (const Simplex& s : simplices) {
        const auto vs = s.vertices();
        const std::size_t m = vs.size();
        if (m == 0) continue;
        if (m > 30) throw std::invalid_argument("from_simplices: simplex too large for face expansion");
        if (faces.size() < m) faces.resize(m);
        for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
            std::vector<int> face;
            for (std::size_t b = 0; b < m; ++b)
                if (mask & (1u << b)) face.push_back(vs[b]);
            faces[face.size() - 1].insert(std::move(face));
        }
    }
    std::vector<std::vector<int>> flat(faces.size());
    for (std::size_t k = 0; k < faces.size(); ++k)
        for (const auto& f : faces[k]) flat[k].insert(flat[k].end(), f.begin(), f.end());
    return from_sorted_flat(std::move(flat));
}

SimplicialComplex SimplicialComplex::filter(const std::function<bool(int, std::span<const int>)>& keep) const
{
    std::vector<std::vector<int>> flat(flat_.size());
    for (int k = 0; k <= dimension(); ++k) {
        for (std::size_t i = 0; i < count(k); ++i) {
            const auto s = simplex(k, i);
            if (keep(k, s)) flat[k].insert(flat[k].end(), s.begin(), s.end());
        }
    }
    while (!flat.empty() && flat.back().empty()) flat.pop_back();
    SimplicialComplex x;
    x.flat_ = std::move(flat);
    return x;
}

void SimplicialComplex::check_closure() const
{
    std::vector<int> facet;
    for (int k = 1; k <= dimension(); ++k) {
        for (std::size_t i = 0; i < count(k); ++i) {
            const auto s = simplex(k, i);
            for (std::size_t drop = 0; drop < s.size(); ++drop) {
                facet.clear();
                for (std::size_t j = 0; j < s.size(); ++j)
                    if (j != drop) facet.push_back(s[j]);
                if (!contains(facet)) throw std::logic_error("SimplicialComplex: missing facet");
            }
        }
    }
}

namespace {

using TriangleTest = std::function<bool(int, int, int)>;

// Enumerates cliques by extending with increasing ids only, so each clique is
// emitted once and, per dimension, in lexicographic order.
class CliqueExpander {
public:
    CliqueExpander(const std::vector<std::vector<int>>& up, int max_dim, const TriangleTest* triangle_ok)
        : up_(up), max_dim_(max_dim), triangle_ok_(triangle_ok)
    {
    }

    std::vector<std::vector<int>> run(std::span<const int> vertices)
    {
        for (int v : vertices) {
            clique_.assign(1, v);
            expand(up_[v]);
        }
        return std::move(flat_);
    }

private:
    void expand(const std::vector<int>& candidates)
    {
        const std::size_t k = clique_.size() - 1;
        if (flat_.size() <= k) flat_.resize(k + 1);
        flat_[k].insert(flat_[k].end(), clique_.begin(), clique_.end());
        if (static_cast<int>(k) >= max_dim_) return;

        std::vector<int> next;
        for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
            const int w = candidates[ci];
            if (triangle_ok_ != nullptr && !triangles_ok(w)) continue;
            next.clear();
            const auto& wn = up_[w];
            std::set_intersection(candidates.begin() + static_cast<std::ptrdiff_t>(ci) + 1, candidates.end(),
                                  wn.begin(), wn.end(), std::back_inserter(next));
            clique_.push_back(w);
            expand(next);
            clique_.pop_back();
        }
    }

    bool triangles_ok(int w) const
    {
        for (std::size_t a = 0; a < clique_.size(); ++a)
            for (std::size_t b = a + 1; b < clique_.size(); ++b)
                if (!(*triangle_ok_)(clique_[a], clique_[b], w)) return false;
        return true;
    }

    const std::vector<std::vector<int>>& up_;
    int max_dim_;
    const TriangleTest* triangle_ok_;
    std::vector<int> clique_;
    std::vector<std::vector<int>> flat_;
};

SimplicialComplex expand_cliques(std::span<const int> sorted_vertices, std::span<const std::pair<int, int>> edges,
                                 int max_dim, const TriangleTest* triangle_ok = nullptr)
{
    if (sorted_vertices.empty()) return {};
    const int max_id = sorted_vertices.back();
    std::vector<std::vector<int>> up(static_cast<std::size_t>(max_id) + 1);
    for (auto [u, v] : edges) {
        if (u == v) continue;
        if (u > v) std::swap(u, v);
        up[u].push_back(v);
    }
    for (auto& row : up) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }
    CliqueExpander expander(up, max_dim, triangle_ok);
    return SimplicialComplex::from_sorted_flat(expander.run(sorted_vertices));
}

std::vector<int> sorted_unique(std::span<const int> ids)
{
    std::vector<int> out(ids.begin(), ids.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace

SimplicialComplex clique_complex(std::span<const int> vertices, std::span<const std::pair<int, int>> edges, int max_dim)
{
    const auto vs = sorted_unique(vertices);
    for (auto [u, v] : edges)
        if (!std::binary_search(vs.begin(), vs.end(), u) || !std::binary_search(vs.begin(), vs.end(), v))
            throw std::invalid_argument("clique_complex: edge endpoint is not a vertex");
    return expand_cliques(vs, edges, max_dim);
}

SimplicialComplex rips_from_neighbors(const NeighborLists& nl, int max_dim)
{
    const int n = static_cast<int>(nl.size());
    std::vector<int> vertices(nl.size());
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u) {
        vertices[u] = u;
        for (int v : nl[u]) {
            if (v < 0 || v >= n) throw std::invalid_argument("rips_from_neighbors: neighbor id out of range");
            if (v != u) edges.emplace_back(u, v);
        }
    }
    return expand_cliques(vertices, edges, max_dim);
}

SimplicialComplex rips_from_disks(const NodeSet& ns, std::span<const int> ids, RadiusRole role, int max_dim)
{
    const auto vs = sorted_unique(ids);
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const Node& a = ns.nodes[vs[i]];
        for (std::size_t j = i + 1; j < vs.size(); ++j) {
            const Node& b = ns.nodes[vs[j]];
            const double reach = a.radius(role) + b.radius(role);
            if ((a.pos - b.pos).squaredNorm() < reach * reach) edges.emplace_back(a.id, b.id);
        }
    }
    return expand_cliques(vs, edges, max_dim);
}

SimplicialComplex rips_from_disks(const NodeSet& ns, RadiusRole role, int max_dim)
{
    const auto ids = ns.ids();
    return rips_from_disks(ns, ids, role, max_dim);
}

SimplicialComplex cech(const NodeSet& ns, double r, int max_dim)
{
    if (!(r > 0.0)) throw std::invalid_argument("cech: radius must be positive");
    const auto ids = ns.ids();
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < ns.size(); ++i)
        for (std::size_t j = i + 1; j < ns.size(); ++j)
            if ((ns.nodes[i].pos - ns.nodes[j].pos).norm() / 2.0 <= r)
                edges.emplace_back(static_cast<int>(i), static_cast<int>(j));

    // Helly in the plane: disks share a point iff every three of them do, so
    // beyond triangles a tuple is a simplex exactly when all its facets are.
    const TriangleTest triangle_ok = [&](int a, int b, int c) {
        const Point pts[3] = {ns.nodes[a].pos, ns.nodes[b].pos, ns.nodes[c].pos};
        return min_enclosing_ball_radius<double>(std::span<const Point>(pts, 3)) <= r;
    };
    return expand_cliques(ids, edges, max_dim, &triangle_ok);
}

SimplicialComplex delete_vertex(const SimplicialComplex& x, int v)
{
    if (!x.has_vertex(v)) throw std::invalid_argument("delete_vertex: unknown vertex");
    return x.filter([v](int, std::span<const int> s) { return std::find(s.begin(), s.end(), v) == s.end(); });
}

SimplicialComplex induced_subcomplex(const SimplicialComplex& x, std::span<const int> keep)
{
    return x.filter([keep](int, std::span<const int> s) {
        return std::all_of(s.begin(), s.end(), [&](int v) { return std::binary_search(keep.begin(), keep.end(), v); });
    });
}

std::vector<Simplex> maximal_simplices(const SimplicialComplex& x, Rng* rng)
{
    std::vector<Simplex> out;
    std::vector<int> facet;
    for (int k = x.dimension(); k >= 0; --k) {
        std::vector<char> covered(x.count(k), 0);
        if (k < x.dimension()) {
            for (std::size_t i = 0; i < x.count(k + 1); ++i) {
                const auto s = x.simplex(k + 1, i);
                for (std::size_t drop = 0; drop < s.size(); ++drop) {
                    facet.clear();
                    for (std::size_t j = 0; j < s.size(); ++j)
                        if (j != drop) facet.push_back(s[j]);
                    covered[static_cast<std::size_t>(x.find(facet))] = 1;
                }
            }
        }
        const std::size_t first = out.size();
        for (std::size_t i = 0; i < x.count(k); ++i) {
            if (covered[i]) continue;
            const auto s = x.simplex(k, i);
            out.emplace_back(std::vector<int>(s.begin(), s.end()));
        }
        if (rng != nullptr) rng->shuffle(out.begin() + static_cast<std::ptrdiff_t>(first), out.end());
    }
    return out;
}

std::vector<std::vector<int>> vertex_adjacency(const SimplicialComplex& x)
{
    const auto vs = x.vertices();
    std::vector<std::vector<int>> adj(vs.empty() ? 0 : static_cast<std::size_t>(vs.back()) + 1);
    for (std::size_t i = 0; i < x.count(1); ++i) {
        const auto e = x.simplex(1, i);
        adj[e[0]].push_back(e[1]);
        adj[e[1]].push_back(e[0]);
    }
    for (auto& row : adj) std::sort(row.begin(), row.end());
    return adj;
}

void write_complex(std::ostream& out, const SimplicialComplex& x)
{
    for (int k = 0; k <= x.dimension(); ++k) {
        for (std::size_t i = 0; i < x.count(k); ++i) {
            const auto s = x.simplex(k, i);
            for (std::size_t j = 0; j < s.size(); ++j) out << (j ? " " : "") << s[j];
            out << '\n';
        }
    }
}

SimplicialComplex read_complex(std::istream& in)
{
    std::vector<Simplex> simplices;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::vector<int> ids;
        int id = 0;
        while (fields >> id) ids.push_back(id);
        if (!fields.eof()) throw std::runtime_error("complex: malformed line '" + line + "'");
        if (!ids.empty()) simplices.emplace_back(std::move(ids));
    }
    return SimplicialComplex::from_simplices(simplices);
}

} // namespace toposon
