#include "toposon/homology.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace toposon {

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), words_((cols + 63) / 64), bits_(rows * ((cols + 63) / 64), 0)
{
}

void BitMatrix::set(std::size_t r, std::size_t c, bool v)
{
    const std::uint64_t mask = std::uint64_t{1} << (c % 64);
    if (v)
        word(r, c) |= mask;
    else
        word(r, c) &= ~mask;
}

void BitMatrix::add_row(std::size_t dst, std::size_t src)
{
    for (std::size_t w = 0; w < words_; ++w) bits_[dst * words_ + w] ^= bits_[src * words_ + w];
}

void BitMatrix::swap_rows(std::size_t a, std::size_t b)
{
    if (a == b) return;
    std::swap_ranges(bits_.begin() + static_cast<std::ptrdiff_t>(a * words_),
                     bits_.begin() + static_cast<std::ptrdiff_t>((a + 1) * words_),
                     bits_.begin() + static_cast<std::ptrdiff_t>(b * words_));
}

std::size_t BitMatrix::column_weight(std::size_t c) const
{
    std::size_t n = 0;
    for (std::size_t r = 0; r < rows_; ++r) n += get(r, c);
    return n;
}

namespace {

// Row indices of the facets of each k-simplex, ascending.
std::vector<std::vector<std::size_t>> facet_columns(const SimplicialComplex& x, int k)
{
    std::vector<std::vector<std::size_t>> cols(x.count(k));
    std::vector<int> facet;
    for (std::size_t i = 0; i < x.count(k); ++i) {
        const auto s = x.simplex(k, i);
        auto& col = cols[i];
        for (std::size_t drop = 0; drop < s.size(); ++drop) {
            facet.clear();
            for (std::size_t j = 0; j < s.size(); ++j)
                if (j != drop) facet.push_back(s[j]);
            const auto row = x.find(facet);
            if (row < 0) throw std::logic_error("boundary: complex is not closed under faces");
            col.push_back(static_cast<std::size_t>(row));
        }
        std::sort(col.begin(), col.end());
    }
    return cols;
}

} // namespace

BitMatrix boundary_matrix(const SimplicialComplex& x, int k)
{
    if (k < 1) throw std::invalid_argument("boundary_matrix: k must be >= 1");
    BitMatrix m(x.count(k - 1), x.count(k));
    const auto cols = facet_columns(x, k);
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t r : cols[c]) m.set(r, c, true);
    return m;
}

std::size_t rank_gf2(BitMatrix m)
{
    std::size_t rank = 0;
    for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
        std::size_t pivot = rank;
        while (pivot < m.rows() && !m.get(pivot, c)) ++pivot;
        if (pivot == m.rows()) continue;
        m.swap_rows(rank, pivot);
        for (std::size_t r = rank + 1; r < m.rows(); ++r)
            if (m.get(r, c)) m.add_row(r, rank);
        ++rank;
    }
    return rank;
}

std::size_t boundary_rank(const SimplicialComplex& x, int k)
{
    if (k < 1) throw std::invalid_argument("boundary_rank: k must be >= 1");
    auto cols = facet_columns(x, k);
    // Standard column reduction: a column is reduced against the column that
    // already owns its lowest row until its low is free or it vanishes.
    std::vector<std::ptrdiff_t> owner(x.count(k - 1), -1);
    std::vector<std::size_t> merged;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        auto& col = cols[c];
        while (!col.empty() && owner[col.back()] >= 0) {
            const auto& other = cols[static_cast<std::size_t>(owner[col.back()])];
            merged.clear();
            std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(),
                                          std::back_inserter(merged));
            col.swap(merged);
        }
        if (!col.empty()) {
            owner[col.back()] = static_cast<std::ptrdiff_t>(c);
            ++rank;
        }
    }
    return rank;
}

BettiPair betti(const SimplicialComplex& x)
{
    if (x.empty()) return {};
    const std::size_t rank1 = boundary_rank(x, 1);
    const std::size_t rank2 = x.dimension() >= 2 ? boundary_rank(x, 2) : 0;
    return {x.count(0) - rank1, x.count(1) - rank1 - rank2};
}

std::size_t beta0_unionfind(const SimplicialComplex& x)
{
    const auto vs = x.vertices();
    if (vs.empty()) return 0;
    std::vector<int> parent(static_cast<std::size_t>(vs.back()) + 1);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    std::size_t components = vs.size();
    for (std::size_t i = 0; i < x.count(1); ++i) {
        const auto e = x.simplex(1, i);
        const int a = find(e[0]);
        const int b = find(e[1]);
        if (a != b) {
            parent[a] = b;
            --components;
        }
    }
    return components;
}

} // namespace toposon
