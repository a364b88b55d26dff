#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "toposon/complex.hpp"

namespace toposon {

/// (beta0, beta1): connected components and independent 1-cycles (holes).
struct BettiPair {
    std::size_t beta0 = 0;
    std::size_t beta1 = 0;

    auto operator<=>(const BettiPair&) const = default;
};

/// Dense matrix over GF(2), row-major, 64 columns per word.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const { return (word(r, c) >> (c % 64)) & 1u; }
    void set(std::size_t r, std::size_t c, bool v);
    void flip(std::size_t r, std::size_t c) { word(r, c) ^= std::uint64_t{1} << (c % 64); }

    /// row(dst) ^= row(src)
    void add_row(std::size_t dst, std::size_t src);
    void swap_rows(std::size_t a, std::size_t b);

    std::size_t column_weight(std::size_t c) const;

private:
    std::uint64_t& word(std::size_t r, std::size_t c) { return bits_[r * words_ + c / 64]; }
    std::uint64_t word(std::size_t r, std::size_t c) const { return bits_[r * words_ + c / 64]; }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> bits_;
};

/// Boundary operator from k-chains to (k-1)-chains; rows follow the
/// (k-1)-simplices and columns the k-simplices in storage order.
BitMatrix boundary_matrix(const SimplicialComplex& x, int k);

/// Rank over GF(2) by Gaussian elimination.
std::size_t rank_gf2(BitMatrix m);

/// Rank of the k-th boundary operator by sparse column reduction.
std::size_t boundary_rank(const SimplicialComplex& x, int k);

/// beta0 = s0 - rank d1, beta1 = s1 - rank d1 - rank d2 (GF(2) coefficients).
BettiPair betti(const SimplicialComplex& x);

/// Connected components of the 1-skeleton by union-find.
std::size_t beta0_unionfind(const SimplicialComplex& x);

} // namespace toposon
