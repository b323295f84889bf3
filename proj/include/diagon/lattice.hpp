#pragma once

#include <cstddef>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"
#include "polynomial.hpp"
#include "rational.hpp"

namespace diagon {

// Integer matrix with |det| = 1. The translation part is ignored.
inline bool is_unimodular(const Matrix& m) {
    if (!m.is_square() || !m.is_integer()) return false;
    return abs(determinant(m)) == 1;
}

inline bool is_unimodular(const AffineTransform& t) { return is_unimodular(t.matrix); }

// Exactly one nonzero entry per row and column, each +-1: the integer orthogonal matrices.
inline bool is_signed_permutation(const Matrix& m) {
    if (!m.is_square()) return false;
    const std::size_t n = m.rows();
    std::vector<int> column_hits(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        int row_hits = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const Rational& v = m(i, j);
            if (v == 0) continue;
            if (v != 1 && v != -1) return false;
            ++row_hits;
            ++column_hits[j];
        }
        if (row_hits != 1) return false;
    }
    for (int hits : column_hits)
        if (hits != 1) return false;
    return true;
}

// Corners of [-N, N]^k mapped to new coordinates, x -> C^{-1}(x - c).
// Corner j takes -N in coordinate i when bit i of j is set.
inline std::vector<Vector> image_vertices(const AffineTransform& t, long n) {
    if (n < 1) throw DomainError("N must be positive");
    const std::size_t k = t.dimension();
    if (k >= 8 * sizeof(std::size_t) - 1) throw DimensionError("too many dimensions for corner enumeration");
    const Matrix inv = inverse(t.matrix);
    std::vector<Vector> vertices;
    vertices.reserve(std::size_t{1} << k);
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        Vector shifted(k);
        for (std::size_t i = 0; i < k; ++i) shifted[i] = Rational((mask >> i) & 1u ? -n : n) - t.translation[i];
        vertices.push_back(inv * std::span<const Rational>(shifted));
    }
    return vertices;
}

struct ImageVolume {
    Rational pullback;   // volume of {x' : t(x') in the hypercube} = (2N)^k / |det|
    Rational forward;    // (2N)^k * |det|, the hypercube pushed forward through the matrix
    Rational det;
};

inline ImageVolume image_volume(const AffineTransform& t, long n) {
    if (n < 1) throw DomainError("N must be positive");
    const Rational det = determinant(t.matrix);
    if (det == 0) throw DomainError("singular matrix");
    const Rational cube = pow(Rational(2 * n), static_cast<unsigned>(t.dimension()));
    return {cube / abs(det), cube * abs(det), det};
}

} // namespace diagon
