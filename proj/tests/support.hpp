#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "diagon/diagon.hpp"

namespace testing_support {

using namespace diagon;

inline Equation eq(const char* text) { return parse_equation(text); }

// Plain odometer over [-N, N]^k with exact evaluation; independent of the counting module.
inline std::uint64_t brute_count(const Polynomial& p, long n) {
    const std::size_t k = p.nvars();
    std::vector<long> x(k, -n);
    Vector point(k);
    std::uint64_t total = 0;
    while (true) {
        for (std::size_t i = 0; i < k; ++i) point[i] = Rational(x[i]);
        if (evaluate(p, point) == 0) ++total;
        std::size_t i = 0;
        while (i < k && x[i] == n) x[i++] = -n;
        if (i == k) break;
        ++x[i];
    }
    return total;
}

inline Polynomial random_polynomial(std::mt19937_64& rng, std::size_t k, unsigned max_degree, long max_coeff,
                                    std::size_t max_terms) {
    std::uniform_int_distribution<long> coeff(-max_coeff, max_coeff);
    std::uniform_int_distribution<unsigned> exp(0, max_degree);
    std::uniform_int_distribution<std::size_t> terms(1, max_terms);
    Polynomial p(k);
    const std::size_t count = terms(rng);
    for (std::size_t t = 0; t < count; ++t) {
        Monomial m(k);
        unsigned budget = exp(rng);
        for (std::size_t i = 0; i < k && budget > 0; ++i) {
            std::uniform_int_distribution<unsigned> part(0, budget);
            m.exponents[i] = part(rng);
            budget -= m.exponents[i];
        }
        std::shuffle(m.exponents.begin(), m.exponents.end(), rng);
        p.add_term(m, Rational(coeff(rng)));
    }
    return p;
}

inline Rational random_rational(std::mt19937_64& rng, long max_num, long max_den) {
    std::uniform_int_distribution<long> num(-max_num, max_num), den(1, max_den);
    return make_rational(num(rng), den(rng));
}

inline AffineTransform random_invertible(std::mt19937_64& rng, std::size_t k, long max_num, long max_den) {
    while (true) {
        Matrix m(k, k);
        Vector c(k);
        for (std::size_t i = 0; i < k; ++i) {
            c[i] = random_rational(rng, max_num, max_den);
            for (std::size_t j = 0; j < k; ++j) m(i, j) = random_rational(rng, max_num, max_den);
        }
        if (determinant(m) != 0) return AffineTransform(std::move(m), std::move(c));
    }
}

// Random integer matrix with determinant +-1: a product of elementary shears and a signed permutation.
inline Matrix random_unimodular(std::mt19937_64& rng, std::size_t k, int shears = 3) {
    Matrix m = Matrix::identity(k);
    std::uniform_int_distribution<std::size_t> idx(0, k - 1);
    std::uniform_int_distribution<long> factor(-2, 2);
    for (int s = 0; s < shears; ++s) {
        const std::size_t i = idx(rng), j = idx(rng);
        if (i == j) continue;
        Matrix e = Matrix::identity(k);
        e(i, j) = Rational(factor(rng));
        m = m * e;
    }
    std::vector<std::size_t> perm(k);
    for (std::size_t i = 0; i < k; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix p(k, k);
    std::bernoulli_distribution flip(0.5);
    for (std::size_t i = 0; i < k; ++i) p(i, perm[i]) = Rational(flip(rng) ? -1 : 1);
    return m * p;
}

inline SymmetricMatrix random_symmetric(std::mt19937_64& rng, std::size_t k, long bound) {
    std::uniform_int_distribution<long> v(-bound, bound);
    SymmetricMatrix s(k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j) s.set(i, j, Rational(v(rng)));
    return s;
}

} // namespace testing_support
