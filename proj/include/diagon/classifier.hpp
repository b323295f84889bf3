#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "diagonalizer.hpp"
#include "errors.hpp"
#include "parser.hpp"
#include "polynomial.hpp"
#include "rational.hpp"
#include "surface.hpp"

namespace diagon {

struct Signature {
    std::size_t positive = 0;
    std::size_t negative = 0;
    std::size_t zero = 0;

    std::size_t size() const { return positive + negative + zero; }
    bool operator==(const Signature&) const = default;
};

inline Signature signature(std::span<const Rational> coefficients) {
    Signature s;
    for (const auto& c : coefficients) {
        if (c > 0)
            ++s.positive;
        else if (c < 0)
            ++s.negative;
        else
            ++s.zero;
    }
    return s;
}

struct NormalFormCase {
    int index;     // 1..8
    bool solvable; // nontrivial integer solutions exist
    bool operator==(const NormalFormCase&) const = default;
};

// Ternary forms whose angular minors are all +-1: the case number is 1 + 4[M1 = 1] + 2[M2 = 1] + [M3 = 1].
// The two sign-definite outcomes (cases 3 and 8) admit only the trivial solution.
inline NormalFormCase normal_form_case(std::span<const Rational> minors) {
    if (minors.size() != 3) throw DimensionError("normal_form_case expects three minors");
    int index = 1;
    const int weights[3] = {4, 2, 1};
    for (std::size_t i = 0; i < 3; ++i) {
        if (minors[i] != 1 && minors[i] != -1) throw DomainError("normal_form_case requires |M_i| = 1");
        if (minors[i] == 1) index += weights[i];
    }
    return {index, index != 3 && index != 8};
}

inline SurfaceClass surface_class(const Equation& e) {
    if (e.lhs.is_diagonal()) return classify_diagonal(e.lhs);
    return diagonalize(e).surface;
}

enum class Formula {
    even_thue,         // R << N^{k-m}
    even_paraboloid,   // R << N^{k-m}, m over the power terms
    binary_thue,       // R = O(1)
    odd_thue,          // R << N^{k-2}
    odd_paraboloid,    // R << N^{k-2}
    half_even_k,       // R << N^{k/2}, k even >= 6
    half_odd_k,        // R << N^{[k/2]+1}, k odd >= 7
    generic,           // R << N^{k-1}
    pila,              // R << N^{k-2+1/n}
};

inline std::string to_string(Formula f) {
    switch (f) {
        case Formula::even_thue: return "even-thue";
        case Formula::even_paraboloid: return "even-paraboloid";
        case Formula::binary_thue: return "binary-thue";
        case Formula::odd_thue: return "odd-thue";
        case Formula::odd_paraboloid: return "odd-paraboloid";
        case Formula::half_even_k: return "half-even-k";
        case Formula::half_odd_k: return "half-odd-k";
        case Formula::generic: return "generic";
        case Formula::pila: return "pila";
    }
    return "generic";
}

inline std::optional<Formula> formula_from_string(std::string_view s) {
    for (auto f : {Formula::even_thue, Formula::even_paraboloid, Formula::binary_thue, Formula::odd_thue,
                   Formula::odd_paraboloid, Formula::half_even_k, Formula::half_odd_k, Formula::generic,
                   Formula::pila})
        if (to_string(f) == s) return f;
    return std::nullopt;
}

// Upper-bound exponent of N (epsilon omitted) for the solution count in [-N, N]^k.
struct ExponentPrediction {
    Rational exponent;
    Formula formula = Formula::generic;
    Rational generic_bound;              // k - 1
    std::optional<Rational> pila_bound;  // k - 2 + 1/n, for n > 2 and k > 2
};

inline ExponentPrediction predicted_exponent(const Equation& e) {
    if (!e.lhs.is_diagonal()) throw DomainError("predicted_exponent expects a diagonal equation");
    const DiagonalShape shape = diagonal_shape(e.lhs);
    const std::size_t k = e.nvars();
    if (!shape.mixed.empty() || !shape.absent.empty() || shape.power.empty())
        throw DomainError("predicted_exponent expects every variable in a single power term");

    const bool paraboloid = shape.linear.size() == 1;
    if (shape.linear.size() > 1) throw DomainError("more than one linear variable");

    unsigned n = 0;
    std::size_t positive = 0, negative = 0;
    for (std::size_t var : shape.power) {
        for (const auto& [m, c] : e.lhs.terms()) {
            if (m[var] == 0) continue;
            if (n != 0 && m[var] != n) throw DomainError("power terms have different degrees");
            n = m[var];
            (c > 0 ? positive : negative) += 1;
        }
    }
    if (n < 2) throw DomainError("degree must be at least 2");

    ExponentPrediction out;
    out.generic_bound = Rational(static_cast<long>(k) - 1);
    if (n > 2 && k > 2) out.pila_bound = Rational(static_cast<long>(k) - 2) + make_rational(1, n);

    const long kk = static_cast<long>(k);
    auto set = [&](long exponent, Formula f) {
        out.exponent = Rational(exponent);
        out.formula = f;
    };

    if (n % 2 == 0) {
        // m counts positive power coefficients; the negated equation has the same solutions.
        const long m = static_cast<long>(std::max(positive, negative));
        set(kk - m, paraboloid ? Formula::even_paraboloid : Formula::even_thue);
        return out;
    }

    const bool homogeneous = !paraboloid && shape.constant == 0;
    if (homogeneous || (paraboloid && k == 2)) {
        // Forms through the origin carry lines of solutions; only the general bounds apply.
        if (out.pila_bound) {
            out.exponent = *out.pila_bound;
            out.formula = Formula::pila;
        } else {
            set(kk - 1, Formula::generic);
        }
        return out;
    }
    if (k == 2) {
        set(0, Formula::binary_thue);
        return out;
    }
    if (kk % 2 == 0 && kk >= 6)
        set(kk / 2, Formula::half_even_k);
    else if (kk % 2 == 1 && kk >= 7)
        set(kk / 2 + 1, Formula::half_odd_k);
    else
        set(kk - 2, paraboloid ? Formula::odd_paraboloid : Formula::odd_thue);
    return out;
}

// (4N + 1)^{min(r, s)}, or 1 for a definite normal form.
inline Integer lower_bound_count(const Signature& sig, long n) {
    if (sig.zero != 0) throw DomainError("lower_bound_count requires a nondegenerate normal form");
    if (n < 1) throw DomainError("N must be positive");
    const std::size_t index = std::min(sig.positive, sig.negative);
    return ipow(Integer(4 * n + 1), static_cast<unsigned>(index));
}

enum class FermatVerdict { consistent, lower_violated, upper_suspicious };

inline std::string to_string(FermatVerdict v) {
    switch (v) {
        case FermatVerdict::consistent: return "consistent";
        case FermatVerdict::lower_violated: return "lower-violated";
        case FermatVerdict::upper_suspicious: return "upper-suspicious";
    }
    return "consistent";
}

inline constexpr double kDefaultFermatConstant = 16.0;

// N <= count <= constant * N ln N on every sample (the ratio test needs N >= 2).
inline FermatVerdict fermat_bound_check(std::span<const std::pair<long, std::uint64_t>> counts,
                                        double constant = kDefaultFermatConstant) {
    if (counts.size() < 3) throw DomainError("fermat_bound_check needs at least 3 samples");
    for (const auto& [n, count] : counts)
        if (static_cast<double>(count) < static_cast<double>(n)) return FermatVerdict::lower_violated;
    for (const auto& [n, count] : counts) {
        if (n < 2) continue;
        const double scale = static_cast<double>(n) * std::log(static_cast<double>(n));
        if (static_cast<double>(count) > constant * scale) return FermatVerdict::upper_suspicious;
    }
    return FermatVerdict::consistent;
}

} // namespace diagon
