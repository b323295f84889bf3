#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "errors.hpp"
#include "polynomial.hpp"

namespace diagon {

enum class SurfaceClass { central_at_origin, central_translated, non_central_paraboloid, degenerate };

inline std::string to_string(SurfaceClass s) {
    switch (s) {
        case SurfaceClass::central_at_origin: return "central-at-origin";
        case SurfaceClass::central_translated: return "central-translated";
        case SurfaceClass::non_central_paraboloid: return "non-central-paraboloid";
        case SurfaceClass::degenerate: return "degenerate";
    }
    return "degenerate";
}

inline std::optional<SurfaceClass> surface_from_string(std::string_view s) {
    for (auto c : {SurfaceClass::central_at_origin, SurfaceClass::central_translated,
                   SurfaceClass::non_central_paraboloid, SurfaceClass::degenerate})
        if (to_string(c) == s) return c;
    return std::nullopt;
}

// How each variable occurs in a diagonal polynomial.
struct DiagonalShape {
    std::vector<std::size_t> linear;    // variables occurring only as x_i
    std::vector<std::size_t> power;     // variables occurring only as a single x_i^n, n >= 2
    std::vector<std::size_t> absent;
    std::vector<std::size_t> mixed;     // several distinct powers of one variable
    Rational constant;
};

inline DiagonalShape diagonal_shape(const Polynomial& p) {
    if (!p.is_diagonal()) throw DomainError("polynomial is not diagonal");
    const std::size_t k = p.nvars();
    std::vector<std::set<unsigned>> powers(k);
    for (const auto& [m, c] : p.terms())
        for (std::size_t i = 0; i < k; ++i)
            if (m[i] != 0) powers[i].insert(m[i]);
    DiagonalShape shape;
    shape.constant = p.constant_term();
    for (std::size_t i = 0; i < k; ++i) {
        if (powers[i].empty())
            shape.absent.push_back(i);
        else if (powers[i].size() > 1)
            shape.mixed.push_back(i);
        else if (*powers[i].begin() == 1)
            shape.linear.push_back(i);
        else
            shape.power.push_back(i);
    }
    return shape;
}

// Central: pure powers plus a constant. Paraboloid: pure powers plus exactly one linear variable.
inline SurfaceClass classify_diagonal(const Polynomial& p) {
    const DiagonalShape shape = diagonal_shape(p);
    if (!shape.mixed.empty() || shape.power.empty()) return SurfaceClass::degenerate;
    if (shape.linear.size() == 1) return SurfaceClass::non_central_paraboloid;
    if (!shape.linear.empty()) return SurfaceClass::degenerate;
    return shape.constant == 0 ? SurfaceClass::central_at_origin : SurfaceClass::central_translated;
}

} // namespace diagon
