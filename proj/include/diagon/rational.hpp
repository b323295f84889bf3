#pragma once

#include <gmpxx.h>

#include <cctype>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace diagon {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long numerator, long denominator = 1) {
    if (denominator == 0) throw DomainError("zero denominator");
    Rational q(numerator, denominator);
    q.canonicalize();
    return q;
}

inline Rational make_rational(const Integer& numerator, const Integer& denominator) {
    if (denominator == 0) throw DomainError("zero denominator");
    Rational q(numerator, denominator);
    q.canonicalize();
    return q;
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline Integer gcd(const Integer& a, const Integer& b) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Integer lcm(const Integer& a, const Integer& b) {
    Integer l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline Rational pow(const Rational& base, unsigned exponent) {
    Integer num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
    return Rational(num, den); // already canonical
}

inline Integer ipow(const Integer& base, unsigned exponent) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
    return r;
}

inline Integer floor(const Rational& q) {
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

inline Integer ceil(const Rational& q) {
    Integer r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

// "3", "-7", "3/2"
inline std::string to_string(const Rational& q) { return q.get_str(); }

inline Rational parse_rational(std::string_view text) {
    auto valid_integer = [](std::string_view s) {
        if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
        if (s.empty()) return false;
        for (char ch : s)
            if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
        return true;
    };
    const auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!valid_integer(num) || !valid_integer(den) || den.front() == '-' || den.front() == '+')
        throw DomainError("malformed rational '" + std::string(text) + "'");
    if (num.front() == '+') num.remove_prefix(1);
    return make_rational(Integer(std::string(num)), Integer(std::string(den)));
}

// Least common multiple of the denominators; 1 for an empty range.
inline Integer denominator_lcm(std::span<const Rational> values) {
    Integer l = 1;
    for (const auto& v : values) l = lcm(l, Integer(v.get_den()));
    return l;
}

} // namespace diagon
