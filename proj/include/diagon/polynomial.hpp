#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"
#include "rational.hpp"

namespace diagon {

struct Monomial {
    std::vector<unsigned> exponents;

    Monomial() = default;
    explicit Monomial(std::size_t k) : exponents(k, 0) {}
    explicit Monomial(std::vector<unsigned> e) : exponents(std::move(e)) {}
    Monomial(std::initializer_list<unsigned> e) : exponents(e) {}

    std::size_t size() const { return exponents.size(); }
    unsigned operator[](std::size_t i) const { return exponents[i]; }

    unsigned total_degree() const {
        return std::accumulate(exponents.begin(), exponents.end(), 0u);
    }

    std::size_t variables_involved() const {
        return static_cast<std::size_t>(std::count_if(exponents.begin(), exponents.end(),
                                                      [](unsigned e) { return e != 0; }));
    }

    static Monomial unit(std::size_t k, std::size_t var, unsigned power = 1) {
        Monomial m(k);
        m.exponents[var] = power;
        return m;
    }

    // Lexicographic with x1 > x2 > ... > xk.
    auto operator<=>(const Monomial&) const = default;
};

// Sparse multivariate polynomial in x1..xk with exact rational coefficients.
// Terms iterate in descending lexicographic order; no stored coefficient is zero.
class Polynomial {
public:
    using TermMap = std::map<Monomial, Rational, std::greater<>>;

    Polynomial() = default;
    explicit Polynomial(std::size_t k) : k_(k) {}

    static Polynomial constant(std::size_t k, const Rational& c) {
        Polynomial p(k);
        p.add_term(Monomial(k), c);
        return p;
    }

    static Polynomial variable(std::size_t k, std::size_t var) {
        if (var >= k) throw DimensionError("variable index out of range");
        Polynomial p(k);
        p.add_term(Monomial::unit(k, var), 1);
        return p;
    }

    std::size_t nvars() const { return k_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    unsigned degree() const {
        unsigned d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
        return d;
    }

    Rational coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    Rational constant_term() const { return coefficient(Monomial(k_)); }

    void add_term(const Monomial& m, const Rational& c) {
        if (m.size() != k_) throw DimensionError("monomial length does not match variable count");
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    // Terms of total degree exactly d.
    Polynomial homogeneous_part(unsigned d) const {
        Polynomial p(k_);
        for (const auto& [m, c] : terms_)
            if (m.total_degree() == d) p.terms_.emplace(m, c);
        return p;
    }

    bool is_homogeneous() const {
        if (terms_.empty()) return true;
        const unsigned d = terms_.begin()->first.total_degree();
        return std::all_of(terms_.begin(), terms_.end(),
                           [d](const auto& t) { return t.first.total_degree() == d; });
    }

    // Every monomial involves at most one variable.
    bool is_diagonal() const {
        return std::all_of(terms_.begin(), terms_.end(),
                           [](const auto& t) { return t.first.variables_involved() <= 1; });
    }

    // Highest power of variable var over all terms.
    unsigned degree_in(std::size_t var) const {
        unsigned d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m[var]);
        return d;
    }

    // Same polynomial viewed in a larger ambient variable count.
    Polynomial extended(std::size_t k) const {
        if (k < k_) throw DimensionError("cannot shrink variable count");
        Polynomial p(k);
        for (const auto& [m, c] : terms_) {
            Monomial wide(k);
            std::copy(m.exponents.begin(), m.exponents.end(), wide.exponents.begin());
            p.terms_.emplace(std::move(wide), c);
        }
        return p;
    }

    bool operator==(const Polynomial& other) const { return k_ == other.k_ && terms_ == other.terms_; }

    Polynomial operator-() const {
        Polynomial p(*this);
        for (auto& [m, c] : p.terms_) c = -c;
        return p;
    }

    Polynomial& operator+=(const Polynomial& o) {
        check_same(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }

    Polynomial& operator-=(const Polynomial& o) {
        check_same(o);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }

    Polynomial& operator*=(const Rational& s) {
        if (s == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, c] : terms_) c *= s;
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
    friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.check_same(b);
        Polynomial r(a.k_);
        Monomial prod(a.k_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                for (std::size_t i = 0; i < a.k_; ++i) prod.exponents[i] = ma[i] + mb[i];
                r.add_term(prod, ca * cb);
            }
        return r;
    }

    Polynomial pow(unsigned e) const {
        Polynomial result = constant(k_, 1);
        Polynomial base = *this;
        while (e != 0) {
            if (e & 1u) result = result * base;
            e >>= 1;
            if (e != 0) base = base * base;
        }
        return result;
    }

private:
    void check_same(const Polynomial& o) const {
        if (o.k_ != k_) throw DimensionError("polynomials have different variable counts");
    }

    std::size_t k_ = 0;
    TermMap terms_;
};

// Substitution x_old = matrix * x_new + translation.
struct AffineTransform {
    Matrix matrix;
    Vector translation;

    AffineTransform() = default;
    AffineTransform(Matrix m, Vector t) : matrix(std::move(m)), translation(std::move(t)) {
        if (!matrix.is_square() || matrix.rows() != translation.size())
            throw DimensionError("affine transform: matrix and translation sizes disagree");
    }
    explicit AffineTransform(Matrix m) : AffineTransform(m, Vector(m.rows())) {}

    static AffineTransform identity(std::size_t k) { return AffineTransform(Matrix::identity(k)); }

    static AffineTransform translation_only(Vector t) {
        const std::size_t k = t.size();
        return AffineTransform(Matrix::identity(k), std::move(t));
    }

    std::size_t dimension() const { return translation.size(); }

    bool is_identity() const {
        return matrix.is_identity() &&
               std::all_of(translation.begin(), translation.end(), [](const Rational& v) { return v == 0; });
    }

    bool has_integer_translation() const {
        return std::all_of(translation.begin(), translation.end(),
                           [](const Rational& v) { return diagon::is_integer(v); });
    }

    bool is_integer() const { return matrix.is_integer() && has_integer_translation(); }

    // Old coordinates of a point given in new coordinates.
    Vector apply(std::span<const Rational> x) const {
        Vector r = matrix * x;
        for (std::size_t i = 0; i < r.size(); ++i) r[i] += translation[i];
        return r;
    }

    // New coordinates of a point given in old coordinates.
    Vector apply_inverse(std::span<const Rational> x) const {
        if (x.size() != dimension()) throw DimensionError("point dimension mismatch");
        Vector shifted(x.begin(), x.end());
        for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] -= translation[i];
        return inverse(matrix) * std::span<const Rational>(shifted);
    }

    bool operator==(const AffineTransform&) const = default;
};

// r(x) = outer(inner(x)).
inline AffineTransform compose(const AffineTransform& outer, const AffineTransform& inner) {
    if (outer.dimension() != inner.dimension()) throw DimensionError("compose: dimension mismatch");
    Vector c = outer.matrix * std::span<const Rational>(inner.translation);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += outer.translation[i];
    return AffineTransform(outer.matrix * inner.matrix, std::move(c));
}

enum class StepKind { lagrange, transfer, deformation, homothety, permutation };

inline std::string to_string(StepKind kind) {
    switch (kind) {
        case StepKind::lagrange: return "lagrange";
        case StepKind::transfer: return "transfer";
        case StepKind::deformation: return "deformation";
        case StepKind::homothety: return "homothety";
        case StepKind::permutation: return "permutation";
    }
    return "unknown";
}

inline std::optional<StepKind> step_kind_from_string(std::string_view s) {
    for (auto kind : {StepKind::lagrange, StepKind::transfer, StepKind::deformation, StepKind::homothety,
                      StepKind::permutation})
        if (to_string(kind) == s) return kind;
    return std::nullopt;
}

struct ChainStep {
    StepKind kind;
    AffineTransform transform;
    bool operator==(const ChainStep&) const = default;
};

// Ordered substitutions, each expressed in the coordinates produced by the previous one.
class TransformChain {
public:
    explicit TransformChain(std::size_t k = 0) : composed_(AffineTransform::identity(k)) {}

    void push(StepKind kind, AffineTransform t) {
        composed_ = compose(composed_, t);
        steps_.push_back({kind, std::move(t)});
    }

    const std::vector<ChainStep>& steps() const { return steps_; }
    const AffineTransform& composed() const { return composed_; }
    bool empty() const { return steps_.empty(); }

    // Recomputes the composition from the steps.
    bool is_consistent() const {
        AffineTransform acc = AffineTransform::identity(composed_.dimension());
        for (const auto& s : steps_) acc = compose(acc, s.transform);
        return acc == composed_;
    }

    bool operator==(const TransformChain&) const = default;

private:
    std::vector<ChainStep> steps_;
    AffineTransform composed_;
};

inline Rational evaluate(const Polynomial& p, std::span<const Rational> point) {
    if (point.size() != p.nvars()) throw DimensionError("evaluate: point dimension mismatch");
    Rational sum = 0;
    for (const auto& [m, c] : p.terms()) {
        Rational t = c;
        for (std::size_t i = 0; i < point.size(); ++i)
            if (m[i] != 0) t *= pow(point[i], m[i]);
        sum += t;
    }
    return sum;
}

// q(x') = p(matrix * x' + translation).
inline Polynomial substitute(const Polynomial& p, const AffineTransform& t) {
    const std::size_t k = p.nvars();
    if (t.dimension() != k) throw DimensionError("substitute: transform dimension mismatch");

    std::vector<Polynomial> images;
    images.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        Polynomial li = Polynomial::constant(k, t.translation[i]);
        for (std::size_t j = 0; j < k; ++j) li.add_term(Monomial::unit(k, j), t.matrix(i, j));
        images.push_back(std::move(li));
    }

    // powers[i][e] = images[i]^e, filled lazily
    std::vector<std::vector<Polynomial>> powers(k);
    auto power_of = [&](std::size_t i, unsigned e) -> const Polynomial& {
        auto& cache = powers[i];
        if (cache.empty()) cache.push_back(Polynomial::constant(k, 1));
        while (cache.size() <= e) cache.push_back(cache.back() * images[i]);
        return cache[e];
    };

    Polynomial q(k);
    for (const auto& [m, c] : p.terms()) {
        Polynomial term = Polynomial::constant(k, c);
        for (std::size_t i = 0; i < k; ++i)
            if (m[i] != 0) term = term * power_of(i, m[i]);
        q += term;
    }
    return q;
}

// Diagonal entries are the square coefficients; off-diagonal entries are half the cross coefficients.
inline SymmetricMatrix quadratic_form_matrix(const Polynomial& p) {
    if (p.degree() > 2) throw DomainError("quadratic form matrix requires degree <= 2");
    const std::size_t k = p.nvars();
    SymmetricMatrix a(k);
    for (const auto& [m, c] : p.terms()) {
        if (m.total_degree() != 2) continue;
        std::vector<std::size_t> vars;
        for (std::size_t i = 0; i < k; ++i)
            for (unsigned e = 0; e < m[i]; ++e) vars.push_back(i);
        if (vars[0] == vars[1])
            a.set(vars[0], vars[0], c);
        else
            a.set(vars[0], vars[1], c / 2);
    }
    return a;
}

// Degree-2 polynomial x^T A x.
inline Polynomial quadratic_form(const SymmetricMatrix& a) {
    const std::size_t k = a.size();
    Polynomial p(k);
    for (std::size_t i = 0; i < k; ++i) {
        Monomial sq = Monomial::unit(k, i, 2);
        p.add_term(sq, a(i, i));
        for (std::size_t j = i + 1; j < k; ++j) {
            Monomial cross(k);
            cross.exponents[i] = 1;
            cross.exponents[j] = 1;
            p.add_term(cross, 2 * a(i, j));
        }
    }
    return p;
}

// Determinants of the leading principal submatrices, orders 1..k.
inline std::vector<Rational> angular_minors(const SymmetricMatrix& a) {
    std::vector<Rational> minors;
    minors.reserve(a.size());
    for (std::size_t i = 1; i <= a.size(); ++i) minors.push_back(determinant(a.matrix().leading(i)));
    return minors;
}

struct ContentSplit {
    Polynomial primitive;
    Rational factor;
};

// p = factor * primitive, where primitive has coprime integer coefficients and a positive leading term.
inline ContentSplit content_normalize(const Polynomial& p) {
    if (p.is_zero()) throw DomainError("content of the zero polynomial is undefined");
    Integer num_gcd = 0;
    Integer den_lcm = 1;
    for (const auto& [m, c] : p.terms()) {
        num_gcd = gcd(num_gcd, Integer(c.get_num()));
        den_lcm = lcm(den_lcm, Integer(c.get_den()));
    }
    Rational factor = make_rational(num_gcd, den_lcm);
    if (p.terms().begin()->second < 0) factor = -factor;
    Polynomial primitive = p * Rational(1 / factor);
    return {std::move(primitive), std::move(factor)};
}

} // namespace diagon
