#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "lattice.hpp"
#include "matrix.hpp"
#include "parser.hpp"
#include "polynomial.hpp"
#include "rational.hpp"
#include "surface.hpp"

namespace diagon {

inline constexpr const char* kPreservationUnverified = "preservation-unverified: non-integer center";

struct LagrangeResult {
    AffineTransform transform;          // x = transform.matrix * x'
    std::vector<Rational> coefficients; // form becomes sum d_i x'_i^2
    std::vector<ChainStep> steps;       // lagrange and permutation steps, in order
    bool pivoted = false;
};

namespace detail {

inline Matrix congruence(const Matrix& a, const Matrix& s) { return s.transpose() * a * s; }

inline Matrix swap_matrix(std::size_t k, std::size_t i, std::size_t j) {
    Matrix p = Matrix::identity(k);
    p.swap_cols(i, j);
    return p;
}

} // namespace detail

// Iterated completion of squares. Zero pivots are handled by swapping in a later nonzero
// diagonal entry, or, when the remaining diagonal vanishes, by x_p = u + v, x_q = u - v.
inline LagrangeResult lagrange_reduce(const SymmetricMatrix& m) {
    if (m.matrix().is_zero()) throw DomainError("lagrange_reduce: zero quadratic form");
    const std::size_t k = m.size();
    Matrix a = m.matrix();
    Matrix total = Matrix::identity(k);
    Matrix pending = Matrix::identity(k);
    LagrangeResult result;

    auto flush = [&] {
        if (pending.is_identity()) return;
        result.steps.push_back({StepKind::lagrange, AffineTransform(pending)});
        pending = Matrix::identity(k);
    };
    auto apply = [&](const Matrix& s, StepKind kind) {
        a = detail::congruence(a, s);
        total = total * s;
        if (kind == StepKind::lagrange) {
            pending = pending * s;
        } else {
            flush();
            result.steps.push_back({kind, AffineTransform(s)});
        }
    };

    for (std::size_t i = 0; i < k; ++i) {
        if (a(i, i) == 0) {
            std::size_t j = i + 1;
            while (j < k && a(j, j) == 0) ++j;
            if (j < k) {
                apply(detail::swap_matrix(k, i, j), StepKind::permutation);
                result.pivoted = true;
            } else {
                std::optional<std::pair<std::size_t, std::size_t>> pair;
                for (std::size_t p = i; p < k && !pair; ++p)
                    for (std::size_t q = p + 1; q < k && !pair; ++q)
                        if (a(p, q) != 0) pair = {p, q};
                if (!pair) break; // remaining block is zero
                const auto [p, q] = *pair;
                Matrix s = Matrix::identity(k);
                s(p, p) = 1;
                s(p, q) = 1;
                s(q, p) = 1;
                s(q, q) = -1;
                apply(s, StepKind::lagrange);
                result.pivoted = true;
                if (p != i) apply(detail::swap_matrix(k, i, p), StepKind::permutation);
            }
        }
        Matrix e = Matrix::identity(k);
        bool any = false;
        for (std::size_t j = i + 1; j < k; ++j)
            if (a(i, j) != 0) {
                e(i, j) = -a(i, j) / a(i, i);
                any = true;
            }
        if (any) apply(e, StepKind::lagrange);
    }
    flush();

    result.coefficients.resize(k);
    for (std::size_t i = 0; i < k; ++i) result.coefficients[i] = a(i, i);
    result.transform = AffineTransform(std::move(total));
    return result;
}

// (M_1, M_2/M_1, ..., M_r/M_{r-1}, 0, ..., 0) for a form of rank r.
inline std::vector<Rational> jacobi_canonical(const SymmetricMatrix& m) {
    const std::size_t r = rank(m.matrix());
    const std::vector<Rational> minors = angular_minors(m);
    std::vector<Rational> coefficients(m.size());
    for (std::size_t i = 0; i < r; ++i) {
        if (minors[i] == 0)
            throw DomainError("angular minor of order " + std::to_string(i + 1) +
                              " vanishes before the rank is reached; use lagrange_reduce");
        coefficients[i] = i == 0 ? minors[0] : minors[i] / minors[i - 1];
    }
    return coefficients;
}

// Closed-form upper unit-triangular Lagrange matrix of a ternary form with M_1, M_2 != 0.
inline AffineTransform lagrange_matrix_3(const SymmetricMatrix& m) {
    if (m.size() != 3) throw DimensionError("lagrange_matrix_3 expects a 3x3 form");
    const Rational& a11 = m(0, 0);
    const Rational& a12 = m(0, 1);
    const Rational& a13 = m(0, 2);
    const Rational& a22 = m(1, 1);
    const Rational& a23 = m(1, 2);
    const Rational m1 = a11;
    const Rational m2 = a11 * a22 - a12 * a12;
    if (m1 == 0 || m2 == 0) throw DomainError("lagrange_matrix_3 requires nonzero M_1 and M_2");
    Matrix c = Matrix::identity(3);
    c(0, 1) = -a12 / m1;
    c(0, 2) = (a12 * a23 - a22 * a13) / m2;
    c(1, 2) = (a12 * a13 - a11 * a23) / m2;
    return AffineTransform(std::move(c));
}

struct CenterResult {
    AffineTransform translation;                // identity matrix, x' = x'' + shift
    Rational constant;                          // residual constant after completion
    std::optional<std::size_t> linear_variable; // surviving linear variable (0-based), paraboloid case
    bool integral = true;                       // all translation components are integers
};

// Completes the squares of a polynomial whose quadratic part is already diagonal.
inline CenterResult complete_center(const Polynomial& p) {
    if (p.degree() != 2) throw DomainError("complete_center expects a degree-2 polynomial");
    if (!p.homogeneous_part(2).is_diagonal())
        throw DomainError("complete_center expects a diagonal quadratic part (apply the Lagrange transform first)");
    const std::size_t k = p.nvars();
    Vector shift(k);
    Rational constant = p.constant_term();
    std::vector<std::size_t> linear_only;
    std::vector<Rational> linear(k);

    for (std::size_t i = 0; i < k; ++i) {
        const Rational d = p.coefficient(Monomial::unit(k, i, 2));
        const Rational b = p.coefficient(Monomial::unit(k, i, 1));
        linear[i] = b;
        if (d != 0) {
            // d x^2 + b x = d (x + b/2d)^2 - b^2/4d
            shift[i] = -b / (2 * d);
            constant -= b * b / (4 * d);
        } else if (b != 0) {
            linear_only.push_back(i);
        }
    }
    if (linear_only.size() > 1)
        throw PipelineError("more than one variable survives only linearly (degenerate rank)");

    CenterResult result;
    if (linear_only.size() == 1) {
        const std::size_t j = linear_only.front();
        shift[j] = -constant / linear[j];
        constant = 0;
        result.linear_variable = j;
    }
    result.integral = std::all_of(shift.begin(), shift.end(), [](const Rational& v) { return is_integer(v); });
    result.constant = constant;
    result.translation = AffineTransform::translation_only(std::move(shift));
    return result;
}

// t_j = lcm of the denominators in column j.
inline std::vector<Rational> deformation_factors(const Matrix& m) {
    std::vector<Rational> factors(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) {
        const Vector col = m.column(j);
        factors[j] = Rational(denominator_lcm(col));
    }
    return factors;
}

struct IntegerizeResult {
    AffineTransform deformation; // diagonal, no translation
    AffineTransform result;      // compose(t, deformation), integer matrix
};

inline IntegerizeResult integerize(const AffineTransform& t) {
    if (!t.has_integer_translation())
        throw DomainError("integerize: translation has non-integer components");
    AffineTransform deformation(Matrix::diagonal(deformation_factors(t.matrix)));
    AffineTransform result = compose(t, deformation);
    return {std::move(deformation), std::move(result)};
}

struct DiagonalizationReport {
    Equation original;
    TransformChain chain;
    AffineTransform integer_transform; // chain.composed(); translation may be rational when flagged
    Equation diagonal;                 // content-normalized
    Rational content_factor;           // substitute(original, integer_transform) = factor * diagonal
    Rational det;
    bool is_unimodular = false;
    SurfaceClass surface = SurfaceClass::degenerate;
    bool preservation_verified = true;
    std::vector<std::string> warnings;
};

namespace detail {

inline DiagonalizationReport finish_report(const Equation& e, TransformChain chain, bool integral_center) {
    DiagonalizationReport report;
    report.original = e;
    report.integer_transform = chain.composed();
    report.chain = std::move(chain);
    const Polynomial q = substitute(e.lhs, report.integer_transform);
    if (q.is_zero()) throw PipelineError("transform annihilates the equation");
    if (!q.is_diagonal()) throw PipelineError("transform does not diagonalize the equation");
    ContentSplit split = content_normalize(q);
    report.diagonal = make_equation(std::move(split.primitive), e.name);
    report.content_factor = split.factor;
    report.det = determinant(report.integer_transform.matrix);
    report.is_unimodular = is_unimodular(report.integer_transform);
    report.surface = classify_diagonal(report.diagonal.lhs);
    report.preservation_verified = integral_center;
    if (!integral_center) report.warnings.emplace_back(kPreservationUnverified);
    return report;
}

} // namespace detail

// Lagrange reduction, center translation and deformation for a second-order equation.
inline DiagonalizationReport diagonalize_quadratic(const Equation& e) {
    if (e.degree() != 2) throw DomainError("diagonalize_quadratic expects a degree-2 equation");
    const std::size_t k = e.nvars();
    const SymmetricMatrix form = quadratic_form_matrix(e.lhs);
    if (form.matrix().is_zero()) throw DomainError("quadratic part is zero");

    const LagrangeResult lagrange = lagrange_reduce(form);
    TransformChain chain(k);
    for (const auto& step : lagrange.steps) chain.push(step.kind, step.transform);

    const CenterResult center = complete_center(substitute(e.lhs, lagrange.transform));
    if (!center.translation.is_identity()) chain.push(StepKind::transfer, center.translation);

    AffineTransform deformation(Matrix::diagonal(deformation_factors(chain.composed().matrix)));
    if (!deformation.is_identity()) chain.push(StepKind::deformation, std::move(deformation));

    return detail::finish_report(e, std::move(chain), center.integral);
}

// Rewrites a binary form of degree n >= 3 as a(x1 + l x2)^n + mu x2^n when possible and returns
// the substitution x1 = x1' - l x2'/rho, x2 = x2'/rho, where rho^n is the largest n-th power
// dividing the numerator of mu.
inline std::optional<AffineTransform> binary_form_complete_power(const Equation& e) {
    const Polynomial& p = e.lhs;
    if (p.nvars() != 2) throw DomainError("binary_form_complete_power expects two variables");
    if (p.is_zero() || !p.is_homogeneous()) throw DomainError("binary_form_complete_power expects a homogeneous form");
    const unsigned n = p.degree();
    if (n < 3) throw DomainError("binary_form_complete_power expects degree >= 3");
    const Rational a = p.coefficient(Monomial{n, 0});
    if (a == 0) throw DomainError("binary form has no x1^n term");

    const Rational lambda = p.coefficient(Monomial{n - 1, 1}) / (a * n);
    Integer binom = n;
    for (unsigned j = 2; j < n; ++j) {
        binom = binom * (n - j + 1) / j;
        if (p.coefficient(Monomial{n - j, j}) != a * Rational(binom) * pow(lambda, j)) return std::nullopt;
    }
    const Rational mu = p.coefficient(Monomial{0, n}) - a * pow(lambda, n);

    Integer rho = 1;
    if (mu != 0) {
        Integer rest = abs(Integer(mu.get_num()));
        for (Integer d = 2; ipow(d, n) <= rest; ++d) {
            const Integer dn = ipow(d, n);
            while (rest % dn == 0) {
                rest /= dn;
                rho *= d;
            }
        }
    }
    Matrix c = Matrix::identity(2);
    c(0, 1) = -lambda / rho;
    c(1, 1) = make_rational(Integer(1), rho);
    return AffineTransform(std::move(c));
}

// Deformation and content normalization after a user- or method-supplied diagonalizing transform.
inline DiagonalizationReport integerize_higher(const Equation& e, const AffineTransform& t) {
    if (t.dimension() != e.nvars()) throw DimensionError("transform dimension does not match the equation");
    if (!t.has_integer_translation()) throw DomainError("integerize_higher: translation has non-integer components");
    if (!substitute(e.lhs, t).is_diagonal()) throw PipelineError("transform does not diagonalize the equation");

    const std::size_t k = e.nvars();
    TransformChain chain(k);
    const bool has_shift = !AffineTransform::translation_only(t.translation).is_identity();
    if (!t.matrix.is_identity()) {
        chain.push(StepKind::lagrange, AffineTransform(t.matrix));
        if (has_shift) {
            chain.push(StepKind::transfer,
                       AffineTransform::translation_only(inverse(t.matrix) * std::span<const Rational>(t.translation)));
        }
    } else if (has_shift) {
        chain.push(StepKind::transfer, t);
    }
    IntegerizeResult ir = integerize(t);
    if (!ir.deformation.is_identity()) chain.push(StepKind::deformation, std::move(ir.deformation));
    return detail::finish_report(e, std::move(chain), true);
}

// Dispatches on the equation's shape: second order, already diagonal, or a binary form.
inline DiagonalizationReport diagonalize(const Equation& e) {
    if (e.lhs.is_zero() || e.degree() == 0) throw DomainError("equation has no variable terms");
    if (e.degree() == 2) return diagonalize_quadratic(e);
    if (e.lhs.is_diagonal()) return integerize_higher(e, AffineTransform::identity(e.nvars()));
    if (e.nvars() == 2 && e.lhs.is_homogeneous()) {
        if (auto t = binary_form_complete_power(e)) return integerize_higher(e, *t);
        throw PipelineError("binary form is not a complete power plus a pure power");
    }
    throw PipelineError("no diagonalizing transform is known for this equation");
}

} // namespace diagon
