#include <gtest/gtest.h>

#include "support.hpp"

using namespace diagon;
using namespace testing_support;

namespace {

AffineTransform t2(std::initializer_list<std::initializer_list<Rational>> m, Vector c) {
    return AffineTransform(Matrix(m), std::move(c));
}

Rational q(long n, long d = 1) { return make_rational(n, d); }

} // namespace

TEST(Rational, CanonicalFormAndHelpers) {
    EXPECT_EQ(make_rational(6, -4), q(-3, 2));
    EXPECT_THROW(make_rational(1, 0), DomainError);
    EXPECT_EQ(floor(q(-3, 2)), -2);
    EXPECT_EQ(ceil(q(-3, 2)), -1);
    EXPECT_EQ(parse_rational("-7/14"), q(-1, 2));
    EXPECT_EQ(lcm(Integer(4), Integer(6)), 12);
    std::vector<Rational> v{q(1, 4), q(5, 6), q(3)};
    EXPECT_EQ(denominator_lcm(v), 12);
}

TEST(Matrix, DeterminantInverseRank) {
    Matrix m{{q(2), q(1)}, {q(5), q(3)}};
    EXPECT_EQ(determinant(m), 1);
    EXPECT_EQ(inverse(m) * m, Matrix::identity(2));
    Matrix s{{q(1), q(2)}, {q(2), q(4)}};
    EXPECT_EQ(rank(s), 1u);
    EXPECT_THROW(inverse(s), DomainError);
    // cofactor oracle for a 3x3
    Matrix a{{q(1), q(1), q(0)}, {q(1), q(2), q(1)}, {q(0), q(1), q(3)}};
    const Rational cof = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
                         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    EXPECT_EQ(determinant(a), cof);
    EXPECT_EQ(cof, 2);
}

TEST(Polynomial, Evaluate) {
    const Polynomial lines = eq("x1^2 + 2*x1*x2 - 3*x2^2 = 0").lhs;
    EXPECT_EQ(evaluate(lines, std::vector<Rational>{q(1), q(1)}), 0);
    EXPECT_EQ(evaluate(Polynomial(3), std::vector<Rational>{q(5), q(-1), q(2, 3)}), 0);
    const Polynomial parabolic = eq("4*x1^2 + 9*x2^2 + 12*x1*x2 + 8*x1 + 2*x2 + 24 = 0").lhs;
    EXPECT_EQ(evaluate(parabolic, std::vector<Rational>{q(-4), q(2)}), 0);
    EXPECT_THROW(evaluate(parabolic, std::vector<Rational>{q(1)}), DimensionError);
}

TEST(Polynomial, SubstituteExamples) {
    const Polynomial lines = eq("x1^2 + 2*x1*x2 - 3*x2^2 = 0").lhs;
    const AffineTransform shear = t2({{q(1), q(-1)}, {q(0), q(1)}}, {q(0), q(0)});
    EXPECT_EQ(substitute(lines, shear), eq("x1^2 - 4*x2^2 = 0").lhs);
    EXPECT_EQ(substitute(lines, AffineTransform::identity(2)), lines);

    const Polynomial parabolic = eq("4*x1^2 + 9*x2^2 + 12*x1*x2 + 8*x1 + 2*x2 + 24 = 0").lhs;
    const AffineTransform total = t2({{q(1), q(-3)}, {q(0), q(2)}}, {q(-4), q(2)});
    EXPECT_EQ(substitute(parabolic, total), eq("4*x1^2 - 20*x2 = 0").lhs);
    EXPECT_THROW(substitute(parabolic, AffineTransform::identity(3)), DimensionError);
}

TEST(Polynomial, ComposeExamples) {
    const AffineTransform lagrange = t2({{q(1), q(-3, 2)}, {q(0), q(1)}}, {q(0), q(0)});
    const AffineTransform transfer = t2({{q(1), q(0)}, {q(0), q(1)}}, {q(-1), q(2)});
    const AffineTransform step9 = compose(lagrange, transfer);
    EXPECT_EQ(step9, t2({{q(1), q(-3, 2)}, {q(0), q(1)}}, {q(-4), q(2)}));
    EXPECT_EQ(compose(AffineTransform::identity(2), step9), step9);
    const AffineTransform deformation = t2({{q(1), q(0)}, {q(0), q(2)}}, {q(0), q(0)});
    EXPECT_EQ(compose(step9, deformation), t2({{q(1), q(-3)}, {q(0), q(2)}}, {q(-4), q(2)}));
}

TEST(Polynomial, QuadraticFormMatrix) {
    EXPECT_EQ(quadratic_form_matrix(eq("x1^2 + 2*x1*x2 - 3*x2^2 = 0").lhs), (SymmetricMatrix{{q(1), q(1)}, {q(1), q(-3)}}));
    EXPECT_EQ(quadratic_form_matrix(eq("x1^2 + x2^2 = 0").lhs).matrix(), Matrix::identity(2));
    const SymmetricMatrix p = quadratic_form_matrix(eq("4*x1^2 + 9*x2^2 + 12*x1*x2 + 8*x1 + 2*x2 + 24 = 0").lhs);
    EXPECT_EQ(p, (SymmetricMatrix{{q(4), q(6)}, {q(6), q(9)}}));
    EXPECT_EQ(determinant(p.matrix()), 0);
    EXPECT_THROW(quadratic_form_matrix(eq("x1^3 = 0").lhs), DomainError);
    // odd cross coefficient gives half-integer entries
    EXPECT_EQ(quadratic_form_matrix(eq("x1*x2 = 0").lhs)(0, 1), q(1, 2));
}

TEST(Polynomial, AngularMinors) {
    EXPECT_EQ(angular_minors(SymmetricMatrix{{q(1), q(1)}, {q(1), q(-3)}}), (std::vector<Rational>{q(1), q(-4)}));
    EXPECT_EQ(angular_minors(SymmetricMatrix(Matrix::identity(4))), std::vector<Rational>(4, q(1)));
    EXPECT_EQ(angular_minors(SymmetricMatrix{{q(1), q(1), q(0)}, {q(1), q(2), q(1)}, {q(0), q(1), q(3)}}),
              (std::vector<Rational>{q(1), q(1), q(2)}));
}

TEST(Polynomial, ContentNormalize) {
    auto split = content_normalize(eq("4*x1^2 - 20*x2 = 0").lhs);
    EXPECT_EQ(split.primitive, eq("x1^2 - 5*x2 = 0").lhs);
    EXPECT_EQ(split.factor, 4);
    split = content_normalize(eq("x1 - x2 = 0").lhs);
    EXPECT_EQ(split.primitive, eq("x1 - x2 = 0").lhs);
    EXPECT_EQ(split.factor, 1);
    split = content_normalize(eq("8*x1^3 + 216*x2^3 = 0").lhs);
    EXPECT_EQ(split.primitive, eq("x1^3 + 27*x2^3 = 0").lhs);
    EXPECT_EQ(split.factor, 8);
    split = content_normalize(eq("-3/2*x1 + 9/4*x2 = 0").lhs);
    EXPECT_EQ(split.primitive, eq("2*x1 - 3*x2 = 0").lhs);
    EXPECT_EQ(split.factor, q(-3, 4));
    EXPECT_THROW(content_normalize(Polynomial(2)), DomainError);
}

TEST(TransformChain, ComposedMatchesSteps) {
    TransformChain chain(2);
    chain.push(StepKind::lagrange, t2({{q(1), q(-3, 2)}, {q(0), q(1)}}, {q(0), q(0)}));
    chain.push(StepKind::transfer, AffineTransform::translation_only({q(-1), q(2)}));
    chain.push(StepKind::deformation, t2({{q(1), q(0)}, {q(0), q(2)}}, {q(0), q(0)}));
    EXPECT_TRUE(chain.is_consistent());
    EXPECT_EQ(chain.composed(), t2({{q(1), q(-3)}, {q(0), q(2)}}, {q(-4), q(2)}));
    EXPECT_EQ(chain.steps().size(), 3u);
}

// ---- properties ----

TEST(PolynomialProperty, SubstituteRespectsComposition) {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t k = 1 + trial % 3;
        const Polynomial p = random_polynomial(rng, k, 3, 9, 5);
        const AffineTransform a = random_invertible(rng, k, 4, 3);
        const AffineTransform b = random_invertible(rng, k, 4, 3);
        ASSERT_EQ(substitute(p, compose(a, b)), substitute(substitute(p, a), b)) << "trial " << trial;
    }
}

TEST(PolynomialProperty, SubstitutePreservesEvaluation) {
    std::mt19937_64 rng(202);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t k = 1 + trial % 4;
        const Polynomial p = random_polynomial(rng, k, 4, 20, 6);
        const AffineTransform t = random_invertible(rng, k, 5, 4);
        Vector x(k);
        for (auto& v : x) v = random_rational(rng, 7, 5);
        ASSERT_EQ(evaluate(substitute(p, t), x), evaluate(p, t.apply(x))) << "trial " << trial;
    }
}

TEST(PolynomialProperty, QuadraticFormRoundTrip) {
    std::mt19937_64 rng(303);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t k = 1 + trial % 5;
        const Polynomial p = random_polynomial(rng, k, 2, 30, 8);
        ASSERT_EQ(quadratic_form(quadratic_form_matrix(p)), p.homogeneous_part(2));
    }
}

TEST(PolynomialProperty, DiagonalMinorsArePrefixProducts) {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t k = 1 + trial % 5;
        std::vector<Rational> d(k);
        for (auto& v : d) v = random_rational(rng, 9, 4);
        const auto minors = angular_minors(SymmetricMatrix(Matrix::diagonal(d)));
        Rational prefix = 1;
        for (std::size_t i = 0; i < k; ++i) {
            prefix *= d[i];
            ASSERT_EQ(minors[i], prefix);
        }
    }
}

TEST(PolynomialProperty, ContentNormalizeIdempotent) {
    std::mt19937_64 rng(505);
    for (int trial = 0; trial < 100; ++trial) {
        Polynomial p = random_polynomial(rng, 3, 3, 50, 6);
        if (p.is_zero()) continue;
        p *= random_rational(rng, 9, 9) + Rational(10);
        const ContentSplit once = content_normalize(p);
        const ContentSplit twice = content_normalize(once.primitive);
        ASSERT_EQ(twice.primitive, once.primitive);
        ASSERT_EQ(twice.factor, 1);
        ASSERT_EQ(once.factor * once.primitive, p);
        ASSERT_GT(once.primitive.terms().begin()->second, 0);
    }
}
