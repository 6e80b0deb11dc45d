#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace invar;

namespace {

Polynomial P(const char *text) { return parse_poly(text); }
Polynomial x(VarIndex i) { return Polynomial::x(i); }

TEST(RingOps, DifferenceOfSquares)
{
    EXPECT_EQ((x(0) + x(1)) * (x(0) - x(1)), P("x0^2 - x1^2"));
}

TEST(RingOps, AdditiveIdentity)
{
    const Polynomial f = P("3*x0*x2 - 1/2*x1 + 7");
    EXPECT_EQ(f + Polynomial(), f);
}

TEST(RingOps, SquareOfZ2)
{
    // (x0 x2 - x1^2)^2 expanded by hand.
    EXPECT_EQ(pow(P("x0*x2 - x1^2"), 2), P("x0^2*x2^2 - 2*x0*x1^2*x2 + x1^4"));
}

TEST(RingOps, NegativeExponentRejected)
{
    try {
        (void)pow(x(0), -1);
        FAIL();
    } catch (const invar_error &e) {
        EXPECT_STREQ(e.what(), "negative exponent");
    }
}

TEST(RingOps, NoZeroTermsStored)
{
    const Polynomial f = x(0) + x(1) - x(1);
    EXPECT_EQ(f.size(), 1u);
    EXPECT_TRUE((f - f).is_zero());
    EXPECT_EQ(print_poly(f - f), "0");
}

TEST(RingOps, AxiomsOnRandomTriples)
{
    std::mt19937_64 rng(1);
    for (int t = 0; t < 200; ++t) {
        const Polynomial a = oracle::random_polynomial(rng);
        const Polynomial b = oracle::random_polynomial(rng);
        const Polynomial c = oracle::random_polynomial(rng);
        ASSERT_EQ((a + b) + c, a + (b + c));
        ASSERT_EQ(a + b, b + a);
        ASSERT_EQ((a * b) * c, a * (b * c));
        ASSERT_EQ(a * b, b * a);
        ASSERT_EQ(a * (b + c), a * b + a * c);
        ASSERT_EQ(pow(a, 3), a * a * a);
    }
}

TEST(Substitute, BinomialSquare)
{
    EXPECT_EQ(substitute(P("x1^2"), std::map<VarIndex, Polynomial>{{1, P("x0 + x1")}}),
              P("x0^2 + 2*x0*x1 + x1^2"));
}

TEST(Substitute, IdentityImagesLeaveInputUnchanged)
{
    const Polynomial f = P("x0*x2 - x1^2 + 5*x3");
    EXPECT_EQ(substitute(f, std::map<VarIndex, Polynomial>{}), f);
    EXPECT_EQ(substitute(f, std::map<VarIndex, Polynomial>{{0, x(0)}, {1, x(1)}}), f);
}

TEST(Substitute, Z2IsFixedByUnitBinomialMap)
{
    const std::map<VarIndex, Polynomial> phi1{{1, P("x1 + x0")}, {2, P("x2 + 2*x1 + x0")}};
    EXPECT_EQ(substitute(P("x0*x2 - x1^2"), phi1), P("x0*x2 - x1^2"));
}

TEST(Substitute, IsSimultaneous)
{
    const std::map<VarIndex, Polynomial> swap{{0, x(1)}, {1, x(0)}};
    EXPECT_EQ(substitute(P("x0 - 2*x1"), swap), P("x1 - 2*x0"));
}

TEST(Substitute, IsAnAlgebraMapOnRandomInputs)
{
    std::mt19937_64 rng(2);
    for (int t = 0; t < 40; ++t) {
        std::map<VarIndex, Polynomial> images;
        for (VarIndex i = 0; i <= 6; ++i) {
            images[i] = oracle::random_polynomial(rng, 3, 2, 6);
        }
        const Polynomial f = oracle::random_polynomial(rng, 4, 3, 6);
        const Polynomial g = oracle::random_polynomial(rng, 4, 3, 6);
        ASSERT_EQ(substitute(f * g, images), substitute(f, images) * substitute(g, images));
    }
}

TEST(PartialDerivative, Examples)
{
    EXPECT_EQ(partial_derivative(P("x1^3"), VarIndex{1}), P("3*x1^2"));
    EXPECT_TRUE(partial_derivative(P("x0 + x1"), VarIndex{2}).is_zero());
    EXPECT_EQ(partial_derivative(P("x0*x1^2 + x1*x2"), VarIndex{1}), P("2*x0*x1 + x2"));
}

TEST(PartialDerivative, LeibnizOnRandomPairs)
{
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
        const Polynomial f = oracle::random_polynomial(rng);
        const Polynomial g = oracle::random_polynomial(rng);
        const VarIndex i = static_cast<VarIndex>(rng() % 7);
        ASSERT_EQ(partial_derivative(f * g, i), partial_derivative(f, i) * g + f * partial_derivative(g, i));
    }
}

TEST(ExactDivide, Examples)
{
    EXPECT_EQ(exact_divide(P("x0^2 - x1^2"), P("x0 - x1")), P("x0 + x1"));
    const Polynomial f = P("2/3*x0*x4 - x2");
    EXPECT_EQ(exact_divide(f, Polynomial(1)), f);
    EXPECT_EQ(exact_divide(P("x0^2*x2^2 - x1^4"), P("x0*x2 - x1^2")), P("x0*x2 + x1^2"));
}

TEST(ExactDivide, InexactDivisionIsAnError)
{
    try {
        (void)exact_divide(P("x0^2 + x1"), P("x0 - x1"));
        FAIL();
    } catch (const invar_error &e) {
        EXPECT_STREQ(e.what(), "inexact division");
    }
    EXPECT_THROW((void)exact_divide(x(0), Polynomial()), invar_error);
}

TEST(ExactDivide, RecoversFactorOnRandomProducts)
{
    std::mt19937_64 rng(4);
    for (int t = 0; t < 100; ++t) {
        const Polynomial f = oracle::random_polynomial(rng);
        Polynomial g = oracle::random_polynomial(rng);
        if (g.is_zero()) {
            g = Polynomial(3);
        }
        ASSERT_EQ(exact_divide(f * g, g), f);
    }
}

TEST(Determinant, TwoByTwoHankel)
{
    EXPECT_EQ(determinant(PolyMatrix{{x(0), x(1)}, {x(1), x(2)}}), P("x0*x2 - x1^2"));
}

TEST(Determinant, Identity)
{
    EXPECT_EQ(determinant(PolyMatrix::identity(3)), Polynomial(1));
    EXPECT_EQ(determinant(PolyMatrix::identity(0)), Polynomial(1));
}

TEST(Determinant, ThreeByThreeHankelMatchesCofactorOracle)
{
    PolyMatrix m(3, 3);
    for (unsigned i = 0; i < 3; ++i) {
        for (unsigned j = 0; j < 3; ++j) {
            m(i, j) = x(i + j);
        }
    }
    const Polynomial expected = P("x0*x2*x4 - x0*x3^2 - x1^2*x4 + 2*x1*x2*x3 - x2^3");
    EXPECT_EQ(oracle::cofactor_determinant(m), expected);
    EXPECT_EQ(determinant(m), expected);
}

TEST(Determinant, NeedsPivotingWhenLeadingEntryVanishes)
{
    const PolyMatrix m{{Polynomial(), x(0), x(1)}, {x(2), Polynomial(), x(3)}, {x(4), x(5), Polynomial()}};
    EXPECT_EQ(determinant(m), oracle::cofactor_determinant(m));
    const PolyMatrix singular{{Polynomial(), x(0)}, {Polynomial(), x(1)}};
    EXPECT_TRUE(determinant(singular).is_zero());
}

TEST(Determinant, NonSquareRejected)
{
    try {
        (void)determinant(PolyMatrix(2, 3));
        FAIL();
    } catch (const invar_error &e) {
        EXPECT_STREQ(e.what(), "non-square matrix");
    }
}

TEST(Determinant, BareissAgreesWithCofactorOnRandomMatrices)
{
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 1 + t % 4;
        PolyMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                m(i, j) = oracle::random_polynomial(rng, 3, 2, 5);
            }
        }
        ASSERT_EQ(determinant(m), oracle::cofactor_determinant(m)) << "case " << t;
    }
}

UnivariatePoly uni(std::initializer_list<Polynomial> cs) { return UnivariatePoly(std::vector<Polynomial>(cs)); }

TEST(Resultant, LinearForms)
{
    const auto p = uni({P("a0"), P("a1")});
    const auto q = uni({P("c0"), P("c1")});
    EXPECT_EQ(resultant(p, q), P("a0*c1 - a1*c0"));
}

TEST(Resultant, SelfResultantVanishes)
{
    const auto p = uni({P("x0"), P("2*x1"), P("x2")});
    EXPECT_TRUE(resultant(p, p).is_zero());
    const auto lin = uni({P("x0"), P("x1")});
    EXPECT_TRUE(resultant(lin, lin).is_zero());
}

TEST(Resultant, ZeroInputRejected)
{
    try {
        (void)resultant(UnivariatePoly(), uni({x(0)}));
        FAIL();
    } catch (const invar_error &e) {
        EXPECT_STREQ(e.what(), "zero polynomial has no resultant");
    }
}

// Res(a prod(X - r_i), b prod(X - s_j)) = a^n b^m prod(r_i - s_j).
TEST(Resultant, MatchesRootProductFormula)
{
    std::mt19937_64 rng(6);
    std::uniform_int_distribution<long> small(-4, 4);
    for (int t = 0; t < 30; ++t) {
        const unsigned m = 1 + t % 3;
        const unsigned n = 1 + (t / 3) % 3;
        long a = small(rng), b = small(rng);
        a = a == 0 ? 2 : a;
        b = b == 0 ? -3 : b;
        std::vector<long> r(m), s(n);
        for (auto &v : r) v = small(rng);
        for (auto &v : s) v = small(rng);
        auto build = [](long lead, const std::vector<long> &roots) {
            Polynomial poly(lead);
            // Coefficients of lead * prod(X - root) via a dense rational vector.
            std::vector<Rational> c{Rational(lead)};
            for (long root : roots) {
                std::vector<Rational> next(c.size() + 1, Rational(0));
                for (std::size_t i = 0; i < c.size(); ++i) {
                    next[i] += c[i];
                    next[i + 1] -= c[i] * root;
                }
                c = next;
            }
            std::vector<Polynomial> coeffs;
            for (const auto &q : c) coeffs.emplace_back(q);
            return UnivariatePoly(coeffs);
        };
        Rational expected = pow(Rational(a), n) * pow(Rational(b), m);
        for (long ri : r) {
            for (long sj : s) {
                expected *= Rational(ri - sj);
            }
        }
        const Polynomial res = resultant(build(a, r), build(b, s));
        ASSERT_TRUE(res.is_constant());
        ASSERT_EQ(res.constant_term(), expected) << "case " << t;
    }
}

TEST(Resultant, SwapSignProperty)
{
    std::mt19937_64 rng(7);
    for (int t = 0; t < 20; ++t) {
        auto random_uni = [&](unsigned deg) {
            std::vector<Polynomial> cs;
            for (unsigned i = 0; i <= deg; ++i) {
                cs.push_back(oracle::random_polynomial(rng, 2, 1, 3));
            }
            if (cs[0].is_zero()) {
                cs[0] = Polynomial(1);
            }
            return UnivariatePoly(cs);
        };
        const auto p = random_uni(1 + t % 3);
        const auto q = random_uni(1 + (t + 1) % 3);
        const Polynomial pq = resultant(p, q);
        const Polynomial qp = resultant(q, p);
        ASSERT_EQ(pq, (p.degree() * q.degree()) % 2 == 0 ? qp : -qp);
    }
}

TEST(Discriminant, NormalizedQuadratic)
{
    const auto p = uni({P("1/4*a0"), P("1/2*a1"), P("1/4*a2")});
    EXPECT_EQ(discriminant(p), P("1/4*a1^2 - 1/4*a0*a2"));
}

TEST(Discriminant, GenericQuadraticAndCubic)
{
    EXPECT_EQ(discriminant(uni({P("x0"), P("x1"), P("x2")})), P("x1^2 - 4*x0*x2"));
    // Monic depressed cubic X^3 + pX + q: -4p^3 - 27q^2.
    EXPECT_EQ(discriminant(uni({Polynomial(1), Polynomial(), P("x1"), P("x2")})), P("-4*x1^3 - 27*x2^2"));
}

TEST(Discriminant, DegreeBelowTwoRejected)
{
    EXPECT_THROW((void)discriminant(uni({x(0), x(1)})), invar_error);
    EXPECT_THROW((void)discriminant(UnivariatePoly()), invar_error);
}

TEST(Parse, Examples)
{
    EXPECT_EQ(P("x0*x2 - x1^2"), x(0) * x(2) - x(1) * x(1));
    EXPECT_EQ(P("3/2*x1"), x(1) * make_rational(3, 2));
    EXPECT_EQ(P("a0 + x0"), P("2*x0"));
    EXPECT_EQ(P(" ( x0 + 1 ) ^ 2 "), P("x0^2 + 2*x0 + 1"));
    EXPECT_EQ(P("-x0"), -x(0));
}

TEST(Parse, TwelveTermPsumImageRoundTrips)
{
    const Polynomial f = P("-4*a1*a2*a0 + 24*a1*a2*a3 + 24*a0*a1*a3 + 48*a0*a2*a4 - 8*a2^3 - 8*a0*a2^2 - "
                           "12*a1*a2^2 - 36*a0*a3^2 - 4*a1^2*a2 - 24*a1^2*a4 + 24*a1^2*a3 - 24*a0*a1*a4");
    EXPECT_EQ(f.size(), 12u);
    EXPECT_EQ(f.terms(), P(print_poly(f).c_str()).terms());
}

TEST(Parse, CanonicalPrinting)
{
    EXPECT_EQ(print_poly(P("x0*x2 - x1^2")), "x0*x2 - x1^2");
    EXPECT_EQ(print_poly(P("1/2*x0 + x1")), "x1 + 1/2*x0");
    EXPECT_EQ(print_poly(P("-x1 + 4")), "-x1 + 4");
    EXPECT_EQ(print_poly(P("mu^2*x0 + 2*mu*x1 + x2")), "x0*mu^2 + 2*x1*mu + x2");
    EXPECT_EQ(print_poly(P("c1*x0")), "x0*c1");
    EXPECT_EQ(print_poly(P("-3/4")), "-3/4");
}

TEST(Parse, ErrorsCarryPosition)
{
    try {
        (void)P("x0 +\n  * x1");
        FAIL();
    } catch (const parse_error &e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_EQ(e.column(), 3u);
    }
    EXPECT_THROW((void)P("x0 $ x1"), parse_error);
    EXPECT_THROW((void)P("y3"), parse_error);
    EXPECT_THROW((void)P("x"), parse_error);
    EXPECT_THROW((void)P("(x0 + x1"), parse_error);
    EXPECT_THROW((void)P("x0^99999999999"), parse_error);
    EXPECT_THROW((void)P("x99999999999"), parse_error);
    EXPECT_THROW((void)P("1/0"), parse_error);
    try {
        (void)P("x0 # x1");
    } catch (const parse_error &e) {
        EXPECT_NE(std::string(e.what()).find("unknown token"), std::string::npos);
    }
}

TEST(Parse, PrintParseIdentityOnRandomPolynomials)
{
    std::mt19937_64 rng(8);
    for (int t = 0; t < 100; ++t) {
        Polynomial f = oracle::random_polynomial(rng, 6, 4, 6);
        if (t % 5 == 0) {
            f += P("mu*c2 - 1/3*mu1^2");
        }
        ASSERT_EQ(P(print_poly(f).c_str()), f) << print_poly(f);
    }
}

TEST(LinearSolve, Examples)
{
    auto one = solve_rational_linear({{Rational(1)}}, {Rational(2)});
    ASSERT_TRUE(one);
    EXPECT_EQ(one->particular, (RationalVector{Rational(2)}));
    EXPECT_TRUE(one->null_basis.empty());

    auto kernel = solve_rational_linear({{Rational(1), Rational(1)}}, {Rational(0)});
    ASSERT_TRUE(kernel);
    ASSERT_EQ(kernel->null_basis.size(), 1u);
    EXPECT_EQ(kernel->null_basis[0], (RationalVector{Rational(-1), Rational(1)}));
}

TEST(LinearSolve, InconsistentAndMismatched)
{
    EXPECT_FALSE(solve_rational_linear({{Rational(1)}, {Rational(1)}}, {Rational(1), Rational(2)}));
    EXPECT_THROW((void)solve_rational_linear({{Rational(1)}}, {Rational(1), Rational(2)}), invar_error);
    EXPECT_THROW((void)solve_rational_linear({{Rational(1), Rational(2)}, {Rational(1)}},
                                             {Rational(1), Rational(2)}),
                 invar_error);
}

// The n = 3 step of intertwining the SUM logarithm with the basic Weitzenbock
// derivation: D(x_i) = sum_j (-1)^(j+1)/j x_{i-j}, right side 3 * Psi(x_2) =
// 3*(x_1 + 2 x_2).
TEST(LinearSolve, SumIntertwiningStepAtThree)
{
    auto d = [](int i, int k) { return make_rational((i - k) % 2 == 1 ? 1 : -1, i - k); };
    RationalMatrix a(3, RationalVector(3, Rational(0)));
    for (int k = 0; k < 3; ++k) {
        for (int i = k + 1; i <= 3; ++i) {
            a[k][i - 1] = d(i, k);
        }
    }
    const RationalVector b{Rational(0), Rational(3), Rational(6)};
    auto sol = solve_rational_linear(a, b);
    ASSERT_TRUE(sol);
    EXPECT_EQ(sol->particular, (RationalVector{Rational(1), Rational(6), Rational(6)}));
}

} // namespace
