#include <random>

#include <gtest/gtest.h>

#include <invar/json_io.hpp>

#include "oracles.hpp"

using namespace invar;

namespace {

Polynomial P(const char *text) { return parse_poly(text); }
Polynomial x(VarIndex i) { return Polynomial::x(i); }

const Derivation W = basic_weitzenbock();

Derivation log_of(const TransformFamily &f, VarIndex bound)
{
    return log_endomorphism(family_endomorphism(f, bound), bound);
}

TEST(CayleyGenerator, LowDegrees)
{
    EXPECT_EQ(cayley_generator(2), P("x0*x2 - x1^2"));
    EXPECT_EQ(cayley_generator(3), P("x0^2*x3 - 3*x0*x1*x2 + 2*x1^3"));
}

TEST(CayleyGenerator, InKernelOfWeitzenbock)
{
    for (unsigned k = 2; k <= 8; ++k) {
        ASSERT_TRUE(apply(W, cayley_generator(k)).is_zero()) << k;
    }
}

TEST(CayleyGenerator, RejectsSmallK)
{
    EXPECT_THROW((void)cayley_generator(1), invar_error);
    EXPECT_THROW((void)cayley_generator(0), invar_error);
}

TEST(Catalecticant, Examples)
{
    EXPECT_EQ(catalecticant(0), x(0));
    EXPECT_EQ(catalecticant(1), P("x0*x2 - x1^2"));
    EXPECT_EQ(catalecticant(2), P("x0*x2*x4 - x0*x3^2 - x1^2*x4 + 2*x1*x2*x3 - x2^3"));
    EXPECT_EQ(catalecticant(3), oracle::cofactor_determinant(hankel_matrix(3)));
}

TEST(Catalecticant, InKernelOfWeitzenbock)
{
    for (unsigned n = 0; n <= 4; ++n) {
        ASSERT_TRUE(apply(W, catalecticant(n)).is_zero()) << n;
    }
}

TEST(Stirling2, Examples)
{
    for (unsigned n = 0; n <= 10; ++n) {
        EXPECT_EQ(stirling2(n, n), 1);
        if (n >= 1) {
            EXPECT_EQ(stirling2(n, 1), 1);
            EXPECT_EQ(stirling2(n, 0), 0);
        }
    }
    EXPECT_EQ(stirling2(4, 2), 7);
    EXPECT_EQ(stirling2(3, 5), 0);
}

TEST(Stirling2, MatchesPartitionEnumeration)
{
    for (unsigned n = 0; n <= 8; ++n) {
        for (unsigned k = 0; k <= n; ++k) {
            ASSERT_EQ(stirling2(n, k), oracle::stirling2_bruteforce(n, k)) << n << "," << k;
        }
    }
}

// Closed forms for the catalog logs, c_{n,i} = sign(n,i) * i! * S(n,i).
template <typename Sign>
void expect_stirling_table(const LinearChangeOfBasis &psi, Sign sign)
{
    for (VarIndex n = 0; n <= psi.bound(); ++n) {
        for (VarIndex i = 0; i <= n; ++i) {
            const Rational expected(Integer(sign(n, i)) * factorial(i) * stirling2(n, i));
            ASSERT_EQ(psi.coeff(n, i), expected) << "c(" << n << "," << i << ")";
        }
    }
}

void expect_intertwines(const Derivation &d, const LinearChangeOfBasis &psi)
{
    for (VarIndex n = 1; n <= psi.bound(); ++n) {
        ASSERT_EQ(apply(d, psi.image(n)), psi.image(n - 1) * Rational(n)) << n;
    }
}

TEST(IntertwiningSolve, SumLog)
{
    const Derivation d = log_of(triangular_families().sum, 8);
    const auto psi = intertwining_solve(d, 8);
    expect_stirling_table(psi, [](unsigned, unsigned) { return 1; });
    expect_intertwines(d, psi);
}

TEST(IntertwiningSolve, WeitzenbockItselfGivesIdentity)
{
    const auto psi = intertwining_solve(W, 6);
    for (VarIndex n = 0; n <= 6; ++n) {
        EXPECT_EQ(psi.image(n), x(n));
    }
}

TEST(IntertwiningSolve, PsumLog)
{
    const Derivation d = log_of(triangular_families().psum, 8);
    const auto psi = intertwining_solve(d, 8);
    expect_stirling_table(psi, [](unsigned n, unsigned k) { return (n + k) % 2 == 0 ? 1 : -1; });
    expect_intertwines(d, psi);
}

TEST(IntertwiningSolve, DiffLog)
{
    const Derivation d = log_of(triangular_families().diff, 8);
    const auto psi = intertwining_solve(d, 8);
    expect_stirling_table(psi, [](unsigned, unsigned i) { return i % 2 == 0 ? 1 : -1; });
    expect_intertwines(d, psi);
}

TEST(IntertwiningSolve, RandomNondegenerateDerivations)
{
    std::mt19937_64 rng(21);
    for (int t = 0; t < 20; ++t) {
        Derivation d = oracle::random_triangular_linear(rng, 6);
        bool ok = true;
        for (VarIndex j = 1; j <= 6; ++j) {
            ok = ok && apply(d, x(j)).coefficient(Monomial::power(x_var(j - 1), 1)) != 0;
        }
        if (!ok) {
            continue;
        }
        expect_intertwines(d, intertwining_solve(d, 6));
    }
}

TEST(IntertwiningSolve, SingularSystem)
{
    const Derivation d = Derivation::from_images({{1, x(0)}, {2, x(0)}}, 2);
    try {
        (void)intertwining_solve(d, 2);
        FAIL();
    } catch (const invar_error &e) {
        EXPECT_NE(std::string(e.what()).find("intertwining system singular"), std::string::npos);
    }
    EXPECT_THROW((void)intertwining_solve(Derivation(), 2), invar_error);
    EXPECT_THROW((void)intertwining_solve(Derivation::from_images({{1, P("x0^2")}}, 1), 1), invar_error);
    EXPECT_THROW((void)intertwining_solve(W.scaled(Polynomial::param()), 2), invar_error);
}

TEST(LinearChangeOfBasis, ValidatesShape)
{
    EXPECT_THROW(LinearChangeOfBasis({{Rational(2)}}), invar_error);
    EXPECT_THROW(LinearChangeOfBasis({{Rational(1)}, {Rational(0), Rational(0)}}), invar_error);
    EXPECT_THROW(LinearChangeOfBasis({{Rational(1)}, {Rational(1)}}), invar_error);
    EXPECT_THROW(LinearChangeOfBasis(std::vector<RationalVector>{}), invar_error);
}

TEST(PushThrough, PsumCatalecticant)
{
    const auto psi = intertwining_solve(log_of(triangular_families().psum, 4), 4);
    EXPECT_EQ(push_through(psi, catalecticant(1)), P("-a1^2 - a1*a0 + 2*a2*a0"));
    EXPECT_EQ(push_through(psi, x(0)), x(0));
}

TEST(PushThrough, SumImageOfX2)
{
    const auto psi = intertwining_solve(log_of(triangular_families().sum, 4), 4);
    EXPECT_EQ(push_through(psi, x(2)), P("x1 + 2*x2"));
}

TEST(PushThrough, OutOfBound)
{
    const auto psi = LinearChangeOfBasis::identity(2);
    EXPECT_THROW((void)push_through(psi, x(3)), invar_error);
}

TEST(PushThrough, CarriesWeitzenbockKernelIntoKernelOfD)
{
    const auto tri = triangular_families();
    for (const auto &f : {tri.psum, tri.sum, tri.diff}) {
        const Derivation d = log_of(f, 6);
        const auto psi = intertwining_solve(d, 6);
        for (unsigned k = 2; k <= 6; ++k) {
            ASSERT_TRUE(kernel_membership(d, push_through(psi, cayley_generator(k)))) << f.name() << " z" << k;
        }
        for (unsigned n = 0; n <= 3; ++n) {
            ASSERT_TRUE(kernel_membership(d, push_through(psi, catalecticant(n)))) << f.name() << " h" << n;
        }
    }
}

TEST(KernelMembership, Examples)
{
    EXPECT_TRUE(kernel_membership(W, cayley_generator(3)));
    EXPECT_FALSE(kernel_membership(W, x(1)));
    EXPECT_TRUE(kernel_membership(shift_derivation(), P("2*x0*x2 - x1^2")));
}

TEST(KernelPresentation, WeitzenbockGivesCayleyGenerators)
{
    const auto kp = kernel_presentation(W, 3);
    ASSERT_EQ(kp.generators.size(), 3u);
    EXPECT_EQ(kp.generators[0].poly, x(0));
    EXPECT_EQ(kp.generators[1].poly, cayley_generator(2));
    EXPECT_EQ(kp.generators[2].poly, cayley_generator(3));
    EXPECT_EQ(kp.generators[1].name, "psi_z2");
}

TEST(KernelPresentation, PsumSecondGenerator)
{
    const auto kp = kernel_presentation(log_of(triangular_families().psum, 2), 2);
    ASSERT_EQ(kp.generators.size(), 2u);
    EXPECT_EQ(kp.generators[0].poly, x(0));
    EXPECT_EQ(kp.generators[1].poly, P("-x0*x1 + 2*x0*x2 - x1^2"));
}

TEST(KernelPresentation, EveryGeneratorIsAnnihilated)
{
    const auto tri = triangular_families();
    for (const auto &f : {tri.psum, tri.sum, tri.diff}) {
        const Derivation d = log_of(f, 6);
        for (const auto &g : kernel_presentation(d, 6).generators) {
            ASSERT_TRUE(apply(d, g.poly).is_zero()) << f.name() << " " << g.name;
        }
    }
}

TEST(KernelPresentation, Json)
{
    const auto kp = kernel_presentation(W, 2);
    const json j = to_json(kp);
    EXPECT_EQ(j["derivation"]["images"]["x2"], "2*x1");
    EXPECT_EQ(j["generators"][1]["name"], "psi_z2");
    EXPECT_EQ(parse_poly(j["generators"][1]["poly"].get<std::string>()), cayley_generator(2));
}

std::vector<Polynomial> alt_convolution_members(unsigned from, unsigned to)
{
    const auto f = alt_convolution_family();
    std::vector<Polynomial> out;
    for (unsigned n = from; n <= to; ++n) {
        out.push_back(f.term(n));
    }
    return out;
}

TEST(Problem2FindDerivations, AlternatingConvolutionAdmitsShift)
{
    const auto basis = problem2_find_derivations(alt_convolution_members(1, 3), DerivationAnsatz{6});
    ASSERT_FALSE(basis.empty());
    EXPECT_TRUE(span_contains(basis, shift_derivation(), 6));
    EXPECT_FALSE(span_contains(basis, W, 6));
}

TEST(Problem2FindDerivations, X0IsKilledByEverything)
{
    const DerivationAnsatz ansatz{4};
    const auto basis = problem2_find_derivations({x(0)}, ansatz);
    EXPECT_EQ(basis.size(), ansatz.unknown_count());
}

TEST(Problem2FindDerivations, X1ForcesD10ToVanish)
{
    const DerivationAnsatz ansatz{3};
    const auto basis = problem2_find_derivations({x(1)}, ansatz);
    EXPECT_EQ(basis.size(), ansatz.unknown_count() - 1);
    for (const auto &d : basis) {
        EXPECT_TRUE(d.image(1).is_zero());
    }
}

TEST(Problem2FindDerivations, SolutionsAnnihilateFamily)
{
    std::vector<Polynomial> family{catalecticant(1), catalecticant(2)};
    const auto basis = problem2_find_derivations(family, DerivationAnsatz{4});
    ASSERT_EQ(basis.size(), 1u);
    EXPECT_TRUE(span_contains(basis, W, 4));
    for (const auto &d : basis) {
        for (const auto &f : family) {
            ASSERT_TRUE(apply(d, f).is_zero());
        }
    }
}

TEST(Problem2FindDerivations, EmptyBasisAndErrors)
{
    // x_1 and x_2 - x_1^2 ... only the zero derivation kills x1, x2 and x3.
    const auto basis = problem2_find_derivations({x(1), x(2), x(3)}, DerivationAnsatz{3});
    EXPECT_TRUE(basis.empty());
    EXPECT_THROW((void)problem2_find_derivations({}, DerivationAnsatz{3}), invar_error);
    EXPECT_THROW((void)problem2_find_derivations({x(5)}, DerivationAnsatz{3}), invar_error);
}

TEST(DerivationAnsatz, UnknownCount)
{
    EXPECT_EQ(DerivationAnsatz{6}.unknown_count(), 21u);
    EXPECT_EQ(DerivationAnsatz{0}.unknown_count(), 0u);
}

// Exponential invariance equals kernel membership, sampled over triangular
// linear derivations, with kernel and non-kernel polynomials mixed in.
TEST(ExponentialInvariance, MatchesKernelMembership)
{
    std::mt19937_64 rng(22);
    int in_kernel = 0;
    for (int t = 0; t < 50; ++t) {
        const Derivation d = oracle::random_triangular_linear(rng, 6);
        Polynomial f = oracle::random_polynomial(rng, 3, 3, 6);
        if (t % 2 == 0) {
            f = Polynomial(rng() % 5) + apply(d, x(1)) * Rational(long(rng() % 3) - 1);
        }
        const bool killed = apply(d, f).is_zero();
        in_kernel += killed;
        ASSERT_EQ(killed, exp_apply(d, f) == f) << print_poly(f);
    }
    EXPECT_GT(in_kernel, 0);
}

} // namespace
