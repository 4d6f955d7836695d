#include "oracle.hpp"
#include "torsor/abelian.hpp"

#include <gtest/gtest.h>

using namespace torsor;

namespace {

IntMatrix random_matrix(oracle::Rng& rng, std::size_t rows, std::size_t cols, int bound)
{
    IntMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = oracle::uniform(rng, -bound, bound);
    return m;
}

oracle::Mat to_mat(const IntMatrix& m)
{
    oracle::Mat out(m.rows(), std::vector<long long>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out[r][c] = static_cast<long long>(m(r, c));
    return out;
}

void expect_valid_smith(const IntMatrix& m, const SmithForm& f)
{
    EXPECT_EQ(f.U * m * f.V, f.S);
    EXPECT_EQ(f.U * f.U_inv, IntMatrix::identity(m.rows()));
    EXPECT_EQ(f.V * f.V_inv, IntMatrix::identity(m.cols()));
    for (std::size_t r = 0; r < f.S.rows(); ++r)
        for (std::size_t c = 0; c < f.S.cols(); ++c)
            if (r != c) {
                EXPECT_EQ(f.S(r, c), 0);
            }
    for (std::size_t i = 0; i < f.rank; ++i) {
        EXPECT_GT(f.diagonal(i), 0);
        if (i + 1 < f.rank) {
            EXPECT_EQ(f.diagonal(i + 1) % f.diagonal(i), 0);
        }
    }
    for (std::size_t i = f.rank; i < std::min(m.rows(), m.cols()); ++i) EXPECT_EQ(f.diagonal(i), 0);
}

} // namespace

TEST(Smith, SmallExample)
{
    IntMatrix m{{2, 4}, {6, 8}};
    SmithForm f = smith_normal_form(m);
    EXPECT_EQ(f.S, (IntMatrix{{2, 0}, {0, 4}}));
    expect_valid_smith(m, f);
}

TEST(Smith, ZeroAndIdentity)
{
    IntMatrix z(3, 2);
    SmithForm fz = smith_normal_form(z);
    EXPECT_TRUE(fz.S.is_zero());
    EXPECT_EQ(fz.rank, 0u);
    IntMatrix id = IntMatrix::identity(4);
    EXPECT_EQ(smith_normal_form(id).S, id);
}

TEST(Smith, EmptyMatrices)
{
    expect_valid_smith(IntMatrix(0, 3), smith_normal_form(IntMatrix(0, 3)));
    expect_valid_smith(IntMatrix(2, 0), smith_normal_form(IntMatrix(2, 0)));
}

TEST(Smith, RandomMatricesAgreeWithEuclideanReduction)
{
    oracle::Rng rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        std::size_t rows = static_cast<std::size_t>(oracle::uniform(rng, 1, 6));
        std::size_t cols = static_cast<std::size_t>(oracle::uniform(rng, 1, 6));
        IntMatrix m = random_matrix(rng, rows, cols, trial % 3 == 0 ? 1 : 9);
        SmithForm f = smith_normal_form(m);
        expect_valid_smith(m, f);
        auto expected = oracle::invariant_factors(to_mat(m));
        ASSERT_EQ(f.rank, expected.size());
        for (std::size_t i = 0; i < f.rank; ++i) EXPECT_EQ(f.diagonal(i), expected[i]);
    }
}

TEST(Smith, UnimodularTransforms)
{
    oracle::Rng rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        IntMatrix m = random_matrix(rng, 4, 5, 5);
        SmithForm f = smith_normal_form(m);
        Integer du = determinant(f.U), dv = determinant(f.V);
        EXPECT_TRUE(du == 1 || du == -1);
        EXPECT_TRUE(dv == 1 || dv == -1);
    }
}

TEST(SolveLinear, Examples)
{
    EXPECT_FALSE(solve_linear(IntMatrix{{2}}, {Integer(1)}, {Integer(4)}).has_value());
    auto x = solve_linear(IntMatrix{{2}}, {Integer(2)}, {Integer(4)});
    ASSERT_TRUE(x);
    EXPECT_EQ(*x, std::vector<Integer>{1});
    auto y = solve_linear(IntMatrix{{1, 1}}, {Integer(5)}, {Integer(0)});
    ASSERT_TRUE(y);
    EXPECT_EQ(*y, (std::vector<Integer>{5, 0}));
}

TEST(SolveLinear, RandomConsistentSystems)
{
    oracle::Rng rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t rows = static_cast<std::size_t>(oracle::uniform(rng, 1, 5));
        std::size_t cols = static_cast<std::size_t>(oracle::uniform(rng, 1, 5));
        IntMatrix m = random_matrix(rng, rows, cols, 4);
        Integer mod = oracle::uniform(rng, 0, 6);
        if (mod == 1) mod = 0;
        std::vector<Integer> x0(cols), moduli(rows, mod);
        for (auto& v : x0) v = oracle::uniform(rng, -5, 5);
        auto b = multiply(m, x0);
        auto x = solve_linear(m, b, moduli);
        ASSERT_TRUE(x) << "a solution was planted";
        auto bx = multiply(m, *x);
        for (std::size_t r = 0; r < rows; ++r) EXPECT_EQ(mod_floor(bx[r] - b[r], mod), 0);
    }
}

TEST(SolveLinear, InfeasibleMatchesExhaustiveSearch)
{
    oracle::Rng rng(14);
    for (int trial = 0; trial < 100; ++trial) {
        IntMatrix m = random_matrix(rng, 2, 2, 3);
        const long long mod = oracle::uniform(rng, 2, 6);
        std::vector<Integer> b{Integer(oracle::uniform(rng, 0, 5)), Integer(oracle::uniform(rng, 0, 5))};
        bool brute = false;
        for (long long a = 0; a < mod && !brute; ++a)
            for (long long c = 0; c < mod && !brute; ++c) {
                auto v = multiply(m, std::vector<Integer>{Integer(a), Integer(c)});
                brute = mod_floor(v[0] - b[0], Integer(mod)) == 0 && mod_floor(v[1] - b[1], Integer(mod)) == 0;
            }
        EXPECT_EQ(solve_linear(m, b, {Integer(mod), Integer(mod)}).has_value(), brute);
    }
}

TEST(LinearSolver, ShuffledColumnsStillSolve)
{
    oracle::Rng rng(15);
    IntMatrix m = random_matrix(rng, 3, 5, 3);
    std::vector<Integer> x0{1, -2, 0, 3, 1};
    auto b = multiply(m, x0);
    for (std::uint64_t seed = 1; seed < 10; ++seed) {
        LinearSolver s(m, SolverOptions{seed});
        auto x = s.solve_integer(b);
        ASSERT_TRUE(x);
        EXPECT_EQ(multiply(m, *x), b);
    }
}

TEST(LinearSolver, RationalAndCircle)
{
    IntMatrix m{{2, 0}, {0, 3}};
    LinearSolver s(m);
    auto q = s.solve_rational({Rational(1), Rational(1)});
    ASSERT_TRUE(q);
    EXPECT_EQ((*q)[0], Rational(1, 2));
    EXPECT_EQ((*q)[1], Rational(1, 3));
    // 2x = 1/3 mod 1 has the solution 1/6
    auto c = s.solve_circle({Rational(1, 3), Rational(0)});
    ASSERT_TRUE(c);
    EXPECT_EQ(frac(2 * (*c)[0] - Rational(1, 3)), 0);
}

TEST(Group, Canonical)
{
    EXPECT_EQ(FgAbelianGroup({2, 0, 0}).to_string(), "Z/2 + Z^2");
    EXPECT_EQ(FgAbelianGroup::trivial().to_string(), "0");
    EXPECT_THROW(FgAbelianGroup({3, 2}), Error);
    EXPECT_THROW(FgAbelianGroup({0, 2}), Error);
    auto c = canonicalize({Integer(2), Integer(3)});
    EXPECT_EQ(c.group.moduli(), std::vector<Integer>{6});
    auto d = canonicalize({Integer(4), Integer(6)});
    EXPECT_EQ(d.group.moduli(), (std::vector<Integer>{2, 12}));
}

TEST(Group, ElementsEnumeration)
{
    FgAbelianGroup g({2, 4});
    auto els = g.elements();
    ASSERT_EQ(els.size(), 8u);
    for (std::size_t i = 0; i < els.size(); ++i) EXPECT_EQ(g.index_of(els[i]), i);
    EXPECT_EQ(g.order(), 8);
}

TEST(Presentation, CokernelOfRelations)
{
    // Z^2 / <(2,0),(0,3)> = Z/6
    Presentation p = present(IntMatrix{{2, 0}, {0, 3}});
    EXPECT_EQ(p.group.moduli(), std::vector<Integer>{6});
    auto coords = p.canonical_coords({Integer(1), Integer(1)});
    EXPECT_FALSE(p.group.is_zero(coords));
}

TEST(Homomorphism, KernelAndPreimage)
{
    Homomorphism doubling(FgAbelianGroup::cyclic(4), FgAbelianGroup::cyclic(4), IntMatrix{{2}});
    EXPECT_FALSE(doubling.is_injective());
    EXPECT_FALSE(doubling.is_surjective());
    EXPECT_TRUE(doubling.preimage({Integer(2)}).has_value());
    EXPECT_FALSE(doubling.preimage({Integer(1)}).has_value());
}

TEST(ShortExactSequence, DoublingSequence)
{
    auto z2 = FgAbelianGroup::cyclic(2), z4 = FgAbelianGroup::cyclic(4);
    ShortExactSequence s(Homomorphism(z2, z4, IntMatrix{{2}}), Homomorphism(z4, z2, IntMatrix{{1}}));
    auto lift = s.section({Integer(1)});
    EXPECT_EQ(s.project()(lift), std::vector<Integer>{1});
    EXPECT_THROW(ShortExactSequence(Homomorphism(z2, z4, IntMatrix{{2}}), Homomorphism(z4, z4, IntMatrix{{1}})), Error);
}

TEST(Cohomology, RejectsNonComplex)
{
    EXPECT_THROW(cohomology_of(IntMatrix{{1}}, IntMatrix{{1}}, FgAbelianGroup::integers()), Error);
}

TEST(Cohomology, ChainOfLengthTwo)
{
    // 0 -> Z --(2)--> Z -> 0: H^1 = Z/2, H^0 = 0
    IntMatrix d{{2}};
    EXPECT_EQ(cohomology_of(d, IntMatrix(0, 1), FgAbelianGroup::integers()).to_string(), "Z/2");
    EXPECT_EQ(cohomology_of(IntMatrix(1, 0), d, FgAbelianGroup::integers()).to_string(), "0");
    EXPECT_EQ(cohomology_of(d, IntMatrix(0, 1), FgAbelianGroup::cyclic(3)).to_string(), "0");
    EXPECT_EQ(cohomology_of(IntMatrix(1, 0), d, FgAbelianGroup::cyclic(4)).to_string(), "Z/2");
}
