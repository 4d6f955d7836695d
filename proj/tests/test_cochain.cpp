#include "oracle.hpp"
#include "torsor/cochain.hpp"
#include "torsor/fixtures.hpp"

#include <gtest/gtest.h>

using namespace torsor;

namespace {

void expect_matches_oracle(const SimplicialComplex& k, int p, long long m)
{
    auto ptr = std::make_shared<const SimplicialComplex>(k);
    FgAbelianGroup g = m == 0 ? FgAbelianGroup::integers() : FgAbelianGroup::cyclic(m);
    EXPECT_EQ(oracle::moduli_of(CohomologyGroup(ptr, g, p).group()), oracle::cohomology_moduli(k, p, m))
        << "degree " << p << " modulus " << m;
}

Cochain circle_cochain(oracle::Rng& rng, const ComplexPtr& k, int p)
{
    Cochain x(k, p, Coefficients::circle());
    for (std::size_t i = 0; i < x.size(); ++i) x.set_at(i, {Rational(oracle::uniform(rng, -12, 12), oracle::uniform(rng, 1, 6))});
    return x;
}

} // namespace

TEST(Coboundary, DegreeZeroIsDifference)
{
    auto s = fixtures::hexagon_arcs();
    auto n = s.nerve.complex_ptr();
    Cochain f(n, 0, FgAbelianGroup::integers());
    f.set({0}, Rational(3));
    f.set({1}, Rational(-1));
    f.set({2}, Rational(7));
    Cochain df = coboundary(f);
    EXPECT_EQ(df.value({0, 1})[0], -4);
    EXPECT_EQ(df.value({1, 2})[0], 8);
    EXPECT_EQ(df.value({0, 2})[0], 4);
    EXPECT_EQ(df.value({2, 0})[0], -4);

    Cochain c(n, 0, FgAbelianGroup::integers());
    for (int i = 0; i < 3; ++i) c.set({i}, Rational(5));
    EXPECT_TRUE(coboundary(c).is_zero());
}

TEST(Coboundary, CircleValuedArcCocycle)
{
    auto s = fixtures::hexagon_arcs();
    Cochain g(s.nerve.complex_ptr(), 1, Coefficients::circle());
    g.set({0, 2}, Rational(1, 3));
    EXPECT_TRUE(is_cocycle(g));
    EXPECT_EQ(g.value({2, 0})[0], Rational(2, 3));
}

TEST(Coboundary, SquaresToZeroForEveryCoefficientKind)
{
    oracle::Rng rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        auto k = oracle::random_complex(rng, oracle::uniform(rng, 3, 7), 3);
        for (int p = 0; p + 2 <= k->dimension(); ++p) {
            EXPECT_TRUE(coboundary(coboundary(oracle::random_cochain(rng, k, p, oracle::random_coefficients(rng)))).is_zero());
            EXPECT_TRUE(coboundary(coboundary(circle_cochain(rng, k, p))).is_zero());
        }
    }
}

TEST(Coboundary, MultiComponentReduction)
{
    auto k = fixtures::triangle_boundary();
    Cochain x(k, 0, FgAbelianGroup({2, 0}));
    x.set({0}, Cochain::Value{Rational(3), Rational(-4)});
    EXPECT_EQ(x.value({0})[0], 1);
    EXPECT_EQ(x.value({0})[1], -4);
}

TEST(IsCoboundary, Examples)
{
    auto s = fixtures::hexagon_arcs();
    auto n = s.nerve.complex_ptr();
    Cochain zero(n, 1, FgAbelianGroup::integers());
    auto w = is_coboundary(zero);
    ASSERT_TRUE(w);
    EXPECT_TRUE(coboundary(*w).is_zero());

    Cochain gen(n, 1, FgAbelianGroup::integers());
    gen.set({0, 2}, Rational(1));
    EXPECT_FALSE(is_coboundary(gen));
}

TEST(IsCoboundary, RejectsNonCocycles)
{
    auto k = fixtures::projective_plane();
    Cochain x(k, 1, FgAbelianGroup::integers());
    x.set({0, 1}, Rational(1));
    EXPECT_THROW(is_coboundary(x), Error);
}

TEST(IsCoboundary, PlantedCoboundariesFindWitnesses)
{
    oracle::Rng rng(32);
    for (int trial = 0; trial < 60; ++trial) {
        auto k = oracle::random_complex(rng, oracle::uniform(rng, 3, 7), 3);
        int p = oracle::uniform(rng, 1, std::max(1, k->dimension()));
        if (p > k->dimension()) continue;
        auto g = oracle::random_coefficients(rng);
        Cochain x = coboundary(oracle::random_cochain(rng, k, p - 1, g));
        for (std::uint64_t seed : {0ULL, 7ULL}) {
            auto w = is_coboundary(x, SolverOptions{seed});
            ASSERT_TRUE(w);
            EXPECT_EQ(coboundary(*w), x);
        }
        Cochain c = coboundary(circle_cochain(rng, k, p - 1));
        auto wc = is_coboundary(c);
        ASSERT_TRUE(wc);
        EXPECT_EQ(coboundary(*wc), c);
    }
}

TEST(IsCoboundary, AgreesWithExhaustiveSearch)
{
    oracle::Rng rng(33);
    int checked = 0;
    for (int trial = 0; trial < 80; ++trial) {
        auto k = oracle::random_complex(rng, oracle::uniform(rng, 3, 5), 2);
        const long long m = oracle::uniform(rng, 2, 4);
        auto g = FgAbelianGroup::cyclic(m);
        for (int p = 1; p <= k->dimension(); ++p) {
            if (std::pow(double(m), double(k->count(p - 1))) > 2e5) continue;
            // a random cocycle: coboundary plus a random combination of generators
            Cochain x = coboundary(oracle::random_cochain(rng, k, p - 1, g));
            for (const auto& gen : CohomologyGroup(k, g, p).generators()) x += gen.scaled(oracle::uniform(rng, 0, 3));
            EXPECT_EQ(is_coboundary(x).has_value(), oracle::is_coboundary_exhaustive(*k, p, oracle::values_mod(x), m));
            ++checked;
        }
    }
    EXPECT_GT(checked, 40);
}

TEST(Cohomology, Fixtures)
{
    auto z = FgAbelianGroup::integers(), z2 = FgAbelianGroup::cyclic(2);
    EXPECT_EQ(simplicial_cohomology(*fixtures::triangle_boundary(), z, 1).to_string(), "Z");
    EXPECT_EQ(simplicial_cohomology(*fixtures::tetrahedron_boundary(), z, 1).to_string(), "0");
    EXPECT_EQ(simplicial_cohomology(*fixtures::tetrahedron_boundary(), z, 2).to_string(), "Z");
    EXPECT_EQ(simplicial_cohomology(*fixtures::projective_plane(), z2, 1).to_string(), "Z/2");
    EXPECT_EQ(simplicial_cohomology(*fixtures::projective_plane(), z2, 2).to_string(), "Z/2");
    EXPECT_EQ(simplicial_cohomology(*fixtures::projective_plane(), z, 2).to_string(), "Z/2");
    EXPECT_EQ(simplicial_cohomology(*fixtures::projective_plane(), z, 1).to_string(), "0");
}

TEST(Cohomology, AgreesWithUniversalCoefficients)
{
    oracle::Rng rng(34);
    std::vector<ComplexPtr> spaces{fixtures::projective_plane(), fixtures::small_torus(), fixtures::tetrahedron_boundary()};
    for (int i = 0; i < 25; ++i) spaces.push_back(oracle::random_complex(rng, oracle::uniform(rng, 3, 7), 3));
    for (const auto& k : spaces)
        for (int p = 0; p <= k->dimension(); ++p)
            for (long long m : {0, 2, 3, 4, 6}) expect_matches_oracle(*k, p, m);
}

TEST(Cohomology, PrimeFieldDimensions)
{
    // over a field the dimension is a rank count, independent of any Smith form
    oracle::Rng rng(38);
    for (int trial = 0; trial < 20; ++trial) {
        auto k = oracle::random_complex(rng, oracle::uniform(rng, 3, 7), 3);
        for (long long prime : {2, 3, 5})
            for (int q = 0; q <= k->dimension(); ++q) {
                std::size_t out = q < k->dimension() ? oracle::rank_mod(oracle::coboundary(*k, q), prime) : 0;
                std::size_t in = q > 0 ? oracle::rank_mod(oracle::coboundary(*k, q - 1), prime) : 0;
                auto h = CohomologyGroup(k, FgAbelianGroup::cyclic(prime), q).group();
                EXPECT_EQ(h.moduli().size(), k->count(q) - out - in);
                for (const auto& m : h.moduli()) EXPECT_EQ(m, prime);
            }
    }
}

TEST(Cohomology, CoordinatesRoundTrip)
{
    oracle::Rng rng(35);
    auto k = fixtures::small_torus();
    for (auto g : {FgAbelianGroup::integers(), FgAbelianGroup::cyclic(4), FgAbelianGroup({2, 0})}) {
        for (int p = 0; p <= 2; ++p) {
            CohomologyGroup h(k, g, p);
            auto gens = h.generators();
            for (int t = 0; t < 10; ++t) {
                std::vector<Integer> coords;
                Cochain x(k, p, g);
                for (std::size_t i = 0; i < gens.size(); ++i) {
                    coords.emplace_back(oracle::uniform(rng, -3, 3));
                    x += gens[i].scaled(static_cast<long long>(coords.back()));
                }
                if (p > 0) x += coboundary(oracle::random_cochain(rng, k, p - 1, g));
                EXPECT_EQ(h.coordinates(x), h.group().reduce(coords));
                EXPECT_EQ(h.coordinates(h.representative(coords)), h.group().reduce(coords));
            }
        }
    }
}

TEST(Cech, NerveCohomology)
{
    auto z = FgAbelianGroup::integers();
    auto arcs = fixtures::hexagon_arcs();
    EXPECT_EQ(cech_cohomology(arcs.nerve, z, 1).to_string(), "Z");
    EXPECT_EQ(cech_cohomology(arcs.nerve, z, 0).to_string(), "Z");
    auto t = fixtures::torus();
    EXPECT_EQ(cech_cohomology(t.space.nerve, z, 1).to_string(), "Z^2");
    EXPECT_EQ(cech_cohomology(t.space.nerve, z, 2).to_string(), "Z");
    auto rp = fixtures::projective_plane_good();
    EXPECT_EQ(cech_cohomology(rp.nerve, FgAbelianGroup::cyclic(2), 2).to_string(), "Z/2");
}

TEST(Goodness, Verification)
{
    auto arcs = fixtures::hexagon_arcs();
    EXPECT_TRUE(verify_good_cover(arcs.cover, arcs.nerve).ok());

    auto tet = fixtures::tetrahedron_stars();
    auto report = verify_good_cover(tet.cover, tet.nerve);
    ASSERT_FALSE(report.ok());
    auto quad = std::find_if(report.failures.begin(), report.failures.end(),
                             [](const GoodnessFailure& f) { return f.indices == Simplex{0, 1, 2, 3}; });
    ASSERT_NE(quad, report.failures.end());
    EXPECT_EQ(quad->degree, 1);
    EXPECT_EQ(quad->cohomology, "Z^3");

    auto disk = std::make_shared<const SimplicialComplex>(3, std::vector<Simplex>{{0, 1, 2}});
    Cover one(disk, {*disk});
    EXPECT_TRUE(verify_good_cover(one, Nerve(one)).ok());

    auto rp = fixtures::projective_plane_good();
    EXPECT_TRUE(verify_good_cover(rp.cover, rp.nerve).ok());
    auto rp_stars = fixtures::make_covered(star_cover(fixtures::projective_plane()));
    EXPECT_FALSE(verify_good_cover(rp_stars.cover, rp_stars.nerve).ok());
    auto t = fixtures::torus();
    EXPECT_TRUE(verify_good_cover(t.space.cover, t.space.nerve).ok());
}

TEST(Cup, UnitAndZero)
{
    oracle::Rng rng(36);
    auto k = fixtures::small_torus();
    Cochain one(k, 0, FgAbelianGroup::integers());
    for (std::size_t i = 0; i < one.size(); ++i) one.set_at(i, {Rational(1)});
    Cochain b = oracle::random_cochain(rng, k, 1, FgAbelianGroup::cyclic(5));
    EXPECT_EQ(cup(one, b), b);
    Cochain a = oracle::random_cochain(rng, k, 1, FgAbelianGroup::integers());
    EXPECT_TRUE(cup(a, Cochain(k, 1, FgAbelianGroup::integers())).is_zero());
    EXPECT_THROW(cup(oracle::random_cochain(rng, k, 0, FgAbelianGroup::cyclic(2)),
                     oracle::random_cochain(rng, k, 0, FgAbelianGroup::cyclic(3))),
                 Error);
}

TEST(Cup, LeibnizAndAssociativity)
{
    oracle::Rng rng(37);
    for (int trial = 0; trial < 20; ++trial) {
        auto k = oracle::random_complex(rng, oracle::uniform(rng, 4, 7), 3);
        auto z = FgAbelianGroup::integers();
        int p = oracle::uniform(rng, 0, 1), q = oracle::uniform(rng, 0, 1);
        if (p + q + 1 > k->dimension()) continue;
        Cochain a = oracle::random_cochain(rng, k, p, z), b = oracle::random_cochain(rng, k, q, z);
        Cochain lhs = coboundary(cup(a, b));
        Cochain rhs = cup(coboundary(a), b) + cup(a, coboundary(b)).scaled(p % 2 ? -1 : 1);
        EXPECT_EQ(lhs, rhs);
        Cochain c = oracle::random_cochain(rng, k, 0, z);
        EXPECT_EQ(cup(cup(a, b), c), cup(a, cup(b, c)));
    }
}

TEST(Cup, TorusGeneratorsMultiplyToGenerator)
{
    auto t = fixtures::torus();
    auto n = t.space.nerve.complex_ptr();
    auto z = FgAbelianGroup::integers();
    // pull back the arc generator along the two projections of the 3x3 piece grid
    auto arcs = fixtures::hexagon_arcs();
    Cochain gen = CohomologyGroup(arcs.nerve.complex_ptr(), z, 1).generators().at(0);
    std::vector<int> first(9), second(9);
    for (int i = 0; i < 9; ++i) {
        first[static_cast<std::size_t>(i)] = i / 3;
        second[static_cast<std::size_t>(i)] = i % 3;
    }
    Cochain x = pullback(gen, n, first), y = pullback(gen, n, second);
    CohomologyGroup h2(n, z, 2);
    auto c = h2.coordinates(cup(x, y));
    ASSERT_EQ(c.size(), 1u);
    EXPECT_TRUE(c[0] == 1 || c[0] == -1);
}

TEST(Pairing, Indicator)
{
    auto k = fixtures::triangle_boundary();
    Cochain x(k, 1, FgAbelianGroup::integers());
    x.set({0, 1}, Rational(1));
    Chain z(k, 1);
    z.add({0, 1}, 3);
    EXPECT_EQ(pair(x, z), 3);
    EXPECT_EQ(pair(Cochain(k, 1, FgAbelianGroup::integers()), z), 0);
    EXPECT_THROW(pair(x, Chain(k, 0)), Error);
}
