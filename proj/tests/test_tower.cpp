#include "oracle.hpp"
#include "torsor/fixtures.hpp"
#include "torsor/tower.hpp"

#include <gtest/gtest.h>

using namespace torsor;

namespace {

CentralExtension z4_over_z2() { return fixtures::cyclic_tower(1).extension(1); }

/// Projects transitions through ext.
TransitionCocycle project(const TransitionCocycle& g, const CentralExtension& ext)
{
    std::vector<int> v;
    for (int x : g.edge_values()) v.push_back(ext.project(x));
    return TransitionCocycle(g.nerve_ptr(), ext.base(), v);
}

bool differ_by_coboundary(const Cochain& a, const Cochain& b) { return is_coboundary(a - b).has_value(); }

std::vector<int> random_section(oracle::Rng& rng, const CentralExtension& ext)
{
    std::vector<int> s;
    for (int a = 0; a < ext.base().order(); ++a) {
        if (a == ext.base().identity()) {
            s.push_back(ext.total().identity());
            continue;
        }
        std::vector<int> fiber;
        for (int x = 0; x < ext.total().order(); ++x)
            if (ext.project(x) == a) fiber.push_back(x);
        s.push_back(fiber[static_cast<std::size_t>(oracle::uniform(rng, 0, static_cast<int>(fiber.size()) - 1))]);
    }
    return s;
}

/// Random nerve with triangles and tetrahedra.
ComplexPtr random_nerve(oracle::Rng& rng) { return oracle::random_complex(rng, oracle::uniform(rng, 4, 6), 3); }

/// Either a random complex or a closed surface, where obstructions can survive.
ComplexPtr mixed_nerve(oracle::Rng& rng, int trial)
{
    switch (trial % 3) {
    case 0: return fixtures::projective_plane();
    case 1: return fixtures::tetrahedron_boundary();
    default: return oracle::random_complex(rng, oracle::uniform(rng, 3, 5), 2);
    }
}

} // namespace

TEST(FiniteGroup, Validation)
{
    EXPECT_THROW(FiniteGroup({{0, 1}, {0, 1}}, 0), Error);
    EXPECT_THROW(FiniteGroup({{0, 1}, {1, 0}}, 1), Error);
    auto s3 = FiniteGroup::symmetric(3);
    EXPECT_EQ(s3.order(), 6);
    EXPECT_FALSE(s3.is_abelian());
    for (int x = 0; x < 6; ++x) EXPECT_EQ(s3.mul(x, s3.inv(x)), s3.identity());
}

TEST(Extension, CarryGivesCyclicGroup)
{
    auto e = z4_over_z2();
    EXPECT_TRUE(e.total().is_abelian());
    int order4 = 0;
    for (int x = 0; x < 4; ++x) order4 += e.total().element_order(x) == 4;
    EXPECT_EQ(order4, 2); // Z/4 has two generators; Z/2 x Z/2 has none
}

TEST(Extension, ZeroFactorSetIsDirectProduct)
{
    auto s3 = FiniteGroup::symmetric(3);
    auto a = FgAbelianGroup::cyclic(2);
    auto e = build_extension(s3, a, zero_factor_set(s3, a));
    for (int x = 0; x < 6; ++x)
        for (int y = 0; y < 6; ++y)
            for (const auto& h : a.elements())
                for (const auto& k : a.elements()) {
                    int lhs = e.total().mul(e.element(x, h), e.element(y, k));
                    EXPECT_EQ(lhs, e.element(s3.mul(x, y), a.add(h, k)));
                }
}

TEST(Extension, RejectsBadFactorSets)
{
    auto l = FiniteGroup::cyclic(3);
    auto a = FgAbelianGroup::cyclic(2);
    auto f = zero_factor_set(l, a);
    f[1][1] = {Integer(1)};
    try {
        build_extension(l, a, f);
        ADD_FAILURE() << "non-cocycle accepted";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotACocycle2);
    }
    auto g = zero_factor_set(l, a);
    g[0][1] = {Integer(1)};
    try {
        build_extension(l, a, g);
        ADD_FAILURE() << "non-normalized factor set accepted";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotNormalized);
    }
}

TEST(Extension, RandomExtensionsAreCentral)
{
    oracle::Rng rng(41);
    for (int trial = 0; trial < 60; ++trial) {
        auto b = oracle::random_base(rng);
        auto a = oracle::random_kernel(rng);
        auto e = build_extension(b.group, a, oracle::random_factor_set(rng, b, a));
        const auto& t = e.total();
        EXPECT_EQ(t.order(), b.group.order() * static_cast<int>(a.order()));
        for (int x = 0; x < t.order(); ++x) {
            for (int y = 0; y < t.order(); ++y) EXPECT_EQ(e.project(t.mul(x, y)), b.group.mul(e.project(x), e.project(y)));
            for (const auto& h : a.elements()) EXPECT_EQ(t.mul(x, e.include(h)), t.mul(e.include(h), x));
        }
    }
}

TEST(Transitions, CocycleLawIsEnforced)
{
    auto arcs = fixtures::hexagon_arcs();
    auto tet = fixtures::tetrahedron_stars();
    auto z2 = FiniteGroup::cyclic(2);
    std::vector<int> v(tet.nerve.complex().count(1), 0);
    v[0] = 1;
    EXPECT_THROW(TransitionCocycle(tet.nerve.complex_ptr(), z2, v), Error);
    // the arcs nerve has no triangles, so anything goes
    EXPECT_NO_THROW(TransitionCocycle(arcs.nerve.complex_ptr(), z2, {1, 0, 0}));
}

TEST(Giraud, Examples)
{
    auto e = z4_over_z2();
    auto rp = fixtures::projective_plane_good();
    auto trivial = TransitionCocycle::trivial(rp.nerve.complex_ptr(), e.base());
    EXPECT_TRUE(giraud_obstruction(trivial, e).is_zero());

    oracle::Rng rng(42);
    auto top = oracle::random_transitions(rng, rp.nerve.complex_ptr(), e.total());
    EXPECT_TRUE(is_coboundary(giraud_obstruction(project(top, e), e)).has_value());

    Cochain c = giraud_obstruction(fixtures::double_cover(rp), e);
    EXPECT_FALSE(oracle::is_coboundary_exhaustive(rp.nerve.complex(), 2, oracle::values_mod(c), 2));
    EXPECT_FALSE(is_coboundary(c).has_value());
}

TEST(Giraud, CocycleOnRandomInstances)
{
    oracle::Rng rng(43);
    for (int trial = 0; trial < 80; ++trial) {
        auto b = oracle::random_base(rng);
        auto a = oracle::random_kernel(rng);
        auto e = build_extension(b.group, a, oracle::random_factor_set(rng, b, a));
        auto g = oracle::random_transitions(rng, random_nerve(rng), b.group);
        EXPECT_TRUE(is_cocycle(giraud_obstruction(g, e)));
        EXPECT_TRUE(is_cocycle(giraud_obstruction(g, e, random_section(rng, e))));
    }
}

TEST(Giraud, SectionChangeAndRelabelingChangeByCoboundaries)
{
    oracle::Rng rng(44);
    for (int trial = 0; trial < 40; ++trial) {
        auto b = oracle::random_base(rng);
        auto a = oracle::random_kernel(rng);
        auto e = build_extension(b.group, a, oracle::random_factor_set(rng, b, a));
        auto nerve = random_nerve(rng);
        auto g = oracle::random_transitions(rng, nerve, b.group);
        Cochain c = giraud_obstruction(g, e);
        EXPECT_TRUE(differ_by_coboundary(c, giraud_obstruction(g, e, random_section(rng, e))));

        auto pi = oracle::random_permutation(rng, nerve->vertex_count());
        auto moved = oracle::relabel(*nerve, pi);
        Cochain c2 = giraud_obstruction(g.relabeled(moved, pi), e);
        EXPECT_TRUE(differ_by_coboundary(c, pullback(c2, nerve, pi)));
    }
}

TEST(Lift, Examples)
{
    auto e = z4_over_z2();
    auto arcs = fixtures::hexagon_arcs();
    auto trivial = TransitionCocycle::trivial(arcs.nerve.complex_ptr(), e.base());
    LiftResult t = lift_transitions(trivial, e);
    ASSERT_TRUE(t.lifted());
    for (int x : t.lift->edge_values()) EXPECT_EQ(x, e.total().identity());

    LiftResult d = lift_transitions(fixtures::double_cover(arcs), e);
    ASSERT_TRUE(d.lifted());
    EXPECT_EQ(project(*d.lift, e), fixtures::double_cover(arcs));

    LiftResult rp = lift_transitions(fixtures::double_cover(fixtures::projective_plane_good()), e);
    EXPECT_FALSE(rp.lifted());
    EXPECT_FALSE(rp.obstruction.is_zero());
}

TEST(Lift, AgreesWithBacktrackingSearch)
{
    oracle::Rng rng(45);
    int lifted = 0, blocked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        auto b = oracle::random_base(rng);
        auto a = oracle::random_kernel(rng);
        auto e = build_extension(b.group, a, oracle::random_factor_set(rng, b, a));
        auto nerve = mixed_nerve(rng, trial);
        auto g = oracle::random_transitions(rng, nerve, b.group);
        LiftResult r = lift_transitions(g, e);
        EXPECT_EQ(r.lifted(), oracle::find_lift(g, e).has_value());
        if (r.lifted()) {
            ++lifted;
            EXPECT_EQ(project(*r.lift, e), g);
        } else {
            ++blocked;
        }
    }
    EXPECT_GT(lifted, 0);
    EXPECT_GT(blocked, 0);
}

TEST(Bockstein, Examples)
{
    auto ses = fixtures::doubling_sequence();
    auto rp = fixtures::projective_plane_good();
    auto z2 = FgAbelianGroup::cyclic(2);
    Cochain w = CohomologyGroup(rp.nerve.complex_ptr(), z2, 1).generators().at(0);
    Cochain bw = bockstein(w, ses);
    EXPECT_FALSE(oracle::is_coboundary_exhaustive(rp.nerve.complex(), 2, oracle::values_mod(bw), 2));
    EXPECT_EQ(CohomologyGroup(rp.nerve.complex_ptr(), z2, 2).coordinates(bw), std::vector<Integer>{1});
    // beta(w) = w cup w
    EXPECT_TRUE(differ_by_coboundary(bw, cup(w, w)));

    auto arcs = fixtures::hexagon_arcs();
    Cochain wc = CohomologyGroup(arcs.nerve.complex_ptr(), z2, 1).generators().at(0);
    EXPECT_TRUE(bockstein(wc, ses).is_zero());

    oracle::Rng rng(46);
    Cochain y = oracle::random_cochain(rng, rp.nerve.complex_ptr(), 0, z2);
    EXPECT_TRUE(is_coboundary(bockstein(coboundary(y), ses)).has_value());
}

TEST(Bockstein, CircleToIntegers)
{
    // w/2 for the generator w of H^1(RP^2; Z/2) hits the torsion class of H^2(RP^2; Z)
    auto rp = fixtures::projective_plane_good();
    Cochain w = CohomologyGroup(rp.nerve.complex_ptr(), FgAbelianGroup::cyclic(2), 1).generators().at(0);
    Cochain c(rp.nerve.complex_ptr(), 1, Coefficients::circle());
    for (std::size_t i = 0; i < w.size(); ++i) c.set_at(i, {w[i][0] / 2});
    Cochain b = bockstein_circle(c);
    EXPECT_TRUE(b.coefficients().is_integers());
    CohomologyGroup h2(rp.nerve.complex_ptr(), FgAbelianGroup::integers(), 2);
    EXPECT_EQ(h2.group().to_string(), "Z/2");
    EXPECT_EQ(h2.coordinates(b), std::vector<Integer>{1});
}

TEST(Tower, Quotients)
{
    auto t = fixtures::cyclic_tower(3);
    EXPECT_EQ(t.quotient(2).ses.B().to_string(), "Z/4");
    EXPECT_EQ(t.quotient(3).ses.B().to_string(), "Z/4");
    EXPECT_EQ(t.extension(3).total().order(), 16);
}

TEST(Tower, Examples)
{
    oracle::Rng rng(47);
    auto tower = fixtures::cyclic_tower(2);
    auto rp = fixtures::projective_plane_good();

    // transitions projected from the top group lift all the way
    auto top = oracle::random_transitions(rng, rp.nerve.complex_ptr(), tower.extension(2).total());
    auto g = project(project(top, tower.extension(2)), tower.extension(1));
    auto full = tower_obstructions(g, tower);
    EXPECT_EQ(full.status_string(), "LiftedTo(2)");
    for (const auto& c : full.classes) EXPECT_TRUE(c.vanishes());

    auto blocked = tower_obstructions(fixtures::double_cover(rp), tower);
    EXPECT_EQ(blocked.status_string(), "BlockedAt(1)");
    ASSERT_EQ(blocked.classes.size(), 2u);
    EXPECT_EQ(blocked.classes[0].coordinates, std::vector<Integer>{1});
    EXPECT_EQ(blocked.classes[1].degree, 3);
    EXPECT_EQ(blocked.classes[1].cocycle, bockstein(blocked.classes[0].cocycle, tower.quotient(2).ses));

    auto torus = fixtures::torus();
    auto trivial = TransitionCocycle::trivial(torus.space.nerve.complex_ptr(), tower.base());
    auto seq = tower_obstructions(trivial, tower);
    EXPECT_EQ(seq.status_string(), "LiftedTo(2)");
}

TEST(Tower, DifferentWitnessesChangeLaterCocyclesByCoboundaries)
{
    oracle::Rng rng(48);
    auto tower = fixtures::cyclic_tower(3);
    int compared = 0;
    for (int trial = 0; trial < 40 && compared < 10; ++trial) {
        auto nerve = random_nerve(rng);
        auto g = oracle::random_transitions(rng, nerve, tower.base());
        auto base = tower_obstructions(g, tower);
        if (base.classes.size() < 2 || !base.classes[0].vanishes()) continue;
        auto other = tower_obstructions(g, tower, TowerOptions{static_cast<std::uint64_t>(trial + 1)});
        ASSERT_EQ(other.classes.size(), base.classes.size());
        for (std::size_t i = 0; i < base.classes.size(); ++i) {
            EXPECT_TRUE(differ_by_coboundary(base.classes[i].cocycle, other.classes[i].cocycle));
            EXPECT_EQ(base.classes[i].coordinates, other.classes[i].coordinates);
        }
        ++compared;
    }
    EXPECT_GE(compared, 10);
}
