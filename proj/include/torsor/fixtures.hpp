#pragma once

// Built-in desk-scale spaces: circles, the tetrahedron boundary, the minimal
// projective plane and two tori, each with the cover used throughout. Also
// the cyclic extensions Z/2 <- Z/4 <- Z/8 <- ... used as towers.

#include "torsor/cochain.hpp"
#include "torsor/complex.hpp"
#include "torsor/tower.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <vector>

namespace torsor::fixtures {

struct CoveredSpace {
    ComplexPtr complex;
    Cover cover;
    Nerve nerve;
};

inline CoveredSpace make_covered(Cover c)
{
    CoveredSpace s;
    s.complex = c.base_ptr();
    s.nerve = Nerve(c);
    s.cover = std::move(c);
    return s;
}

/// Cycle graph on n vertices.
inline ComplexPtr cycle(int n)
{
    std::vector<Simplex> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
    return std::make_shared<const SimplicialComplex>(n, edges);
}

inline ComplexPtr triangle_boundary() { return cycle(3); }
inline ComplexPtr hexagon() { return cycle(6); }

/// Hexagon covered by three closed arcs {01,12}, {23,34}, {45,50}; the nerve
/// is a triangle boundary with empty triple overlap.
inline CoveredSpace hexagon_arcs()
{
    auto k = hexagon();
    std::vector<SimplicialComplex> pieces{
        k->closure_of({{0, 1}, {1, 2}}),
        k->closure_of({{2, 3}, {3, 4}}),
        k->closure_of({{4, 5}, {0, 5}}),
    };
    return make_covered(Cover(k, std::move(pieces)));
}

inline ComplexPtr tetrahedron_boundary()
{
    return std::make_shared<const SimplicialComplex>(4, std::vector<Simplex>{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
}

/// Closed-star cover of ∂Δ³. Not good: the quadruple overlap is a 1-skeleton.
inline CoveredSpace tetrahedron_stars() { return make_covered(star_cover(tetrahedron_boundary())); }

/// Minimal six-vertex triangulation of the real projective plane.
inline ComplexPtr projective_plane()
{
    std::vector<Simplex> t{{1, 2, 3}, {1, 3, 4}, {1, 4, 5}, {1, 5, 6}, {1, 2, 6},
                           {2, 3, 5}, {2, 4, 5}, {2, 4, 6}, {3, 4, 6}, {3, 5, 6}};
    for (auto& s : t)
        for (auto& v : s) --v;
    return std::make_shared<const SimplicialComplex>(6, t);
}

/// Projective plane subdivided once, with the dual-star cover (nerve = the
/// minimal triangulation itself, every overlap a cone).
inline CoveredSpace projective_plane_good()
{
    auto k = projective_plane();
    return make_covered(dual_star_cover(barycentric_subdivision(*k), k->vertex_count()));
}

struct Torus {
    CoveredSpace space;
    ProductComplex product;
};

/// Hexagon × hexagon with the nine-piece product of the arc covers.
inline Torus torus()
{
    auto arcs = hexagon_arcs();
    ProductCover pc = product_cover(arcs.cover, arcs.cover);
    Torus t;
    t.product = pc.product;
    t.space = make_covered(std::move(pc.cover));
    return t;
}

/// Triangle boundary × triangle boundary (9 vertices, 27 edges, 18 triangles).
inline ComplexPtr small_torus()
{
    auto c = triangle_boundary();
    return std::make_shared<const SimplicialComplex>(product_complex(*c, *c).complex);
}

/// The loop 0 -> 1 -> ... -> 5 -> 0 on the hexagon.
inline Chain hexagon_cycle(const ComplexPtr& hex)
{
    std::map<Simplex, int> signs;
    for (const auto& e : hex->simplices(1)) signs[e] = (e == Simplex{0, 5}) ? -1 : 1;
    return fundamental_cycle(hex, 1, signs);
}

/// Flat circle bundle on the hexagon arcs whose transitions multiply to
/// theta around the loop of hexagon_cycle: the only nonzero value sits on
/// the nerve edge traversed from arc 2 back to arc 0.
inline Cochain flat_hexagon_cocycle(const Nerve& nerve, const Rational& theta)
{
    Cochain c(nerve.complex_ptr(), 1, Coefficients::circle());
    c.set({2, 0}, theta);
    return c;
}

/// Fundamental cycle of an orientable closed surface, sign fixed by
/// orienting the first triangle positively.
inline Chain surface_cycle(const ComplexPtr& k)
{
    auto signs = find_orientation(*k, 2);
    if (!signs)
        throw Error(ErrorCode::NoFundamentalCycle, "surface is not orientable");
    return fundamental_cycle(k, 2, *signs);
}

/// Flat gerbe on the torus: t times the generator of H^2(nerve; Z).
inline Cochain flat_torus_cocycle(const Nerve& nerve, const Rational& t)
{
    CohomologyGroup h2(nerve.complex_ptr(), FgAbelianGroup::integers(), 2);
    Cochain gen = h2.generators().at(0);
    Cochain c(nerve.complex_ptr(), 2, Coefficients::circle());
    for (std::size_t i = 0; i < gen.size(); ++i) c.set_at(i, {gen[i][0] * t});
    return c;
}

/// Central extension of a cyclic group of order n (generated by `generator`)
/// by Z/m whose factor set is the carry f(x^a, x^b) = [a + b >= n]. The total
/// group is cyclic of order nm.
inline CentralExtension carry_extension(const FiniteGroup& base, int generator, int m)
{
    const int n = base.order();
    std::vector<int> log(static_cast<std::size_t>(n), -1);
    int x = base.identity();
    for (int k = 0; k < n; ++k) {
        log[static_cast<std::size_t>(x)] = k;
        x = base.mul(x, generator);
    }
    if (x != base.identity() || std::count(log.begin(), log.end(), -1) != 0)
        throw Error(ErrorCode::NotAGroup, "element " + std::to_string(generator) + " does not generate the base group");
    auto kernel = FgAbelianGroup::cyclic(m);
    auto f = zero_factor_set(base, kernel);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (log[static_cast<std::size_t>(a)] + log[static_cast<std::size_t>(b)] >= n)
                f[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = {Integer(1)};
    return build_extension(base, kernel, std::move(f));
}

/// Z/2 <- Z/4 <- ... <- Z/2^(levels+1), each step a carry extension by Z/2.
inline ExtensionTower cyclic_tower(int levels)
{
    std::vector<CentralExtension> ext;
    FiniteGroup base = FiniteGroup::cyclic(2);
    int generator = 1;
    for (int k = 0; k < levels; ++k) {
        ext.push_back(carry_extension(base, generator, 2));
        generator = ext.back().section(generator);
        base = ext.back().total();
    }
    return ExtensionTower(std::move(ext));
}

/// 0 -> Z/2 -> Z/4 -> Z/2 -> 0.
inline ShortExactSequence doubling_sequence()
{
    auto z2 = FgAbelianGroup::cyclic(2), z4 = FgAbelianGroup::cyclic(4);
    return ShortExactSequence(Homomorphism(z2, z4, IntMatrix{{2}}), Homomorphism(z4, z2, IntMatrix{{1}}));
}

/// Double cover classified by the generator of H^1(nerve; Z/2).
inline TransitionCocycle double_cover(const CoveredSpace& s)
{
    CohomologyGroup h1(s.nerve.complex_ptr(), FgAbelianGroup::cyclic(2), 1);
    auto gens = h1.generators();
    if (gens.empty())
        throw Error(ErrorCode::InvalidTransitions, "H^1 with Z/2 coefficients is trivial; no nontrivial double cover");
    return transitions_from_cocycle(gens.front());
}

} // namespace torsor::fixtures
