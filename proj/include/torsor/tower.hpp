#pragma once

// Finite groups, central extensions by normalized factor sets, extension
// towers, transition cocycles of principal bundles on a nerve, the Giraud
// lifting obstruction, explicit lifts, the Bockstein operator and the full
// obstruction sequence of a tower.

#include "torsor/abelian.hpp"
#include "torsor/cochain.hpp"
#include "torsor/complex.hpp"

#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace torsor {

// ===========================================================================
// Finite groups by multiplication table
// ===========================================================================

class FiniteGroup {
public:
    FiniteGroup() : FiniteGroup(std::vector<std::vector<int>>{{0}}, 0) {}

    FiniteGroup(std::vector<std::vector<int>> table, int identity) : table_(std::move(table)), identity_(identity)
    {
        const int n = order();
        if (n == 0)
            throw Error(ErrorCode::NotAGroup, "empty table");
        for (const auto& row : table_) {
            if (static_cast<int>(row.size()) != n)
                throw Error(ErrorCode::NotAGroup, "table is not square");
            for (int x : row)
                if (x < 0 || x >= n)
                    throw Error(ErrorCode::NotAGroup, "table entry " + std::to_string(x) + " out of range");
        }
        if (identity_ < 0 || identity_ >= n)
            throw Error(ErrorCode::NotAGroup, "identity index out of range");
        for (int a = 0; a < n; ++a)
            if (mul(identity_, a) != a || mul(a, identity_) != a)
                throw Error(ErrorCode::NotAGroup, "identity law fails at " + std::to_string(a));
        inverse_.assign(static_cast<std::size_t>(n), -1);
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b)
                if (mul(a, b) == identity_ && mul(b, a) == identity_) {
                    inverse_[static_cast<std::size_t>(a)] = b;
                    break;
                }
            if (inverse_[static_cast<std::size_t>(a)] < 0)
                throw Error(ErrorCode::NotAGroup, "element " + std::to_string(a) + " has no inverse");
        }
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    if (mul(mul(a, b), c) != mul(a, mul(b, c)))
                        throw Error(ErrorCode::NotAGroup, "associativity fails at " + format_tuple({a, b, c}));
    }

    int order() const noexcept { return static_cast<int>(table_.size()); }
    int identity() const noexcept { return identity_; }
    int mul(int a, int b) const { return table_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }
    int inv(int a) const { return inverse_[static_cast<std::size_t>(a)]; }
    const std::vector<std::vector<int>>& table() const noexcept { return table_; }

    bool is_abelian() const
    {
        for (int a = 0; a < order(); ++a)
            for (int b = a + 1; b < order(); ++b)
                if (mul(a, b) != mul(b, a)) return false;
        return true;
    }

    int element_order(int a) const
    {
        int k = 1;
        for (int x = a; x != identity_; x = mul(x, a)) ++k;
        return k;
    }

    int power(int a, long long k) const
    {
        int n = element_order(a);
        k %= n;
        if (k < 0) k += n;
        int r = identity_;
        for (long long t = 0; t < k; ++t) r = mul(r, a);
        return r;
    }

    static FiniteGroup cyclic(int n)
    {
        std::vector<std::vector<int>> t(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) t[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = (a + b) % n;
        return FiniteGroup(std::move(t), 0);
    }

    /// Elements of a finite fg abelian group, indexed as in FgAbelianGroup::elements().
    static FiniteGroup from_abelian(const FgAbelianGroup& g)
    {
        auto els = g.elements();
        std::vector<std::vector<int>> t(els.size(), std::vector<int>(els.size()));
        for (std::size_t a = 0; a < els.size(); ++a)
            for (std::size_t b = 0; b < els.size(); ++b)
                t[a][b] = static_cast<int>(g.index_of(g.add(els[a], els[b])));
        return FiniteGroup(std::move(t), 0);
    }

    /// Symmetric group on {0,..,n-1}; elements in lexicographic permutation order.
    static FiniteGroup symmetric(int n)
    {
        std::vector<std::vector<int>> perms;
        std::vector<int> p(static_cast<std::size_t>(n));
        std::iota(p.begin(), p.end(), 0);
        do perms.push_back(p);
        while (std::next_permutation(p.begin(), p.end()));
        auto index = [&](const std::vector<int>& q) {
            return static_cast<int>(std::lower_bound(perms.begin(), perms.end(), q) - perms.begin());
        };
        std::vector<std::vector<int>> t(perms.size(), std::vector<int>(perms.size()));
        for (std::size_t a = 0; a < perms.size(); ++a)
            for (std::size_t b = 0; b < perms.size(); ++b) {
                std::vector<int> c(static_cast<std::size_t>(n));
                for (int x = 0; x < n; ++x)
                    c[static_cast<std::size_t>(x)] = perms[a][static_cast<std::size_t>(perms[b][static_cast<std::size_t>(x)])];
                t[a][b] = index(c);
            }
        return FiniteGroup(std::move(t), 0);
    }

    friend bool operator==(const FiniteGroup& a, const FiniteGroup& b)
    {
        return a.identity_ == b.identity_ && a.table_ == b.table_;
    }

private:
    std::vector<std::vector<int>> table_;
    int identity_ = 0;
    std::vector<int> inverse_;
};

// ===========================================================================
// Central extensions
// ===========================================================================

/// 1 → A → E → L → 1 with E = L × A and (a,h)(b,k) = (ab, h + k + f(a,b)).
/// The element (a,h) of E has index a·|A| + index_of(h).
class CentralExtension {
public:
    using FactorSet = std::vector<std::vector<std::vector<Integer>>>;

    CentralExtension() = default;
    CentralExtension(FiniteGroup base, FgAbelianGroup kernel, FactorSet factors)
        : base_(std::move(base)), kernel_(std::move(kernel)), f_(std::move(factors))
    {
        if (!kernel_.is_finite())
            throw Error(ErrorCode::InvalidGroup, "extension kernel must be finite");
        const int n = base_.order();
        if (static_cast<int>(f_.size()) != n)
            throw Error(ErrorCode::NotACocycle2, "factor set has wrong number of rows");
        for (auto& row : f_) {
            if (static_cast<int>(row.size()) != n)
                throw Error(ErrorCode::NotACocycle2, "factor set has wrong number of columns");
            for (auto& v : row) v = kernel_.reduce(v);
        }
        const int e = base_.identity();
        for (int a = 0; a < n; ++a)
            if (!kernel_.is_zero(f(e, a)) || !kernel_.is_zero(f(a, e)))
                throw Error(ErrorCode::NotNormalized, "f(e," + std::to_string(a) + ") or f(" + std::to_string(a) +
                                                          ",e) is nonzero");
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) {
                    auto lhs = kernel_.add(f(a, b), f(base_.mul(a, b), c));
                    auto rhs = kernel_.add(f(b, c), f(a, base_.mul(b, c)));
                    if (lhs != rhs)
                        throw Error(ErrorCode::NotACocycle2, "cocycle law fails at " + format_tuple({a, b, c}));
                }
        kernel_elements_ = kernel_.elements();
        const int m = kernel_order();
        std::vector<std::vector<int>> t(static_cast<std::size_t>(n * m), std::vector<int>(static_cast<std::size_t>(n * m)));
        for (int x = 0; x < n * m; ++x)
            for (int y = 0; y < n * m; ++y) {
                int a = x / m, b = y / m;
                auto h = kernel_.add(kernel_.add(kernel_elements_[static_cast<std::size_t>(x % m)],
                                                 kernel_elements_[static_cast<std::size_t>(y % m)]),
                                     f(a, b));
                t[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] =
                    base_.mul(a, b) * m + static_cast<int>(kernel_.index_of(h));
            }
        total_ = FiniteGroup(std::move(t), e * m);
    }

    const FiniteGroup& base() const noexcept { return base_; }
    const FgAbelianGroup& kernel() const noexcept { return kernel_; }
    const FiniteGroup& total() const noexcept { return total_; }
    const FactorSet& factor_set() const noexcept { return f_; }
    const std::vector<Integer>& f(int a, int b) const
    {
        return f_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    }

    int kernel_order() const { return static_cast<int>(kernel_.order()); }
    int project(int x) const { return x / kernel_order(); }
    int section(int a) const { return a * kernel_order(); }
    std::vector<Integer> kernel_part(int x) const { return kernel_elements_[static_cast<std::size_t>(x % kernel_order())]; }
    int element(int a, const std::vector<Integer>& h) const
    {
        return a * kernel_order() + static_cast<int>(kernel_.index_of(h));
    }
    int include(const std::vector<Integer>& h) const { return element(base_.identity(), h); }

private:
    FiniteGroup base_;
    FgAbelianGroup kernel_;
    FactorSet f_;
    FiniteGroup total_;
    std::vector<std::vector<Integer>> kernel_elements_;
};

inline CentralExtension build_extension(FiniteGroup l, FgAbelianGroup a, CentralExtension::FactorSet f)
{
    return CentralExtension(std::move(l), std::move(a), std::move(f));
}

inline CentralExtension::FactorSet zero_factor_set(const FiniteGroup& l, const FgAbelianGroup& a)
{
    auto n = static_cast<std::size_t>(l.order());
    return CentralExtension::FactorSet(n, std::vector<std::vector<Integer>>(n, a.zero()));
}

// ===========================================================================
// Extension towers
// ===========================================================================

/// The group K = ker(L_{i+1} → L_{i−1}) as an abelian group, sitting in
/// 0 → H_{i+1} → K → H_i → 0.
struct QuotientSequence {
    ShortExactSequence ses;
    Presentation presentation; ///< generators: those of H_i, then those of H_{i+1}
    /// K-element (h_i, h_{i+1}) in the set-theoretic product coordinates → canonical coordinates.
    std::function<std::vector<Integer>(const std::vector<Integer>&, const std::vector<Integer>&)> coords;
};

class ExtensionTower {
public:
    ExtensionTower() = default;
    explicit ExtensionTower(std::vector<CentralExtension> ext) : ext_(std::move(ext))
    {
        if (ext_.empty())
            throw Error(ErrorCode::InvalidGroup, "a tower needs at least one extension");
        for (std::size_t k = 1; k < ext_.size(); ++k)
            if (!(ext_[k].base() == ext_[k - 1].total()))
                throw Error(ErrorCode::GroupMismatch, "extension " + std::to_string(k + 1) +
                                                          " is not based on the total group of extension " +
                                                          std::to_string(k));
        for (std::size_t level = 2; level <= ext_.size(); ++level)
            quotients_.push_back(build_quotient(level));
    }

    std::size_t size() const noexcept { return ext_.size(); }
    /// Extension with kernel H_level (1-based).
    const CentralExtension& extension(std::size_t level) const { return ext_.at(level - 1); }
    const FgAbelianGroup& kernel(std::size_t level) const { return extension(level).kernel(); }
    const FiniteGroup& base() const { return ext_.front().base(); }
    const std::vector<CentralExtension>& extensions() const noexcept { return ext_; }

    /// 0 → H_level → K_level → H_{level−1} → 0 for level ≥ 2.
    const QuotientSequence& quotient(std::size_t level) const { return quotients_.at(level - 2); }

private:
    QuotientSequence build_quotient(std::size_t level) const
    {
        const CentralExtension& lower = extension(level - 1); // L_{i−1} ← L_i, kernel H_i
        const CentralExtension& upper = extension(level);     // L_i ← L_{i+1}, kernel H_{i+1}
        const FgAbelianGroup& hi = lower.kernel();
        const FgAbelianGroup& hj = upper.kernel();
        // φ(h,h') = f_{i+1}((e,h),(e,h'))
        auto phi = [&](const std::vector<Integer>& h, const std::vector<Integer>& h2) {
            return upper.f(lower.include(h), lower.include(h2));
        };
        auto his = hi.elements();
        for (const auto& a : his)
            for (const auto& b : his)
                if (phi(a, b) != phi(b, a))
                    throw Error(ErrorCode::NotAbelian, "quotient group at level " + std::to_string(level) +
                                                           " is not commutative");
        // K multiplication in (h, k) coordinates
        auto kmul = [&](const std::pair<std::vector<Integer>, std::vector<Integer>>& x,
                        const std::pair<std::vector<Integer>, std::vector<Integer>>& y) {
            return std::make_pair(hi.add(x.first, y.first), hj.add(hj.add(x.second, y.second), phi(x.first, y.first)));
        };
        const std::size_t ri = hi.rank(), rj = hj.rank(), n = ri + rj;
        // word value w(a) = second coordinate of u_0^{a_0} ⋯ u_{r-1}^{a_{r-1}}
        auto word = [&](const std::vector<Integer>& a) {
            std::pair<std::vector<Integer>, std::vector<Integer>> acc{hi.zero(), hj.zero()};
            for (std::size_t j = 0; j < ri; ++j) {
                std::vector<Integer> g = hi.zero();
                g[j] = 1;
                for (Integer t = 0; t < a[j]; ++t) acc = kmul(acc, {g, hj.zero()});
            }
            return acc.second;
        };
        IntMatrix rel(n, n);
        for (std::size_t j = 0; j < ri; ++j) {
            // u_j^{m_j} = (0, w) ⇒ m_j e_j − w = 0
            std::vector<Integer> g = hi.zero();
            g[j] = 1;
            std::pair<std::vector<Integer>, std::vector<Integer>> acc{hi.zero(), hj.zero()};
            for (Integer t = 0; t < hi.moduli()[j]; ++t) acc = kmul(acc, {g, hj.zero()});
            rel(j, j) = hi.moduli()[j];
            for (std::size_t l = 0; l < rj; ++l) rel(ri + l, j) = -acc.second[l];
        }
        for (std::size_t l = 0; l < rj; ++l) rel(ri + l, ri + l) = hj.moduli()[l];

        QuotientSequence q;
        q.presentation = present(rel);
        const Presentation& pres = q.presentation;
        const FgAbelianGroup& kg = pres.group;
        IntMatrix inj(kg.rank(), rj);
        for (std::size_t l = 0; l < rj; ++l) {
            std::vector<Integer> x(n, Integer(0));
            x[ri + l] = 1;
            auto c = pres.canonical_coords(x);
            for (std::size_t r = 0; r < kg.rank(); ++r) inj(r, l) = c[r];
        }
        IntMatrix proj(ri, kg.rank());
        for (std::size_t r = 0; r < kg.rank(); ++r)
            for (std::size_t j = 0; j < ri; ++j) proj(j, r) = pres.from_canonical(j, r);
        q.ses = ShortExactSequence(Homomorphism(hj, kg, inj), Homomorphism(kg, hi, proj));
        std::vector<std::vector<Integer>> words;
        for (const auto& a : his) words.push_back(word(a));
        q.coords = [pres, words, hi, hj, ri, rj](const std::vector<Integer>& h, const std::vector<Integer>& k) {
            auto a = hi.reduce(h);
            const auto& w = words[hi.index_of(a)];
            auto kk = hj.reduce(k);
            std::vector<Integer> x(ri + rj);
            for (std::size_t j = 0; j < ri; ++j) x[j] = a[j];
            for (std::size_t l = 0; l < rj; ++l) x[ri + l] = kk[l] - w[l];
            return pres.canonical_coords(x);
        };
        return q;
    }

    std::vector<CentralExtension> ext_;
    std::vector<QuotientSequence> quotients_;
};

// ===========================================================================
// Transition cocycles
// ===========================================================================

/// g_ij on the edges of a nerve, stored for i < j; g_ji = g_ij^{-1}, g_ii = e.
class TransitionCocycle {
public:
    TransitionCocycle() = default;
    TransitionCocycle(ComplexPtr nerve, FiniteGroup group, std::vector<int> edge_values)
        : nerve_(std::move(nerve)), group_(std::move(group)), g_(std::move(edge_values))
    {
        if (g_.size() != nerve_->count(1))
            throw Error(ErrorCode::InvalidTransitions, "need one group element per nerve edge");
        for (int x : g_)
            if (x < 0 || x >= group_.order())
                throw Error(ErrorCode::InvalidTransitions, "group element " + std::to_string(x) + " out of range");
        for (const auto& t : nerve_->simplices(2)) {
            int i = t[0], j = t[1], k = t[2];
            if (group_.mul(g(i, j), g(j, k)) != g(i, k))
                throw Error(ErrorCode::InvalidTransitions, "cocycle law g_ij g_jk = g_ik fails on " + format_tuple(t));
        }
    }

    /// Identity everywhere.
    static TransitionCocycle trivial(ComplexPtr nerve, FiniteGroup group)
    {
        std::vector<int> v(nerve->count(1), group.identity());
        return TransitionCocycle(std::move(nerve), std::move(group), std::move(v));
    }

    const SimplicialComplex& nerve() const { return *nerve_; }
    const ComplexPtr& nerve_ptr() const noexcept { return nerve_; }
    const FiniteGroup& group() const noexcept { return group_; }
    const std::vector<int>& edge_values() const noexcept { return g_; }

    int g(int i, int j) const
    {
        if (i == j) return group_.identity();
        if (i < j) return g_[edge_index(i, j)];
        return group_.inv(g_[edge_index(j, i)]);
    }

    /// Gauge transform g_ij ↦ k_i g_ij k_j^{-1}.
    TransitionCocycle gauged(const std::vector<int>& k) const
    {
        std::vector<int> v(g_.size());
        const auto& edges = nerve_->simplices(1);
        for (std::size_t e = 0; e < edges.size(); ++e) {
            int i = edges[e][0], j = edges[e][1];
            v[e] = group_.mul(group_.mul(k.at(static_cast<std::size_t>(i)), g_[e]),
                              group_.inv(k.at(static_cast<std::size_t>(j))));
        }
        return TransitionCocycle(nerve_, group_, std::move(v));
    }

    /// Transitions on the nerve relabeled by the index permutation π
    /// (new index π(i) for old index i).
    TransitionCocycle relabeled(ComplexPtr new_nerve, const std::vector<int>& pi) const
    {
        std::vector<int> v(new_nerve->count(1));
        const auto& edges = nerve_->simplices(1);
        for (std::size_t e = 0; e < edges.size(); ++e) {
            int a = pi.at(static_cast<std::size_t>(edges[e][0])), b = pi.at(static_cast<std::size_t>(edges[e][1]));
            int val = g_[e];
            if (a > b) {
                std::swap(a, b);
                val = group_.inv(val);
            }
            v[*new_nerve->index_of({a, b})] = val;
        }
        return TransitionCocycle(std::move(new_nerve), group_, std::move(v));
    }

    friend bool operator==(const TransitionCocycle& a, const TransitionCocycle& b)
    {
        return a.group_ == b.group_ && a.g_ == b.g_ && *a.nerve_ == *b.nerve_;
    }

private:
    std::size_t edge_index(int i, int j) const
    {
        auto idx = nerve_->index_of({i, j});
        if (!idx)
            throw Error(ErrorCode::InvalidTransitions, "no nerve edge " + format_tuple({i, j}));
        return *idx;
    }

    ComplexPtr nerve_;
    FiniteGroup group_;
    std::vector<int> g_;
};

/// Transitions g_ij = x_ij for a 1-cocycle x with values in a finite
/// abelian group, viewed as a finite group by FiniteGroup::from_abelian.
inline TransitionCocycle transitions_from_cocycle(const Cochain& x)
{
    if (x.degree() != 1 || !x.coefficients().is_group())
        throw Error(ErrorCode::InvalidTransitions, "need a 1-cocycle with finite abelian coefficients");
    const FgAbelianGroup& a = x.coefficients().group();
    std::vector<int> v(x.size());
    for (std::size_t e = 0; e < x.size(); ++e) {
        std::vector<Integer> h;
        for (const auto& z : x[e]) h.push_back(to_integer(z));
        v[e] = static_cast<int>(a.index_of(h));
    }
    return TransitionCocycle(x.complex_ptr(), FiniteGroup::from_abelian(a), std::move(v));
}

// ===========================================================================
// Giraud obstruction and lifts
// ===========================================================================

/// Lifts ĝ_ij = section(g_ij) for i < j and ĝ_ki = ĝ_ik^{-1}; then
/// c_ijk = kernel part of ĝ_ki ĝ_ij ĝ_jk, which for the canonical section is
/// f(g_ij, g_jk). `section` maps base elements to total elements and must
/// project back; empty means the canonical section a ↦ (a,0).
inline Cochain giraud_obstruction(const TransitionCocycle& g, const CentralExtension& ext,
                                  const std::vector<int>& section = {})
{
    if (!(g.group() == ext.base()))
        throw Error(ErrorCode::GroupMismatch, "transition group differs from the extension base");
    const FiniteGroup& e = ext.total();
    auto lift = [&](int a) { return section.empty() ? ext.section(a) : section.at(static_cast<std::size_t>(a)); };
    if (!section.empty())
        for (int a = 0; a < g.group().order(); ++a)
            if (ext.project(lift(a)) != a)
                throw Error(ErrorCode::GroupMismatch, "section does not project back at " + std::to_string(a));
    Cochain c(g.nerve_ptr(), 2, ext.kernel());
    const auto& tri = g.nerve().simplices(2);
    for (std::size_t t = 0; t < tri.size(); ++t) {
        int i = tri[t][0], j = tri[t][1], k = tri[t][2];
        int x = e.mul(e.mul(e.inv(lift(g.g(i, k))), lift(g.g(i, j))), lift(g.g(j, k)));
        if (ext.project(x) != ext.base().identity())
            throw Error(ErrorCode::InvalidTransitions, "lift product does not lie in the kernel on " + format_tuple(tri[t]));
        auto h = ext.kernel_part(x);
        Cochain::Value v;
        for (const auto& z : h) v.emplace_back(z);
        c.set_at(t, std::move(v));
    }
    if (!is_cocycle(c))
        throw Error(ErrorCode::NotACocycle, "Giraud cochain failed the cocycle check");
    return c;
}

/// g'_ij = s(g_ij)·(−y_ij) for a witness δy = c.
inline TransitionCocycle lift_with_witness(const TransitionCocycle& g, const CentralExtension& ext, const Cochain& y)
{
    const FiniteGroup& e = ext.total();
    std::vector<int> v(g.edge_values().size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        std::vector<Integer> h;
        for (const auto& z : y[k]) h.push_back(-to_integer(z));
        v[k] = e.mul(ext.section(g.edge_values()[k]), ext.include(ext.kernel().reduce(h)));
    }
    TransitionCocycle lifted(g.nerve_ptr(), e, std::move(v));
    for (std::size_t k = 0; k < lifted.edge_values().size(); ++k)
        if (ext.project(lifted.edge_values()[k]) != g.edge_values()[k])
            throw Error(ErrorCode::InvalidTransitions, "lift does not project to the input");
    return lifted;
}

struct LiftResult {
    Cochain obstruction;
    std::optional<Cochain> witness;
    std::optional<TransitionCocycle> lift;
    bool lifted() const noexcept { return lift.has_value(); }
};

inline LiftResult lift_transitions(const TransitionCocycle& g, const CentralExtension& ext, SolverOptions opts = {})
{
    LiftResult r;
    r.obstruction = giraud_obstruction(g, ext);
    r.witness = is_coboundary(r.obstruction, opts);
    if (r.witness)
        r.lift = lift_with_witness(g, ext, *r.witness);
    return r;
}

// ===========================================================================
// Bockstein
// ===========================================================================

/// Connecting operator of 0 → A → B → C → 0 on a C-valued cocycle: lift by
/// the canonical section, take δ in B, read the result back in A.
inline Cochain bockstein(const Cochain& c, const ShortExactSequence& ses)
{
    if (!c.coefficients().is_group() || !(c.coefficients().group() == ses.C()))
        throw Error(ErrorCode::GroupMismatch, "cochain coefficients are not the quotient of the sequence");
    if (!is_cocycle(c))
        throw Error(ErrorCode::NotACocycle, "Bockstein of a non-cocycle");
    Cochain lifted(c.complex_ptr(), c.degree(), ses.B());
    for (std::size_t i = 0; i < c.size(); ++i) {
        std::vector<Integer> cv;
        for (const auto& z : c[i]) cv.push_back(to_integer(z));
        Cochain::Value v;
        for (const auto& z : ses.section(cv)) v.emplace_back(z);
        lifted.set_at(i, std::move(v));
    }
    Cochain d = coboundary(lifted);
    Cochain out(c.complex_ptr(), c.degree() + 1, ses.A());
    for (std::size_t i = 0; i < d.size(); ++i) {
        std::vector<Integer> b;
        for (const auto& z : d[i]) b.push_back(to_integer(z));
        Cochain::Value v;
        for (const auto& z : ses.retract(b)) v.emplace_back(z);
        out.set_at(i, std::move(v));
    }
    if (!is_cocycle(out))
        throw Error(ErrorCode::NotACocycle, "Bockstein image failed the cocycle check");
    return out;
}

/// Connecting operator of 0 → Z → Q → Q/Z → 0: δ of the [0,1) lift.
inline Cochain bockstein_circle(const Cochain& c)
{
    if (!c.coefficients().is_circle())
        throw Error(ErrorCode::GroupMismatch, "circle Bockstein needs Q/Z coefficients");
    if (!is_cocycle(c))
        throw Error(ErrorCode::NotACocycle, "Bockstein of a non-cocycle");
    Cochain d = coboundary(recast(c, Coefficients::rational()));
    return recast(d, FgAbelianGroup::integers());
}

// ===========================================================================
// Obstruction sequence of a tower
// ===========================================================================

struct ObstructionClass {
    std::size_t level;
    int degree;
    Cochain cocycle;
    FgAbelianGroup cohomology;
    std::vector<Integer> coordinates;
    bool vanishes() const
    {
        return std::all_of(coordinates.begin(), coordinates.end(), [](const Integer& x) { return x == 0; });
    }
};

struct ObstructionSequence {
    enum class Status { LiftedTo, BlockedAt };
    Status status = Status::LiftedTo;
    std::size_t level = 0;
    std::vector<ObstructionClass> classes;
    std::vector<TransitionCocycle> lifts; ///< lifts[k] lives over the total group of level k+1

    std::string status_string() const
    {
        return std::string(status == Status::LiftedTo ? "LiftedTo(" : "BlockedAt(") + std::to_string(level) + ")";
    }
};

struct TowerOptions {
    /// When nonzero, every witness y is replaced by y + δk for a random
    /// kernel-valued 0-cochain k drawn from this seed.
    std::uint64_t witness_seed = 0;
};

inline ObstructionClass make_class(std::size_t level, Cochain c)
{
    CohomologyGroup h(c.complex_ptr(), c.coefficients().group(), c.degree());
    ObstructionClass oc{level, c.degree(), c, h.group(), h.coordinates(c)};
    return oc;
}

inline ObstructionSequence tower_obstructions(const TransitionCocycle& g, const ExtensionTower& tower,
                                              TowerOptions opts = {})
{
    if (!(g.group() == tower.base()))
        throw Error(ErrorCode::GroupMismatch, "transition group differs from the tower base");
    ObstructionSequence seq;
    std::mt19937_64 rng(opts.witness_seed);
    TransitionCocycle current = g;
    for (std::size_t level = 1; level <= tower.size(); ++level) {
        const CentralExtension& ext = tower.extension(level);
        Cochain c = giraud_obstruction(current, ext);
        ObstructionClass oc = make_class(level, c);
        const bool zero = oc.vanishes();
        seq.classes.push_back(std::move(oc));
        if (!zero) {
            seq.status = ObstructionSequence::Status::BlockedAt;
            seq.level = level;
            for (std::size_t up = level + 1; up <= tower.size(); ++up) {
                c = bockstein(c, tower.quotient(up).ses);
                seq.classes.push_back(make_class(up, c));
            }
            return seq;
        }
        auto y = is_coboundary(c);
        if (!y)
            throw Error(ErrorCode::NotACocycle, "vanishing class without a witness at level " + std::to_string(level));
        if (opts.witness_seed != 0) {
            Cochain k(c.complex_ptr(), 0, ext.kernel());
            for (std::size_t i = 0; i < k.size(); ++i) {
                Cochain::Value v;
                for (const auto& m : ext.kernel().moduli())
                    v.emplace_back(static_cast<long long>(rng() % static_cast<std::uint64_t>(m)));
                k.set_at(i, std::move(v));
            }
            *y += coboundary(k);
        }
        current = lift_with_witness(current, ext, *y);
        seq.lifts.push_back(current);
    }
    seq.status = ObstructionSequence::Status::LiftedTo;
    seq.level = tower.size();
    return seq;
}

} // namespace torsor
