#pragma once

// Finite abstract simplicial complexes, covers by subcomplexes, nerves,
// staircase products, integral chains and fundamental cycles.

#include "torsor/abelian.hpp"
#include "torsor/core.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <vector>

namespace torsor {

class SimplicialComplex {
public:
    SimplicialComplex() = default;

    /// Downward closure of `raw`. Tuples are sorted first; a repeated vertex
    /// is an error. When `all_vertices` is set, every index below
    /// `vertex_count` becomes a 0-simplex even if no tuple mentions it.
    SimplicialComplex(int vertex_count, const std::vector<Simplex>& raw, bool all_vertices = false)
        : vertex_count_(vertex_count)
    {
        std::set<Simplex> all;
        for (Simplex s : raw) {
            if (s.empty()) continue;
            std::sort(s.begin(), s.end());
            for (std::size_t k = 0; k < s.size(); ++k) {
                if (s[k] < 0 || s[k] >= vertex_count)
                    throw Error(ErrorCode::VertexOutOfRange,
                                "vertex " + std::to_string(s[k]) + " in simplex " + format_tuple(s) +
                                    " outside [0," + std::to_string(vertex_count) + ")");
                if (k > 0 && s[k] == s[k - 1])
                    throw Error(ErrorCode::DuplicateVertexInSimplex, "simplex " + format_tuple(s));
            }
            if (all.count(s)) continue;
            add_faces(s, all);
        }
        if (all_vertices)
            for (int v = 0; v < vertex_count; ++v)
                all.insert(Simplex{v});
        build(all);
    }

    int vertex_count() const noexcept { return vertex_count_; }
    bool empty() const noexcept { return by_dim_.empty(); }
    /// -1 for the empty complex.
    int dimension() const noexcept { return static_cast<int>(by_dim_.size()) - 1; }

    std::size_t count(int d) const
    {
        if (d < 0 || d > dimension()) return 0;
        return by_dim_[static_cast<std::size_t>(d)].size();
    }
    const std::vector<Simplex>& simplices(int d) const
    {
        static const std::vector<Simplex> none;
        if (d < 0 || d > dimension()) return none;
        return by_dim_[static_cast<std::size_t>(d)];
    }
    std::vector<Simplex> all_simplices() const
    {
        std::vector<Simplex> out;
        for (const auto& level : by_dim_)
            out.insert(out.end(), level.begin(), level.end());
        return out;
    }

    std::optional<std::size_t> index_of(const Simplex& s) const
    {
        auto it = index_.find(s);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    bool contains(const Simplex& s) const { return index_.count(s) > 0; }

    long long euler_characteristic() const
    {
        long long chi = 0;
        for (int d = 0; d <= dimension(); ++d)
            chi += (d % 2 == 0 ? 1 : -1) * static_cast<long long>(count(d));
        return chi;
    }

    /// ∂_d : C_d → C_{d-1}, rows indexed by (d-1)-simplices.
    IntMatrix boundary_matrix(int d) const
    {
        IntMatrix m(count(d - 1), count(d));
        if (d <= 0) return m;
        const auto& cells = simplices(d);
        for (std::size_t c = 0; c < cells.size(); ++c)
            for (std::size_t j = 0; j < cells[c].size(); ++j) {
                Simplex face = cells[c];
                face.erase(face.begin() + static_cast<std::ptrdiff_t>(j));
                m(*index_of(face), c) += (j % 2 == 0) ? 1 : -1;
            }
        return m;
    }

    /// δ^d : C^d → C^{d+1}.
    IntMatrix coboundary_matrix(int d) const { return boundary_matrix(d + 1).transpose(); }

    bool is_subcomplex_of(const SimplicialComplex& other) const
    {
        for (const auto& level : by_dim_)
            for (const auto& s : level)
                if (!other.contains(s)) return false;
        return true;
    }

    SimplicialComplex intersect(const SimplicialComplex& other) const
    {
        std::set<Simplex> keep;
        const SimplicialComplex& small = index_.size() <= other.index_.size() ? *this : other;
        const SimplicialComplex& large = &small == this ? other : *this;
        for (const auto& level : small.by_dim_)
            for (const auto& s : level)
                if (large.contains(s)) keep.insert(s);
        SimplicialComplex r;
        r.vertex_count_ = std::max(vertex_count_, other.vertex_count_);
        r.build(keep);
        return r;
    }

    /// Subcomplex spanned by a set of simplices of this complex (plus faces).
    SimplicialComplex closure_of(const std::vector<Simplex>& cells) const
    {
        std::set<Simplex> all;
        for (const auto& s : cells) {
            if (!contains(s))
                throw Error(ErrorCode::InvalidComplex, "simplex " + format_tuple(s) + " not in complex");
            add_faces(s, all);
        }
        SimplicialComplex r;
        r.vertex_count_ = vertex_count_;
        r.build(all);
        return r;
    }

    friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b)
    {
        return a.vertex_count_ == b.vertex_count_ && a.by_dim_ == b.by_dim_;
    }

private:
    static void add_faces(const Simplex& s, std::set<Simplex>& out)
    {
        const std::size_t n = s.size();
        for (unsigned long mask = 1; mask < (1UL << n); ++mask) {
            Simplex f;
            for (std::size_t k = 0; k < n; ++k)
                if (mask & (1UL << k)) f.push_back(s[k]);
            out.insert(std::move(f));
        }
    }

    void build(const std::set<Simplex>& all)
    {
        by_dim_.clear();
        index_.clear();
        for (const auto& s : all) {
            std::size_t d = s.size() - 1;
            if (by_dim_.size() <= d) by_dim_.resize(d + 1);
            by_dim_[d].push_back(s); // std::set order = lexicographic within each dimension
        }
        for (const auto& level : by_dim_)
            for (std::size_t k = 0; k < level.size(); ++k)
                index_.emplace(level[k], k);
    }

    int vertex_count_ = 0;
    std::vector<std::vector<Simplex>> by_dim_;
    std::map<Simplex, std::size_t> index_;
};

using ComplexPtr = std::shared_ptr<const SimplicialComplex>;

/// Downward closure with vertex count inferred from the largest index.
inline SimplicialComplex validate_complex(const std::vector<Simplex>& raw)
{
    int n = 0;
    for (const auto& s : raw)
        for (int v : s) {
            if (v < 0)
                throw Error(ErrorCode::VertexOutOfRange, "negative vertex in " + format_tuple(s));
            n = std::max(n, v + 1);
        }
    return SimplicialComplex(n, raw);
}

/// Ordinary simplicial cohomology H^p(K; G).
inline FgAbelianGroup simplicial_cohomology(const SimplicialComplex& k, const FgAbelianGroup& g, int p)
{
    return cohomology_of(k.coboundary_matrix(p - 1), k.coboundary_matrix(p), g);
}

// ---------------------------------------------------------------------------
// Covers and nerves
// ---------------------------------------------------------------------------

class Cover {
public:
    Cover() = default;
    Cover(ComplexPtr base, std::vector<SimplicialComplex> pieces) : base_(std::move(base)), pieces_(std::move(pieces))
    {
        if (!base_)
            throw Error(ErrorCode::InvalidCover, "missing base complex");
        for (std::size_t i = 0; i < pieces_.size(); ++i)
            if (!pieces_[i].is_subcomplex_of(*base_))
                throw Error(ErrorCode::InvalidCover, "piece " + std::to_string(i) + " is not a subcomplex of the base");
        for (int d = 0; d <= base_->dimension(); ++d)
            for (const auto& s : base_->simplices(d)) {
                bool covered = std::any_of(pieces_.begin(), pieces_.end(),
                                           [&](const SimplicialComplex& u) { return u.contains(s); });
                if (!covered)
                    throw Error(ErrorCode::InvalidCover, "simplex " + format_tuple(s) + " lies in no piece");
            }
    }

    const SimplicialComplex& base() const { return *base_; }
    const ComplexPtr& base_ptr() const noexcept { return base_; }
    const std::vector<SimplicialComplex>& pieces() const noexcept { return pieces_; }
    std::size_t size() const noexcept { return pieces_.size(); }
    const SimplicialComplex& piece(std::size_t i) const { return pieces_.at(i); }

private:
    ComplexPtr base_;
    std::vector<SimplicialComplex> pieces_;
};

/// Closed star of each vertex: every simplex σ with σ ∪ {v} in K, with faces.
inline Cover star_cover(ComplexPtr k)
{
    if (!k || k->empty())
        throw Error(ErrorCode::InvalidComplex, "star cover of an empty complex");
    std::vector<std::vector<Simplex>> gens(static_cast<std::size_t>(k->vertex_count()));
    for (int d = 0; d <= k->dimension(); ++d)
        for (const auto& s : k->simplices(d))
            for (int v : s)
                gens[static_cast<std::size_t>(v)].push_back(s);
    std::vector<SimplicialComplex> pieces;
    for (const auto& v : k->simplices(0))
        pieces.push_back(k->closure_of(gens[static_cast<std::size_t>(v[0])]));
    return Cover(std::move(k), std::move(pieces));
}

/// The nerve as a simplicial complex on the piece indices, together with
/// the intersection subcomplex attached to every nerve simplex.
class Nerve {
public:
    Nerve() = default;
    explicit Nerve(const Cover& cover)
    {
        const int n = static_cast<int>(cover.size());
        std::vector<Simplex> tuples;
        std::map<Simplex, SimplicialComplex> inter;
        std::vector<std::pair<Simplex, SimplicialComplex>> frontier;
        for (int i = 0; i < n; ++i) {
            const auto& u = cover.piece(static_cast<std::size_t>(i));
            if (u.empty()) continue;
            frontier.emplace_back(Simplex{i}, u);
        }
        while (!frontier.empty()) {
            std::vector<std::pair<Simplex, SimplicialComplex>> next;
            for (auto& [t, x] : frontier) {
                for (int j = t.back() + 1; j < n; ++j) {
                    SimplicialComplex y = x.intersect(cover.piece(static_cast<std::size_t>(j)));
                    if (y.empty()) continue;
                    Simplex t2 = t;
                    t2.push_back(j);
                    next.emplace_back(std::move(t2), std::move(y));
                }
                tuples.push_back(t);
                inter.emplace(t, std::move(x));
            }
            frontier = std::move(next);
        }
        complex_ = std::make_shared<const SimplicialComplex>(n, tuples);
        intersections_.resize(static_cast<std::size_t>(complex_->dimension() + 1));
        for (int d = 0; d <= complex_->dimension(); ++d)
            for (const auto& s : complex_->simplices(d))
                intersections_[static_cast<std::size_t>(d)].push_back(std::move(inter.at(s)));
    }

    const SimplicialComplex& complex() const { return *complex_; }
    const ComplexPtr& complex_ptr() const noexcept { return complex_; }
    int dimension() const { return complex_->dimension(); }
    const std::vector<Simplex>& simplices(int p) const { return complex_->simplices(p); }

    const SimplicialComplex& intersection(int p, std::size_t index) const
    {
        return intersections_.at(static_cast<std::size_t>(p)).at(index);
    }
    const SimplicialComplex& intersection_of(const Simplex& s) const
    {
        auto idx = complex_->index_of(s);
        if (!idx)
            throw Error(ErrorCode::InvalidCover, "empty intersection at " + format_tuple(s));
        return intersection(static_cast<int>(s.size()) - 1, *idx);
    }

private:
    ComplexPtr complex_ = std::make_shared<const SimplicialComplex>();
    std::vector<std::vector<SimplicialComplex>> intersections_;
};

inline Nerve nerve(const Cover& c) { return Nerve(c); }

// ---------------------------------------------------------------------------
// Staircase products
// ---------------------------------------------------------------------------

struct ProductComplex {
    SimplicialComplex complex;
    std::vector<int> first;  ///< vertex → vertex of the first factor
    std::vector<int> second; ///< vertex → vertex of the second factor
};

namespace detail {

inline Simplex projection(const Simplex& s, const std::vector<int>& proj)
{
    Simplex p;
    for (int v : s) p.push_back(proj[static_cast<std::size_t>(v)]);
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    return p;
}

} // namespace detail

/// Vertices (a,b) get index a·|V_B| + b. Simplices are chains strictly
/// increasing in the product order whose projections are simplices.
inline ProductComplex product_complex(const SimplicialComplex& a, const SimplicialComplex& b)
{
    if (a.empty() || b.empty())
        throw Error(ErrorCode::InvalidComplex, "product with an empty complex");
    const int na = a.vertex_count(), nb = b.vertex_count();
    ProductComplex r;
    r.first.resize(static_cast<std::size_t>(na * nb));
    r.second.resize(static_cast<std::size_t>(na * nb));
    for (int x = 0; x < na; ++x)
        for (int y = 0; y < nb; ++y) {
            r.first[static_cast<std::size_t>(x * nb + y)] = x;
            r.second[static_cast<std::size_t>(x * nb + y)] = y;
        }

    std::vector<Simplex> maximal;
    // depth-first over chains
    std::vector<std::pair<int, int>> chain;
    std::vector<int> pa, pb;
    auto ok = [&](const std::vector<int>& proj, const SimplicialComplex& k) {
        Simplex s = proj;
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        return k.contains(s);
    };
    std::function<void()> extend = [&]() {
        bool grew = false;
        auto [x0, y0] = chain.back();
        for (const auto& va : a.simplices(0)) {
            int x = va[0];
            if (x < x0) continue;
            for (const auto& vb : b.simplices(0)) {
                int y = vb[0];
                if (y < y0 || (x == x0 && y == y0)) continue;
                pa.push_back(x);
                pb.push_back(y);
                if (ok(pa, a) && ok(pb, b)) {
                    chain.emplace_back(x, y);
                    extend();
                    chain.pop_back();
                    grew = true;
                }
                pa.pop_back();
                pb.pop_back();
            }
        }
        if (!grew) {
            Simplex s;
            for (auto [x, y] : chain) s.push_back(x * nb + y);
            maximal.push_back(std::move(s));
        }
    };
    for (const auto& va : a.simplices(0))
        for (const auto& vb : b.simplices(0)) {
            chain = {{va[0], vb[0]}};
            pa = {va[0]};
            pb = {vb[0]};
            extend();
        }
    r.complex = SimplicialComplex(na * nb, maximal);
    return r;
}

struct ProductCover {
    ProductComplex product;
    Cover cover; ///< piece (i,j) has index i·|J| + j
};

inline ProductCover product_cover(const Cover& ca, const Cover& cb)
{
    ProductCover r;
    r.product = product_complex(ca.base(), cb.base());
    auto base = std::make_shared<const SimplicialComplex>(r.product.complex);
    std::vector<SimplicialComplex> pieces;
    for (const auto& u : ca.pieces())
        for (const auto& v : cb.pieces()) {
            std::vector<Simplex> cells;
            for (int d = 0; d <= base->dimension(); ++d)
                for (const auto& s : base->simplices(d))
                    if (u.contains(detail::projection(s, r.product.first)) &&
                        v.contains(detail::projection(s, r.product.second)))
                        cells.push_back(s);
            pieces.push_back(base->closure_of(cells));
        }
    r.cover = Cover(base, std::move(pieces));
    return r;
}

// ---------------------------------------------------------------------------
// Chains
// ---------------------------------------------------------------------------

/// Integral d-chain; coefficients aligned with complex().simplices(degree).
class Chain {
public:
    Chain() = default;
    Chain(ComplexPtr k, int degree) : complex_(std::move(k)), degree_(degree), coeffs_(complex_->count(degree)) {}
    Chain(ComplexPtr k, int degree, std::vector<Integer> coeffs)
        : complex_(std::move(k)), degree_(degree), coeffs_(std::move(coeffs))
    {
        if (coeffs_.size() != complex_->count(degree))
            throw Error(ErrorCode::DegreeMismatch, "chain length does not match the number of simplices");
    }

    const SimplicialComplex& complex() const { return *complex_; }
    const ComplexPtr& complex_ptr() const noexcept { return complex_; }
    int degree() const noexcept { return degree_; }
    const std::vector<Integer>& coefficients() const noexcept { return coeffs_; }

    const Integer& operator[](std::size_t i) const { return coeffs_[i]; }
    Integer& operator[](std::size_t i) { return coeffs_[i]; }

    void add(const Simplex& s, const Integer& c)
    {
        auto idx = complex_->index_of(s);
        if (!idx || static_cast<int>(s.size()) != degree_ + 1)
            throw Error(ErrorCode::InvalidComplex, "simplex " + format_tuple(s) + " not a " +
                                                       std::to_string(degree_) + "-simplex of the complex");
        coeffs_[*idx] += c;
    }

    bool is_zero() const
    {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Integer& c) { return c == 0; });
    }

    /// Vertices touched by the support.
    std::vector<Simplex> support() const
    {
        std::vector<Simplex> out;
        const auto& cells = complex_->simplices(degree_);
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            if (coeffs_[i] != 0) out.push_back(cells[i]);
        return out;
    }

    friend bool operator==(const Chain& a, const Chain& b)
    {
        return a.degree_ == b.degree_ && *a.complex_ == *b.complex_ && a.coeffs_ == b.coeffs_;
    }

private:
    ComplexPtr complex_;
    int degree_ = 0;
    std::vector<Integer> coeffs_;
};

inline Chain boundary(const Chain& z)
{
    if (z.degree() == 0)
        return Chain(z.complex_ptr(), -1, {});
    return Chain(z.complex_ptr(), z.degree() - 1, multiply(z.complex().boundary_matrix(z.degree()), z.coefficients()));
}

/// Σ signs(σ)·σ over all d-simplices; must be a cycle.
inline Chain fundamental_cycle(ComplexPtr k, int d, const std::map<Simplex, int>& signs)
{
    Chain z(k, d);
    const auto& cells = z.complex().simplices(d);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        auto it = signs.find(cells[i]);
        if (it == signs.end() || (it->second != 1 && it->second != -1))
            throw Error(ErrorCode::NotACycle, "no orientation sign for simplex " + format_tuple(cells[i]));
        z[i] = it->second;
    }
    if (!boundary(z).is_zero())
        throw Error(ErrorCode::NotACycle, "boundary of the signed sum is nonzero");
    return z;
}

/// Coherent ±1 orientation of the d-simplices of a pseudomanifold, found by
/// propagation across shared faces. nullopt if non-orientable or if some
/// face does not have exactly two cofaces.
inline std::optional<std::map<Simplex, int>> find_orientation(const SimplicialComplex& k, int d)
{
    const auto& cells = k.simplices(d);
    if (cells.empty()) return std::nullopt;
    std::vector<std::vector<std::pair<std::size_t, int>>> cofaces(k.count(d - 1));
    for (std::size_t c = 0; c < cells.size(); ++c)
        for (std::size_t j = 0; j < cells[c].size(); ++j) {
            Simplex f = cells[c];
            f.erase(f.begin() + static_cast<std::ptrdiff_t>(j));
            cofaces[*k.index_of(f)].emplace_back(c, j % 2 == 0 ? 1 : -1);
        }
    for (const auto& cf : cofaces)
        if (cf.size() != 2) return std::nullopt;
    std::vector<int> sign(cells.size(), 0);
    std::vector<std::vector<std::size_t>> faces_of(cells.size());
    for (std::size_t f = 0; f < cofaces.size(); ++f)
        for (const auto& [c, inc] : cofaces[f]) faces_of[c].push_back(f);
    for (std::size_t start = 0; start < cells.size(); ++start) {
        if (sign[start] != 0) continue;
        sign[start] = 1;
        std::queue<std::size_t> q;
        q.push(start);
        while (!q.empty()) {
            std::size_t c = q.front();
            q.pop();
            for (std::size_t f : faces_of[c]) {
                auto [c1, i1] = cofaces[f][0];
                auto [c2, i2] = cofaces[f][1];
                std::size_t other = c1 == c ? c2 : c1;
                int inc_c = c1 == c ? i1 : i2, inc_o = c1 == c ? i2 : i1;
                int want = -sign[c] * inc_c * inc_o;
                if (sign[other] == 0) {
                    sign[other] = want;
                    q.push(other);
                } else if (sign[other] != want) {
                    return std::nullopt;
                }
            }
        }
    }
    std::map<Simplex, int> out;
    for (std::size_t c = 0; c < cells.size(); ++c) out.emplace(cells[c], sign[c]);
    return out;
}

// ---------------------------------------------------------------------------
// Barycentric subdivision and its dual-star cover
// ---------------------------------------------------------------------------

struct Subdivision {
    SimplicialComplex complex;
    std::vector<Simplex> cell_of_vertex; ///< vertex of sd K → simplex of K
};

/// Vertices of sd K are the simplices of K ordered by (dimension, lex), so a
/// flag σ_0 ⊂ … ⊂ σ_k is automatically an increasing tuple.
inline Subdivision barycentric_subdivision(const SimplicialComplex& k)
{
    Subdivision r;
    r.cell_of_vertex = k.all_simplices();
    std::map<Simplex, int> id;
    for (std::size_t i = 0; i < r.cell_of_vertex.size(); ++i)
        id.emplace(r.cell_of_vertex[i], static_cast<int>(i));
    std::vector<Simplex> flags;
    std::function<void(Simplex&, const Simplex&)> grow = [&](Simplex& flag, const Simplex& top) {
        bool extended = false;
        for (int d = static_cast<int>(top.size()); d <= k.dimension(); ++d)
            for (const auto& s : k.simplices(d))
                if (std::includes(s.begin(), s.end(), top.begin(), top.end())) {
                    flag.push_back(id.at(s));
                    grow(flag, s);
                    flag.pop_back();
                    extended = true;
                }
        if (!extended) flags.push_back(flag);
    };
    for (const auto& v : k.simplices(0)) {
        Simplex flag{id.at(v)};
        grow(flag, v);
    }
    r.complex = SimplicialComplex(static_cast<int>(r.cell_of_vertex.size()), flags);
    return r;
}

/// On sd K, the piece for vertex v of K consists of the flags all of whose
/// members contain v. Its nerve is K itself and every non-empty
/// intersection is a cone.
inline Cover dual_star_cover(const Subdivision& sd, int vertex_count)
{
    auto base = std::make_shared<const SimplicialComplex>(sd.complex);
    std::vector<SimplicialComplex> pieces;
    for (int v = 0; v < vertex_count; ++v) {
        std::vector<Simplex> cells;
        for (int d = 0; d <= base->dimension(); ++d)
            for (const auto& flag : base->simplices(d)) {
                bool all = std::all_of(flag.begin(), flag.end(), [&](int x) {
                    const auto& c = sd.cell_of_vertex[static_cast<std::size_t>(x)];
                    return std::binary_search(c.begin(), c.end(), v);
                });
                if (all) cells.push_back(flag);
            }
        pieces.push_back(base->closure_of(cells));
    }
    return Cover(base, std::move(pieces));
}

} // namespace torsor
