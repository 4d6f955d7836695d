#pragma once

// Čech–simplicial double complex on a cover, Deligne-type packages
// (classifying data plus local form layers satisfying the descent
// equations), curvature, characteristic forms and holonomy over closed
// cycles.
//
// Conventions. C^{p,q} assigns to every nerve p-simplex τ a rational
// q-cochain on the intersection U_τ. D is the local simplicial coboundary,
// δ the Čech coboundary followed by restriction; the two commute. A package
// of degree d carries
//   log  ∈ C^{d,0}  with n := δ log integral and locally constant,
//   A^q  ∈ C^{q,d−q} for q = 0..d−1,
// subject to δA^{d−1} = D log and δA^{q−1} = D A^q for 0 < q < d. The
// curvature D A^0 is δ-closed and glues to a global (d+1)-cochain.

#include "torsor/cochain.hpp"
#include "torsor/complex.hpp"

#include <memory>
#include <optional>
#include <random>
#include <vector>

namespace torsor {

/// A cover together with its nerve, shared by all double cochains on it.
struct CechContext {
    Cover cover;
    Nerve nerve;

    explicit CechContext(Cover c) : cover(std::move(c)), nerve(cover) {}
    const SimplicialComplex& base() const { return cover.base(); }
    const ComplexPtr& base_ptr() const { return cover.base_ptr(); }
};

using ContextPtr = std::shared_ptr<const CechContext>;

inline ContextPtr make_context(Cover c) { return std::make_shared<const CechContext>(std::move(c)); }

class DoubleCochain {
public:
    DoubleCochain() = default;
    DoubleCochain(ContextPtr ctx, int cech_degree, int form_degree)
        : ctx_(std::move(ctx)), p_(cech_degree), q_(form_degree)
    {
        const auto& taus = ctx_->nerve.simplices(p_);
        v_.resize(taus.size());
        for (std::size_t t = 0; t < taus.size(); ++t)
            v_[t].assign(ctx_->nerve.intersection(p_, t).count(q_), Rational(0));
    }

    const ContextPtr& context() const noexcept { return ctx_; }
    int cech_degree() const noexcept { return p_; }
    int form_degree() const noexcept { return q_; }

    /// Local cochain on U_τ for the τ-th nerve p-simplex.
    std::vector<Rational>& local(std::size_t t) { return v_[t]; }
    const std::vector<Rational>& local(std::size_t t) const { return v_[t]; }
    const SimplicialComplex& piece(std::size_t t) const { return ctx_->nerve.intersection(p_, t); }
    std::size_t size() const noexcept { return v_.size(); }

    /// Value at an ordering of a nerve simplex on a simplex σ of U_τ.
    Rational at(const Simplex& ordered, const Simplex& sigma) const
    {
        int s = permutation_sign(ordered);
        if (s == 0) return 0;
        Simplex tau = ordered;
        std::sort(tau.begin(), tau.end());
        auto t = ctx_->nerve.complex().index_of(tau);
        if (!t)
            throw Error(ErrorCode::InvalidPackage, "no nerve simplex " + format_tuple(ordered));
        auto k = piece(*t).index_of(sigma);
        if (!k)
            throw Error(ErrorCode::InvalidPackage, "simplex " + format_tuple(sigma) + " not in U" + format_tuple(tau));
        return s > 0 ? v_[*t][*k] : Rational(-v_[*t][*k]);
    }

    void set(const Simplex& tau, const Simplex& sigma, const Rational& value)
    {
        auto t = ctx_->nerve.complex().index_of(tau);
        if (!t)
            throw Error(ErrorCode::InvalidPackage, "no nerve simplex " + format_tuple(tau));
        auto k = piece(*t).index_of(sigma);
        if (!k)
            throw Error(ErrorCode::InvalidPackage, "simplex " + format_tuple(sigma) + " not in U" + format_tuple(tau));
        v_[*t][*k] = value;
    }

    bool is_zero() const
    {
        for (const auto& l : v_)
            for (const auto& x : l)
                if (x != 0) return false;
        return true;
    }

    DoubleCochain& operator+=(const DoubleCochain& o)
    {
        check_same(o);
        for (std::size_t t = 0; t < v_.size(); ++t)
            for (std::size_t k = 0; k < v_[t].size(); ++k) v_[t][k] += o.v_[t][k];
        return *this;
    }
    DoubleCochain operator-() const
    {
        DoubleCochain r = *this;
        for (auto& l : r.v_)
            for (auto& x : l) x = -x;
        return r;
    }
    friend DoubleCochain operator+(DoubleCochain a, const DoubleCochain& b) { return a += b; }
    friend DoubleCochain operator-(const DoubleCochain& a, const DoubleCochain& b) { return a + (-b); }
    friend bool operator==(const DoubleCochain& a, const DoubleCochain& b)
    {
        return a.p_ == b.p_ && a.q_ == b.q_ && a.v_ == b.v_;
    }

private:
    void check_same(const DoubleCochain& o) const
    {
        if (p_ != o.p_ || q_ != o.q_)
            throw Error(ErrorCode::DegreeMismatch, "double cochains of different bidegrees");
    }

    ContextPtr ctx_;
    int p_ = 0, q_ = 0;
    std::vector<std::vector<Rational>> v_;
};

/// Local simplicial coboundary.
inline DoubleCochain local_coboundary(const DoubleCochain& x)
{
    DoubleCochain r(x.context(), x.cech_degree(), x.form_degree() + 1);
    for (std::size_t t = 0; t < x.size(); ++t)
        r.local(t) = multiply(x.piece(t).coboundary_matrix(x.form_degree()), x.local(t));
    return r;
}

/// Čech coboundary with restriction to the smaller intersections.
inline DoubleCochain cech_coboundary(const DoubleCochain& x)
{
    const int p = x.cech_degree(), q = x.form_degree();
    DoubleCochain r(x.context(), p + 1, q);
    const auto& taus = x.context()->nerve.simplices(p + 1);
    for (std::size_t t = 0; t < taus.size(); ++t) {
        const auto& cells = r.piece(t).simplices(q);
        for (std::size_t j = 0; j < taus[t].size(); ++j) {
            Simplex face = taus[t];
            face.erase(face.begin() + static_cast<std::ptrdiff_t>(j));
            for (std::size_t k = 0; k < cells.size(); ++k) {
                Rational v = x.at(face, cells[k]);
                r.local(t)[k] += (j % 2 == 0) ? v : Rational(-v);
            }
        }
    }
    return r;
}

/// Solver knobs for every choice made while solving descent or holonomy
/// equations. Seed 0 is the canonical choice.
struct ZigzagOptions {
    std::uint64_t seed = 0;
};

/// y ∈ C^{p−1,q} with δy = x for a δ-closed x, p ≥ 1. For each base simplex
/// σ the pieces containing σ span a full simplex of the nerve; y is the cone
/// on an apex chosen among them (the smallest index unless seeded).
inline DoubleCochain cech_primitive(const DoubleCochain& x, ZigzagOptions opts = {})
{
    const int p = x.cech_degree(), q = x.form_degree();
    if (p < 1)
        throw Error(ErrorCode::DegreeMismatch, "Čech primitive needs Čech degree at least 1");
    const auto& ctx = *x.context();
    std::mt19937_64 rng(opts.seed);
    std::map<Simplex, int> apex;
    for (const auto& sigma : ctx.base().simplices(q)) {
        std::vector<int> holders;
        for (std::size_t i = 0; i < ctx.cover.size(); ++i)
            if (ctx.cover.piece(i).contains(sigma)) holders.push_back(static_cast<int>(i));
        int a = holders.front();
        if (opts.seed != 0) a = holders[rng() % holders.size()];
        apex.emplace(sigma, a);
    }
    DoubleCochain y(x.context(), p - 1, q);
    const auto& taus = ctx.nerve.simplices(p - 1);
    for (std::size_t t = 0; t < taus.size(); ++t) {
        const auto& cells = y.piece(t).simplices(q);
        for (std::size_t k = 0; k < cells.size(); ++k) {
            int a = apex.at(cells[k]);
            if (std::binary_search(taus[t].begin(), taus[t].end(), a)) continue;
            Simplex ordered{a};
            ordered.insert(ordered.end(), taus[t].begin(), taus[t].end());
            y.local(t)[k] = x.at(ordered, cells[k]);
        }
    }
    return y;
}

/// y ∈ C^{p,q−1} with Dy = x for a D-closed x on acyclic intersections.
inline DoubleCochain local_primitive(const DoubleCochain& x, ZigzagOptions opts = {})
{
    const int p = x.cech_degree(), q = x.form_degree();
    if (q < 1)
        throw Error(ErrorCode::DegreeMismatch, "local primitive needs form degree at least 1");
    DoubleCochain y(x.context(), p, q - 1);
    for (std::size_t t = 0; t < x.size(); ++t) {
        LinearSolver solver(x.piece(t).coboundary_matrix(q - 1), SolverOptions{opts.seed});
        auto sol = solver.solve_rational(x.local(t));
        if (!sol)
            throw Error(ErrorCode::CoverNotGood, "no local primitive on U" +
                                                     format_tuple(x.context()->nerve.simplices(p)[t]));
        y.local(t) = std::move(*sol);
    }
    return y;
}

/// Global cochain from a δ-closed element of C^{0,q}.
inline Cochain glue(const DoubleCochain& x)
{
    if (x.cech_degree() != 0)
        throw Error(ErrorCode::DegreeMismatch, "only Čech degree 0 data glues");
    const auto& ctx = *x.context();
    Cochain g(ctx.base_ptr(), x.form_degree(), Coefficients::rational());
    const auto& cells = ctx.base().simplices(x.form_degree());
    for (std::size_t k = 0; k < cells.size(); ++k) {
        std::optional<Rational> seen;
        for (std::size_t i = 0; i < ctx.cover.size(); ++i) {
            if (!ctx.cover.piece(i).contains(cells[k])) continue;
            Rational v = x.at({static_cast<int>(i)}, cells[k]);
            if (seen && *seen != v)
                throw Error(ErrorCode::InvalidPackage, "local values disagree on " + format_tuple(cells[k]));
            seen = v;
        }
        g.set_at(k, {seen.value_or(Rational(0))});
    }
    return g;
}

/// Constant local functions from a Čech p-cochain (rational values read
/// from its first component; circle values use their [0,1) lift).
inline DoubleCochain constants(const ContextPtr& ctx, const Cochain& c)
{
    DoubleCochain x(ctx, c.degree(), 0);
    for (std::size_t t = 0; t < x.size(); ++t)
        std::fill(x.local(t).begin(), x.local(t).end(), c[t][0]);
    return x;
}

/// The Čech cochain of a locally constant element of C^{p,0}; nullopt if
/// some local function is not constant.
inline std::optional<Cochain> as_constants(const DoubleCochain& x, const Coefficients& coeffs)
{
    Cochain c(x.context()->nerve.complex_ptr(), x.cech_degree(), coeffs);
    for (std::size_t t = 0; t < x.size(); ++t) {
        const auto& l = x.local(t);
        for (const auto& v : l)
            if (v != l.front()) return std::nullopt;
        if (coeffs.is_group() && !is_integral(l.empty() ? Rational(0) : l.front())) return std::nullopt;
        c.set_at(t, {l.empty() ? Rational(0) : l.front()});
    }
    return c;
}

/// Čech-to-simplicial zigzag of a locally constant δ-closed x ∈ C^{p,0}:
/// repeatedly take a Čech primitive and apply D until Čech degree 0, then
/// glue. The result is a global simplicial p-cocycle.
inline Cochain zigzag(const DoubleCochain& x, ZigzagOptions opts = {})
{
    DoubleCochain cur = x;
    std::uint64_t seed = opts.seed;
    while (cur.cech_degree() > 0) {
        cur = local_coboundary(cech_primitive(cur, ZigzagOptions{seed}));
        if (seed) seed = seed * 6364136223846793005ULL + 1442695040888963407ULL;
    }
    return glue(cur);
}

// ===========================================================================
// Packages
// ===========================================================================

class DelignePackage {
public:
    DelignePackage() = default;

    /// Validates every descent equation exactly.
    DelignePackage(ContextPtr ctx, int degree, DoubleCochain log, std::vector<DoubleCochain> layers)
        : ctx_(std::move(ctx)), d_(degree), log_(std::move(log)), layers_(std::move(layers))
    {
        if (d_ < 1)
            throw Error(ErrorCode::InvalidPackage, "package degree must be at least 1");
        if (log_.cech_degree() != d_ || log_.form_degree() != 0)
            throw Error(ErrorCode::InvalidPackage, "log must have bidegree (d,0)");
        if (static_cast<int>(layers_.size()) != d_)
            throw Error(ErrorCode::InvalidPackage, "expected " + std::to_string(d_) + " layers");
        for (int q = 0; q < d_; ++q)
            if (layers_[static_cast<std::size_t>(q)].cech_degree() != q ||
                layers_[static_cast<std::size_t>(q)].form_degree() != d_ - q)
                throw Error(ErrorCode::InvalidPackage, "layer " + std::to_string(q) + " has the wrong bidegree");
        auto n = as_constants(cech_coboundary(log_), FgAbelianGroup::integers());
        if (!n)
            throw Error(ErrorCode::DefectNotLocallyConstant, "δ log is not an integral locally constant cochain");
        defect_ = *n;
        if (!(cech_coboundary(layer(d_ - 1)) == local_coboundary(log_)))
            throw Error(ErrorCode::InvalidPackage, "top descent equation δA^" + std::to_string(d_ - 1) + " = D log fails");
        for (int q = d_ - 1; q >= 1; --q)
            if (!(cech_coboundary(layer(q - 1)) == local_coboundary(layer(q))))
                throw Error(ErrorCode::InvalidPackage, "descent equation δA^" + std::to_string(q - 1) + " = D A^" +
                                                           std::to_string(q) + " fails");
    }

    const ContextPtr& context() const noexcept { return ctx_; }
    int degree() const noexcept { return d_; }
    const DoubleCochain& log() const noexcept { return log_; }
    const DoubleCochain& layer(int q) const { return layers_.at(static_cast<std::size_t>(q)); }
    const std::vector<DoubleCochain>& layers() const noexcept { return layers_; }
    /// n = δ log, an integral Čech (d+1)-cocycle (the characteristic class).
    const Cochain& defect() const noexcept { return defect_; }

    /// Circle-valued classifying cochain, when log is locally constant.
    std::optional<Cochain> classifying_cocycle() const
    {
        auto c = as_constants(log_, Coefficients::rational());
        if (!c) return std::nullopt;
        return recast(*c, Coefficients::circle());
    }

private:
    ContextPtr ctx_;
    int d_ = 0;
    DoubleCochain log_;
    std::vector<DoubleCochain> layers_;
    Cochain defect_;
};

/// Builds the layers for a given log by alternating Čech primitives and D.
inline DelignePackage package_from_log(const ContextPtr& ctx, const DoubleCochain& log, ZigzagOptions opts = {})
{
    const int d = log.cech_degree();
    std::vector<DoubleCochain> layers(static_cast<std::size_t>(d));
    DoubleCochain target = local_coboundary(log);
    for (int q = d - 1; q >= 0; --q) {
        layers[static_cast<std::size_t>(q)] = cech_primitive(target, opts);
        target = local_coboundary(layers[static_cast<std::size_t>(q)]);
    }
    return DelignePackage(ctx, d, log, std::move(layers));
}

/// Package of a circle-valued Čech d-cocycle of constants. The cover must
/// be good and c a cocycle.
inline DelignePackage descent_chain(const ContextPtr& ctx, const Cochain& c, ZigzagOptions opts = {})
{
    if (!c.coefficients().is_circle())
        throw Error(ErrorCode::GroupMismatch, "descent needs a circle-valued cocycle");
    if (!is_cocycle(c))
        throw Error(ErrorCode::NotACocycle, "classifying cochain is not a cocycle");
    auto report = verify_good_cover(ctx->cover, ctx->nerve, c.degree() + 1);
    if (!report.ok())
        throw Error(ErrorCode::CoverNotGood, "intersection " + format_tuple(report.failures.front().indices) +
                                                 " has H^" + std::to_string(report.failures.front().degree) + " = " +
                                                 report.failures.front().cohomology);
    return package_from_log(ctx, constants(ctx, c), opts);
}

/// Package whose characteristic class is a given integral Čech
/// (d+1)-cocycle n: log solves δ log = n with non-constant local functions.
inline DelignePackage package_from_integral_cocycle(const ContextPtr& ctx, const Cochain& n, ZigzagOptions opts = {})
{
    if (!n.coefficients().is_integers())
        throw Error(ErrorCode::GroupMismatch, "characteristic cocycle must be integral");
    if (!is_cocycle(n))
        throw Error(ErrorCode::NotACocycle, "characteristic cochain is not a cocycle");
    DoubleCochain log = cech_primitive(constants(ctx, n), opts);
    return package_from_log(ctx, log, opts);
}

/// Gauge change by ρ^q ∈ C^{q,d−1−q} and integral constants ν ∈ C^{d,0}:
/// log += δρ^{d−1} + ν, A^q += Dρ^q + δρ^{q−1}.
inline DelignePackage gauge_transform(const DelignePackage& pkg, const std::vector<DoubleCochain>& rho,
                                      const DoubleCochain& nu)
{
    const int d = pkg.degree();
    if (static_cast<int>(rho.size()) != d)
        throw Error(ErrorCode::InvalidPackage, "gauge needs one potential per layer");
    DoubleCochain log = pkg.log() + cech_coboundary(rho[static_cast<std::size_t>(d - 1)]) + nu;
    std::vector<DoubleCochain> layers;
    for (int q = 0; q < d; ++q) {
        DoubleCochain a = pkg.layer(q) + local_coboundary(rho[static_cast<std::size_t>(q)]);
        if (q > 0) a += cech_coboundary(rho[static_cast<std::size_t>(q - 1)]);
        layers.push_back(std::move(a));
    }
    return DelignePackage(pkg.context(), d, std::move(log), std::move(layers));
}

/// Global (d+1)-cochain glued from D A^0; closed.
inline Cochain curvature(const DelignePackage& pkg)
{
    Cochain f = glue(local_coboundary(pkg.layer(0)));
    if (!is_cocycle(f))
        throw Error(ErrorCode::InvalidPackage, "curvature is not closed");
    return f;
}

/// m-fold cup power of the curvature.
inline Cochain characteristic_form(const DelignePackage& pkg, int power)
{
    if (power < 1)
        throw Error(ErrorCode::DegreeMismatch, "characteristic form needs power at least 1");
    Cochain f = curvature(pkg);
    Cochain r = f;
    for (int k = 1; k < power; ++k) r = cup(r, f);
    return r;
}

// ===========================================================================
// Holonomy
// ===========================================================================

/// Cover of a subcomplex V by the pieces U_i ∩ V (indices kept).
inline ContextPtr restrict_context(const CechContext& ctx, ComplexPtr v)
{
    std::vector<SimplicialComplex> pieces;
    for (const auto& u : ctx.cover.pieces()) pieces.push_back(u.intersect(*v));
    return make_context(Cover(std::move(v), std::move(pieces)));
}

inline DoubleCochain restrict_to(const DoubleCochain& x, const ContextPtr& sub)
{
    DoubleCochain r(sub, x.cech_degree(), x.form_degree());
    const auto& taus = sub->nerve.simplices(x.cech_degree());
    for (std::size_t t = 0; t < taus.size(); ++t) {
        const auto& cells = r.piece(t).simplices(x.form_degree());
        for (std::size_t k = 0; k < cells.size(); ++k) r.local(t)[k] = x.at(taus[t], cells[k]);
    }
    return r;
}

struct HolonomyResult {
    Rational value;                ///< in [0,1)
    Rational raw_pairing;          ///< unreduced ⟨ω, z⟩ times the orientation sign
    std::vector<DoubleCochain> potentials; ///< v^q ∈ C^{q,d−1−q}
    Cochain flat_cocycle;          ///< h − m, a rational Čech d-cocycle on the restricted nerve
    Cochain global_form;           ///< ω
};

/// Sign relating the zigzag to the pairing through the nerve: for a
/// constant Čech p-cocycle x, ⟨zigzag(x), z⟩ = (−1)^{p(p+1)/2} ⟨x, φ_* z⟩.
inline int zigzag_sign(int p) { return ((p * (p + 1) / 2) % 2 == 0) ? 1 : -1; }

inline HolonomyResult holonomy_detail(const DelignePackage& pkg, const Chain& z, ZigzagOptions opts = {})
{
    const int d = pkg.degree();
    if (z.degree() != d)
        throw Error(ErrorCode::NoFundamentalCycle, "cycle has degree " + std::to_string(z.degree()) +
                                                       ", package degree is " + std::to_string(d));
    if (z.is_zero() || !boundary(z).is_zero())
        throw Error(ErrorCode::NoFundamentalCycle, "chain is zero or not a cycle");
    if (!(z.complex() == pkg.context()->base()))
        throw Error(ErrorCode::NoFundamentalCycle, "cycle does not live on the package base");

    auto v = std::make_shared<const SimplicialComplex>(z.complex().closure_of(z.support()));
    ContextPtr sub = restrict_context(*pkg.context(), v);
    auto report = verify_good_cover(sub->cover, sub->nerve, d);
    if (!report.ok())
        throw Error(ErrorCode::CoverNotGoodOnV, "restricted intersection " +
                                                    format_tuple(report.failures.front().indices) + " has H^" +
                                                    std::to_string(report.failures.front().degree) + " = " +
                                                    report.failures.front().cohomology);

    std::vector<DoubleCochain> a;
    for (int q = 0; q < d; ++q) a.push_back(restrict_to(pkg.layer(q), sub));
    DoubleCochain log = restrict_to(pkg.log(), sub);

    HolonomyResult r;
    std::uint64_t seed = opts.seed;
    auto next_seed = [&]() {
        if (seed) seed = seed * 6364136223846793005ULL + 1442695040888963407ULL;
        return ZigzagOptions{seed};
    };
    // A^0 = D v^0, A^q − δv^{q−1} = D v^q
    r.potentials.push_back(local_primitive(a[0], next_seed()));
    for (int q = 1; q < d; ++q)
        r.potentials.push_back(
            local_primitive(a[static_cast<std::size_t>(q)] - cech_coboundary(r.potentials.back()), next_seed()));
    DoubleCochain h = log - cech_coboundary(r.potentials.back());
    auto hc = as_constants(h, Coefficients::rational());
    if (!hc)
        throw Error(ErrorCode::DefectNotLocallyConstant, "trivialized transition data is not locally constant");
    Cochain n = recast(coboundary(*hc), FgAbelianGroup::integers());
    auto m = is_coboundary(n, SolverOptions{next_seed().seed});
    if (!m)
        throw Error(ErrorCode::CoverNotGoodOnV, "characteristic class does not vanish on V");
    r.flat_cocycle = *hc - recast(*m, Coefficients::rational());
    r.global_form = zigzag(constants(sub, r.flat_cocycle), next_seed());

    Chain zv(v, d);
    const auto& cells = z.complex().simplices(d);
    for (std::size_t i = 0; i < cells.size(); ++i)
        if (z[i] != 0) zv.add(cells[i], z[i]);
    r.raw_pairing = Rational(zigzag_sign(d)) * pair(r.global_form, zv);
    r.value = frac(r.raw_pairing);
    return r;
}

/// Circle-valued holonomy of a degree-d package around a d-cycle.
inline Rational holonomy(const DelignePackage& pkg, const Chain& z, ZigzagOptions opts = {})
{
    return holonomy_detail(pkg, z, opts).value;
}

} // namespace torsor
