#pragma once

// Cochains with constant coefficients on a simplicial complex (in practice
// a nerve), the coboundary, coboundary decisions with canonical witnesses,
// cohomology with explicit class coordinates, the Alexander–Whitney cup
// product and the goodness check for covers.

#include "torsor/abelian.hpp"
#include "torsor/complex.hpp"

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace torsor {

/// Coefficient group of a cochain: a fg abelian group, Q/Z, or Q.
/// Every value is stored as a vector of rationals of length rank().
class Coefficients {
public:
    enum class Kind { Finite, Circle, Rational };

    Coefficients() : kind_(Kind::Finite) {}
    Coefficients(FgAbelianGroup g) : kind_(Kind::Finite), group_(std::move(g)) {} // NOLINT implicit
    static Coefficients circle()
    {
        Coefficients c;
        c.kind_ = Kind::Circle;
        return c;
    }
    static Coefficients rational()
    {
        Coefficients c;
        c.kind_ = Kind::Rational;
        return c;
    }

    Kind kind() const noexcept { return kind_; }
    bool is_group() const noexcept { return kind_ == Kind::Finite; }
    bool is_circle() const noexcept { return kind_ == Kind::Circle; }
    bool is_rational() const noexcept { return kind_ == Kind::Rational; }
    bool is_integers() const { return is_group() && group_.moduli() == std::vector<Integer>{0}; }
    const FgAbelianGroup& group() const
    {
        if (!is_group())
            throw Error(ErrorCode::GroupMismatch, "coefficients are not a fg abelian group");
        return group_;
    }
    std::size_t rank() const { return is_group() ? group_.rank() : 1; }

    using Value = std::vector<Rational>;

    Value zero() const { return Value(rank(), Rational(0)); }

    Value reduce(Value v) const
    {
        if (v.size() != rank())
            throw Error(ErrorCode::GroupMismatch, "value has " + std::to_string(v.size()) + " components, expected " +
                                                      std::to_string(rank()));
        switch (kind_) {
        case Kind::Finite:
            for (std::size_t k = 0; k < v.size(); ++k) {
                if (!is_integral(v[k]))
                    throw Error(ErrorCode::GroupMismatch, "non-integral value in a fg abelian group");
                v[k] = Rational(mod_floor(to_integer(v[k]), group_.moduli()[k]));
            }
            break;
        case Kind::Circle: v[0] = frac(v[0]); break;
        case Kind::Rational: break;
        }
        return v;
    }

    std::string element_to_string(const Value& v) const
    {
        if (v.size() == 1) return torsor::to_string(v[0]);
        std::ostringstream os;
        os << '(';
        for (std::size_t k = 0; k < v.size(); ++k) os << (k ? "," : "") << torsor::to_string(v[k]);
        os << ')';
        return os.str();
    }

    std::string to_string() const
    {
        switch (kind_) {
        case Kind::Circle: return "Q/Z";
        case Kind::Rational: return "Q";
        case Kind::Finite: break;
        }
        return group_.to_string();
    }

    friend bool operator==(const Coefficients& a, const Coefficients& b)
    {
        return a.kind_ == b.kind_ && (a.kind_ != Kind::Finite || a.group_ == b.group_);
    }

private:
    Kind kind_;
    FgAbelianGroup group_;
};

/// A p-cochain: one value per p-simplex in canonical (increasing) order.
/// Values on other orderings follow by the alternating rule.
class Cochain {
public:
    using Value = Coefficients::Value;

    Cochain() = default;
    Cochain(ComplexPtr k, int degree, Coefficients coeffs)
        : complex_(std::move(k)), degree_(degree), coeffs_(std::move(coeffs)),
          values_(complex_->count(degree), coeffs_.zero())
    {
    }

    const SimplicialComplex& complex() const { return *complex_; }
    const ComplexPtr& complex_ptr() const noexcept { return complex_; }
    int degree() const noexcept { return degree_; }
    const Coefficients& coefficients() const noexcept { return coeffs_; }
    std::size_t size() const noexcept { return values_.size(); }

    const Value& operator[](std::size_t i) const { return values_[i]; }
    void set_at(std::size_t i, Value v) { values_[i] = coeffs_.reduce(std::move(v)); }
    const std::vector<Value>& values() const noexcept { return values_; }

    /// Value on an arbitrary ordering of a simplex; zero on repeated indices.
    Value value(const Simplex& ordered) const
    {
        int s = permutation_sign(ordered);
        if (s == 0) return coeffs_.zero();
        Simplex sorted = ordered;
        std::sort(sorted.begin(), sorted.end());
        auto idx = complex_->index_of(sorted);
        if (!idx || static_cast<int>(sorted.size()) != degree_ + 1)
            throw Error(ErrorCode::InvalidComplex, "no " + std::to_string(degree_) + "-simplex " + format_tuple(ordered));
        Value v = values_[*idx];
        if (s < 0)
            for (auto& x : v) x = -x;
        return coeffs_.reduce(std::move(v));
    }

    /// Sets the value on an ordering of a simplex (converted to canonical order).
    void set(const Simplex& ordered, Value v)
    {
        int s = permutation_sign(ordered);
        Simplex sorted = ordered;
        std::sort(sorted.begin(), sorted.end());
        auto idx = complex_->index_of(sorted);
        if (s == 0 || !idx || static_cast<int>(sorted.size()) != degree_ + 1)
            throw Error(ErrorCode::InvalidComplex, "no " + std::to_string(degree_) + "-simplex " + format_tuple(ordered));
        if (s < 0)
            for (auto& x : v) x = -x;
        values_[*idx] = coeffs_.reduce(std::move(v));
    }
    void set(const Simplex& ordered, const Rational& v) { set(ordered, Value{v}); }

    bool is_zero() const
    {
        for (const auto& v : values_)
            for (const auto& x : v)
                if (x != 0) return false;
        return true;
    }

    Cochain& operator+=(const Cochain& o)
    {
        check_same(o);
        for (std::size_t i = 0; i < values_.size(); ++i) {
            Value v = values_[i];
            for (std::size_t k = 0; k < v.size(); ++k) v[k] += o.values_[i][k];
            values_[i] = coeffs_.reduce(std::move(v));
        }
        return *this;
    }
    Cochain operator-() const
    {
        Cochain r = *this;
        for (auto& v : r.values_) {
            for (auto& x : v) x = -x;
            v = coeffs_.reduce(std::move(v));
        }
        return r;
    }
    friend Cochain operator+(Cochain a, const Cochain& b) { return a += b; }
    friend Cochain operator-(const Cochain& a, const Cochain& b) { return a + (-b); }

    Cochain scaled(const Integer& n) const
    {
        Cochain r = *this;
        for (auto& v : r.values_) {
            for (auto& x : v) x *= Rational(n);
            v = coeffs_.reduce(std::move(v));
        }
        return r;
    }

    /// Component k as an integer vector (fg abelian coefficients only).
    std::vector<Integer> component(std::size_t k) const
    {
        std::vector<Integer> out(values_.size());
        for (std::size_t i = 0; i < values_.size(); ++i) out[i] = to_integer(values_[i][k]);
        return out;
    }
    std::vector<Rational> rational_values() const
    {
        std::vector<Rational> out(values_.size());
        for (std::size_t i = 0; i < values_.size(); ++i) out[i] = values_[i][0];
        return out;
    }

    friend bool operator==(const Cochain& a, const Cochain& b)
    {
        return a.degree_ == b.degree_ && a.coeffs_ == b.coeffs_ && a.values_ == b.values_ &&
               (a.complex_ == b.complex_ || *a.complex_ == *b.complex_);
    }

    void check_same(const Cochain& o) const
    {
        if (degree_ != o.degree_)
            throw Error(ErrorCode::DegreeMismatch, "cochain degrees differ");
        if (!(coeffs_ == o.coeffs_))
            throw Error(ErrorCode::GroupMismatch, "coefficient groups differ");
        if (complex_ != o.complex_ && !(*complex_ == *o.complex_))
            throw Error(ErrorCode::InvalidComplex, "cochains live on different complexes");
    }

private:
    ComplexPtr complex_;
    int degree_ = 0;
    Coefficients coeffs_;
    std::vector<Value> values_;
};

/// Same cochain with values read in a different coefficient group
/// (e.g. a fg abelian cochain viewed with rational values).
inline Cochain recast(const Cochain& x, const Coefficients& to)
{
    Cochain r(x.complex_ptr(), x.degree(), to);
    for (std::size_t i = 0; i < x.size(); ++i) r.set_at(i, x[i]);
    return r;
}

/// (δx)_{i_0..i_{p+1}} = Σ_j (−1)^j x_{i_0..î_j..i_{p+1}}
inline Cochain coboundary(const Cochain& x)
{
    const int p = x.degree();
    Cochain r(x.complex_ptr(), p + 1, x.coefficients());
    const auto& cells = x.complex().simplices(p + 1);
    const std::size_t rank = x.coefficients().rank();
    for (std::size_t c = 0; c < cells.size(); ++c) {
        Cochain::Value v(rank, Rational(0));
        for (std::size_t j = 0; j < cells[c].size(); ++j) {
            Simplex face = cells[c];
            face.erase(face.begin() + static_cast<std::ptrdiff_t>(j));
            const auto& fv = x[*x.complex().index_of(face)];
            for (std::size_t k = 0; k < rank; ++k)
                v[k] += (j % 2 == 0) ? fv[k] : Rational(-fv[k]);
        }
        r.set_at(c, std::move(v));
    }
    return r;
}

inline bool is_cocycle(const Cochain& x) { return coboundary(x).is_zero(); }

/// y with δy = x if one exists. Throws NotACocycle when δx ≠ 0. The witness
/// is the canonical solver representative; a nonzero seed picks another one.
inline std::optional<Cochain> is_coboundary(const Cochain& x, SolverOptions opts = {})
{
    if (!is_cocycle(x))
        throw Error(ErrorCode::NotACocycle, "coboundary decision requested for a non-cocycle");
    const int p = x.degree();
    if (p == 0) {
        // only the zero 0-cochain bounds (C^{-1} = 0); the witness is the
        // empty cochain in degree −1
        if (x.is_zero()) return Cochain(x.complex_ptr(), -1, x.coefficients());
        return std::nullopt;
    }
    IntMatrix d = x.complex().coboundary_matrix(p - 1);
    Cochain y(x.complex_ptr(), p - 1, x.coefficients());
    const auto& coeffs = x.coefficients();
    if (coeffs.is_group()) {
        for (std::size_t k = 0; k < coeffs.rank(); ++k) {
            const Integer& m = coeffs.group().moduli()[k];
            auto sol = solve_linear(d, x.component(k), std::vector<Integer>(d.rows(), m),
                                    std::vector<Integer>(d.cols(), m), opts);
            if (!sol) return std::nullopt;
            for (std::size_t i = 0; i < sol->size(); ++i) {
                auto v = y[i];
                v[k] = Rational((*sol)[i]);
                y.set_at(i, std::move(v));
            }
        }
        return y;
    }
    LinearSolver solver(d, opts);
    auto sol = coeffs.is_circle() ? solver.solve_circle(x.rational_values()) : solver.solve_rational(x.rational_values());
    if (!sol) return std::nullopt;
    for (std::size_t i = 0; i < sol->size(); ++i) y.set_at(i, {(*sol)[i]});
    return y;
}

/// H^p with explicit class coordinates and representatives.
class CohomologyGroup {
public:
    CohomologyGroup(ComplexPtr k, const FgAbelianGroup& g, int p)
        : complex_(std::move(k)), degree_(p),
          pres_(complex_->coboundary_matrix(p - 1), complex_->coboundary_matrix(p), g)
    {
    }

    const FgAbelianGroup& group() const noexcept { return pres_.group(); }
    int degree() const noexcept { return degree_; }

    std::vector<Integer> coordinates(const Cochain& x) const
    {
        if (x.degree() != degree_)
            throw Error(ErrorCode::DegreeMismatch, "class coordinates requested in the wrong degree");
        if (!(x.coefficients() == Coefficients(pres_.coefficients())))
            throw Error(ErrorCode::GroupMismatch, "cochain coefficients differ from the cohomology coefficients");
        std::vector<std::vector<Integer>> comps;
        for (std::size_t k = 0; k < x.coefficients().rank(); ++k) comps.push_back(x.component(k));
        return pres_.coordinates(comps);
    }

    Cochain representative(const std::vector<Integer>& coords) const
    {
        auto comps = pres_.representative(coords);
        Cochain x(complex_, degree_, pres_.coefficients());
        for (std::size_t i = 0; i < x.size(); ++i) {
            Cochain::Value v(comps.size());
            for (std::size_t k = 0; k < comps.size(); ++k) v[k] = Rational(comps[k][i]);
            x.set_at(i, std::move(v));
        }
        return x;
    }

    /// Generators in order of the invariant factors.
    std::vector<Cochain> generators() const
    {
        std::vector<Cochain> out;
        for (std::size_t r = 0; r < group().rank(); ++r) {
            std::vector<Integer> e(group().rank(), Integer(0));
            e[r] = 1;
            out.push_back(representative(e));
        }
        return out;
    }

private:
    ComplexPtr complex_;
    int degree_;
    CohomologyPresentation pres_;
};

inline FgAbelianGroup cech_cohomology(const Nerve& n, const FgAbelianGroup& g, int p)
{
    return simplicial_cohomology(n.complex(), g, p);
}

/// Alexander–Whitney: (a⌣b)_{i_0..i_{p+q}} = a_{i_0..i_p} · b_{i_p..i_{p+q}}.
/// Products are defined within Z, Z/m and Q, and for Z acting on anything.
inline Cochain cup(const Cochain& a, const Cochain& b)
{
    if (a.complex_ptr() != b.complex_ptr() && !(a.complex() == b.complex()))
        throw Error(ErrorCode::InvalidComplex, "cup of cochains on different complexes");
    const Coefficients& ca = a.coefficients();
    const Coefficients& cb = b.coefficients();
    Coefficients out;
    if (ca.is_integers()) {
        out = cb;
    } else if (cb.is_integers()) {
        out = ca;
    } else if (ca == cb && (ca.is_rational() || (ca.is_group() && ca.rank() == 1))) {
        out = ca;
    } else {
        throw Error(ErrorCode::NoProduct, "no product " + ca.to_string() + " x " + cb.to_string());
    }
    const int p = a.degree(), q = b.degree();
    Cochain r(a.complex_ptr(), p + q, out);
    const auto& cells = a.complex().simplices(p + q);
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const Simplex& s = cells[c];
        Simplex front(s.begin(), s.begin() + p + 1), back(s.begin() + p, s.end());
        auto va = a.value(front), vb = b.value(back);
        Cochain::Value v;
        if (ca.is_integers())
            for (const auto& x : vb) v.push_back(va[0] * x);
        else if (cb.is_integers())
            for (const auto& x : va) v.push_back(x * vb[0]);
        else
            v.push_back(va[0] * vb[0]);
        r.set_at(c, std::move(v));
    }
    return r;
}

/// ⟨x, z⟩ = Σ_σ z(σ)·x(σ) for a single-component cochain.
inline Rational pair(const Cochain& x, const Chain& z)
{
    if (x.degree() != z.degree())
        throw Error(ErrorCode::DegreeMismatch, "pairing a " + std::to_string(x.degree()) + "-cochain with a " +
                                                   std::to_string(z.degree()) + "-chain");
    if (x.coefficients().rank() != 1)
        throw Error(ErrorCode::GroupMismatch, "pairing needs single-component coefficients");
    Rational s = 0;
    const auto& cells = z.complex().simplices(z.degree());
    for (std::size_t i = 0; i < cells.size(); ++i)
        if (z[i] != 0) s += Rational(z[i]) * x.value(cells[i])[0];
    return s;
}

/// Pullback along a vertex map φ from `target` to x's complex:
/// (φ^*x)(σ) = x(φ(σ)) with the alternating rule, zero on degenerate images.
inline Cochain pullback(const Cochain& x, ComplexPtr target, const std::vector<int>& vertex_map)
{
    Cochain r(target, x.degree(), x.coefficients());
    const auto& cells = target->simplices(x.degree());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        Simplex img;
        for (int v : cells[c]) img.push_back(vertex_map.at(static_cast<std::size_t>(v)));
        r.set_at(c, x.value(img));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Goodness of a cover
// ---------------------------------------------------------------------------

struct GoodnessFailure {
    Simplex indices;
    int degree;           ///< degree with non-vanishing reduced cohomology
    std::string cohomology;
};

struct GoodnessReport {
    std::vector<GoodnessFailure> failures;
    bool ok() const noexcept { return failures.empty(); }
};

/// True when K has the integral cohomology of a point up to max_degree.
inline std::optional<GoodnessFailure> acyclicity_failure(const SimplicialComplex& k, int max_degree)
{
    const auto z = FgAbelianGroup::integers();
    auto h0 = simplicial_cohomology(k, z, 0);
    if (!(h0 == z)) return GoodnessFailure{{}, 0, h0.to_string()};
    for (int d = 1; d <= max_degree; ++d) {
        auto h = simplicial_cohomology(k, z, d);
        if (!h.is_trivial()) return GoodnessFailure{{}, d, h.to_string()};
    }
    return std::nullopt;
}

/// Checks every non-empty intersection for acyclicity up to max_degree
/// (default: dimension of the base + 1).
inline GoodnessReport verify_good_cover(const Cover& c, const Nerve& n, int max_degree = -1)
{
    if (max_degree < 0) max_degree = c.base().dimension() + 1;
    GoodnessReport report;
    for (int p = 0; p <= n.dimension(); ++p)
        for (std::size_t i = 0; i < n.simplices(p).size(); ++i)
            if (auto f = acyclicity_failure(n.intersection(p, i), max_degree)) {
                f->indices = n.simplices(p)[i];
                report.failures.push_back(std::move(*f));
            }
    return report;
}

} // namespace torsor
