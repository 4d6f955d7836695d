#pragma once

// Exact integer linear algebra (Smith normal form and the solvers built on
// it), finitely generated abelian groups, the circle group Q/Z, and
// homomorphisms / short exact sequences between fg abelian groups.

#include "torsor/core.hpp"

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace torsor {

// ===========================================================================
// Dense integer matrices
// ===========================================================================

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    IntMatrix(std::initializer_list<std::initializer_list<long long>> rows)
    {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        a_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_)
                throw std::invalid_argument("IntMatrix: ragged initializer");
            for (long long v : r)
                a_.emplace_back(v);
        }
    }

    static IntMatrix identity(std::size_t n)
    {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Integer& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    bool is_zero() const
    {
        return std::all_of(a_.begin(), a_.end(), [](const Integer& x) { return x == 0; });
    }

    IntMatrix transpose() const
    {
        IntMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    /// Horizontal concatenation [this | other].
    IntMatrix hconcat(const IntMatrix& other) const
    {
        if (other.rows_ != rows_)
            throw std::invalid_argument("IntMatrix::hconcat: row mismatch");
        IntMatrix r(rows_, cols_ + other.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j)
                r(i, j) = (*this)(i, j);
            for (std::size_t j = 0; j < other.cols_; ++j)
                r(i, cols_ + j) = other(i, j);
        }
        return r;
    }

    void swap_rows(std::size_t i, std::size_t k)
    {
        if (i == k) return;
        for (std::size_t j = 0; j < cols_; ++j)
            std::swap((*this)(i, j), (*this)(k, j));
    }
    void swap_cols(std::size_t j, std::size_t k)
    {
        if (j == k) return;
        for (std::size_t i = 0; i < rows_; ++i)
            std::swap((*this)(i, j), (*this)(i, k));
    }
    /// row_i += q * row_k
    void add_row(std::size_t i, std::size_t k, const Integer& q)
    {
        if (q == 0) return;
        for (std::size_t j = 0; j < cols_; ++j)
            if ((*this)(k, j) != 0)
                (*this)(i, j) += q * (*this)(k, j);
    }
    /// col_j += q * col_k
    void add_col(std::size_t j, std::size_t k, const Integer& q)
    {
        if (q == 0) return;
        for (std::size_t i = 0; i < rows_; ++i)
            if ((*this)(i, k) != 0)
                (*this)(i, j) += q * (*this)(i, k);
    }
    void negate_row(std::size_t i)
    {
        for (std::size_t j = 0; j < cols_; ++j)
            (*this)(i, j) = -(*this)(i, j);
    }
    void negate_col(std::size_t j)
    {
        for (std::size_t i = 0; i < rows_; ++i)
            (*this)(i, j) = -(*this)(i, j);
    }

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Integer> a_;
};

inline IntMatrix operator*(const IntMatrix& a, const IntMatrix& b)
{
    if (a.cols() != b.rows())
        throw std::invalid_argument("IntMatrix: dimension mismatch in product");
    IntMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Integer& aik = a(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                if (b(k, j) != 0)
                    c(i, j) += aik * b(k, j);
        }
    return c;
}

template <typename T>
std::vector<T> multiply(const IntMatrix& m, const std::vector<T>& x)
{
    if (m.cols() != x.size())
        throw std::invalid_argument("IntMatrix: dimension mismatch in matrix-vector product");
    std::vector<T> y(m.rows(), T(0));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0 && x[j] != 0)
                y[i] += T(m(i, j)) * x[j];
    return y;
}

/// Determinant by fraction-free (Bareiss) elimination.
inline Integer determinant(IntMatrix m)
{
    const std::size_t n = m.rows();
    if (n != m.cols())
        throw std::invalid_argument("determinant: matrix not square");
    if (n == 0)
        return 1;
    Integer sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && m(p, k) == 0) ++p;
            if (p == n) return 0;
            m.swap_rows(k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

// ===========================================================================
// Smith normal form
// ===========================================================================

/// U * M * V = S with U, V unimodular and S diagonal, diag(S) a divisibility
/// chain of non-negative entries with zeros last. The inverses of U and V are
/// tracked alongside so that callers can move between bases without
/// re-inverting.
struct SmithForm {
    IntMatrix U, S, V;
    IntMatrix U_inv, V_inv;
    std::size_t rank = 0;

    const Integer& diagonal(std::size_t i) const { return S(i, i); }
};

/// Pivot rule: smallest absolute nonzero entry of the active block, ties
/// broken by row-major position.
inline SmithForm smith_normal_form(const IntMatrix& m)
{
    SmithForm f;
    f.S = m;
    f.U = IntMatrix::identity(m.rows());
    f.U_inv = IntMatrix::identity(m.rows());
    f.V = IntMatrix::identity(m.cols());
    f.V_inv = IntMatrix::identity(m.cols());
    IntMatrix& S = f.S;

    auto row_swap = [&](std::size_t i, std::size_t k) {
        S.swap_rows(i, k);
        f.U.swap_rows(i, k);
        f.U_inv.swap_cols(i, k);
    };
    auto col_swap = [&](std::size_t j, std::size_t k) {
        S.swap_cols(j, k);
        f.V.swap_cols(j, k);
        f.V_inv.swap_rows(j, k);
    };
    // row_i += q row_k
    auto row_add = [&](std::size_t i, std::size_t k, const Integer& q) {
        S.add_row(i, k, q);
        f.U.add_row(i, k, q);
        f.U_inv.add_col(k, i, -q);
    };
    // col_j += q col_k
    auto col_add = [&](std::size_t j, std::size_t k, const Integer& q) {
        S.add_col(j, k, q);
        f.V.add_col(j, k, q);
        f.V_inv.add_row(k, j, -q);
    };

    const std::size_t rows = m.rows(), cols = m.cols();
    std::size_t t = 0;
    for (; t < std::min(rows, cols); ++t) {
        for (;;) {
            // locate pivot
            bool found = false;
            std::size_t pi = 0, pj = 0;
            Integer best;
            for (std::size_t i = t; i < rows; ++i)
                for (std::size_t j = t; j < cols; ++j) {
                    const Integer& v = S(i, j);
                    if (v == 0) continue;
                    Integer av = v < 0 ? Integer(-v) : v;
                    if (!found || av < best) {
                        found = true;
                        best = av;
                        pi = i;
                        pj = j;
                    }
                }
            if (!found) {
                f.rank = t;
                goto done;
            }
            row_swap(t, pi);
            col_swap(t, pj);

            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (S(i, t) == 0) continue;
                Integer q = S(i, t) / S(t, t);
                row_add(i, t, -q);
                if (S(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (S(t, j) == 0) continue;
                Integer q = S(t, j) / S(t, t);
                col_add(j, t, -q);
                if (S(t, j) != 0) clean = false;
            }
            if (!clean)
                continue;

            // divisibility of the remaining block by the pivot
            bool divides = true;
            for (std::size_t i = t + 1; i < rows && divides; ++i)
                for (std::size_t j = t + 1; j < cols; ++j)
                    if (S(i, j) % S(t, t) != 0) {
                        row_add(t, i, 1);
                        divides = false;
                        break;
                    }
            if (divides)
                break;
        }
        if (S(t, t) < 0) {
            S.negate_row(t);
            f.U.negate_row(t);
            f.U_inv.negate_col(t);
        }
    }
    f.rank = t;
done:
    return f;
}

// ===========================================================================
// Linear solvers
// ===========================================================================

/// Column order used by a solver. The canonical order is the identity; a
/// nonzero seed shuffles unknowns before factorization, which selects a
/// different (equally valid) particular solution.
struct SolverOptions {
    std::uint64_t shuffle_seed = 0;
};

namespace detail {

inline std::vector<std::size_t> column_order(std::size_t n, std::uint64_t seed)
{
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (seed != 0) {
        std::mt19937_64 rng(seed);
        std::shuffle(order.begin(), order.end(), rng);
    }
    return order;
}

inline IntMatrix permute_columns(const IntMatrix& m, const std::vector<std::size_t>& order)
{
    IntMatrix p(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            p(i, j) = m(i, order[j]);
    return p;
}

} // namespace detail

/// Factorized matrix reusable across right-hand sides.
class LinearSolver {
public:
    explicit LinearSolver(const IntMatrix& m, SolverOptions opts = {})
        : rows_(m.rows()), cols_(m.cols()), order_(detail::column_order(m.cols(), opts.shuffle_seed)),
          snf_(smith_normal_form(detail::permute_columns(m, order_)))
    {
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    const SmithForm& smith() const noexcept { return snf_; }

    /// Solve M x = b over Z. Free coordinates of the diagonal system are 0.
    std::optional<std::vector<Integer>> solve_integer(const std::vector<Integer>& b) const
    {
        check_rhs(b.size());
        std::vector<Integer> c = multiply(snf_.U, b);
        std::vector<Integer> z(cols_, Integer(0));
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i < snf_.rank) {
                if (c[i] % snf_.diagonal(i) != 0)
                    return std::nullopt;
                z[i] = c[i] / snf_.diagonal(i);
            } else if (c[i] != 0) {
                return std::nullopt;
            }
        }
        return unpermute(multiply(snf_.V, z));
    }

    /// Solve M x = b over Q.
    std::optional<std::vector<Rational>> solve_rational(const std::vector<Rational>& b) const
    {
        check_rhs(b.size());
        std::vector<Rational> c = multiply(snf_.U, b);
        std::vector<Rational> z(cols_, Rational(0));
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i < snf_.rank)
                z[i] = c[i] / Rational(snf_.diagonal(i));
            else if (c[i] != 0)
                return std::nullopt;
        }
        return unpermute(multiply(snf_.V, z));
    }

    /// Solve M x = b in (Q/Z)^n. Inputs and outputs are representatives in [0,1).
    std::optional<std::vector<Rational>> solve_circle(const std::vector<Rational>& b) const
    {
        check_rhs(b.size());
        std::vector<Rational> c = multiply(snf_.U, b);
        std::vector<Rational> z(cols_, Rational(0));
        for (std::size_t i = 0; i < rows_; ++i) {
            Rational ci = frac(c[i]);
            if (i < snf_.rank)
                z[i] = ci / Rational(snf_.diagonal(i));
            else if (ci != 0)
                return std::nullopt;
        }
        auto x = unpermute(multiply(snf_.V, z));
        for (auto& v : x)
            v = frac(v);
        return x;
    }

private:
    void check_rhs(std::size_t n) const
    {
        if (n != rows_)
            throw std::invalid_argument("LinearSolver: right-hand side has wrong length");
    }

    template <typename T>
    std::vector<T> unpermute(const std::vector<T>& y) const
    {
        std::vector<T> x(cols_);
        for (std::size_t j = 0; j < cols_; ++j)
            x[order_[j]] = y[j];
        return x;
    }

    std::size_t rows_, cols_;
    std::vector<std::size_t> order_;
    SmithForm snf_;
};

/// Solve M x ≡ b with row i taken modulo target_moduli[i] (0 = exact over Z).
/// Returns nullopt when infeasible. When `unknown_moduli` is non-empty, x_j
/// is reduced to [0, unknown_moduli[j]) for positive entries.
inline std::optional<std::vector<Integer>> solve_linear(const IntMatrix& m, const std::vector<Integer>& b,
                                                        const std::vector<Integer>& target_moduli,
                                                        const std::vector<Integer>& unknown_moduli = {},
                                                        SolverOptions opts = {})
{
    if (b.size() != m.rows() || target_moduli.size() != m.rows())
        throw std::invalid_argument("solve_linear: dimension mismatch");
    if (!unknown_moduli.empty() && unknown_moduli.size() != m.cols())
        throw std::invalid_argument("solve_linear: unknown moduli length mismatch");
    std::size_t extra = 0;
    for (const auto& q : target_moduli)
        if (q != 0) ++extra;
    IntMatrix aug(m.rows(), extra);
    std::size_t col = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        if (target_moduli[i] != 0)
            aug(i, col++) = target_moduli[i];
    LinearSolver solver(m.hconcat(aug), opts);
    auto y = solver.solve_integer(b);
    if (!y)
        return std::nullopt;
    std::vector<Integer> x(y->begin(), y->begin() + static_cast<std::ptrdiff_t>(m.cols()));
    if (!unknown_moduli.empty())
        for (std::size_t j = 0; j < x.size(); ++j)
            x[j] = mod_floor(x[j], unknown_moduli[j]);
    return x;
}

/// Generators of the integer kernel {x : M x = 0}.
inline std::vector<std::vector<Integer>> integer_kernel(const IntMatrix& m)
{
    SmithForm f = smith_normal_form(m);
    std::vector<std::vector<Integer>> gens;
    for (std::size_t j = f.rank; j < m.cols(); ++j) {
        std::vector<Integer> v(m.cols());
        for (std::size_t i = 0; i < m.cols(); ++i)
            v[i] = f.V(i, j);
        gens.push_back(std::move(v));
    }
    return gens;
}

// ===========================================================================
// Finitely generated abelian groups
// ===========================================================================

/// Z^r ⊕ ⊕ Z/d_i in invariant-factor form: nonzero moduli first, each
/// dividing the next, then zeros for the free part. Moduli of 1 never appear.
class FgAbelianGroup {
public:
    FgAbelianGroup() = default;

    explicit FgAbelianGroup(std::vector<Integer> moduli) : moduli_(std::move(moduli))
    {
        bool seen_free = false;
        for (std::size_t k = 0; k < moduli_.size(); ++k) {
            const Integer& m = moduli_[k];
            if (m < 0 || m == 1)
                throw Error(ErrorCode::InvalidGroup, "moduli must be 0 or at least 2");
            if (m == 0) {
                seen_free = true;
                continue;
            }
            if (seen_free)
                throw Error(ErrorCode::InvalidGroup, "free factors must come last");
            if (k > 0 && moduli_[k - 1] != 0 && m % moduli_[k - 1] != 0)
                throw Error(ErrorCode::InvalidGroup, "moduli must form a divisibility chain");
        }
    }

    static FgAbelianGroup integers() { return FgAbelianGroup({Integer(0)}); }
    static FgAbelianGroup cyclic(long long n)
    {
        if (n == 1)
            return FgAbelianGroup{};
        return FgAbelianGroup({Integer(n)});
    }
    static FgAbelianGroup trivial() { return FgAbelianGroup{}; }

    const std::vector<Integer>& moduli() const noexcept { return moduli_; }
    std::size_t rank() const noexcept { return moduli_.size(); }
    bool is_trivial() const noexcept { return moduli_.empty(); }

    bool is_finite() const
    {
        return std::none_of(moduli_.begin(), moduli_.end(), [](const Integer& m) { return m == 0; });
    }
    std::size_t free_rank() const
    {
        return static_cast<std::size_t>(std::count(moduli_.begin(), moduli_.end(), Integer(0)));
    }

    /// Group order; 0 when infinite.
    Integer order() const
    {
        Integer o = 1;
        for (const auto& m : moduli_) {
            if (m == 0) return 0;
            o *= m;
        }
        return o;
    }

    std::vector<Integer> reduce(std::vector<Integer> x) const
    {
        check(x);
        for (std::size_t k = 0; k < x.size(); ++k)
            x[k] = mod_floor(x[k], moduli_[k]);
        return x;
    }
    std::vector<Integer> zero() const { return std::vector<Integer>(rank(), Integer(0)); }
    std::vector<Integer> add(const std::vector<Integer>& a, const std::vector<Integer>& b) const
    {
        check(a);
        check(b);
        std::vector<Integer> r(rank());
        for (std::size_t k = 0; k < rank(); ++k)
            r[k] = mod_floor(a[k] + b[k], moduli_[k]);
        return r;
    }
    std::vector<Integer> negate(const std::vector<Integer>& a) const
    {
        check(a);
        std::vector<Integer> r(rank());
        for (std::size_t k = 0; k < rank(); ++k)
            r[k] = mod_floor(-a[k], moduli_[k]);
        return r;
    }
    bool is_zero(const std::vector<Integer>& a) const
    {
        auto r = reduce(a);
        return std::all_of(r.begin(), r.end(), [](const Integer& v) { return v == 0; });
    }

    /// Elements in mixed-radix order (last coordinate fastest). Finite groups only.
    std::vector<std::vector<Integer>> elements() const
    {
        if (!is_finite())
            throw Error(ErrorCode::InvalidGroup, "cannot enumerate an infinite group");
        std::vector<std::vector<Integer>> out;
        std::vector<Integer> cur(rank(), Integer(0));
        for (;;) {
            out.push_back(cur);
            std::size_t k = rank();
            while (k > 0) {
                --k;
                cur[k] += 1;
                if (cur[k] < moduli_[k])
                    break;
                cur[k] = 0;
                if (k == 0) return out;
            }
            if (rank() == 0) return out;
        }
    }

    /// Position of a reduced element in elements().
    std::size_t index_of(const std::vector<Integer>& x) const
    {
        auto r = reduce(x);
        Integer idx = 0;
        for (std::size_t k = 0; k < rank(); ++k)
            idx = idx * moduli_[k] + r[k];
        return static_cast<std::size_t>(idx);
    }

    std::string to_string() const
    {
        if (moduli_.empty())
            return "0";
        std::ostringstream os;
        bool first = true;
        std::size_t free = 0;
        for (const auto& m : moduli_) {
            if (m == 0) {
                ++free;
                continue;
            }
            os << (first ? "" : " + ") << "Z/" << m;
            first = false;
        }
        if (free > 0) {
            os << (first ? "" : " + ") << "Z";
            if (free > 1) os << '^' << free;
        }
        return os.str();
    }

    friend bool operator==(const FgAbelianGroup&, const FgAbelianGroup&) = default;

private:
    void check(const std::vector<Integer>& x) const
    {
        if (x.size() != rank())
            throw Error(ErrorCode::InvalidGroup, "element has " + std::to_string(x.size()) +
                                                     " coordinates, group has rank " + std::to_string(rank()));
    }

    std::vector<Integer> moduli_;
};

/// Invariant-factor form of ⊕ Z/a_k (a_k = 0 means Z), with the coordinate
/// change from the raw cyclic decomposition to canonical coordinates.
struct Canonicalization {
    FgAbelianGroup group;
    std::vector<Integer> raw_moduli;
    IntMatrix to_canonical;   ///< canonical = to_canonical * raw (mod group moduli)
    IntMatrix from_canonical; ///< raw = from_canonical * canonical (mod raw moduli)

    std::vector<Integer> canonical_coords(const std::vector<Integer>& raw) const
    {
        return group.reduce(multiply(to_canonical, raw));
    }
    std::vector<Integer> raw_coords(const std::vector<Integer>& canonical) const
    {
        auto r = multiply(from_canonical, canonical);
        for (std::size_t k = 0; k < r.size(); ++k)
            r[k] = mod_floor(r[k], raw_moduli[k]);
        return r;
    }
};

inline Canonicalization canonicalize(const std::vector<Integer>& raw_moduli)
{
    const std::size_t n = raw_moduli.size();
    IntMatrix d(n, n);
    for (std::size_t k = 0; k < n; ++k)
        d(k, k) = raw_moduli[k];
    SmithForm f = smith_normal_form(d);
    // Z^n / D Z^n  ≅  Z^n / S Z^n via x -> U x
    std::vector<std::size_t> kept;
    std::vector<Integer> moduli;
    for (std::size_t k = 0; k < n; ++k) {
        if (f.S(k, k) != 1) {
            kept.push_back(k);
            moduli.push_back(f.S(k, k));
        }
    }
    Canonicalization c;
    c.group = FgAbelianGroup(moduli);
    c.raw_moduli = raw_moduli;
    c.to_canonical = IntMatrix(kept.size(), n);
    c.from_canonical = IntMatrix(n, kept.size());
    for (std::size_t r = 0; r < kept.size(); ++r)
        for (std::size_t j = 0; j < n; ++j) {
            c.to_canonical(r, j) = f.U(kept[r], j);
            c.from_canonical(j, r) = f.U_inv(j, kept[r]);
        }
    return c;
}

/// Z^n / R Z^m for a relation matrix R (relations are columns), with the
/// coordinate change to invariant-factor form. `from_canonical` yields an
/// integer lift in Z^n; nothing is reduced on that side.
struct Presentation {
    FgAbelianGroup group;
    IntMatrix to_canonical;
    IntMatrix from_canonical;

    std::vector<Integer> canonical_coords(const std::vector<Integer>& x) const
    {
        return group.reduce(multiply(to_canonical, x));
    }
    std::vector<Integer> lift(const std::vector<Integer>& canonical) const
    {
        return multiply(from_canonical, canonical);
    }
};

inline Presentation present(const IntMatrix& relations)
{
    const std::size_t n = relations.rows();
    SmithForm f = smith_normal_form(relations);
    std::vector<std::size_t> kept;
    std::vector<Integer> moduli;
    for (std::size_t k = 0; k < n; ++k) {
        Integer s = k < f.rank ? f.diagonal(k) : Integer(0);
        if (s != 1) {
            kept.push_back(k);
            moduli.push_back(s);
        }
    }
    Presentation p;
    p.group = FgAbelianGroup(moduli);
    p.to_canonical = IntMatrix(kept.size(), n);
    p.from_canonical = IntMatrix(n, kept.size());
    for (std::size_t r = 0; r < kept.size(); ++r)
        for (std::size_t j = 0; j < n; ++j) {
            p.to_canonical(r, j) = f.U(kept[r], j);
            p.from_canonical(j, r) = f.U_inv(j, kept[r]);
        }
    return p;
}

/// The circle group Q/Z. Elements are rationals reduced into [0,1).
struct CircleGroup {
    static Rational reduce(const Rational& q) { return frac(q); }
    static Rational add(const Rational& a, const Rational& b) { return frac(a + b); }
    static Rational negate(const Rational& a) { return frac(-a); }
    friend bool operator==(const CircleGroup&, const CircleGroup&) = default;
};

// ===========================================================================
// Homomorphisms and short exact sequences
// ===========================================================================

class Homomorphism {
public:
    Homomorphism() = default;
    Homomorphism(FgAbelianGroup domain, FgAbelianGroup codomain, IntMatrix matrix)
        : domain_(std::move(domain)), codomain_(std::move(codomain)), matrix_(std::move(matrix))
    {
        if (matrix_.rows() != codomain_.rank() || matrix_.cols() != domain_.rank())
            throw Error(ErrorCode::InvalidHomomorphism, "matrix shape does not match the groups");
        for (std::size_t j = 0; j < domain_.rank(); ++j) {
            const Integer& m = domain_.moduli()[j];
            if (m == 0) continue;
            std::vector<Integer> col(codomain_.rank());
            for (std::size_t i = 0; i < codomain_.rank(); ++i)
                col[i] = m * matrix_(i, j);
            if (!codomain_.is_zero(col))
                throw Error(ErrorCode::InvalidHomomorphism,
                            "generator " + std::to_string(j) + " of order " + m.str() +
                                " is not sent to an element annihilated by its order");
        }
    }

    const FgAbelianGroup& domain() const noexcept { return domain_; }
    const FgAbelianGroup& codomain() const noexcept { return codomain_; }
    const IntMatrix& matrix() const noexcept { return matrix_; }

    std::vector<Integer> operator()(const std::vector<Integer>& x) const
    {
        return codomain_.reduce(multiply(matrix_, domain_.reduce(x)));
    }

    /// Generators (domain coordinates, reduced) of the kernel.
    std::vector<std::vector<Integer>> kernel_generators() const
    {
        IntMatrix rel(codomain_.rank(), codomain_.rank());
        for (std::size_t i = 0; i < codomain_.rank(); ++i)
            rel(i, i) = codomain_.moduli()[i];
        auto gens = integer_kernel(matrix_.hconcat(rel));
        std::vector<std::vector<Integer>> out;
        for (const auto& g : gens) {
            std::vector<Integer> x(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(domain_.rank()));
            x = domain_.reduce(x);
            if (!domain_.is_zero(x))
                out.push_back(std::move(x));
        }
        return out;
    }

    bool is_injective() const { return kernel_generators().empty(); }

    bool is_surjective() const
    {
        IntMatrix rel(codomain_.rank(), codomain_.rank());
        for (std::size_t i = 0; i < codomain_.rank(); ++i)
            rel(i, i) = codomain_.moduli()[i];
        SmithForm f = smith_normal_form(matrix_.hconcat(rel));
        if (f.rank != codomain_.rank())
            return false;
        for (std::size_t i = 0; i < f.rank; ++i)
            if (f.diagonal(i) != 1)
                return false;
        return true;
    }

    /// Some x with φ(x) = y (canonical minimal representative), or nullopt.
    std::optional<std::vector<Integer>> preimage(const std::vector<Integer>& y) const
    {
        return solve_linear(matrix_, codomain_.reduce(y), codomain_.moduli(), domain_.moduli());
    }

private:
    FgAbelianGroup domain_, codomain_;
    IntMatrix matrix_;
};

/// 0 → A → B → C → 0, validated on construction.
class ShortExactSequence {
public:
    ShortExactSequence() = default;
    ShortExactSequence(Homomorphism inject, Homomorphism project)
        : inject_(std::move(inject)), project_(std::move(project))
    {
        if (!(inject_.codomain() == project_.domain()))
            throw Error(ErrorCode::NotExact, "middle groups differ");
        if (!inject_.is_injective())
            throw Error(ErrorCode::NotExact, "inject is not injective");
        if (!project_.is_surjective())
            throw Error(ErrorCode::NotExact, "project is not surjective");
        for (std::size_t j = 0; j < A().rank(); ++j) {
            std::vector<Integer> e(A().rank(), Integer(0));
            e[j] = 1;
            if (!C().is_zero(project_(inject_(e))))
                throw Error(ErrorCode::NotExact, "project ∘ inject is nonzero");
        }
        for (const auto& k : project_.kernel_generators())
            if (!inject_.preimage(k))
                throw Error(ErrorCode::NotExact, "kernel of project is larger than the image of inject");
    }

    const FgAbelianGroup& A() const noexcept { return inject_.domain(); }
    const FgAbelianGroup& B() const noexcept { return inject_.codomain(); }
    const FgAbelianGroup& C() const noexcept { return project_.codomain(); }
    const Homomorphism& inject() const noexcept { return inject_; }
    const Homomorphism& project() const noexcept { return project_; }

    /// Canonical set-theoretic section C → B (minimal representatives).
    std::vector<Integer> section(const std::vector<Integer>& c) const
    {
        auto b = project_.preimage(c);
        if (!b)
            throw Error(ErrorCode::NotExact, "project has no preimage (not surjective)");
        return *b;
    }

    /// The unique a with inject(a) = b, for b in ker(project).
    std::vector<Integer> retract(const std::vector<Integer>& b) const
    {
        auto a = inject_.preimage(b);
        if (!a)
            throw Error(ErrorCode::NotExact, "element is not in the image of inject");
        return *a;
    }

private:
    Homomorphism inject_, project_;
};

// ===========================================================================
// Cohomology of a cochain complex of free modules with constant coefficients
// ===========================================================================

/// H = ker(d_next) / im(d_prev) for the cochain complex
///   Z^{n_prev} --d_prev--> Z^n --d_next--> Z^{n_next}
/// tensored with a fg abelian coefficient group G. Besides the group in
/// invariant-factor form, exposes the coordinate map on cocycles and a
/// representative cocycle for any class.
///
/// Cochain values are stored component-major: component k of G gives the
/// vector x^{(k)} ∈ (Z/m_k)^n.
class CohomologyPresentation {
public:
    CohomologyPresentation(const IntMatrix& d_prev, const IntMatrix& d_next, FgAbelianGroup coefficients)
        : coefficients_(std::move(coefficients)), n_(d_prev.rows())
    {
        if (d_next.cols() != n_)
            throw std::invalid_argument("cohomology_of: incompatible differentials");
        if (!(d_next * d_prev).is_zero())
            throw Error(ErrorCode::NotAComplex, "d_next ∘ d_prev ≠ 0");

        next_ = smith_normal_form(d_next);
        const std::size_t rho = next_.rank;
        kernel_rank_ = n_ - rho;
        // P = V_next with kernel columns first; P^{-1} = rows of V_next^{-1} reordered.
        p_inv_ = IntMatrix(n_, n_);
        p_ = IntMatrix(n_, n_);
        for (std::size_t r = 0; r < n_; ++r) {
            std::size_t src = r < kernel_rank_ ? rho + r : r - kernel_rank_;
            for (std::size_t c = 0; c < n_; ++c) {
                p_inv_(r, c) = next_.V_inv(src, c);
                p_(c, r) = next_.V(c, src);
            }
        }
        IntMatrix a_prime = p_inv_ * d_prev;
        IntMatrix top(kernel_rank_, d_prev.cols());
        for (std::size_t r = 0; r < n_; ++r)
            for (std::size_t c = 0; c < d_prev.cols(); ++c) {
                if (r < kernel_rank_)
                    top(r, c) = a_prime(r, c);
                else if (a_prime(r, c) != 0)
                    throw Error(ErrorCode::NotAComplex, "image of d_prev leaves ker d_next");
            }
        prev_ = smith_normal_form(top);

        // raw cyclic factors per coefficient component
        for (std::size_t k = 0; k < coefficients_.rank(); ++k) {
            const Integer& m = coefficients_.moduli()[k];
            for (std::size_t i = 0; i < kernel_rank_; ++i) {
                Integer q = i < prev_.rank ? gcd(prev_.diagonal(i), m) : m;
                if (q == 1) continue;
                slots_.push_back({k, false, i, q, 1});
                raw_.push_back(q);
            }
            if (m == 0) continue;
            for (std::size_t j = 0; j < rho; ++j) {
                Integer g = gcd(next_.diagonal(j), m);
                if (g == 1) continue;
                slots_.push_back({k, true, j, g, m / g});
                raw_.push_back(g);
            }
        }
        canon_ = canonicalize(raw_);
    }

    const FgAbelianGroup& group() const noexcept { return canon_.group; }
    const FgAbelianGroup& coefficients() const noexcept { return coefficients_; }
    std::size_t cochain_rank() const noexcept { return n_; }

    /// Invariant-factor coordinates of the class of a cocycle. `x[k]` is the
    /// k-th coefficient component, a vector of length n.
    std::vector<Integer> coordinates(const std::vector<std::vector<Integer>>& x) const
    {
        check_components(x);
        std::vector<std::vector<Integer>> y(coefficients_.rank());
        for (std::size_t k = 0; k < coefficients_.rank(); ++k)
            y[k] = adapted(x[k], coefficients_.moduli()[k]);
        std::vector<Integer> raw(slots_.size());
        for (std::size_t s = 0; s < slots_.size(); ++s) {
            const Slot& sl = slots_[s];
            const Integer& m = coefficients_.moduli()[sl.component];
            if (!sl.torsion) {
                raw[s] = mod_floor(y[sl.component][sl.index], sl.order);
            } else {
                Integer v = mod_floor(y[sl.component][kernel_rank_ + sl.index], m);
                if (v % sl.scale != 0)
                    throw Error(ErrorCode::NotACocycle, "cochain is not a cocycle");
                raw[s] = v / sl.scale;
            }
        }
        return canon_.canonical_coords(raw);
    }

    /// A cocycle representing the class with the given canonical coordinates.
    std::vector<std::vector<Integer>> representative(const std::vector<Integer>& coords) const
    {
        if (coords.size() != group().rank())
            throw std::invalid_argument("representative: wrong number of coordinates");
        std::vector<Integer> raw = canon_.raw_coords(coords);
        std::vector<std::vector<Integer>> y(coefficients_.rank(), std::vector<Integer>(n_, Integer(0)));
        for (std::size_t s = 0; s < slots_.size(); ++s) {
            const Slot& sl = slots_[s];
            if (!sl.torsion)
                y[sl.component][sl.index] = raw[s];
            else
                y[sl.component][kernel_rank_ + sl.index] = raw[s] * sl.scale;
        }
        std::vector<std::vector<Integer>> x(coefficients_.rank());
        for (std::size_t k = 0; k < coefficients_.rank(); ++k) {
            const Integer& m = coefficients_.moduli()[k];
            std::vector<Integer> top(y[k].begin(), y[k].begin() + static_cast<std::ptrdiff_t>(kernel_rank_));
            top = multiply(prev_.U_inv, top);
            std::vector<Integer> v(n_);
            for (std::size_t i = 0; i < n_; ++i)
                v[i] = i < kernel_rank_ ? top[i] : y[k][i];
            x[k] = multiply(p_, v);
            for (auto& e : x[k])
                e = mod_floor(e, m);
        }
        return x;
    }

private:
    struct Slot {
        std::size_t component;
        bool torsion;      ///< Tor(H^{p+1}, Z/m) part
        std::size_t index; ///< row in the adapted basis (offset by kernel rank when torsion)
        Integer order;
        Integer scale;     ///< torsion part: raw coordinate = y / scale
    };

    void check_components(const std::vector<std::vector<Integer>>& x) const
    {
        if (x.size() != coefficients_.rank())
            throw std::invalid_argument("cohomology: wrong number of coefficient components");
        for (const auto& v : x)
            if (v.size() != n_)
                throw std::invalid_argument("cohomology: cochain has wrong length");
    }

    std::vector<Integer> adapted(const std::vector<Integer>& x, const Integer& m) const
    {
        std::vector<Integer> y = multiply(p_inv_, x);
        std::vector<Integer> top(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(kernel_rank_));
        top = multiply(prev_.U, top);
        for (std::size_t i = 0; i < kernel_rank_; ++i)
            y[i] = top[i];
        for (auto& e : y)
            e = mod_floor(e, m);
        return y;
    }

    FgAbelianGroup coefficients_;
    std::size_t n_ = 0, kernel_rank_ = 0;
    SmithForm next_, prev_;
    IntMatrix p_, p_inv_;
    std::vector<Slot> slots_;
    std::vector<Integer> raw_;
    Canonicalization canon_;
};

/// ker(d_next)/im(d_prev) with coefficients G, in invariant-factor form.
inline FgAbelianGroup cohomology_of(const IntMatrix& d_prev, const IntMatrix& d_next, const FgAbelianGroup& g)
{
    return CohomologyPresentation(d_prev, d_next, g).group();
}

} // namespace torsor
