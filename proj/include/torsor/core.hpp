#pragma once

// Exact scalar types and the error type shared by every module.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace torsor {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Simplices and nerve index tuples are strictly increasing vertex lists.
using Simplex = std::vector<int>;

enum class ErrorCode {
    DuplicateVertexInSimplex,
    VertexOutOfRange,
    InvalidComplex,
    InvalidCover,
    NotACycle,
    NotAComplex,
    NotACocycle,
    NoProduct,
    InvalidGroup,
    InvalidHomomorphism,
    NotExact,
    NotNormalized,
    NotACocycle2,
    NotAGroup,
    NotAbelian,
    GroupMismatch,
    InvalidTransitions,
    CoverNotGood,
    CoverNotGoodOnV,
    NoFundamentalCycle,
    DegreeMismatch,
    DefectNotLocallyConstant,
    InvalidPackage,
    ParseError,
};

inline std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::DuplicateVertexInSimplex: return "DuplicateVertexInSimplex";
    case ErrorCode::VertexOutOfRange: return "VertexOutOfRange";
    case ErrorCode::InvalidComplex: return "InvalidComplex";
    case ErrorCode::InvalidCover: return "InvalidCover";
    case ErrorCode::NotACycle: return "NotACycle";
    case ErrorCode::NotAComplex: return "NotAComplex";
    case ErrorCode::NotACocycle: return "NotACocycle";
    case ErrorCode::NoProduct: return "NoProduct";
    case ErrorCode::InvalidGroup: return "InvalidGroup";
    case ErrorCode::InvalidHomomorphism: return "InvalidHomomorphism";
    case ErrorCode::NotExact: return "NotExact";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NotACocycle2: return "NotACocycle2";
    case ErrorCode::NotAGroup: return "NotAGroup";
    case ErrorCode::NotAbelian: return "NotAbelian";
    case ErrorCode::GroupMismatch: return "GroupMismatch";
    case ErrorCode::InvalidTransitions: return "InvalidTransitions";
    case ErrorCode::CoverNotGood: return "CoverNotGood";
    case ErrorCode::CoverNotGoodOnV: return "CoverNotGoodOnV";
    case ErrorCode::NoFundamentalCycle: return "NoFundamentalCycle";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::DefectNotLocallyConstant: return "DefectNotLocallyConstant";
    case ErrorCode::InvalidPackage: return "InvalidPackage";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

/// Domain error: carries a machine-readable code plus a message naming the
/// offending location (simplex, triple, nerve index, ...).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline std::string format_tuple(const std::vector<int>& t)
{
    std::ostringstream os;
    os << '(';
    for (std::size_t k = 0; k < t.size(); ++k)
        os << (k ? "," : "") << t[k];
    os << ')';
    return os.str();
}

// --- integer helpers -------------------------------------------------------

/// Non-negative residue of a modulo m; m == 0 means no reduction.
inline Integer mod_floor(const Integer& a, const Integer& m)
{
    if (m == 0)
        return a;
    Integer r = a % m;
    if (r < 0)
        r += (m < 0 ? -m : m);
    return r;
}

inline Integer gcd(Integer a, Integer b)
{
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        Integer t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline Integer lcm(const Integer& a, const Integer& b)
{
    if (a == 0 || b == 0)
        return 0;
    Integer g = gcd(a, b);
    Integer r = a / g * b;
    return r < 0 ? Integer(-r) : r;
}

/// Extended Euclid: returns g = gcd(a,b) >= 0 with s*a + t*b = g.
inline Integer extended_gcd(const Integer& a, const Integer& b, Integer& s, Integer& t)
{
    Integer old_r = a, r = b, old_s = 1, cur_s = 0, old_t = 0, cur_t = 1;
    while (r != 0) {
        Integer q = old_r / r;
        Integer tmp = old_r - q * r; old_r = r; r = tmp;
        tmp = old_s - q * cur_s; old_s = cur_s; cur_s = tmp;
        tmp = old_t - q * cur_t; old_t = cur_t; cur_t = tmp;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    s = old_s;
    t = old_t;
    return old_r;
}

inline Integer floor_div(const Rational& q)
{
    Integer n = boost::multiprecision::numerator(q);
    Integer d = boost::multiprecision::denominator(q);
    Integer f = n / d;
    if (n % d != 0 && n < 0)
        f -= 1;
    return f;
}

/// Representative of q modulo 1 in [0,1).
inline Rational frac(const Rational& q)
{
    return q - Rational(floor_div(q));
}

inline bool is_integral(const Rational& q)
{
    return boost::multiprecision::denominator(q) == 1;
}

inline Integer to_integer(const Rational& q)
{
    if (!is_integral(q))
        throw std::logic_error("to_integer: non-integral rational");
    return boost::multiprecision::numerator(q);
}

inline std::string to_string(const Rational& q)
{
    std::ostringstream os;
    os << boost::multiprecision::numerator(q);
    if (boost::multiprecision::denominator(q) != 1)
        os << '/' << boost::multiprecision::denominator(q);
    return os.str();
}

/// Sign of the permutation sorting `t` (entries distinct); 0 if a repeat occurs.
inline int permutation_sign(std::vector<int> t)
{
    int sign = 1;
    for (std::size_t i = 1; i < t.size(); ++i) {
        for (std::size_t j = i; j > 0 && t[j - 1] >= t[j]; --j) {
            if (t[j - 1] == t[j])
                return 0;
            std::swap(t[j - 1], t[j]);
            sign = -sign;
        }
    }
    return sign;
}

} // namespace torsor
