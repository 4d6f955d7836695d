#pragma once

// JSON container formats. Every top-level document may carry a "kind"
// discriminator; readers check it when present and writers always emit it.

#include "torsor/abelian.hpp"
#include "torsor/cochain.hpp"
#include "torsor/complex.hpp"
#include "torsor/deligne.hpp"
#include "torsor/tower.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <limits>
#include <sstream>
#include <string>

namespace torsor::io {

using json = nlohmann::ordered_json;

[[noreturn]] inline void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

inline void expect_kind(const json& j, const char* kind)
{
    if (!j.is_object())
        parse_fail(std::string("expected an object of kind ") + kind);
    if (j.contains("kind") && j.at("kind") != kind)
        parse_fail(std::string("expected kind ") + kind + ", found " + j.at("kind").dump());
}

inline const json& field(const json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        parse_fail(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

inline json load(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        parse_fail("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        parse_fail(path + ": " + e.what());
    }
}

inline void save(const std::string& path, const json& j)
{
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorCode::ParseError, "cannot write " + path);
    out << j.dump(1) << '\n';
}

// --- scalars ---------------------------------------------------------------

inline json integer_to_json(const Integer& x)
{
    if (x >= std::numeric_limits<long long>::min() && x <= std::numeric_limits<long long>::max())
        return json(static_cast<long long>(x));
    return json(x.str());
}

inline Integer integer_from_json(const json& j)
{
    if (j.is_number_integer()) return Integer(j.get<long long>());
    if (j.is_string()) {
        try {
            return Integer(j.get<std::string>());
        } catch (const std::exception&) {
        }
    }
    parse_fail("expected an integer, found " + j.dump());
}

inline json rational_to_json(const Rational& q)
{
    if (is_integral(q)) return integer_to_json(to_integer(q));
    return json{{"num", integer_to_json(boost::multiprecision::numerator(q))},
                {"den", integer_to_json(boost::multiprecision::denominator(q))}};
}

inline Rational rational_from_json(const json& j)
{
    if (j.is_object()) {
        Integer den = integer_from_json(field(j, "den"));
        if (den == 0) parse_fail("zero denominator");
        return Rational(integer_from_json(field(j, "num")), den);
    }
    return Rational(integer_from_json(j));
}

inline Simplex simplex_from_json(const json& j)
{
    if (!j.is_array()) parse_fail("expected an index array, found " + j.dump());
    Simplex s;
    for (const auto& v : j) {
        if (!v.is_number_integer()) parse_fail("non-integer index in " + j.dump());
        s.push_back(v.get<int>());
    }
    return s;
}

inline IntMatrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols)
{
    if (!j.is_array() || j.size() != rows) parse_fail("matrix must have " + std::to_string(rows) + " rows");
    IntMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols) parse_fail("matrix row " + std::to_string(r) + " has wrong length");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = integer_from_json(j[r][c]);
    }
    return m;
}

inline json matrix_to_json(const IntMatrix& m)
{
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(integer_to_json(m(r, c)));
        rows.push_back(row);
    }
    return rows;
}

// --- complexes, covers, chains ----------------------------------------------

inline json to_json(const SimplicialComplex& k)
{
    json simplices = json::array();
    // maximal faces suffice; emit every simplex not contained in a larger one
    for (int d = 0; d <= k.dimension(); ++d)
        for (const auto& s : k.simplices(d)) {
            bool maximal = true;
            for (const auto& t : k.simplices(d + 1))
                if (std::includes(t.begin(), t.end(), s.begin(), s.end())) {
                    maximal = false;
                    break;
                }
            if (maximal) simplices.push_back(s);
        }
    return json{{"kind", "complex"}, {"vertices", k.vertex_count()}, {"simplices", simplices}};
}

inline SimplicialComplex complex_from_json(const json& j)
{
    expect_kind(j, "complex");
    std::vector<Simplex> raw;
    for (const auto& s : field(j, "simplices")) raw.push_back(simplex_from_json(s));
    const json& v = field(j, "vertices");
    if (!v.is_number_integer() || v.get<int>() < 0) parse_fail("\"vertices\" must be a non-negative integer");
    return SimplicialComplex(v.get<int>(), raw, true);
}

inline json to_json(const Cover& c)
{
    json pieces = json::array();
    for (const auto& u : c.pieces()) pieces.push_back(to_json(u).at("simplices"));
    return json{{"kind", "cover"}, {"base", to_json(c.base())}, {"pieces", pieces}};
}

inline Cover cover_from_json(const json& j)
{
    expect_kind(j, "cover");
    auto base = std::make_shared<const SimplicialComplex>(complex_from_json(field(j, "base")));
    if (j.contains("star_cover") && j.at("star_cover") == true) return star_cover(base);
    std::vector<SimplicialComplex> pieces;
    for (const auto& p : field(j, "pieces")) {
        std::vector<Simplex> cells;
        for (const auto& s : p) {
            Simplex t = simplex_from_json(s);
            std::sort(t.begin(), t.end());
            if (!base->contains(t))
                throw Error(ErrorCode::InvalidCover, "piece simplex " + format_tuple(t) + " is not in the base");
            cells.push_back(t);
        }
        pieces.push_back(base->closure_of(cells));
    }
    return Cover(base, std::move(pieces));
}

inline json to_json(const Chain& z)
{
    json cells = json::array();
    const auto& s = z.complex().simplices(z.degree());
    for (std::size_t i = 0; i < s.size(); ++i)
        if (z[i] != 0) cells.push_back(json{{"simplex", s[i]}, {"coeff", integer_to_json(z[i])}});
    return json{{"kind", "chain"}, {"degree", z.degree()}, {"cells", cells}};
}

/// Chains are stored without their complex; the caller supplies it.
inline Chain chain_from_json(const json& j, const ComplexPtr& k)
{
    expect_kind(j, "chain");
    Chain z(k, field(j, "degree").get<int>());
    for (const auto& c : field(j, "cells")) {
        Simplex s = simplex_from_json(field(c, "simplex"));
        int sign = permutation_sign(s);
        if (sign == 0) throw Error(ErrorCode::DuplicateVertexInSimplex, "chain cell " + format_tuple(s));
        std::sort(s.begin(), s.end());
        z.add(s, integer_from_json(field(c, "coeff")) * sign);
    }
    return z;
}

// --- groups -----------------------------------------------------------------

inline json to_json(const FgAbelianGroup& g)
{
    json m = json::array();
    for (const auto& x : g.moduli()) m.push_back(integer_to_json(x));
    return json{{"kind", "group"}, {"moduli", m}};
}

inline json to_json(const Coefficients& c)
{
    if (c.is_circle()) return json{{"kind", "group"}, {"circle", true}};
    if (c.is_rational()) return json{{"kind", "group"}, {"rational", true}};
    return to_json(c.group());
}

inline Coefficients coefficients_from_json(const json& j)
{
    expect_kind(j, "group");
    if (j.contains("circle") && j.at("circle") == true) return Coefficients::circle();
    if (j.contains("rational") && j.at("rational") == true) return Coefficients::rational();
    std::vector<Integer> moduli;
    for (const auto& m : field(j, "moduli")) moduli.push_back(integer_from_json(m));
    return Coefficients(FgAbelianGroup(std::move(moduli)));
}

inline FgAbelianGroup group_from_json(const json& j)
{
    Coefficients c = coefficients_from_json(j);
    if (!c.is_group()) parse_fail("expected a finitely generated abelian group");
    return c.group();
}

inline json element_to_json(const Coefficients& c, const Cochain::Value& v)
{
    if (!c.is_group()) return rational_to_json(v.at(0));
    json a = json::array();
    for (const auto& x : v) a.push_back(integer_to_json(to_integer(x)));
    return a;
}

inline Cochain::Value element_from_json(const Coefficients& c, const json& j)
{
    if (!c.is_group()) return {rational_from_json(j)};
    Cochain::Value v;
    if (j.is_array())
        for (const auto& x : j) v.emplace_back(integer_from_json(x));
    else
        v.emplace_back(integer_from_json(j));
    return v;
}

inline std::vector<Integer> group_element_from_json(const FgAbelianGroup& g, const json& j)
{
    auto v = element_from_json(Coefficients(g), j);
    std::vector<Integer> out;
    for (const auto& x : v) out.push_back(to_integer(x));
    if (out.size() != g.rank()) parse_fail("element " + j.dump() + " does not match group " + g.to_string());
    return g.reduce(out);
}

// --- cochains ---------------------------------------------------------------

inline json to_json(const Cochain& x)
{
    json values = json::array();
    const auto& cells = x.complex().simplices(x.degree());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        bool zero = std::all_of(x[i].begin(), x[i].end(), [](const Rational& r) { return r == 0; });
        if (!zero) values.push_back(json{{"indices", cells[i]}, {"value", element_to_json(x.coefficients(), x[i])}});
    }
    return json{{"kind", "cochain"}, {"degree", x.degree()}, {"coefficients", to_json(x.coefficients())}, {"values", values}};
}

inline Cochain cochain_from_json(const json& j, const ComplexPtr& k)
{
    expect_kind(j, "cochain");
    const int degree = field(j, "degree").get<int>();
    Coefficients coeffs = coefficients_from_json(field(j, "coefficients"));
    Cochain x(k, degree, coeffs);
    for (const auto& e : field(j, "values")) {
        Simplex s = simplex_from_json(field(e, "indices"));
        x.set(s, element_from_json(coeffs, field(e, "value")));
    }
    return x;
}

/// A cochain file that names its own carrier: "cover" (values on the nerve)
/// or "complex".
struct CarriedCochain {
    std::optional<Cover> cover;
    Cochain cochain;
};

inline CarriedCochain carried_cochain_from_json(const json& j)
{
    CarriedCochain r;
    ComplexPtr k;
    if (j.contains("cover")) {
        r.cover = cover_from_json(j.at("cover"));
        k = Nerve(*r.cover).complex_ptr();
    } else if (j.contains("complex")) {
        k = std::make_shared<const SimplicialComplex>(complex_from_json(j.at("complex")));
    } else {
        parse_fail("cochain file needs a \"cover\" or \"complex\" carrier");
    }
    r.cochain = cochain_from_json(j, k);
    return r;
}

// --- sequences, groups, extensions, towers, transitions ----------------------

inline json to_json(const ShortExactSequence& s)
{
    return json{{"kind", "ses"},
                {"A", to_json(s.A())},
                {"B", to_json(s.B())},
                {"C", to_json(s.C())},
                {"inject", matrix_to_json(s.inject().matrix())},
                {"project", matrix_to_json(s.project().matrix())}};
}

inline ShortExactSequence ses_from_json(const json& j)
{
    expect_kind(j, "ses");
    auto a = group_from_json(field(j, "A")), b = group_from_json(field(j, "B")), c = group_from_json(field(j, "C"));
    return ShortExactSequence(Homomorphism(a, b, matrix_from_json(field(j, "inject"), b.rank(), a.rank())),
                              Homomorphism(b, c, matrix_from_json(field(j, "project"), c.rank(), b.rank())));
}

inline json to_json(const FiniteGroup& g)
{
    return json{{"kind", "finite_group"}, {"order", g.order()}, {"identity", g.identity()}, {"table", g.table()}};
}

inline FiniteGroup finite_group_from_json(const json& j)
{
    expect_kind(j, "finite_group");
    auto table = field(j, "table").get<std::vector<std::vector<int>>>();
    if (static_cast<int>(table.size()) != field(j, "order").get<int>())
        parse_fail("table size does not match \"order\"");
    return FiniteGroup(std::move(table), field(j, "identity").get<int>());
}

inline json to_json(const CentralExtension& e, bool with_base = true)
{
    json rows = json::array();
    for (const auto& row : e.factor_set()) {
        json r = json::array();
        for (const auto& v : row) {
            json a = json::array();
            for (const auto& x : v) a.push_back(integer_to_json(x));
            r.push_back(a);
        }
        rows.push_back(r);
    }
    json j{{"kind", "extension"}};
    if (with_base) j["base"] = to_json(e.base());
    j["kernel"] = to_json(e.kernel());
    j["factor_set"] = rows;
    return j;
}

/// `implied_base` is used when the document omits "base".
inline CentralExtension extension_from_json(const json& j, const std::optional<FiniteGroup>& implied_base = {})
{
    expect_kind(j, "extension");
    FiniteGroup base;
    if (j.contains("base"))
        base = finite_group_from_json(j.at("base"));
    else if (implied_base)
        base = *implied_base;
    else
        parse_fail("extension needs a \"base\" group");
    FgAbelianGroup kernel = group_from_json(field(j, "kernel"));
    CentralExtension::FactorSet f;
    for (const auto& row : field(j, "factor_set")) {
        std::vector<std::vector<Integer>> r;
        for (const auto& v : row) r.push_back(group_element_from_json(kernel, v));
        f.push_back(std::move(r));
    }
    return build_extension(std::move(base), std::move(kernel), std::move(f));
}

inline json to_json(const ExtensionTower& t)
{
    json ext = json::array();
    for (std::size_t k = 0; k < t.extensions().size(); ++k) ext.push_back(to_json(t.extensions()[k], k == 0));
    return json{{"kind", "tower"}, {"extensions", ext}};
}

inline ExtensionTower tower_from_json(const json& j)
{
    const json* list = &j;
    if (j.is_object()) {
        expect_kind(j, "tower");
        list = &field(j, "extensions");
    }
    if (!list->is_array()) parse_fail("tower must be an array of extensions");
    std::vector<CentralExtension> ext;
    for (const auto& e : *list) {
        std::optional<FiniteGroup> implied;
        if (!ext.empty()) implied = ext.back().total();
        ext.push_back(extension_from_json(e, implied));
    }
    return ExtensionTower(std::move(ext));
}

inline json to_json(const TransitionCocycle& g, bool with_group = false)
{
    json edges = json::array();
    const auto& e = g.nerve().simplices(1);
    for (std::size_t k = 0; k < e.size(); ++k) edges.push_back(json{{"i", e[k][0]}, {"j", e[k][1]}, {"g", g.edge_values()[k]}});
    json j{{"kind", "transitions"}};
    if (with_group) j["group"] = to_json(g.group());
    j["edges"] = edges;
    return j;
}

/// Unlisted edges carry the identity. Listing (j,i) with j > i stores the inverse.
inline TransitionCocycle transitions_from_json(const json& j, const ComplexPtr& nerve, const FiniteGroup& group)
{
    expect_kind(j, "transitions");
    if (j.contains("group") && !(finite_group_from_json(j.at("group")) == group))
        throw Error(ErrorCode::GroupMismatch, "transition group differs from the extension base");
    std::vector<int> v(nerve->count(1), group.identity());
    for (const auto& e : field(j, "edges")) {
        int a = field(e, "i").get<int>(), b = field(e, "j").get<int>(), x = field(e, "g").get<int>();
        if (x < 0 || x >= group.order())
            throw Error(ErrorCode::InvalidTransitions, "group element " + std::to_string(x) + " out of range");
        if (a > b) {
            std::swap(a, b);
            x = group.inv(x);
        }
        auto idx = nerve->index_of({a, b});
        if (!idx) throw Error(ErrorCode::InvalidTransitions, "no nerve edge " + format_tuple({a, b}));
        v[*idx] = x;
    }
    return TransitionCocycle(nerve, group, std::move(v));
}

// --- double cochains and packages --------------------------------------------

inline json to_json(const DoubleCochain& x)
{
    json values = json::array();
    const auto& taus = x.context()->nerve.simplices(x.cech_degree());
    for (std::size_t t = 0; t < taus.size(); ++t) {
        json cells = json::array();
        const auto& s = x.piece(t).simplices(x.form_degree());
        for (std::size_t k = 0; k < s.size(); ++k)
            if (x.local(t)[k] != 0) cells.push_back(json{{"simplex", s[k]}, {"value", rational_to_json(x.local(t)[k])}});
        if (!cells.empty()) values.push_back(json{{"indices", taus[t]}, {"cochain", cells}});
    }
    return json{{"cech_degree", x.cech_degree()}, {"form_degree", x.form_degree()}, {"values", values}};
}

inline DoubleCochain double_cochain_from_json(const json& j, const ContextPtr& ctx)
{
    DoubleCochain x(ctx, field(j, "cech_degree").get<int>(), field(j, "form_degree").get<int>());
    for (const auto& e : field(j, "values")) {
        Simplex tau = simplex_from_json(field(e, "indices"));
        int sign = permutation_sign(tau);
        if (sign == 0) throw Error(ErrorCode::DuplicateVertexInSimplex, "nerve tuple " + format_tuple(tau));
        std::sort(tau.begin(), tau.end());
        for (const auto& c : field(e, "cochain")) {
            Simplex s = simplex_from_json(field(c, "simplex"));
            int ssign = permutation_sign(s);
            if (ssign == 0) throw Error(ErrorCode::DuplicateVertexInSimplex, "simplex " + format_tuple(s));
            std::sort(s.begin(), s.end());
            x.set(tau, s, rational_from_json(field(c, "value")) * sign * ssign);
        }
    }
    return x;
}

inline json to_json(const DelignePackage& p)
{
    json layers = json::array();
    for (const auto& a : p.layers()) layers.push_back(to_json(a));
    json j{{"kind", "package"}, {"degree", p.degree()}, {"cover", to_json(p.context()->cover)}};
    if (auto c = p.classifying_cocycle()) j["cocycle"] = to_json(*c);
    j["log"] = to_json(p.log());
    j["layers"] = layers;
    return j;
}

/// With "log" and "layers" the package is taken as given (and validated);
/// with only "cocycle" it is built by descent.
inline DelignePackage package_from_json(const json& j)
{
    expect_kind(j, "package");
    const int d = field(j, "degree").get<int>();
    ContextPtr ctx = make_context(cover_from_json(field(j, "cover")));
    if (j.contains("log") && j.contains("layers")) {
        DoubleCochain log = double_cochain_from_json(j.at("log"), ctx);
        std::vector<DoubleCochain> layers;
        for (const auto& l : j.at("layers")) layers.push_back(double_cochain_from_json(l, ctx));
        return DelignePackage(ctx, d, std::move(log), std::move(layers));
    }
    Cochain c = cochain_from_json(field(j, "cocycle"), ctx->nerve.complex_ptr());
    if (c.degree() != d) throw Error(ErrorCode::DegreeMismatch, "cocycle degree differs from package degree");
    return descent_chain(ctx, c);
}

} // namespace torsor::io
