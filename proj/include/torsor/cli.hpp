#pragma once

// Batch front-end. Every subcommand parses all of its input files before
// computing anything, prints a deterministic text report, and optionally
// writes a machine-readable JSON result with --out.

#include "torsor/cochain.hpp"
#include "torsor/complex.hpp"
#include "torsor/deligne.hpp"
#include "torsor/fixtures.hpp"
#include "torsor/io.hpp"
#include "torsor/tower.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace torsor::cli {

enum class Verify { Fast, Full };

struct Job {
    std::string subcommand;
    std::vector<std::string> inputs;
    std::string out_path;
    int degree = -1;
    int max_check_degree = -1; ///< -1: one above the base dimension
    Verify verify = Verify::Fast;
};

/// Text report with a trailing list of verification statuses.
class Report {
public:
    std::ostringstream body;

    void check(const std::string& name, bool ok)
    {
        checks_.push_back("  [" + std::string(ok ? "ok" : "FAILED") + "] " + name);
        failed_ = failed_ || !ok;
    }
    /// Informational status that does not fail the job.
    void note(const std::string& name, const std::string& status) { checks_.push_back("  [" + status + "] " + name); }
    bool failed() const noexcept { return failed_; }

    std::string str() const
    {
        std::string s = body.str();
        if (!checks_.empty()) {
            s += "verification:\n";
            for (const auto& c : checks_) s += c + "\n";
        }
        return s;
    }

private:
    std::vector<std::string> checks_;
    bool failed_ = false;
};

// --- formatting --------------------------------------------------------------

inline std::string f_vector(const SimplicialComplex& k)
{
    std::string s = "(";
    for (int d = 0; d <= k.dimension(); ++d) s += (d ? "," : "") + std::to_string(k.count(d));
    return s + ")";
}

inline std::string format_cochain(const Cochain& x)
{
    std::string s;
    const auto& cells = x.complex().simplices(x.degree());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        bool zero = std::all_of(x[i].begin(), x[i].end(), [](const Rational& r) { return r == 0; });
        if (zero) continue;
        if (!s.empty()) s += ' ';
        s += format_tuple(cells[i]) + "=" + x.coefficients().element_to_string(x[i]);
    }
    return s.empty() ? "0" : s;
}

/// "0" for the trivial group, the coordinate for a cyclic group, a tuple otherwise.
inline std::string format_coordinates(const std::vector<Integer>& c)
{
    if (c.empty()) return "0";
    if (c.size() == 1) return c[0].str();
    std::string s = "(";
    for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + c[i].str();
    return s + ")";
}

inline std::string format_transitions(const TransitionCocycle& g)
{
    std::string s;
    const auto& e = g.nerve().simplices(1);
    for (std::size_t k = 0; k < e.size(); ++k) s += (k ? " " : "") + format_tuple(e[k]) + "=" + std::to_string(g.edge_values()[k]);
    return s.empty() ? "(no edges)" : s;
}

inline std::string describe(const FiniteGroup& g)
{
    return "group of order " + std::to_string(g.order()) + (g.is_abelian() ? " (abelian)" : " (non-abelian)");
}

// --- shared steps --------------------------------------------------------------

inline bool is_cover_document(const io::json& j)
{
    if (j.contains("kind")) return j.at("kind") == "cover";
    return j.contains("pieces") || j.contains("star_cover");
}

inline int check_degree(const Job& job, const SimplicialComplex& base)
{
    return job.max_check_degree >= 0 ? job.max_check_degree : base.dimension() + 1;
}

inline void report_goodness(Report& r, const Cover& cover, const Nerve& nerve, int max_degree)
{
    auto good = verify_good_cover(cover, nerve, max_degree);
    std::string name = "cover is good through degree " + std::to_string(max_degree);
    if (good.ok()) {
        r.check(name, true);
    } else {
        const auto& f = good.failures.front();
        r.note(name + ": intersection " + format_tuple(f.indices) + " has H^" + std::to_string(f.degree) + " = " +
                   f.cohomology,
               "no");
    }
}

inline void write_out(const Job& job, Report& r, const io::json& j, const std::function<bool(const io::json&)>& reparse)
{
    if (job.out_path.empty()) return;
    io::save(job.out_path, j);
    r.body << "wrote " << job.out_path << "\n";
    if (job.verify == Verify::Full) r.check("written result re-parses to an equal value", reparse(io::load(job.out_path)));
}

// --- subcommands ------------------------------------------------------------------

inline void run_cohomology(const Job& job, Report& r)
{
    io::json space = io::load(job.inputs[0]);
    io::json coeff = io::load(job.inputs[1]);
    FgAbelianGroup g = io::group_from_json(coeff);
    std::optional<Cover> cover;
    ComplexPtr k;
    if (is_cover_document(space)) {
        cover = io::cover_from_json(space);
    } else {
        k = std::make_shared<const SimplicialComplex>(io::complex_from_json(space));
    }

    std::optional<Nerve> nerve;
    if (cover) {
        nerve.emplace(*cover);
        k = nerve->complex_ptr();
        r.body << "space: nerve of a " << cover->size() << "-piece cover of a complex with f-vector "
               << f_vector(cover->base()) << "\n";
        r.body << "nerve f-vector: " << f_vector(*k) << "\n";
    } else {
        r.body << "space: complex with f-vector " << f_vector(*k) << "\n";
    }
    r.body << "coefficients: " << g.to_string() << "\n";

    CohomologyGroup h(k, g, job.degree);
    r.body << "H^" << job.degree << " = " << h.group().to_string() << "\n";
    r.body << "invariant factors: [";
    for (std::size_t i = 0; i < h.group().moduli().size(); ++i) r.body << (i ? "," : "") << h.group().moduli()[i];
    r.body << "]\n";
    auto gens = h.generators();
    r.body << "generators:\n";
    if (gens.empty()) r.body << "  (none)\n";
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const Integer& m = h.group().moduli()[i];
        r.body << "  e" << i + 1 << " (order " << (m == 0 ? std::string("infinite") : m.str()) << "): " << format_cochain(gens[i])
               << "\n";
    }

    bool square_zero = true;
    if (job.degree >= 1)
        square_zero = (k->coboundary_matrix(job.degree) * k->coboundary_matrix(job.degree - 1)).is_zero();
    r.check("coboundary squares to zero around degree " + std::to_string(job.degree), square_zero);
    r.check("generators are cocycles", std::all_of(gens.begin(), gens.end(), [](const Cochain& c) { return is_cocycle(c); }));
    if (job.verify == Verify::Full) {
        bool unit = true;
        for (std::size_t i = 0; i < gens.size(); ++i) {
            auto c = h.coordinates(gens[i]);
            for (std::size_t j = 0; j < c.size(); ++j) unit = unit && c[j] == (i == j ? 1 : 0);
        }
        r.check("generator coordinates are unit vectors", unit);
    }
    if (cover) report_goodness(r, *cover, *nerve, check_degree(job, cover->base()));

    io::json result{{"kind", "cohomology"}, {"degree", job.degree}, {"group", io::to_json(h.group())}};
    result["generators"] = io::json::array();
    for (const auto& c : gens) result["generators"].push_back(io::to_json(c));
    write_out(job, r, result, [&](const io::json& j) {
        if (!(io::group_from_json(j.at("group")) == h.group())) return false;
        for (std::size_t i = 0; i < gens.size(); ++i)
            if (!(io::cochain_from_json(j.at("generators").at(i), k) == gens[i])) return false;
        return true;
    });
}

struct CoveredTransitions {
    Cover cover;
    Nerve nerve;
    TransitionCocycle transitions;
};

inline CoveredTransitions load_transitions(const io::json& cover_doc, const io::json& trans_doc, const FiniteGroup& base)
{
    Cover c = io::cover_from_json(cover_doc);
    Nerve n(c);
    TransitionCocycle g = io::transitions_from_json(trans_doc, n.complex_ptr(), base);
    return {std::move(c), std::move(n), std::move(g)};
}

inline bool projects_to(const TransitionCocycle& lift, const TransitionCocycle& g, const CentralExtension& ext)
{
    for (std::size_t k = 0; k < g.edge_values().size(); ++k)
        if (ext.project(lift.edge_values()[k]) != g.edge_values()[k]) return false;
    return true;
}

inline void run_obstruct(const Job& job, Report& r)
{
    io::json cover_doc = io::load(job.inputs[0]), trans_doc = io::load(job.inputs[1]), ext_doc = io::load(job.inputs[2]);
    CentralExtension ext = io::extension_from_json(ext_doc);
    auto [cover, nerve, g] = load_transitions(cover_doc, trans_doc, ext.base());

    r.body << "extension: " << ext.kernel().to_string() << " -> " << describe(ext.total()) << " -> "
           << describe(ext.base()) << "\n";
    r.body << "nerve f-vector: " << f_vector(nerve.complex()) << "\n";
    r.body << "transitions: " << format_transitions(g) << "\n";

    LiftResult lr = lift_transitions(g, ext);
    ObstructionClass oc = make_class(1, lr.obstruction);
    r.body << "obstruction class in H^2 = " << oc.cohomology.to_string() << ": " << format_coordinates(oc.coordinates) << "\n";
    r.body << "obstruction cocycle: " << format_cochain(lr.obstruction) << "\n";
    r.body << "status: " << (lr.lifted() ? "lifted" : "obstructed") << "\n";
    if (lr.lifted()) {
        r.body << "witness: " << format_cochain(*lr.witness) << "\n";
        r.body << "lift: " << format_transitions(*lr.lift) << "\n";
    }

    r.check("transitions satisfy the cocycle law", true); // enforced while parsing
    r.check("obstruction cochain is a cocycle", is_cocycle(lr.obstruction));
    r.check("lift exists exactly when the class vanishes", lr.lifted() == oc.vanishes());
    if (lr.lifted()) {
        r.check("lift projects to the input transitions", projects_to(*lr.lift, g, ext));
        if (job.verify == Verify::Full) {
            bool law = true;
            const auto& tri = nerve.complex().simplices(2);
            for (const auto& t : tri)
                law = law && ext.total().mul(lr.lift->g(t[0], t[1]), lr.lift->g(t[1], t[2])) == lr.lift->g(t[0], t[2]);
            r.check("lift satisfies the cocycle law on every nerve triangle", law);
        }
    }
    report_goodness(r, cover, nerve, check_degree(job, cover.base()));

    io::json result{{"kind", "obstruction"}, {"class", io::json::array()}, {"cocycle", io::to_json(lr.obstruction)}};
    for (const auto& c : oc.coordinates) result["class"].push_back(io::integer_to_json(c));
    if (lr.lift) result["lift"] = io::to_json(*lr.lift, true);
    write_out(job, r, result, [&](const io::json& j) {
        bool ok = io::cochain_from_json(j.at("cocycle"), nerve.complex_ptr()) == lr.obstruction;
        if (lr.lift) ok = ok && io::transitions_from_json(j.at("lift"), nerve.complex_ptr(), ext.total()) == *lr.lift;
        return ok;
    });
}

inline void run_tower(const Job& job, Report& r)
{
    io::json cover_doc = io::load(job.inputs[0]), trans_doc = io::load(job.inputs[1]), tower_doc = io::load(job.inputs[2]);
    ExtensionTower tower = io::tower_from_json(tower_doc);
    auto [cover, nerve, g] = load_transitions(cover_doc, trans_doc, tower.base());

    ObstructionSequence seq = tower_obstructions(g, tower);
    r.body << seq.status_string() << ", classes: [";
    for (std::size_t i = 0; i < seq.classes.size(); ++i) r.body << (i ? ", " : "") << format_coordinates(seq.classes[i].coordinates);
    r.body << "]\n";
    r.body << "tower length: " << tower.size() << "\n";
    for (const auto& c : seq.classes) {
        r.body << "level " << c.level << ": class in H^" << c.degree << " = " << c.cohomology.to_string() << ": "
               << format_coordinates(c.coordinates) << "\n";
        r.body << "  cocycle: " << format_cochain(c.cocycle) << "\n";
    }
    for (std::size_t k = 0; k < seq.lifts.size(); ++k)
        r.body << "lift to level " << k + 1 << ": " << format_transitions(seq.lifts[k]) << "\n";

    bool cocycles = std::all_of(seq.classes.begin(), seq.classes.end(), [](const ObstructionClass& c) { return is_cocycle(c.cocycle); });
    r.check("every obstruction cochain is a cocycle", cocycles);
    bool projections = true;
    for (std::size_t k = 0; k < seq.lifts.size(); ++k) {
        const TransitionCocycle& below = k == 0 ? g : seq.lifts[k - 1];
        projections = projections && projects_to(seq.lifts[k], below, tower.extension(k + 1));
    }
    r.check("every lift projects to the level below", projections);
    if (job.verify == Verify::Full) {
        // a different coboundary witness must not change any class
        ObstructionSequence again = tower_obstructions(g, tower, TowerOptions{0x5eed});
        bool same = again.status == seq.status && again.level == seq.level && again.classes.size() == seq.classes.size();
        for (std::size_t i = 0; same && i < seq.classes.size(); ++i)
            same = again.classes[i].coordinates == seq.classes[i].coordinates;
        r.check("classes are unchanged under a different witness", same);
    }
    report_goodness(r, cover, nerve, check_degree(job, cover.base()));

    io::json result{{"kind", "obstruction_sequence"}, {"status", seq.status_string()}, {"classes", io::json::array()}};
    for (const auto& c : seq.classes) {
        io::json coords = io::json::array();
        for (const auto& x : c.coordinates) coords.push_back(io::integer_to_json(x));
        result["classes"].push_back(io::json{{"level", c.level}, {"degree", c.degree}, {"coordinates", coords},
                                             {"cocycle", io::to_json(c.cocycle)}});
    }
    write_out(job, r, result, [&](const io::json& j) {
        for (std::size_t i = 0; i < seq.classes.size(); ++i) {
            const auto& c = seq.classes[i];
            if (!(io::cochain_from_json(j.at("classes").at(i).at("cocycle"), c.cocycle.complex_ptr()) == c.cocycle)) return false;
        }
        return j.at("status") == seq.status_string();
    });
}

inline void run_bockstein(const Job& job, Report& r)
{
    io::json cochain_doc = io::load(job.inputs[0]), ses_doc = io::load(job.inputs[1]);
    io::CarriedCochain cc = io::carried_cochain_from_json(cochain_doc);
    ShortExactSequence ses = io::ses_from_json(ses_doc);

    const Cochain& c = cc.cochain;
    Cochain b = bockstein(c, ses);
    CohomologyGroup from(c.complex_ptr(), ses.C(), c.degree());
    CohomologyGroup to(b.complex_ptr(), ses.A(), b.degree());
    r.body << "sequence: 0 -> " << ses.A().to_string() << " -> " << ses.B().to_string() << " -> " << ses.C().to_string()
           << " -> 0\n";
    r.body << "input class in H^" << c.degree() << " = " << from.group().to_string() << ": "
           << format_coordinates(from.coordinates(c)) << "\n";
    r.body << "bockstein class in H^" << b.degree() << " = " << to.group().to_string() << ": "
           << format_coordinates(to.coordinates(b)) << "\n";
    r.body << "bockstein cocycle: " << format_cochain(b) << "\n";
    r.check("input is a cocycle", true); // bockstein rejects non-cocycles
    r.check("bockstein cochain is a cocycle", is_cocycle(b));

    io::json result = io::to_json(b);
    if (cc.cover)
        result["cover"] = io::to_json(*cc.cover);
    else
        result["complex"] = io::to_json(c.complex());
    write_out(job, r, result, [&](const io::json& j) { return io::carried_cochain_from_json(j).cochain == b; });
}

inline void describe_package(Report& r, const DelignePackage& p)
{
    const auto& ctx = *p.context();
    r.body << "package degree: " << p.degree() << "\n";
    r.body << "base f-vector: " << f_vector(ctx.base()) << ", nerve f-vector: " << f_vector(ctx.nerve.complex()) << "\n";
    CohomologyGroup h(ctx.nerve.complex_ptr(), FgAbelianGroup::integers(), p.degree() + 1);
    r.body << "characteristic class in H^" << p.degree() + 1 << "(nerve; Z) = " << h.group().to_string() << ": "
           << format_coordinates(h.coordinates(p.defect())) << "\n";
}

inline void run_descent(const Job& job, Report& r)
{
    io::json cover_doc = io::load(job.inputs[0]), cocycle_doc = io::load(job.inputs[1]);
    ContextPtr ctx = make_context(io::cover_from_json(cover_doc));
    Cochain c = io::cochain_from_json(cocycle_doc, ctx->nerve.complex_ptr());
    if (!c.coefficients().is_circle())
        throw Error(ErrorCode::GroupMismatch, "descent needs a Q/Z-valued cocycle");

    DelignePackage p = descent_chain(ctx, c);
    describe_package(r, p);
    r.body << "classifying cocycle: " << format_cochain(c) << "\n";
    Cochain f = curvature(p);
    r.body << "curvature: " << format_cochain(f) << "\n";

    r.check("classifying cochain is a cocycle", true); // descent_chain rejects otherwise
    r.check("cover is good through degree " + std::to_string(c.degree() + 1), true);
    r.check("every descent equation holds exactly", true); // enforced by the package constructor
    r.check("curvature is closed", is_cocycle(f));
    if (job.verify == Verify::Full) {
        auto cc = p.classifying_cocycle();
        r.check("package log recovers the classifying cocycle", cc && *cc == c);
    }
    write_out(job, r, io::to_json(p), [&](const io::json& j) {
        DelignePackage q = io::package_from_json(j);
        return q.log() == p.log() && q.layers() == p.layers();
    });
}

inline void run_curvature(const Job& job, Report& r)
{
    io::json pkg_doc = io::load(job.inputs[0]);
    DelignePackage p = io::package_from_json(pkg_doc);
    describe_package(r, p);
    Cochain f = curvature(p);
    r.body << "curvature (degree " << f.degree() << "): " << format_cochain(f) << "\n";
    const auto& base = p.context()->base_ptr();
    if (base->dimension() == f.degree()) {
        if (auto signs = find_orientation(*base, f.degree())) {
            Chain z = fundamental_cycle(base, f.degree(), *signs);
            Rational period = pair(f, z);
            r.body << "period over the fundamental cycle: " << to_string(period) << "\n";
            r.check("period is an integer", is_integral(period));
        }
    }
    r.check("every descent equation holds exactly", true); // enforced while parsing
    r.check("curvature is closed", is_cocycle(f));
    io::json result = io::to_json(f);
    result["complex"] = io::to_json(*base);
    write_out(job, r, result, [&](const io::json& j) { return io::carried_cochain_from_json(j).cochain == f; });
}

inline void run_holonomy(const Job& job, Report& r)
{
    io::json pkg_doc = io::load(job.inputs[0]), chain_doc = io::load(job.inputs[1]);
    DelignePackage p = io::package_from_json(pkg_doc);
    Chain z = io::chain_from_json(chain_doc, p.context()->base_ptr());

    HolonomyResult h = holonomy_detail(p, z);
    r.body << "holonomy = " << to_string(h.value) << " (mod 1)\n";
    r.body << "package degree: " << p.degree() << ", cycle support: " << z.support().size() << " simplices\n";
    r.body << "unreduced pairing: " << to_string(h.raw_pairing) << "\n";
    r.check("cycle is closed", boundary(z).is_zero());
    r.check("cover restricted to the cycle support is good", true); // holonomy_detail rejects otherwise
    r.check("flat cocycle is a cocycle", is_cocycle(h.flat_cocycle));
    if (job.verify == Verify::Full) {
        Rational again = holonomy(p, z, ZigzagOptions{0x5eed});
        r.check("value is unchanged under a different contraction order", again == h.value);
    }
    io::json result{{"kind", "holonomy"}, {"value", io::rational_to_json(h.value)}};
    write_out(job, r, result, [&](const io::json& j) { return io::rational_from_json(j.at("value")) == h.value; });
}

// --- fixtures -------------------------------------------------------------------

/// Files written for one built-in space, in emission order.
inline std::vector<std::pair<std::string, io::json>> fixture_files(const std::string& name)
{
    using namespace fixtures;
    std::vector<std::pair<std::string, io::json>> files;
    auto z2 = FgAbelianGroup::cyclic(2);
    if (name == "circle") {
        auto s = hexagon_arcs();
        files.emplace_back("circle.cplx", io::to_json(*s.complex));
        files.emplace_back("circle.cov", io::to_json(s.cover));
        files.emplace_back("z.grp", io::to_json(FgAbelianGroup::integers()));
        files.emplace_back("z2.grp", io::to_json(z2));
        files.emplace_back("dbl.trn", io::to_json(double_cover(s), true));
        ExtensionTower t = cyclic_tower(1);
        files.emplace_back("z2-z4.ext", io::to_json(t.extension(1)));
        files.emplace_back("z2-z4.twr", io::to_json(t));
        auto ctx = make_context(s.cover);
        files.emplace_back("flat_bundle.pkg", io::to_json(descent_chain(ctx, flat_hexagon_cocycle(s.nerve, Rational(1, 3)))));
        files.emplace_back("hexcycle.chn", io::to_json(hexagon_cycle(s.complex)));
    } else if (name == "tetra") {
        auto s = tetrahedron_stars();
        files.emplace_back("tetra.cplx", io::to_json(*s.complex));
        files.emplace_back("tetra.cov", io::to_json(s.cover));
        files.emplace_back("z.grp", io::to_json(FgAbelianGroup::integers()));
    } else if (name == "rp2") {
        auto s = projective_plane_good();
        files.emplace_back("rp2.cplx", io::to_json(*projective_plane()));
        files.emplace_back("rp2.cov", io::to_json(s.cover));
        files.emplace_back("z.grp", io::to_json(FgAbelianGroup::integers()));
        files.emplace_back("z2.grp", io::to_json(z2));
        Cochain w = CohomologyGroup(s.nerve.complex_ptr(), z2, 1).generators().at(0);
        files.emplace_back("rp2-dbl.trn", io::to_json(transitions_from_cocycle(w), true));
        io::json w1 = io::to_json(w);
        w1["cover"] = io::to_json(s.cover);
        files.emplace_back("rp2-w1.coc", w1);
        files.emplace_back("z2-z4.ses", io::to_json(doubling_sequence()));
        files.emplace_back("z2-z4.ext", io::to_json(cyclic_tower(1).extension(1)));
        files.emplace_back("z2-z8.twr", io::to_json(cyclic_tower(2)));
    } else if (name == "torus") {
        auto t = torus();
        const auto& s = t.space;
        files.emplace_back("torus.cplx", io::to_json(*s.complex));
        files.emplace_back("torus.cov", io::to_json(s.cover));
        files.emplace_back("z.grp", io::to_json(FgAbelianGroup::integers()));
        files.emplace_back("torus.chn", io::to_json(surface_cycle(s.complex)));
        Cochain c = flat_torus_cocycle(s.nerve, Rational(1, 5));
        files.emplace_back("gerbe.coc", io::to_json(c));
        files.emplace_back("gerbe.pkg", io::to_json(descent_chain(make_context(s.cover), c)));
    } else {
        throw CLI::ValidationError("fixtures", "unknown fixture '" + name + "' (expected circle, tetra, rp2 or torus)");
    }
    return files;
}

inline void run_fixtures(const Job& job, Report& r)
{
    std::filesystem::path dir = job.out_path.empty() ? std::filesystem::path(".") : std::filesystem::path(job.out_path);
    std::filesystem::create_directories(dir);
    for (const auto& [file, doc] : fixture_files(job.inputs[0])) {
        io::save((dir / file).string(), doc);
        r.body << "wrote " << file << " (" << doc.at("kind").get<std::string>() << ")\n";
    }
}

// --- entry point -------------------------------------------------------------------

/// Returns 0 on success, 1 on a domain error, 2 on a usage error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Obstructions to lifting bundles through towers of central extensions, and the descent data of the "
                 "resulting torsor towers",
                 "torsor"};
    app.require_subcommand(1);
    Job job;
    std::string verify = "fast";

    auto common = [&](CLI::App* sub, int files, const std::vector<std::string>& names) {
        sub->add_option("files", job.inputs, "input files: " + CLI::detail::join(names, ", "))
            ->required()
            ->expected(files)
            ->check(CLI::ExistingFile);
        sub->add_option("--out", job.out_path, "write a machine-readable JSON result to this path");
        sub->add_option("--verify", verify, "verification level")->check(CLI::IsMember({"fast", "full"}));
    };
    auto check_deg = [&](CLI::App* sub) {
        sub->add_option("--max-check-degree", job.max_check_degree, "highest degree checked for cover goodness")
            ->check(CLI::NonNegativeNumber);
    };

    auto* coh = app.add_subcommand("cohomology", "cohomology of a complex, or Cech cohomology of a cover");
    common(coh, 2, {"complex or cover", "group"});
    coh->add_option("-p,--degree", job.degree, "cohomological degree")->required()->check(CLI::NonNegativeNumber);
    check_deg(coh);
    auto* obs = app.add_subcommand("obstruct", "obstruction to lifting transitions through one central extension");
    common(obs, 3, {"cover", "transitions", "extension"});
    check_deg(obs);
    auto* tow = app.add_subcommand("tower", "obstruction sequence through a tower of central extensions");
    common(tow, 3, {"cover", "transitions", "tower"});
    check_deg(tow);
    auto* boc = app.add_subcommand("bockstein", "connecting map of a short exact coefficient sequence");
    common(boc, 2, {"cochain", "short exact sequence"});
    auto* des = app.add_subcommand("descent", "descent package of a Q/Z-valued Cech cocycle");
    common(des, 2, {"cover", "cocycle"});
    auto* cur = app.add_subcommand("curvature", "curvature of a package");
    common(cur, 1, {"package"});
    auto* hol = app.add_subcommand("holonomy", "holonomy of a package along a closed cycle");
    common(hol, 2, {"package", "cycle"});
    auto* fix = app.add_subcommand("fixtures", "write built-in spaces and data (circle, tetra, rp2, torus)");
    fix->add_option("name", job.inputs, "fixture name")->required()->expected(1);
    fix->add_option("--out", job.out_path, "output directory (default: current directory)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    job.verify = verify == "full" ? Verify::Full : Verify::Fast;
    job.subcommand = app.get_subcommands().front()->get_name();

    static const std::map<std::string, std::function<void(const Job&, Report&)>> handlers{
        {"cohomology", run_cohomology}, {"obstruct", run_obstruct}, {"tower", run_tower},
        {"bockstein", run_bockstein},   {"descent", run_descent},   {"curvature", run_curvature},
        {"holonomy", run_holonomy},     {"fixtures", run_fixtures}};

    Report report;
    try {
        handlers.at(job.subcommand)(job, report);
    } catch (const CLI::ValidationError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << to_string(ErrorCode::ParseError) << ": " << e.what() << "\n";
        return 1;
    }
    out << report.str();
    return report.failed() ? 1 : 0;
}

} // namespace torsor::cli
