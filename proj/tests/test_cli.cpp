#include "oracle.hpp"
#include "torsor/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace torsor;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

class Workdir {
public:
    Workdir()
    {
        auto tag = ::testing::UnitTest::GetInstance()->current_test_info()->name();
        dir_ = fs::temp_directory_path() / (std::string("torsor_cli_") + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    ~Workdir() { fs::remove_all(dir_); }

    std::string path(const std::string& file) const { return (dir_ / file).string(); }

    Outcome run(std::vector<std::string> args) const
    {
        std::ostringstream out, err;
        int code = cli::run(args, out, err);
        return {code, out.str(), err.str()};
    }

    void fixtures(const std::string& name) const
    {
        auto r = run({"fixtures", name, "--out", dir_.string()});
        ASSERT_EQ(r.code, 0) << r.err;
    }

    void write(const std::string& file, const std::string& text) const { std::ofstream(path(file)) << text; }

private:
    fs::path dir_;
};

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

bool contains(const std::string& haystack, const std::string& needle) { return haystack.find(needle) != std::string::npos; }

} // namespace

TEST(Cli, CohomologyOfProjectivePlane)
{
    Workdir w;
    w.fixtures("rp2");
    auto r = w.run({"cohomology", w.path("rp2.cplx"), w.path("z2.grp"), "-p", "2"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.out, "H^2 = Z/2\n")) << r.out;
    auto z = w.run({"cohomology", w.path("rp2.cplx"), w.path("z.grp"), "-p", "2"});
    EXPECT_TRUE(contains(z.out, "H^2 = Z/2\n")) << z.out;
    auto one = w.run({"cohomology", w.path("rp2.cplx"), w.path("z.grp"), "-p", "1"});
    EXPECT_TRUE(contains(one.out, "H^1 = 0\n")) << one.out;
}

TEST(Cli, TowerOverCircle)
{
    Workdir w;
    w.fixtures("circle");
    auto r = w.run({"tower", w.path("circle.cov"), w.path("dbl.trn"), w.path("z2-z4.twr")});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(first_line(r.out), "LiftedTo(1), classes: [0]");
}

TEST(Cli, TowerBlockedOnProjectivePlane)
{
    Workdir w;
    w.fixtures("rp2");
    auto r = w.run({"tower", w.path("rp2.cov"), w.path("rp2-dbl.trn"), w.path("z2-z8.twr")});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(first_line(r.out), "BlockedAt(1)")) << r.out;
}

TEST(Cli, HolonomyOfFlatBundle)
{
    Workdir w;
    w.fixtures("circle");
    auto r = w.run({"holonomy", w.path("flat_bundle.pkg"), w.path("hexcycle.chn")});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(contains(r.out, "holonomy = 1/3 (mod 1)")) << r.out;
}

TEST(Cli, GerbeHolonomyOnTorus)
{
    Workdir w;
    w.fixtures("torus");
    auto r = w.run({"holonomy", w.path("gerbe.pkg"), w.path("torus.chn")});
    EXPECT_EQ(r.code, 0) << r.err;
    // the independent pairing of the fixture cocycle with the nerve image of the cycle
    auto t = fixtures::torus();
    Rational expected =
        frac(oracle::nerve_pairing(fixtures::flat_torus_cocycle(t.space.nerve, Rational(1, 5)), t.space.cover,
                                   fixtures::surface_cycle(t.space.complex)));
    EXPECT_TRUE(contains(r.out, "holonomy = " + expected.str() + " (mod 1)")) << r.out;
}

TEST(Cli, DescentCurvatureAndBockstein)
{
    Workdir w;
    w.fixtures("torus");
    auto d = w.run({"descent", w.path("torus.cov"), w.path("gerbe.coc"), "--out", w.path("out.pkg"), "--verify", "full"});
    EXPECT_EQ(d.code, 0) << d.err;
    ASSERT_TRUE(fs::exists(w.path("out.pkg")));
    auto c = w.run({"curvature", w.path("out.pkg")});
    EXPECT_EQ(c.code, 0) << c.err;
    EXPECT_FALSE(contains(c.out, "[FAILED]"));

    Workdir v;
    v.fixtures("rp2");
    auto b = v.run({"bockstein", v.path("rp2-w1.coc"), v.path("z2-z4.ses")});
    EXPECT_EQ(b.code, 0) << b.err;
    auto o = v.run({"obstruct", v.path("rp2.cov"), v.path("rp2-dbl.trn"), v.path("z2-z4.ext"), "--verify", "full"});
    EXPECT_EQ(o.code, 0) << o.err;
    EXPECT_FALSE(contains(o.out, "[FAILED]"));
}

TEST(Cli, ReportsListVerification)
{
    Workdir w;
    w.fixtures("circle");
    auto r = w.run({"tower", w.path("circle.cov"), w.path("dbl.trn"), w.path("z2-z4.twr")});
    EXPECT_TRUE(contains(r.out, "verification:")) << r.out;
    EXPECT_TRUE(contains(r.out, "[ok]")) << r.out;
}

TEST(Cli, ExitCodes)
{
    Workdir w;
    w.fixtures("circle");
    w.fixtures("tetra");
    EXPECT_EQ(w.run({}).code, 2);
    EXPECT_EQ(w.run({"frobnicate"}).code, 2);
    EXPECT_EQ(w.run({"cohomology", w.path("circle.cplx"), w.path("z.grp")}).code, 2); // missing -p
    EXPECT_EQ(w.run({"holonomy", w.path("missing.pkg"), w.path("hexcycle.chn")}).code, 2);
    EXPECT_EQ(w.run({"fixtures", "klein"}).code, 2);
    EXPECT_EQ(w.run({"cohomology", w.path("circle.cplx"), w.path("z.grp"), "-p", "1", "--verify", "slow"}).code, 2);
    EXPECT_EQ(w.run({"--help"}).code, 0);

    // domain errors
    auto bad_cover = w.run({"descent", w.path("tetra.cov"), w.path("tetra.cov")});
    EXPECT_EQ(bad_cover.code, 1);
    EXPECT_TRUE(contains(bad_cover.err, "ParseError")) << bad_cover.err;

    w.write("broken.json", "{ not json");
    auto broken = w.run({"curvature", w.path("broken.json")});
    EXPECT_EQ(broken.code, 1);
    EXPECT_TRUE(contains(broken.err, "ParseError")) << broken.err;

    // a 1-cocycle the tetrahedron star cover cannot carry a package for
    Cochain zero(fixtures::tetrahedron_stars().nerve.complex_ptr(), 1, Coefficients::circle());
    io::save(w.path("zero.coc"), io::to_json(zero));
    auto not_good = w.run({"descent", w.path("tetra.cov"), w.path("zero.coc")});
    EXPECT_EQ(not_good.code, 1);
    EXPECT_TRUE(contains(not_good.err, "CoverNotGood")) << not_good.err;
}

TEST(Cli, Determinism)
{
    Workdir w;
    w.fixtures("rp2");
    w.fixtures("circle");
    const std::vector<std::vector<std::string>> jobs{
        {"cohomology", w.path("rp2.cplx"), w.path("z2.grp"), "-p", "2"},
        {"tower", w.path("circle.cov"), w.path("dbl.trn"), w.path("z2-z4.twr")},
        {"holonomy", w.path("flat_bundle.pkg"), w.path("hexcycle.chn")},
        {"tower", w.path("rp2.cov"), w.path("rp2-dbl.trn"), w.path("z2-z8.twr")}};
    for (const auto& job : jobs) {
        auto a = w.run(job);
        auto b = w.run(job);
        EXPECT_EQ(a.code, b.code);
        EXPECT_EQ(a.out, b.out);
    }
}

TEST(Cli, FixtureFilesAreDeterministic)
{
    for (const char* name : {"circle", "tetra", "rp2", "torus"}) {
        auto a = cli::fixture_files(name);
        auto b = cli::fixture_files(name);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].second.dump(), b[i].second.dump()) << a[i].first;
    }
}

// --- round trips ----------------------------------------------------------------

TEST(RoundTrip, ComplexesCoversChains)
{
    oracle::Rng rng(61);
    for (int trial = 0; trial < 10; ++trial) {
        auto k = oracle::random_complex(rng, oracle::uniform(rng, 3, 7), 3);
        EXPECT_TRUE(io::complex_from_json(io::to_json(*k)) == *k);
    }
    auto s = fixtures::projective_plane_good();
    Cover c = io::cover_from_json(io::to_json(s.cover));
    EXPECT_EQ(io::to_json(c), io::to_json(s.cover));
    auto t = fixtures::torus();
    Chain z = fixtures::surface_cycle(t.space.complex);
    EXPECT_EQ(io::chain_from_json(io::to_json(z), t.space.complex), z);
    // the explicit star-cover spelling
    io::json star{{"kind", "cover"}, {"base", io::to_json(*fixtures::tetrahedron_boundary())}, {"star_cover", true}};
    EXPECT_EQ(io::cover_from_json(star).size(), 4u);
}

TEST(RoundTrip, GroupsAndCochains)
{
    oracle::Rng rng(62);
    for (const auto& g : {FgAbelianGroup::integers(), FgAbelianGroup::cyclic(6), FgAbelianGroup(std::vector<Integer>{2, 4})})
        EXPECT_EQ(io::group_from_json(io::to_json(g)), g);
    auto k = fixtures::projective_plane();
    for (int trial = 0; trial < 20; ++trial) {
        FgAbelianGroup coeffs = oracle::random_coefficients(rng);
        Cochain x = oracle::random_cochain(rng, k, oracle::uniform(rng, 0, 2), coeffs);
        EXPECT_EQ(io::cochain_from_json(io::to_json(x), k), x);
    }
    for (const auto& coeffs : {Coefficients::circle(), Coefficients::rational()}) {
        Cochain x(k, 1, coeffs);
        for (std::size_t i = 0; i < x.size(); ++i) x.set_at(i, {Rational(oracle::uniform(rng, -9, 9), oracle::uniform(rng, 1, 7))});
        EXPECT_EQ(io::cochain_from_json(io::to_json(x), k), x);
    }
}

TEST(RoundTrip, ExtensionsTowersTransitions)
{
    oracle::Rng rng(63);
    for (int trial = 0; trial < 10; ++trial) {
        auto base = oracle::random_base(rng);
        auto kernel = oracle::random_kernel(rng);
        CentralExtension e(base.group, kernel, oracle::random_factor_set(rng, base, kernel));
        io::json j = io::to_json(e);
        EXPECT_EQ(io::to_json(io::extension_from_json(j)), j);
        io::json g = io::to_json(e.total());
        EXPECT_EQ(io::to_json(io::finite_group_from_json(g)), g);
    }
    ExtensionTower t = fixtures::cyclic_tower(3);
    io::json tj = io::to_json(t);
    EXPECT_EQ(io::to_json(io::tower_from_json(tj)), tj);
    EXPECT_EQ(io::to_json(io::tower_from_json(tj.at("extensions"))), tj); // bare array form

    io::json sj = io::to_json(fixtures::doubling_sequence());
    EXPECT_EQ(io::to_json(io::ses_from_json(sj)), sj);

    auto s = fixtures::projective_plane_good();
    for (int trial = 0; trial < 5; ++trial) {
        auto base = oracle::random_base(rng);
        TransitionCocycle g = oracle::random_transitions(rng, s.nerve.complex_ptr(), base.group);
        io::json j = io::to_json(g, true);
        EXPECT_EQ(io::to_json(io::transitions_from_json(j, s.nerve.complex_ptr(), base.group), true), j);
    }
}

TEST(RoundTrip, PackagesAndDoubleCochains)
{
    oracle::Rng rng(64);
    auto t = fixtures::torus();
    auto ctx = make_context(t.space.cover);
    DoubleCochain x = oracle::random_double(rng, ctx, 1, 1);
    EXPECT_EQ(io::double_cochain_from_json(io::to_json(x), ctx), x);

    DelignePackage p = descent_chain(ctx, fixtures::flat_torus_cocycle(t.space.nerve, Rational(2, 5)));
    io::json j = io::to_json(p);
    DelignePackage q = io::package_from_json(j);
    EXPECT_EQ(q.log(), p.log());
    EXPECT_EQ(q.layers(), p.layers());
    EXPECT_EQ(io::to_json(q), j);
}

TEST(RoundTrip, MalformedDocuments)
{
    auto code = [](const std::function<void()>& f) {
        try {
            f();
        } catch (const Error& e) {
            return e.code();
        } catch (const nlohmann::json::exception&) {
            return ErrorCode::ParseError;
        }
        return ErrorCode::InvalidCover; // any non-parse code marks "did not throw"
    };
    EXPECT_EQ(code([] { io::complex_from_json(io::json{{"kind", "cover"}}); }), ErrorCode::ParseError);
    EXPECT_EQ(code([] { io::rational_from_json(io::json{{"num", 1}, {"den", 0}}); }), ErrorCode::ParseError);
    EXPECT_EQ(code([] { io::complex_from_json(io::json{{"kind", "complex"}, {"vertices", 2}, {"simplices", {{0, 5}}}}); }),
              ErrorCode::VertexOutOfRange);
}
