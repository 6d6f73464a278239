#include <cmath>

#include "doctest.h"

#include "isospectra/errors.hpp"
#include "isospectra/report.hpp"

using namespace isospectra;

namespace {

cplx at(const json& j) { return {j[0].get<double>(), j[1].get<double>()}; }

}  // namespace

TEST_CASE("spec json round trip") {
    const FamilySpec s{Family::AskeyWilson, 3, {0.5, cplx(1.0, 0.25), 0.8, 2.5}, {}, 1.7};
    const FamilySpec r = spec_from_json(spec_to_json(s));
    CHECK(r.family == s.family);
    CHECK(r.N == s.N);
    CHECK(r.alphas == s.alphas);
    CHECK(r.betas.empty());
    REQUIRE(r.q);
    CHECK(*r.q == cplx(1.7));

    const FamilySpec g = spec_from_json(json::parse(R"({"family":"ghyp","N":2,"alphas":[1.5],"betas":[[2.5,0]]})"));
    CHECK(g.alphas == CVec{1.5});
    CHECK(g.betas == CVec{2.5});
    CHECK_FALSE(g.q);

    CHECK_THROWS_AS(spec_from_json(json::parse("[]")), InvalidParameters);
    CHECK_THROWS_AS(spec_from_json(json::parse(R"({"N":2})")), InvalidParameters);
    CHECK_THROWS_AS(spec_from_json(json::parse(R"({"family":"ghyp"})")), InvalidParameters);
    CHECK_THROWS_AS(spec_from_json(json::parse(R"({"family":"ghyp","N":2,"alphas":"x"})")), InvalidParameters);
    CHECK_THROWS_AS(spec_from_json(json::parse(R"({"family":"hermite","N":2})")), InvalidParameters);
}

TEST_CASE("complex values serialize as pairs") {
    CHECK(to_json(cplx(1, -2)) == json::array({1.0, -2.0}));
    CMat M(1, 2);
    M << cplx(1, 0), cplx(0, 3);
    CHECK(to_json(M) == json::parse("[[[1.0,0.0],[0.0,3.0]]]"));
}

TEST_CASE("zeros command") {
    // z - alpha/beta for N = 1.
    const CommandResult r = cmd_zeros({Family::GHyp, 1, {2.0}, {3.0}, std::nullopt});
    CHECK(r.exit_code == 0);
    CHECK(std::abs(at(r.report["zeros"][0]) - 2.0 / 3.0) <= 1e-14);

    const CommandResult b = cmd_zeros({Family::GBasicHyp, 1, {0.5}, {2.0}, 2.0});
    CHECK(b.report["zeros"].size() == 1);

    // alpha = beta collapses to (1 - z)^N.
    CHECK_THROWS_AS(cmd_zeros({Family::GHyp, 2, {2.0}, {2.0}, std::nullopt}), RepeatedZeros);
    CHECK(RepeatedZeros("x").exit_code() == 3);
}

TEST_CASE("matrix command on the Jacobi reference case") {
    const CommandResult r = cmd_matrix({Family::Jacobi, 2, {0.0, 0.0}, {}, std::nullopt});
    CHECK(r.exit_code == 0);
    CHECK(r.report["pass"].get<bool>());
    const json& ref = r.report["reference_spectrum"];
    REQUIRE(ref.size() == 2);
    CVec want{1.0, 4.0}, got{at(ref[0]), at(ref[1])};
    CHECK(multiset_match(got, want) <= 1e-12);
    CHECK(r.report["residuals"]["spectral"].get<double>() <= 1e-6);
    CHECK(r.report["matrix"].size() == 2);
}

TEST_CASE("verify fills every residual") {
    for (auto f : {Family::GHyp, Family::Wilson, Family::QRacah}) {
        std::mt19937_64 rng(40);
        const int na = f == Family::GHyp ? 2 : 4, nb = f == Family::GHyp ? 1 : 0;
        const CommandResult r = cmd_verify(random_spec(f, na, nb, 4, rng));
        INFO(family_name(f));
        CHECK(r.exit_code == 0);
        const json& res = r.report["residuals"];
        for (const char* k : {"spectral", "trace", "det", "identity", "equilibrium", "defining_eq"}) {
            INFO(k);
            REQUIRE(res.contains(k));
            CHECK(res[k].get<double>() <= 1e-8);
        }
    }
    const CommandResult j = cmd_verify({Family::Jacobi, 3, {0.5, 1.5}, {}, std::nullopt});
    CHECK(j.report["residuals"]["equilibrium"].is_null());
    CHECK(j.exit_code == 0);

    Tolerances impossible;
    impossible.identity = 0;
    impossible.spectral = 0;
    std::mt19937_64 rng(41);
    const CommandResult bad = cmd_verify(random_spec(Family::Wilson, 4, 0, 5, rng), impossible);
    CHECK(bad.exit_code == 1);
    CHECK_FALSE(bad.report["pass"].get<bool>());
}

TEST_CASE("q near one is rejected") {
    CHECK_THROWS_AS(cmd_zeros({Family::AskeyWilson, 2, {0.5, 1.0, 0.8, 2.5}, {}, 1.0 + 1e-14}), InvalidParameters);
    CHECK_THROWS_AS(cmd_zeros({Family::GHyp, 2, {1.0}, {0.0}, std::nullopt}), InvalidParameters);
}

TEST_CASE("evolve command") {
    const FamilySpec w{Family::Wilson, 3, {0.6, 0.9, 1.2, 1.4}, {}, std::nullopt};
    EvolveOptions o;
    o.t1 = 0;
    const CommandResult z = cmd_evolve(w, o);
    CHECK(z.report["max_deviation"].get<double>() == 0.0);
    CHECK(z.exit_code == 0);

    o = {};
    const CommandResult r = cmd_evolve(w, o);
    CHECK(r.exit_code == 0);
    CHECK(r.report["times"].size() == r.report["ode_zeros"].size());
    CHECK(r.report["times"].size() == r.report["oracle_zeros"].size());
    CHECK(r.report["times"].back().get<double>() == doctest::Approx(0.5));
    CHECK(r.report["max_deviation"].get<double>() <= 1e-6);
    CHECK(dump(cmd_evolve(w, o).report) == dump(r.report));

    // A single zero at equilibrium stays put.
    const FamilySpec g{Family::GHyp, 1, {1.5}, {2.5}, std::nullopt};
    o.perturb = 0;
    const CommandResult still = cmd_evolve(g, o);
    for (const auto& v : still.report["ode_zeros"]) CHECK(std::abs(at(v[0]) - 0.6) <= 1e-12);

    o.steps = 0;
    CHECK_THROWS_AS(cmd_evolve(g, o), InvalidParameters);
}

TEST_CASE("sweep") {
    SweepOptions o;
    o.family = Family::QRacah;
    o.draws = 6;
    o.seed = 9;
    o.nmax = 4;
    const CommandResult a = cmd_sweep(o), b = cmd_sweep(o);
    CHECK(dump(a.report) == dump(b.report));
    CHECK(a.report["passed"].get<int>() + a.report["failed"].get<int>() == 6);
    CHECK(a.report["results"].size() == 6);
    CHECK(a.exit_code == (a.report["failed"].get<int>() == 0 ? 0 : 1));
    for (int d = 0; d < 6; ++d) CHECK(a.report["results"][d]["spec"]["N"].get<int>() == 2 + d % 3);

    o.family = Family::GHyp;
    o.draws = 8;
    const CommandResult g = cmd_sweep(o);
    const int shapes[4][2] = {{1, 1}, {2, 1}, {2, 2}, {3, 2}};
    for (int d = 0; d < 8; ++d) {
        const json& spec = g.report["results"][d]["spec"];
        CHECK(int(spec["alphas"].size()) == shapes[d % 4][0]);
        CHECK(int(spec["betas"].size()) == shapes[d % 4][1]);
    }

    o.draws = 0;
    const CommandResult e = cmd_sweep(o);
    CHECK(e.exit_code == 0);
    CHECK(e.report["results"].empty());
    CHECK(e.report["worst"].empty());

    o.draws = -1;
    CHECK_THROWS_AS(cmd_sweep(o), InvalidParameters);
}

TEST_CASE("safe-box draws") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        const FamilySpec s = random_spec(Family::GBasicHyp, 2, 2, 3, rng);
        for (const auto& a : s.alphas) CHECK((a.real() >= 0.5 && a.real() < 3.0 && a.imag() == 0));
        for (const auto& b : s.betas) CHECK((b.real() >= 1.5 && b.real() < 4.0));
        CHECK((s.q->real() >= 1.3 && s.q->real() < 2.5));
    }
    std::mt19937_64 r1(5), r2(5);
    CHECK(unit_uniform(r1) == double(r2() >> 11) * 0x1.0p-53);
    CHECK(sample_points(7) == sample_points(7));
    for (const auto& x : sample_points(7)) CHECK((std::abs(x) >= 0.3 && std::abs(x) < 2.0));
}

TEST_CASE("error report") {
    const json e = error_report("InvalidParameters", "bad");
    CHECK(e["error"]["kind"] == "InvalidParameters");
    CHECK(e["pass"] == false);
    CHECK(dump(e).back() == '\n');
}
