#include "doctest.h"

#include "crfuchs/io.hpp"
#include "crfuchs/random_gen.hpp"

using namespace crfuchs;

TEST_CASE("jet serialization is bit-exact in rational mode")
{
    RandomGen rng(3);
    VarsPtr vars = make_vars({"z", "w"});
    Truncation t = Truncation::of({5, 7}, 9);
    Jet a(vars, t);
    for (int i = 0; i < 30; ++i) {
        Jet::Mono e(2);
        e[0] = static_cast<unsigned char>(rng.pick(0, 5));
        e[1] = static_cast<unsigned char>(rng.pick(0, 7));
        a.add_term(e, Scalar(rng.grat()));
    }
    Json j = jet_to_json(a);
    Jet b = jet_from_json(j);
    CHECK(a == b);
    CHECK(jet_to_json(b).dump() == j.dump());
}

TEST_CASE("hypersurface and ODE files round trip")
{
    RealAdmissibleForm h = random_fuchsian_hypersurface(2, 77);
    Json j = hypersurface_to_json(h);
    HypersurfaceFile f = hypersurface_from_json(j);
    REQUIRE(f.form == "real");
    CHECK(f.real.m == h.m);
    CHECK(f.real.eps == h.eps);
    CHECK(f.real.h.size() == h.h.size());
    for (const auto& [kl, s] : h.h) CHECK(f.real.slice(kl.first, kl.second) == s);
    CHECK(hypersurface_to_json(f.real).dump() == j.dump());

    SingularODE e = random_fuchsian_ode(2, 78);
    Json je = ode_to_json(e);
    SingularODE e2 = ode_from_json(je);
    CHECK(e2.m == e.m);
    CHECK(e2.Phi == e.Phi.truncated(e2.Phi.trunc()));
}

TEST_CASE("map and bb files round trip")
{
    SingularODE es = model_ode(2);
    NormalizedMap H = random_compatible_map(es, 79, 4);
    Json jm = map_to_json(H);
    MapFile mf = map_from_json(jm);
    REQUIRE(mf.kind == "normalized");
    CHECK(mf.normalized.f == H.f);
    CHECK(mf.normalized.g0 == H.g0);
    CHECK(mf.normalized.g == H.g);

    BBSystem sys = random_bb_system(2, 80, true, 6, 3);
    Json jb = bb_to_json(sys);
    BBSystem sys2 = bb_from_json(jb);
    CHECK(sys2.n == sys.n);
    for (int i = 0; i < sys.n; ++i) CHECK(sys2.F[i] == sys.F[i]);
}

TEST_CASE("parse errors carry their own type")
{
    CHECK_THROWS_AS(hypersurface_from_json(Json{{"format", "bogus"}}), ParseError);
    Json j;
    j["format"] = "crfuchs-ode";
    j["version"] = 999;
    CHECK_THROWS_AS(ode_from_json(j), ParseError);
}

TEST_CASE("float conversion and numeric order reads")
{
    Jet a(make_vars({"u"}), Truncation::of({4}, 4));
    a.add_term(Jet::Mono(1, 2), Scalar::rat(1, 3));
    Jet f = jet_to_float(a);
    CHECK(f.terms().begin()->second.is_float());
    CHECK(numeric_order(f, 1e-12) == 2);
    Jet tiny = f;
    tiny.add_term(Jet::Mono(1, 0), Scalar(std::complex<double>(1e-15, 0)));
    CHECK(numeric_order(tiny, 1e-12) == 2); // the tiny term is treated as zero
}
