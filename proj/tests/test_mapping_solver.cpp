#include "doctest.h"

#include "crfuchs/mapping_solver.hpp"
#include "crfuchs/random_gen.hpp"

using namespace crfuchs;

TEST_CASE("model to model solves to the identity")
{
    for (int m = 1; m <= 2; ++m) {
        SingularODE es = model_ode(m);
        MapSolveResult res = solve_formal_map(es, es);
        REQUIRE(std::holds_alternative<SolvedMap>(res));
        const SolvedMap& s = std::get<SolvedMap>(res);
        CHECK(s.H.f.is_zero());
        CHECK(s.H.g.is_zero());
        CHECK(s.H.g0.is_zero());
    }
}

TEST_CASE("round trip recovers a compatible map exactly")
{
    for (int m = 1; m <= 2; ++m) {
        SingularODE es = random_fuchsian_ode(m, 70 + m);
        NormalizedMap H0 = random_compatible_map(es, 71 + m, 2 * m + 2);
        SingularODE e = push_forward(es, H0);
        FreeParams fp = free_params_from(H0);
        MapSolveResult res = solve_formal_map(es, e, fp);
        REQUIRE(std::holds_alternative<SolvedMap>(res));
        const SolvedMap& s = std::get<SolvedMap>(res);
        CHECK(s.H.f == H0.f.truncated(s.H.f.trunc()));
        CHECK(s.H.g == H0.g.truncated(s.H.g.trunc()));
        CHECK(s.H.g0 == H0.g0.truncated(s.H.g0.trunc()));
        CHECK(verify_transformation_identity(es, e, s.H).zero);
    }
}

TEST_CASE("invariant low coefficients obstruct: model vs zeta^2 at m=2")
{
    SingularODE es = model_ode(2); // Phi* = w zeta^2
    SingularODE bad;
    bad.m = 2;
    bad.Phi = Jet(ode_space(), default_ode_truncation(2));
    Jet::Mono e(3, 0);
    e[2] = 2;
    bad.Phi.add_term(e, Scalar(1)); // Phi = zeta^2
    MapSolveResult res = solve_formal_map(es, bad);
    REQUIRE(std::holds_alternative<Obstruction>(res));
    CHECK(std::get<Obstruction>(res).order == 0);
}

TEST_CASE("completion clears the low zeta orders and feeds cauchy_data round trips")
{
    int m = 2;
    SingularODE es = model_ode(m);
    CauchyData d = random_cauchy_data(m, 123, 2 * m + 2);
    NormalizedMap H = complete_normalized_map(es, d);
    CHECK(validate(H).ok());
    CauchyData back = cauchy_data_of(H);
    Truncation tr = back.f0.trunc().min_with(d.f0.trunc());
    CHECK(back.f0.truncated(tr) == d.f0.truncated(tr));
    CHECK(back.g0.truncated(tr) == d.g0.truncated(tr));
    CHECK(back.g1.truncated(tr) == d.g1.truncated(tr));
    // the completed map transforms the model into a singular-form ODE
    CHECK_NOTHROW(push_forward(es, H));
}

TEST_CASE("map slot keys parse and print")
{
    MapSlot a{'f', 2, 1};
    CHECK(a.str() == "f:2,1");
    CHECK(MapSlot::parse("f:2,1") == a);
    MapSlot g0{'0', 0, 3};
    CHECK(g0.str() == "g0:3");
    CHECK(MapSlot::parse("g0:3") == g0);
    CHECK(!MapSlot::parse("nope"));
}
