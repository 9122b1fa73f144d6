#include "doctest.h"

#include "crfuchs/cauchy_system.hpp"
#include "crfuchs/random_gen.hpp"

using namespace crfuchs;

namespace {

Truncation deep_trunc(int m) { return Truncation::of({2 * m + 2, 4 * m + 10, 2 * m + 2}, 4 * m + 12); }

} // namespace

TEST_CASE("model-to-model system vanishes at Y = 0 and satisfies the bounds")
{
    for (int m = 1; m <= 2; ++m) {
        SingularODE mod = model_ode(m, deep_trunc(m));
        CauchySystem cs = derive_cauchy_system(mod, mod);
        for (int r = 0; r < 4; ++r) CHECK(cs.coeff(r, CoeffKey{}) == nullptr);
        CHECK(check_TS_orders(cs, m).all_hold);
        // identity data solves
        CauchyData zero;
        zero.m = m;
        Truncation tz = Truncation::of({10}, 10);
        zero.f0 = zero.f1 = zero.g0 = zero.g1 = Jet::zero(w_space(), tz);
        auto res = cauchy_residual(cs, zero);
        for (int r = 0; r < 4; ++r) CHECK(res[r].is_zero());
    }
}

TEST_CASE("random Fuchsian pair: orders, reduction, and the BB round trip")
{
    const int m = 2;
    SingularODE es = random_fuchsian_ode(m, 505);
    es.Phi = embed(es.Phi, ode_space(), deep_trunc(m));
    NormalizedMap H0 = random_compatible_map(es, 606, 2 * m + 2);
    SingularODE e = push_forward(es, H0);

    CauchySystem cs = derive_cauchy_system(es, e);
    TSOrderReport ts = check_TS_orders(cs, m);
    CHECK(ts.all_hold);

    CauchyData data = cauchy_data_of(H0);
    data.m = m;
    auto res = cauchy_residual(cs, data); // exact only below the symbol-degree cap
    (void)res;

    BBReduction red = reduce_to_bb(cs, data, m);
    CHECK(red.shifted_orders.all_hold);

    BBSystem bb = red.shifted_system();
    const int NU = 3;
    FormalSolution fs = formal_solve(bb, NU);
    REQUIRE(fs.complete);
    // reconstruct the Cauchy data from P + w^{2m} (U0 + y)
    const Jet* want[4] = {&data.g0, &data.g1, &data.f0, &data.f1};
    for (int i = 0; i < 4; ++i) {
        Truncation tr = Truncation::of({2 * m + NU}, 2 * m + NU);
        Jet rec(w_space(), tr);
        rec += red.P[i].truncated(tr);
        Jet u(w_space(), tr);
        u.add_term(Jet::Mono(1, 0), Scalar(red.U0[i]));
        for (const auto& [e2, c] : fs.y[i].terms()) u.add_term(e2, c);
        rec += shift_by_var_power(u, 0, 2 * m).truncated(tr);
        CHECK(rec == embed(*want[i], w_space(), tr));
    }
}

TEST_CASE("non-Fuchsian pair raises the negative-power error")
{
    const int m = 2;
    SingularODE bad = model_ode(m, deep_trunc(m));
    Jet::Mono mo(3, 0);
    mo[2] = 2;
    bad.Phi.add_term(mo, Scalar(1)); // ord Phi02 = 0 < m-1
    CauchySystem cs = derive_cauchy_system(bad, bad);
    CauchyData zero;
    zero.m = m;
    Truncation tz = Truncation::of({10}, 10);
    zero.f0 = zero.f1 = zero.g0 = zero.g1 = Jet::zero(w_space(), tz);
    CHECK_THROWS_WITH_AS(reduce_to_bb(cs, zero, m),
                         doctest::Contains("negative power of w"), std::runtime_error);
}

TEST_CASE("parameter budget fails gracefully")
{
    const int m = 2;
    SingularODE mod = model_ode(m, deep_trunc(m));
    CauchyDeriveOptions opt;
    opt.param_budget = 1;
    CHECK_THROWS_WITH_AS(derive_cauchy_system(mod, mod, opt),
                         doctest::Contains("budget"), std::runtime_error);
}
