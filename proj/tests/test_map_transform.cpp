#include "doctest.h"

#include "crfuchs/mapping_solver.hpp"
#include "crfuchs/random_gen.hpp"

using namespace crfuchs;

namespace {

Jet wjet(std::vector<std::tuple<int, long, long>> terms, int cap)
{
    Jet j(w_space(), Truncation::of({cap}, cap));
    for (auto [b, num, den] : terms) {
        Jet::Mono e(1, static_cast<unsigned char>(b));
        j.add_term(e, Scalar::rat(num, den));
    }
    return j;
}

Jet mjet(std::vector<std::tuple<int, int, long, long>> terms, int cap)
{
    Jet j(map_space(), Truncation::of({cap, cap}, cap));
    for (auto [a, b, num, den] : terms) {
        Jet::Mono e(2);
        e[0] = static_cast<unsigned char>(a);
        e[1] = static_cast<unsigned char>(b);
        j.add_term(e, Scalar::rat(num, den));
    }
    return j;
}

} // namespace

TEST_CASE("validate_map catches the structural constraints")
{
    int m = 2;
    GeneralMap id;
    id.m = m;
    Truncation t = Truncation::of({8, 8}, 8);
    id.F = Jet::variable(map_space(), t, 0);
    id.G = Jet::variable(map_space(), t, 1);
    CHECK(validate_map(id, m).ok());

    GeneralMap bad = id;
    bad.G += mjet({{1, 2, 1, 1}}, 8); // G_z = O(w^2) violates O(w^{m+1}) at m = 2
    ValidationReport r = validate_map(bad, m);
    CHECK(!r.ok());
    CHECK(r.joined().find("G_z") != std::string::npos);

    GeneralMap imag = id;
    imag.G = Jet::variable(map_space(), t, 1).scaled(Scalar::i());
    ValidationReport ri = validate_map(imag, m);
    CHECK(!ri.ok());
    CHECK(ri.joined().find("real") != std::string::npos);
}

TEST_CASE("factor splits a dilation off and reproduces the map")
{
    // dilation at m = 3: lambda = 2, mu = 1/2
    Dilation d{GaussianRational(mpq_class(2)), GaussianRational(mpq_class(1, 2)), 3, 1};
    CHECK(validate(d).ok());
    GeneralMap psi = dilation_to_general(d, 8);
    auto [H0, back] = factor(psi, 3, 1);
    CHECK(H0.f.is_zero());
    CHECK(H0.g0.is_zero());
    CHECK(H0.g.is_zero());
    CHECK(back.lambda == d.lambda);
    CHECK(back.mu == d.mu);

    // normalized map factors into itself with the identity dilation
    NormalizedMap N = NormalizedMap::identity(2, 8);
    N.f = mjet({{0, 1, 1, 2}, {2, 1, 1, 3}}, 8);
    N.g0 = wjet({{1, 1, 4}}, 8);
    N.g = mjet({{1, 1, -1, 5}}, 8);
    GeneralMap G = normalized_to_general(N);
    auto [H1, psi1] = factor(G, 2, 1);
    CHECK(psi1.lambda == GaussianRational(1));
    CHECK(psi1.mu == GaussianRational(1));
    CHECK(H1.f == N.f.truncated(H1.f.trunc()));
    CHECK(H1.g0 == N.g0.truncated(H1.g0.trunc()));
    CHECK(H1.g == N.g.truncated(H1.g.trunc()));
}

TEST_CASE("identity map fixes every Phi")
{
    SingularODE es = random_fuchsian_ode(2, 17);
    NormalizedMap id = NormalizedMap::identity(2, 12);
    SingularODE e = push_forward(es, id);
    CHECK(e.Phi == es.Phi);
    CHECK(verify_transformation_identity(es, es, id).zero);
}

TEST_CASE("g0 perturbation breaks the model identity")
{
    int m = 2;
    NormalizedMap H = NormalizedMap::identity(m, 12);
    H.g0 = wjet({{1, 1, 1}}, 12);
    IdentityResidual r = verify_transformation_identity(model_ode(m), model_ode(m), H);
    CHECK(!r.zero);
}

TEST_CASE("compatible maps transform the model into a Fuchsian ODE")
{
    for (int m = 1; m <= 3; ++m) {
        SingularODE es = model_ode(m);
        NormalizedMap H = random_compatible_map(es, 3000 + m, 2 * m + 2);
        CHECK(validate(H).ok());
        SingularODE e = push_forward(es, H);
        CHECK(validate(e).ok());
        CHECK(check_fuchsian_ode(e).fuchsian);
        CHECK(verify_transformation_identity(es, e, H).zero);
    }
}

TEST_CASE("functoriality through composition of general maps")
{
    int m = 2;
    SingularODE es = model_ode(m);
    NormalizedMap H1 = random_compatible_map(es, 41, 4);
    SingularODE mid = push_forward(es, H1);
    NormalizedMap H2 = random_compatible_map(mid, 42, 4);
    SingularODE far = push_forward(mid, H2);

    // push_forward(push_forward(Phi, H1), H2) = push_forward(Phi, H1 o H2)
    GeneralMap comp = compose_maps(normalized_to_general(H1), normalized_to_general(H2));
    auto [H12, psi] = factor(comp, m, 1);
    CHECK(psi.lambda == GaussianRational(1));
    SingularODE far2 = push_forward(es, H12);
    Truncation tr = far.Phi.trunc().min_with(far2.Phi.trunc());
    CHECK(far.Phi.truncated(tr) == far2.Phi.truncated(tr));
}
