#include "doctest.h"

#include "crfuchs/hypersurface.hpp"
#include "crfuchs/random_gen.hpp"

using namespace crfuchs;

namespace {

Jet ujet(std::vector<std::pair<int, long>> terms, int cap)
{
    static VarsPtr uv = make_vars({"u"});
    Jet j(uv, Truncation::of({cap}, cap));
    for (auto [d, c] : terms) {
        Jet::Mono e(1, static_cast<unsigned char>(d));
        j.add_term(e, Scalar(c));
    }
    return j;
}

} // namespace

TEST_CASE("validation of the model and of broken forms")
{
    RealAdmissibleForm h = model_hypersurface(2, 1);
    CHECK(validate(h).ok());

    RealAdmissibleForm bad = h;
    bad.set(2, 3, ujet({{1, 1}}, bad.u_cap));
    bad.set(3, 2, ujet({{1, 2}}, bad.u_cap)); // reality breach: should be the conjugate
    ValidationReport r = validate(bad);
    CHECK(!r.ok());
    CHECK(r.joined().find("reality") != std::string::npos);

    RealAdmissibleForm shape = h;
    shape.set(1, 2, ujet({{0, 1}}, shape.u_cap));
    ValidationReport r2 = validate(shape);
    CHECK(!r2.ok());
    CHECK(r2.joined().find("admissible-shape") != std::string::npos);
}

TEST_CASE("nonminimality order from raw series")
{
    static VarsPtr vars = make_vars({"z", "zb", "u"});
    Truncation t = Truncation::of({4, 4, 6}, 10);
    auto raw = [&](std::vector<std::tuple<int, int, int, long>> terms) {
        Jet F(vars, t);
        for (auto [a, b, c, v] : terms) {
            Jet::Mono e(3);
            e[0] = static_cast<unsigned char>(a);
            e[1] = static_cast<unsigned char>(b);
            e[2] = static_cast<unsigned char>(c);
            F.add_term(e, Scalar(v));
        }
        return F;
    };
    CHECK(nonminimality_order_raw(raw({{1, 1, 2, 1}})) == 2);
    CHECK(nonminimality_order_raw(raw({{1, 1, 1, 1}, {2, 2, 1, 1}})) == 1);
    CHECK(nonminimality_order_raw(raw({{1, 1, 3, 1}, {2, 2, 4, 1}})) == 3);
    CHECK_THROWS(nonminimality_order_raw(raw({})));
    // exceptional point: no |z|^2 slot at the leading u-order
    CHECK_THROWS(ingest_raw(raw({{2, 2, 2, 1}})));
    // ingest normalizes 2c to +-1 when it is a rational square
    RealAdmissibleForm h = ingest_raw(raw({{1, 1, 2, 2}})); // v = 2 u^2 |z|^2: 2c = 4 = 2^2
    CHECK(h.m == 2);
    CHECK(h.eps == 1);
}

TEST_CASE("model conversion round trips")
{
    for (int m = 1; m <= 3; ++m) {
        RealAdmissibleForm h = model_hypersurface(m, 1);
        h.set(2, 2, ujet({{std::max(0, m - 1), 1}}, h.u_cap));
        if (m >= 2) {
            h.set(2, 3, ujet({{2 * m - 2, 1}}, h.u_cap));
            h.set(3, 2, ujet({{2 * m - 2, 1}}, h.u_cap));
        }
        ComplexDefiningForm t = real_to_complex(h);
        CHECK(validate(t).ok());
        RealAdmissibleForm h2 = complex_to_real(t);
        for (const auto& [kl, s] : h.h) {
            Jet got = h2.slice(kl.first, kl.second);
            Truncation tr = s.trunc().min_with(got.trunc());
            CHECK(got.truncated(tr) == s.truncated(tr));
        }
        ExponentialForm x = to_exponential(t);
        ComplexDefiningForm t2 = from_exponential(x);
        for (int k = 2; k <= t.index_cap; ++k)
            for (int l = 2; l <= t.index_cap; ++l) {
                Jet a = t.slice(k, l), b = t2.slice(k, l);
                Truncation tr = a.trunc().min_with(b.trunc());
                CHECK(a.truncated(tr) == b.truncated(tr));
            }
    }
}

TEST_CASE("fuchsian checker: m=1 automatic; instantiated bounds at m=2")
{
    RandomGen dummy(1);
    RealAdmissibleForm any1 = random_fuchsian_hypersurface(1, 3);
    CHECK(check_fuchsian_hypersurface(any1).fuchsian);

    RealAdmissibleForm h = model_hypersurface(2, 1);
    h.set(2, 2, ujet({{1, 1}}, h.u_cap)); // ord 1 >= m-1 = 1
    FuchsVerdict v = check_fuchsian_hypersurface(h);
    CHECK(v.fuchsian);

    RealAdmissibleForm bad = model_hypersurface(2, 1);
    bad.set(2, 2, ujet({{0, 1}}, bad.u_cap)); // ord 0 < 1
    FuchsVerdict vb = check_fuchsian_hypersurface(bad);
    CHECK(!vb.fuchsian);
    REQUIRE(vb.first_violation() != nullptr);
    CHECK(vb.first_violation()->subject == "h[2,2]");
    CHECK(vb.first_violation()->describe() == "ord h[2,2] = 0 < m-1 = 1");
}

TEST_CASE("undecidable at low caps")
{
    RealAdmissibleForm h = model_hypersurface(3, 1);
    h.index_cap = 4; // below 2m+4 = 10: deep conditions unrepresentable
    FuchsVerdict v = check_fuchsian_hypersurface(h);
    CHECK(!v.decidable);
}

TEST_CASE("dilations")
{
    RealAdmissibleForm h = model_hypersurface(3, 1);
    h.set(2, 2, ujet({{2, 1}}, h.u_cap));
    // m=3, lambda=2 forces mu^{-2} = 4, mu = 1/2
    GaussianRational lam{mpq_class(2)};
    GaussianRational mu{mpq_class(1, 2)};
    RealAdmissibleForm hd = apply_dilation(h, lam, mu);
    CHECK(validate(hd).ok());
    CHECK(hd.m == 3);
    CHECK(check_fuchsian_hypersurface(hd).fuchsian == check_fuchsian_hypersurface(h).fuchsian);
    // identity dilation at m=1 forces |lambda| = 1
    RealAdmissibleForm h1 = model_hypersurface(1, 1);
    CHECK_NOTHROW(apply_dilation(h1, GaussianRational(1), GaussianRational(1)));
    CHECK_THROWS(apply_dilation(h1, GaussianRational(mpq_class(2)), GaussianRational(1)));
    // constraint violation at m=3
    CHECK_THROWS(apply_dilation(h, lam, GaussianRational(mpq_class(1, 3))));
}

TEST_CASE("reality is preserved by conversions on random Fuchsian forms")
{
    for (int m = 1; m <= 2; ++m)
        for (int i = 0; i < 3; ++i) {
            RealAdmissibleForm h = random_fuchsian_hypersurface(m, 100 * m + i);
            CHECK(validate(h).ok());
            ComplexDefiningForm t = real_to_complex(h, 3 * m + 6);
            RealAdmissibleForm h2 = complex_to_real(t, 3 * m + 6);
            CHECK(validate(h2).ok());
            CHECK(nonminimality_order(h2) == m);
        }
}
