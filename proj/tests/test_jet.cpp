#include "doctest.h"

#include <random>

#include "crfuchs/fixed_point.hpp"
#include "crfuchs/jet.hpp"
#include "oracle.hpp"

using namespace crfuchs;
using namespace crfuchs::testing;

namespace {

VarsPtr zw()
{
    static VarsPtr v = make_vars({"z", "w"});
    return v;
}

Jet jet_zw(std::vector<std::tuple<int, int, long, long>> terms, int cap, int total = -1)
{
    Jet j(zw(), Truncation::of({cap, cap}, total < 0 ? 2 * cap : total));
    for (auto [a, b, num, den] : terms) {
        Jet::Mono e(2);
        e[0] = static_cast<unsigned char>(a);
        e[1] = static_cast<unsigned char>(b);
        j.add_term(e, Scalar::rat(num, den));
    }
    return j;
}

Jet random_jet(std::mt19937_64& rng, const VarsPtr& vars, const Truncation& t, double density)
{
    std::uniform_real_distribution<double> u(0, 1);
    std::uniform_int_distribution<long> num(-10, 10), den(1, 10);
    Jet j(vars, t);
    std::vector<int> e(vars->size(), 0);
    while (true) {
        int tot = 0;
        for (int v : e) tot += v;
        if (tot <= t.total_cap && u(rng) < density) {
            Jet::Mono m(e.begin(), e.end());
            mpq_class re(num(rng), den(rng)), im(num(rng), den(rng));
            re.canonicalize();
            im.canonicalize();
            j.add_term(m, Scalar(GaussianRational(re, im)));
        }
        size_t v = 0;
        while (v < e.size()) {
            if (e[v] < t.var_caps[v]) {
                ++e[v];
                break;
            }
            e[v] = 0;
            ++v;
        }
        if (v == e.size()) break;
    }
    return j;
}

} // namespace

TEST_CASE("cancellation and identities")
{
    Jet a = jet_zw({{1, 0, 1, 1}, {0, 1, 1, 1}}, 4);  // z + w
    Jet b = jet_zw({{1, 0, 1, 1}, {0, 1, -1, 1}}, 4); // z - w
    Jet s = a + b;
    CHECK(s == jet_zw({{1, 0, 2, 1}}, 4)); // 2z
    CHECK(a + Jet::zero(zw(), a.trunc()) == a);
}

TEST_CASE("geometric series inverse: (1+z+z^2+...)(1-z) = 1")
{
    const int N = 7;
    Jet geo(zw(), Truncation::of({N, 0}, N));
    for (int k = 0; k <= N; ++k) {
        Jet::Mono e(2);
        e[0] = static_cast<unsigned char>(k);
        geo.add_term(e, Scalar(1));
    }
    Jet one_minus = jet_zw({{0, 0, 1, 1}, {1, 0, -1, 1}}, N);
    Jet prod = mul(geo, one_minus.truncated(geo.trunc()));
    CHECK(prod == Jet::constant(zw(), prod.trunc(), Scalar(1)));
    // and reciprocal reproduces the alternating series
    Jet opl = jet_zw({{0, 0, 1, 1}, {1, 0, 1, 1}}, N).truncated(Truncation::of({N, 0}, N));
    Jet rec = reciprocal(opl);
    Jet check = mul(rec, opl);
    CHECK(check == Jet::constant(zw(), check.trunc(), Scalar(1)));
}

TEST_CASE("truncation absorbs top powers")
{
    Jet zN = jet_zw({{4, 0, 1, 1}}, 4, 4);
    Jet z1 = jet_zw({{1, 0, 1, 1}}, 4, 4);
    CHECK(mul(zN, z1).is_zero());
}

TEST_CASE("compose: square of a sum and identity substitution")
{
    Jet outer(zw(), Truncation::of({4, 4}, 6)); // y^2 in variable slot 0
    {
        Jet::Mono e(2);
        e[0] = 2;
        outer.add_term(e, Scalar(1));
    }
    Jet zpw = jet_zw({{1, 0, 1, 1}, {0, 1, 1, 1}}, 4, 6);
    Jet dummy = jet_zw({}, 4, 6);
    Jet got = compose(outer, {zpw, dummy});
    CHECK(got == jet_zw({{2, 0, 1, 1}, {1, 1, 2, 1}, {0, 2, 1, 1}}, 4, 6));

    std::mt19937_64 rng(7);
    Jet f = random_jet(rng, zw(), Truncation::of({3, 3}, 5), 0.5);
    Jet idz = jet_zw({{1, 0, 1, 1}}, 3, 5);
    Jet idw = jet_zw({{0, 1, 1, 1}}, 3, 5);
    CHECK(compose(f, {idz, idw}) == f);
    Jet with_const = jet_zw({{0, 0, 1, 1}}, 3, 5);
    CHECK_THROWS(compose(f, {with_const, idw}));
}

TEST_CASE("exp/log round trips mod truncation")
{
    std::mt19937_64 rng(11);
    Truncation t = Truncation::of({4, 4}, 6);
    Jet a = random_jet(rng, zw(), t, 0.4);
    Jet::Mono zero(2, 0);
    if (!a.coeff(zero).is_zero()) a.add_term(zero, -a.coeff(zero));
    Jet one = Jet::constant(zw(), t, Scalar(1));
    CHECK(exp_trunc(log_trunc(one + a)) == one + a);
    CHECK(log_trunc(exp_trunc(a)) == a);
    CHECK(exp_trunc(Jet::zero(zw(), t)) == one);
    CHECK(log_trunc(one).is_zero());
}

TEST_CASE("derivative rules")
{
    Jet a = jet_zw({{2, 1, 1, 1}}, 5); // z^2 w
    Jet da = derive(a, 0);
    CHECK(da == jet_zw({{1, 1, 2, 1}}, 5, 9).truncated(da.trunc()));
    Jet w3 = jet_zw({{0, 3, 1, 1}}, 5);
    CHECK(derive(w3, 0).is_zero());

    // Leibniz on random jets
    std::mt19937_64 rng(23);
    Truncation t = Truncation::of({4, 4}, 6);
    for (int i = 0; i < 25; ++i) {
        Jet x = random_jet(rng, zw(), t, 0.4);
        Jet y = random_jet(rng, zw(), t, 0.4);
        Jet lhs = derive(mul(x, y), 0);
        Jet rhs = mul(derive(x, 0), y) + mul(x, derive(y, 0));
        CHECK(lhs == rhs.truncated(lhs.trunc()));
    }
}

TEST_CASE("ring axioms on random jets")
{
    std::mt19937_64 rng(5);
    Truncation t = Truncation::of({3, 3}, 5);
    for (int i = 0; i < 40; ++i) {
        Jet a = random_jet(rng, zw(), t, 0.45);
        Jet b = random_jet(rng, zw(), t, 0.45);
        Jet c = random_jet(rng, zw(), t, 0.45);
        CHECK(mul(a, b) == mul(b, a));
        CHECK(mul(mul(a, b), c) == mul(a, mul(b, c)));
        CHECK(mul(a, b + c) == mul(a, b) + mul(a, c));
    }
}

TEST_CASE("solve_fixed_point: y = x + y^2/2")
{
    static VarsPtr xy = make_vars({"x", "y"});
    Truncation t = Truncation::of({6, 6}, 6);
    Jet G(xy, t);
    {
        Jet::Mono e(2);
        e[0] = 1;
        G.add_term(e, Scalar(1));
        Jet::Mono e2(2);
        e2[1] = 2;
        G.add_term(e2, Scalar::rat(1, 2));
    }
    Jet y = solve_fixed_point({G}, 1)[0];
    // y = x + x^2/2 + x^3/2 + 5x^4/8 + ...
    auto cf = [&](int k) {
        Jet::Mono e(2, 0);
        e[0] = static_cast<unsigned char>(k);
        return y.coeff(e);
    };
    CHECK(cf(1) == Scalar(1));
    CHECK(cf(2) == Scalar::rat(1, 2));
    CHECK(cf(3) == Scalar::rat(1, 2));
    CHECK(cf(4) == Scalar::rat(5, 8));

    // trivial case y = x
    Jet Gx(xy, t);
    {
        Jet::Mono e(2);
        e[0] = 1;
        Gx.add_term(e, Scalar(1));
    }
    Jet yx = solve_fixed_point({Gx}, 1)[0];
    CHECK(yx == Gx);
}

TEST_CASE("schoolbook oracle agreement on random jets")
{
    std::mt19937_64 rng(99);
    Truncation t = Truncation::of({4, 4}, 7);
    for (int i = 0; i < 30; ++i) {
        Jet a = random_jet(rng, zw(), t, 0.5);
        Jet b = random_jet(rng, zw(), t, 0.5);
        DensePoly da = DensePoly::from_jet(a), db = DensePoly::from_jet(b);
        CHECK(oracle_add(da, db).matches(a + b));
        CHECK(oracle_mul(da, db).matches(mul(a, b)));
    }
}

TEST_CASE("parallel product equals the serial reference")
{
    std::mt19937_64 rng(1234);
    Truncation t = Truncation::of({6, 6}, 10);
    for (int i = 0; i < 5; ++i) {
        Jet a = random_jet(rng, zw(), t, 0.8);
        Jet b = random_jet(rng, zw(), t, 0.8);
        CHECK(mul_serial(a, b) == mul_parallel(a, b));
    }
}

TEST_CASE("serialization helpers: slicing and division")
{
    Jet a = jet_zw({{2, 3, 5, 7}, {2, 1, 1, 2}, {0, 1, 3, 4}}, 5);
    Jet s = slice(a, {{0, 2}});
    CHECK(s.nvars() == 1);
    Jet::Mono e1(1, 3);
    CHECK(s.coeff(e1) == Scalar::rat(5, 7));
    Jet d = divide_by_var_power(jet_zw({{2, 1, 1, 1}, {3, 0, 1, 1}}, 5), 0, 2);
    CHECK(d == jet_zw({{0, 1, 1, 1}, {1, 0, 1, 1}}, 5, 8).truncated(d.trunc()));
    CHECK_THROWS(divide_by_var_power(jet_zw({{1, 0, 1, 1}}, 5), 0, 2));
}
