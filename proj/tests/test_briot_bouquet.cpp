#include "doctest.h"

#include <cmath>

#include "crfuchs/briot_bouquet.hpp"
#include "crfuchs/random_gen.hpp"

using namespace crfuchs;

namespace {

BBSystem scalar_system(std::vector<std::tuple<int, int, long, long>> terms, int xcap, int ycap)
{
    BBSystem sys;
    sys.n = 1;
    Truncation t = Truncation::of({xcap, ycap}, xcap + ycap);
    Jet F(bb_space(1), t);
    for (auto [i, j, num, den] : terms) {
        Jet::Mono e(2);
        e[0] = static_cast<unsigned char>(i);
        e[1] = static_cast<unsigned char>(j);
        F.add_term(e, Scalar::rat(num, den));
    }
    sys.F = {F};
    return sys;
}

} // namespace

TEST_CASE("closed-form recursions")
{
    // x y' = y/2: only y = 0
    BBSystem half = scalar_system({{0, 1, 1, 2}}, 10, 3);
    FormalSolution s1 = formal_solve(half, 10);
    CHECK(s1.complete);
    CHECK(s1.y[0].is_zero());

    // x y' = -y + x: y = x/2, terminating
    BBSystem affine = scalar_system({{0, 1, -1, 1}, {1, 0, 1, 1}}, 10, 3);
    FormalSolution s2 = formal_solve(affine, 10);
    CHECK(s2.complete);
    Jet expect(s2.y[0].vars(), s2.y[0].trunc());
    expect.add_term(Jet::Mono(1, 1), Scalar::rat(1, 2));
    CHECK(s2.y[0] == expect);

    // x y' = y + x: inconsistent at the resonant level k = 1
    BBSystem res = scalar_system({{0, 1, 1, 1}, {1, 0, 1, 1}}, 10, 3);
    FormalSolution s3 = formal_solve(res, 10);
    CHECK(!s3.complete);
    CHECK(s3.blocked_at == 1);
    ResonanceReport rr = analyze_resonances(res);
    REQUIRE(rr.resonances.size() == 1);
    CHECK(rr.resonances[0] == 1);
}

TEST_CASE("residual replay holds on random nonresonant systems")
{
    for (int i = 0; i < 10; ++i) {
        int n = 1 + i % 3;
        BBSystem sys = random_bb_system(n, 1000 + i, true, 12, 3);
        ResonanceReport rr = analyze_resonances(sys);
        CHECK(rr.resonances.empty());
        FormalSolution fs = formal_solve(sys, 12); // residual replayed internally
        CHECK(fs.complete);
        CHECK(fs.resonances.empty());
        // non-resonant uniqueness: a second run gives identical coefficients
        FormalSolution fs2 = formal_solve(sys, 12);
        for (int q = 0; q < n; ++q) CHECK(fs.y[q] == fs2.y[q]);
    }
}

TEST_CASE("linear singularity classification by pole order")
{
    static VarsPtr xv = make_vars({"x"});
    Truncation t = Truncation::of({4}, 4);
    auto one_by = [&](int pole) {
        LinearSingularSystem sys;
        sys.n = 1;
        sys.pole_order = pole;
        Jet b(xv, t);
        b.add_term(Jet::Mono(1, 0), Scalar(3));
        sys.numerator = {{b}};
        return sys;
    };
    CHECK(classify_linear(one_by(1)) == SingularityClass::Fuchsian);
    CHECK(classify_linear(one_by(2)) == SingularityClass::MeromorphicNonFuchsian);
    CHECK(classify_linear(one_by(0)) == SingularityClass::Nonsingular);
    // cancellation: x B / x^2 is a simple pole
    LinearSingularSystem c = one_by(2);
    Jet xb(xv, t);
    xb.add_term(Jet::Mono(1, 1), Scalar(3));
    c.numerator = {{xb}};
    CHECK(classify_linear(c) == SingularityClass::Fuchsian);
}

TEST_CASE("numeric integration of closed forms")
{
    IntegrateOptions opt;
    // x y' = y, y(1) = 1 -> y = x
    BBSystem lin = scalar_system({{0, 1, 1, 1}}, 6, 2);
    Trajectory tr = numeric_integrate(lin, {{1.0, 0.0}}, 1.0, 1e-4, opt);
    REQUIRE(!tr.truncated);
    for (const auto& p : tr.samples) CHECK(std::abs(p.y[0].real() - p.x) <= 1e-8 * p.x + 1e-14);

    // x y' = 2y, y(1) = 1 -> y = x^2
    BBSystem two = scalar_system({{0, 1, 2, 1}}, 6, 2);
    Trajectory tr2 = numeric_integrate(two, {{1.0, 0.0}}, 1.0, 1e-3, opt);
    for (const auto& p : tr2.samples)
        CHECK(std::abs(p.y[0].real() - p.x * p.x) <= 1e-7 * p.x * p.x + 1e-14);

    // x y' = 0: constant
    BBSystem zero = scalar_system({}, 6, 2);
    Trajectory tr3 = numeric_integrate(zero, {{0.25, 0.0}}, 1.0, 1e-3, opt);
    for (const auto& p : tr3.samples) CHECK(p.y[0].real() == doctest::Approx(0.25));
}

TEST_CASE("flatness bound on xy' = y and xy' = -y")
{
    BBSystem lin = scalar_system({{0, 1, 1, 1}}, 6, 2);
    FlatnessReport rep = flatness_experiment(lin, {{1.0, 0.0}}, 1.0, 1e-4);
    CHECK(rep.C == doctest::Approx(1.0));
    CHECK(rep.bound_holds);
    CHECK(rep.margin >= 1.0 - 1e-6);

    BBSystem neg = scalar_system({{0, 1, -1, 1}}, 6, 2);
    FlatnessReport rn = flatness_experiment(neg, {{1.0, 0.0}}, 1.0, 1e-2);
    CHECK(rn.bound_holds);
    CHECK(rn.margin >= 1.0); // y = 1/x: huge margin
}

TEST_CASE("formal solution agrees with the integrated trajectory")
{
    BBSystem sys = scalar_system({{0, 1, -1, 2}, {1, 0, 1, 1}, {1, 1, 1, 3}}, 14, 3);
    FormalSolution fs = formal_solve(sys, 14);
    REQUIRE(fs.complete);
    Trajectory tr = numeric_integrate(sys, {{eval(fs.y[0], {1e-2}).real(),
                                             eval(fs.y[0], {1e-2}).imag()}},
                                      1e-2, 1e-4);
    for (const auto& p : tr.samples) {
        std::complex<double> series_val = eval(fs.y[0], {std::complex<double>(p.x, 0)});
        CHECK(std::abs(series_val - p.y[0]) <= 1e-8 * std::abs(p.y[0]) + 1e-11);
    }
}
