// Benchmark of the series kernels: OpenMP-parallel Cauchy product against the
// serial reference, plus composition, on random exact jets.

#include <chrono>
#include <cstdio>
#include <random>

#include "crfuchs/jet.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace crfuchs;
using Clock = std::chrono::steady_clock;

namespace {

Jet random_jet(std::mt19937_64& rng, const VarsPtr& vars, const Truncation& t, double density)
{
    std::uniform_real_distribution<double> u(0, 1);
    std::uniform_int_distribution<long> num(-9, 9), den(1, 9);
    Jet j(vars, t);
    Jet::Mono e(vars->size(), 0);
    // enumerate the admissible box
    std::vector<int> caps = t.var_caps;
    std::function<void(size_t, int)> rec = [&](size_t v, int total) {
        if (v == e.size()) {
            if (u(rng) < density) {
                mpq_class re(num(rng), den(rng)), im(num(rng), den(rng));
                re.canonicalize();
                im.canonicalize();
                j.add_term(e, Scalar(GaussianRational(re, im)));
            }
            return;
        }
        for (int d = 0; d <= caps[v] && total + d <= t.total_cap; ++d) {
            e[v] = static_cast<unsigned char>(d);
            rec(v + 1, total + d);
        }
        e[v] = 0;
    };
    rec(0, 0);
    return j;
}

double ms(Clock::time_point a, Clock::time_point b)
{
    return std::chrono::duration<double, std::milli>(b - a).count();
}

} // namespace

int main(int argc, char** argv)
{
    int cap = argc > 1 ? std::atoi(argv[1]) : 10;
    double density = argc > 2 ? std::atof(argv[2]) : 0.6;
    std::mt19937_64 rng(12345);
    VarsPtr vars = make_vars({"x", "y", "z"});
    Truncation t = Truncation::of({cap, cap, cap}, cap + cap / 2);

    Jet a = random_jet(rng, vars, t, density);
    Jet b = random_jet(rng, vars, t, density);
    std::printf("operands: %zu and %zu terms, caps %d, total cap %d\n", a.size(), b.size(), cap,
                t.total_cap);
#ifdef _OPENMP
    std::printf("max threads: %d\n", omp_get_max_threads());
#endif

    auto t0 = Clock::now();
    Jet r1 = mul_serial(a, b);
    auto t1 = Clock::now();
    Jet r2 = mul_parallel(a, b);
    auto t2 = Clock::now();
    std::printf("mul_serial:   %8.2f ms  (%zu terms)\n", ms(t0, t1), r1.size());
    std::printf("mul_parallel: %8.2f ms  (%zu terms)  results equal: %s\n", ms(t1, t2),
                r2.size(), r1 == r2 ? "yes" : "NO");

    std::vector<Jet> inners;
    for (int i = 0; i < 3; ++i) {
        Jet v = Jet::variable(vars, t, i);
        Jet p = random_jet(rng, vars, t, density / 8);
        Jet::Mono zero(3, 0);
        if (!p.coeff(zero).is_zero()) p.add_term(zero, -p.coeff(zero));
        inners.push_back(v + p.scaled(Scalar::rat(1, 3)));
    }
    auto t3 = Clock::now();
    Jet c = compose(a, inners);
    auto t4 = Clock::now();
    std::printf("compose:      %8.2f ms  (%zu terms)\n", ms(t3, t4), c.size());
    return 0;
}
