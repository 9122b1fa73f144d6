#include "crfuchs/random_gen.hpp"

namespace crfuchs {

long RandomGen::pick(long lo, long hi)
{
    std::uniform_int_distribution<long> d(lo, hi);
    return d(eng_);
}

bool RandomGen::coin(double p)
{
    std::uniform_real_distribution<double> d(0.0, 1.0);
    return d(eng_) < p;
}

GaussianRational RandomGen::grat(bool real_only, bool nonzero)
{
    auto part = [&](bool may_zero) {
        long num = pick(-10, 10);
        if (!may_zero && num == 0) num = 1;
        long den = pick(1, 10);
        mpq_class q(num, den);
        q.canonicalize();
        return q;
    };
    mpq_class re = part(!nonzero);
    mpq_class im = real_only ? mpq_class(0) : part(true);
    if (nonzero && re == 0 && im == 0) re = 1;
    return {re, im};
}

int fuchsian_bound_h(int m, int k, int l)
{
    if (k > l) std::swap(k, l);
    int b = 0;
    if (k == 2 && l == 2)
        b = m - 1;
    else if (k == 2 && l == 3)
        b = 2 * m - 2;
    else if (k == 3 && l == 3)
        b = 2 * m - 2;
    else if (k == 2 && l >= 4 && l <= 2 * m + 1)
        b = 2 * m - l + 2;
    else if (k >= 3 && l >= 3 && k + l >= 7 && k + l <= 2 * m + 4)
        b = 2 * m - k - l + 5;
    return std::max(0, b);
}

int fuchsian_bound_phi(int m, int k, int l)
{
    int b = 0;
    if (k == 0 && l == 2)
        b = m - 1;
    else if (k == 0 && l == 3)
        b = 2 * m - 2;
    else if (k == 1 && l == 2)
        b = m - 1;
    else if (k == 1 && l == 3)
        b = 2 * m - 2;
    else if (k == 0 && l >= 4 && l <= 2 * m + 1)
        b = 2 * m - l + 2;
    else if (l == 2 && k >= 2 && k <= 2 * m + 1)
        b = 2 * m - k;
    else if (k >= 1 && l >= 3 && k + l >= 5 && k + l <= 2 * m + 2)
        b = 2 * m - k - l + 3;
    return std::max(0, b);
}

RealAdmissibleForm random_fuchsian_hypersurface(int m, std::uint64_t seed)
{
    RandomGen rng(seed);
    RealAdmissibleForm h = model_hypersurface(m, 1);
    static VarsPtr uv = make_vars({"u"});
    Truncation tu = Truncation::of({h.u_cap}, h.u_cap);
    for (int k = 2; k <= h.index_cap; ++k)
        for (int l = k; l <= h.index_cap; ++l) {
            if (!rng.coin(0.45)) continue;
            int lo = fuchsian_bound_h(m, k, l);
            if (lo > h.u_cap) continue;
            Jet s(uv, tu);
            int nterms = static_cast<int>(rng.pick(1, 2));
            for (int t = 0; t < nterms; ++t) {
                int ord = static_cast<int>(rng.pick(lo, std::min(h.u_cap, lo + 2)));
                Jet::Mono e(1, static_cast<unsigned char>(ord));
                s.add_term(e, Scalar(rng.grat(k == l, true)));
            }
            if (s.is_zero()) continue;
            if (k == l) {
                // diagonal slices must be real series
                Jet sr(uv, tu);
                for (const auto& [e, c] : s.terms())
                    sr.add_term(e, Scalar(GaussianRational(c.rational().re())));
                if (sr.is_zero()) continue;
                h.set(k, k, sr);
            } else {
                h.set(k, l, s);
                h.set(l, k, s.conjugated());
            }
        }
    return h;
}

SingularODE random_fuchsian_ode(int m, std::uint64_t seed)
{
    RandomGen rng(seed);
    SingularODE e = model_ode(m);
    const Truncation& t = e.Phi.trunc();
    for (int k = 0; k <= t.var_caps[0]; ++k)
        for (int l = 2; l <= t.var_caps[2]; ++l) {
            if (k + l > t.total_cap) continue;
            if (!rng.coin(0.4)) continue;
            int lo = fuchsian_bound_phi(m, k, l);
            // mirror the reality-transferred strengthening of hypersurface
            // ODEs: ord Phi_{k2} matches ord Phi_{0,k+2}
            if (l == 2 && k <= 1) lo = std::max(lo, fuchsian_bound_phi(m, 0, k + 2));
            int hi = t.total_cap - k - l;
            if (lo > hi) continue;
            int ord = static_cast<int>(rng.pick(lo, std::min(hi, lo + 2)));
            Jet::Mono mo(3, 0);
            mo[0] = static_cast<unsigned char>(k);
            mo[1] = static_cast<unsigned char>(ord);
            mo[2] = static_cast<unsigned char>(l);
            e.Phi.add_term(mo, Scalar(rng.grat()));
        }
    return e;
}

CauchyData random_cauchy_data(int m, std::uint64_t seed, int degree_cap)
{
    RandomGen rng(seed);
    CauchyData d;
    d.m = m;
    static VarsPtr wv = make_vars({"w"});
    int cap = degree_cap + 4;
    Truncation tw = Truncation::of({cap}, cap);
    auto gen = [&](bool g0_reality) {
        Jet j(wv, tw);
        for (int b = 1; b <= degree_cap; ++b) {
            if (!rng.coin(0.55)) continue;
            bool force_real = g0_reality && b <= m - 1;
            Jet::Mono e(1, static_cast<unsigned char>(b));
            j.add_term(e, Scalar(rng.grat(force_real)));
        }
        return j;
    };
    d.f0 = gen(false);
    d.f1 = gen(false);
    d.g0 = gen(true);
    d.g1 = gen(false);
    return d;
}

NormalizedMap random_compatible_map(const SingularODE& e_star, std::uint64_t seed,
                                    int degree_cap)
{
    CauchyData d = random_cauchy_data(e_star.m, seed, degree_cap);
    return complete_normalized_map(e_star, d);
}

BBSystem random_bb_system(int n, std::uint64_t seed, bool nonresonant, int x_cap, int y_cap)
{
    RandomGen rng(seed);
    BBSystem sys;
    sys.n = n;
    const VarsPtr& vs = bb_space(n);
    std::vector<int> caps(n + 1, y_cap);
    caps[0] = x_cap;
    Truncation t = Truncation::of(caps, x_cap + y_cap);
    sys.F.assign(n, Jet::zero(vs, t));
    // principal matrix: lower triangular; nonresonant diagonals are
    // non-integer rationals (denominator > 1) or negative integers
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            GaussianRational a;
            if (i == j) {
                if (nonresonant) {
                    long num = rng.pick(-9, 9);
                    long den = rng.pick(2, 7);
                    if (num % den == 0) num += 1;
                    mpq_class q(num, den);
                    q.canonicalize();
                    if (q.get_den() == 1) q = mpq_class(2 * num + 1, 2);
                    a = GaussianRational(q);
                } else {
                    a = rng.grat(true, true);
                }
            } else {
                if (!rng.coin(0.5)) continue;
                a = rng.grat(true);
            }
            if (a.is_zero()) continue;
            Jet::Mono e(n + 1, 0);
            e[1 + j] = 1;
            sys.F[i].add_term(e, Scalar(a));
        }
    // higher-order terms
    for (int i = 0; i < n; ++i) {
        int extra = static_cast<int>(rng.pick(1, 3));
        for (int q = 0; q < extra; ++q) {
            Jet::Mono e(n + 1, 0);
            e[0] = static_cast<unsigned char>(rng.pick(0, std::min(3, x_cap)));
            int deg = static_cast<int>(rng.pick(e[0] == 0 ? 2 : 1, y_cap));
            for (int d = 0; d < deg; ++d) e[1 + rng.pick(0, n - 1)] += 1;
            bool within = true;
            for (int v = 0; v <= n; ++v)
                if (e[v] > static_cast<unsigned char>(caps[v])) within = false;
            if (!within) continue;
            sys.F[i].add_term(e, Scalar(rng.grat()));
        }
    }
    return sys;
}

} // namespace crfuchs
