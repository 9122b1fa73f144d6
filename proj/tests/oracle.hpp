// Test-side schoolbook polynomial arithmetic: dense coefficient arrays with
// naive loops, independent of the sparse jet engine it checks.
#pragma once

#include <vector>

#include "crfuchs/jet.hpp"

namespace crfuchs::testing {

struct DensePoly {
    std::vector<int> caps; // per-variable degree caps
    int total_cap = 0;
    std::vector<GaussianRational> c; // row-major over the cap box

    size_t cells() const
    {
        size_t n = 1;
        for (int d : caps) n *= static_cast<size_t>(d + 1);
        return n;
    }
    size_t index(const std::vector<int>& e) const
    {
        size_t idx = 0;
        for (size_t i = 0; i < caps.size(); ++i) idx = idx * (caps[i] + 1) + e[i];
        return idx;
    }
    bool in_box(const std::vector<int>& e) const
    {
        int t = 0;
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] > caps[i]) return false;
            t += e[i];
        }
        return t <= total_cap;
    }
    // odometer over the cap box; f(e) for every cell
    template <typename F>
    void for_each(F&& f) const
    {
        std::vector<int> e(caps.size(), 0);
        while (true) {
            f(e);
            size_t v = 0;
            while (v < e.size()) {
                if (e[v] < caps[v]) {
                    ++e[v];
                    break;
                }
                e[v] = 0;
                ++v;
            }
            if (v == e.size()) break;
        }
    }

    static DensePoly zero(std::vector<int> caps_, int total)
    {
        DensePoly p;
        p.caps = std::move(caps_);
        p.total_cap = total;
        p.c.assign(p.cells(), GaussianRational(0));
        return p;
    }

    static DensePoly from_jet(const Jet& a)
    {
        DensePoly p = zero(a.trunc().var_caps, a.trunc().total_cap);
        for (const auto& [e, s] : a.terms()) {
            std::vector<int> ei(e.begin(), e.end());
            p.c[p.index(ei)] = s.rational();
        }
        return p;
    }

    GaussianRational at(const std::vector<int>& e) const
    {
        return in_box(e) ? c[index(e)] : GaussianRational(0);
    }

    bool matches(const Jet& a) const
    {
        bool ok = true;
        for_each([&](const std::vector<int>& e) {
            if (!ok || !in_box(e)) return;
            Jet::Mono m(e.begin(), e.end());
            Scalar s = a.coeff(m);
            GaussianRational want = c[index(e)];
            GaussianRational got = s.is_zero() ? GaussianRational(0) : s.rational();
            if (!(want == got)) ok = false;
        });
        return ok;
    }
};

inline DensePoly oracle_add(const DensePoly& a, const DensePoly& b)
{
    DensePoly r = DensePoly::zero(a.caps, std::min(a.total_cap, b.total_cap));
    for (size_t i = 0; i < a.caps.size(); ++i)
        r.caps[i] = std::min(a.caps[i], b.caps[i]);
    r.c.assign(r.cells(), GaussianRational(0));
    r.for_each([&](const std::vector<int>& e) {
        if (r.in_box(e)) r.c[r.index(e)] = a.at(e) + b.at(e);
    });
    return r;
}

inline DensePoly oracle_mul(const DensePoly& a, const DensePoly& b)
{
    DensePoly r = DensePoly::zero(a.caps, std::min(a.total_cap, b.total_cap));
    for (size_t i = 0; i < a.caps.size(); ++i)
        r.caps[i] = std::min(a.caps[i], b.caps[i]);
    r.c.assign(r.cells(), GaussianRational(0));
    a.for_each([&](const std::vector<int>& ea) {
        if (a.at(ea).is_zero()) return;
        b.for_each([&](const std::vector<int>& eb) {
            if (b.at(eb).is_zero()) return;
            std::vector<int> e(ea.size());
            for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            if (r.in_box(e)) r.c[r.index(e)] += a.at(ea) * b.at(eb);
        });
    });
    return r;
}

inline DensePoly oracle_pow(const DensePoly& a, int k)
{
    DensePoly r = DensePoly::zero(a.caps, a.total_cap);
    std::vector<int> zero(a.caps.size(), 0);
    r.c[r.index(zero)] = GaussianRational(1);
    for (int i = 0; i < k; ++i) r = oracle_mul(r, a);
    return r;
}

inline DensePoly oracle_compose(const DensePoly& outer, const std::vector<DensePoly>& inners)
{
    DensePoly r = DensePoly::zero(inners[0].caps, inners[0].total_cap);
    for (const auto& in : inners) {
        r.total_cap = std::min(r.total_cap, in.total_cap);
        for (size_t i = 0; i < r.caps.size(); ++i) r.caps[i] = std::min(r.caps[i], in.caps[i]);
    }
    r.c.assign(r.cells(), GaussianRational(0));
    outer.for_each([&](const std::vector<int>& e) {
        if (!outer.in_box(e)) return;
        GaussianRational coeff = outer.at(e);
        if (coeff.is_zero()) return;
        DensePoly term = DensePoly::zero(r.caps, r.total_cap);
        std::vector<int> zero(r.caps.size(), 0);
        term.c[term.index(zero)] = coeff;
        for (size_t v = 0; v < e.size(); ++v)
            if (e[v] > 0) term = oracle_mul(term, oracle_pow(inners[v], e[v]));
        for (size_t i = 0; i < r.c.size(); ++i) r.c[i] += term.c[i];
    });
    return r;
}

// b with a*b = 1: graded-order recurrence b[e] = (delta_e0 - sum a[f] b[e-f]) / a[0]
inline DensePoly oracle_reciprocal(const DensePoly& a)
{
    DensePoly r = DensePoly::zero(a.caps, a.total_cap);
    std::vector<int> zero(a.caps.size(), 0);
    GaussianRational a0 = a.at(zero);
    // enumerate cells in graded order
    std::vector<std::vector<int>> cells;
    a.for_each([&](const std::vector<int>& e) {
        if (a.in_box(e)) cells.push_back(e);
    });
    std::sort(cells.begin(), cells.end(), [](const auto& x, const auto& y) {
        int tx = 0, ty = 0;
        for (int v : x) tx += v;
        for (int v : y) ty += v;
        if (tx != ty) return tx < ty;
        return x < y;
    });
    for (const auto& e : cells) {
        GaussianRational s = e == zero ? GaussianRational(1) : GaussianRational(0);
        // subtract sum над 0 < f <= e of a[f] r[e-f]
        std::vector<int> f(e.size(), 0);
        while (true) {
            bool nonzero_f = false;
            for (int v : f) nonzero_f |= v != 0;
            if (nonzero_f) {
                std::vector<int> d(e.size());
                for (size_t i = 0; i < e.size(); ++i) d[i] = e[i] - f[i];
                if (a.in_box(f)) s -= a.at(f) * r.at(d);
            }
            size_t v = 0;
            while (v < f.size()) {
                if (f[v] < e[v]) {
                    ++f[v];
                    break;
                }
                f[v] = 0;
                ++v;
            }
            if (v == f.size()) break;
        }
        r.c[r.index(e)] = s / a0;
    }
    return r;
}

} // namespace crfuchs::testing
