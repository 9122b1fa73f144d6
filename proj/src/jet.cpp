#include "crfuchs/jet.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace crfuchs {

VarsPtr make_vars(std::vector<std::string> names)
{
    return std::make_shared<const std::vector<std::string>>(std::move(names));
}

Truncation Truncation::min_with(const Truncation& o) const
{
    if (var_caps.size() != o.var_caps.size())
        throw std::runtime_error("truncation arity mismatch");
    Truncation r;
    r.var_caps.resize(var_caps.size());
    for (size_t i = 0; i < var_caps.size(); ++i)
        r.var_caps[i] = std::min(var_caps[i], o.var_caps[i]);
    r.total_cap = std::min(total_cap, o.total_cap);
    return r;
}

Jet::Jet(VarsPtr vars, Truncation trunc) : vars_(std::move(vars)), trunc_(std::move(trunc))
{
    if (vars_ && trunc_.var_caps.size() != vars_->size())
        throw std::runtime_error("jet: caps arity does not match variable list");
}

Jet Jet::constant(const VarsPtr& vars, const Truncation& t, const Scalar& c)
{
    Jet j(vars, t);
    j.add_term(Mono(vars->size(), 0), c);
    return j;
}

Jet Jet::variable(const VarsPtr& vars, const Truncation& t, int idx)
{
    Jet j(vars, t);
    Mono e(vars->size(), 0);
    e[idx] = 1;
    j.add_term(e, Scalar(1));
    return j;
}

Jet Jet::monomial(const VarsPtr& vars, const Truncation& t, const Mono& e, const Scalar& c)
{
    Jet j(vars, t);
    j.add_term(e, c);
    return j;
}

int Jet::var_index(const std::string& name) const
{
    for (size_t i = 0; i < vars_->size(); ++i)
        if ((*vars_)[i] == name) return static_cast<int>(i);
    throw std::runtime_error("unknown variable: " + name);
}

Scalar Jet::coeff(const Mono& e) const
{
    auto it = terms_.find(e);
    return it == terms_.end() ? Scalar(0) : it->second;
}

void Jet::add_term(const Mono& e, const Scalar& c)
{
    if (c.is_zero() || !trunc_.admits(e)) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

int Jet::order() const
{
    if (terms_.empty()) return kInfOrder;
    const Mono& e = terms_.begin()->first; // graded order: first term is minimal
    return std::accumulate(e.begin(), e.end(), 0);
}

int Jet::var_order(int idx) const
{
    int d = kInfOrder;
    for (const auto& [e, c] : terms_) d = std::min(d, int(e[idx]));
    return d;
}

int Jet::var_degree(int idx) const
{
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, int(e[idx]));
    return d;
}

bool Jet::is_exact() const
{
    for (const auto& [e, c] : terms_)
        if (c.is_float()) return false;
    return true;
}

void Jet::check_compat(const Jet& o) const
{
    if (vars_ == o.vars_) return;
    if (vars_ && o.vars_ && *vars_ == *o.vars_) return;
    throw std::runtime_error("jet variable-list mismatch");
}

Jet Jet::operator-() const
{
    Jet r(vars_, trunc_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

Jet& Jet::operator+=(const Jet& o)
{
    check_compat(o);
    Truncation t = trunc_.min_with(o.trunc_);
    if (!(t == trunc_)) *this = truncated(t);
    trunc_ = t;
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

Jet& Jet::operator-=(const Jet& o)
{
    check_compat(o);
    Truncation t = trunc_.min_with(o.trunc_);
    if (!(t == trunc_)) *this = truncated(t);
    trunc_ = t;
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

Jet Jet::scaled(const Scalar& c) const
{
    Jet r(vars_, trunc_);
    if (c.is_zero()) return r;
    for (const auto& [e, v] : terms_) {
        Scalar p = v * c;
        if (!p.is_zero()) r.terms_.emplace(e, std::move(p));
    }
    return r;
}

Jet Jet::conjugated() const
{
    Jet r(vars_, trunc_);
    for (const auto& [e, v] : terms_) r.terms_.emplace(e, v.conj());
    return r;
}

Jet Jet::truncated(const Truncation& t) const
{
    Jet r(vars_, t);
    for (const auto& [e, v] : terms_)
        if (t.admits(e)) r.terms_.emplace(e, v);
    return r;
}

bool Jet::operator==(const Jet& o) const
{
    check_compat(o);
    return terms_ == o.terms_;
}

std::string Jet::str() const
{
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ")";
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) {
                os << "*" << (*vars_)[i];
                if (e[i] > 1) os << "^" << int(e[i]);
            }
    }
    return os.str();
}

namespace {

void accumulate_product(Jet::TermMap& out, const Truncation& t,
                        const std::pair<const Jet::Mono, Scalar>& ta,
                        const std::pair<const Jet::Mono, Scalar>& tb)
{
    Jet::Mono e(ta.first.size());
    for (size_t i = 0; i < e.size(); ++i)
        e[i] = static_cast<unsigned char>(ta.first[i] + tb.first[i]);
    if (!t.admits(e)) return;
    Scalar c = ta.second * tb.second;
    if (c.is_zero()) return;
    auto it = out.find(e);
    if (it == out.end()) {
        out.emplace(std::move(e), std::move(c));
    } else {
        it->second += c;
        if (it->second.is_zero()) out.erase(it);
    }
}

} // namespace

Jet mul_serial(const Jet& a, const Jet& b)
{
    a.check_compat(b);
    Jet r(a.vars_, a.trunc_.min_with(b.trunc_));
    for (const auto& ta : a.terms_)
        for (const auto& tb : b.terms_)
            accumulate_product(r.terms_, r.trunc_, ta, tb);
    return r;
}

#ifdef _OPENMP
Jet mul_parallel(const Jet& a, const Jet& b)
{
    a.check_compat(b);
    Jet r(a.vars_, a.trunc_.min_with(b.trunc_));

    std::vector<const std::pair<const Jet::Mono, Scalar>*> av;
    av.reserve(a.terms_.size());
    for (const auto& ta : a.terms_) av.push_back(&ta);

    int nt = omp_get_max_threads();
    std::vector<Jet::TermMap> partial(nt);
#pragma omp parallel num_threads(nt)
    {
        int tid = omp_get_thread_num();
        Jet::TermMap& local = partial[tid];
#pragma omp for schedule(static)
        for (long i = 0; i < static_cast<long>(av.size()); ++i)
            for (const auto& tb : b.terms_)
                accumulate_product(local, r.trunc_, *av[i], tb);
    }
    // Exact coefficients make the merge order-independent; merge in thread
    // order anyway so the traversal is deterministic.
    for (auto& local : partial)
        for (auto& [e, c] : local) {
            auto it = r.terms_.find(e);
            if (it == r.terms_.end()) {
                r.terms_.emplace(std::move(e), std::move(c));
            } else {
                it->second += c;
                if (it->second.is_zero()) r.terms_.erase(it);
            }
        }
    return r;
}
#else
Jet mul_parallel(const Jet& a, const Jet& b) { return mul_serial(a, b); }
#endif

Jet mul(const Jet& a, const Jet& b)
{
#ifdef _OPENMP
    // Parallel reduction reorders the sums; only exact coefficients keep the
    // result independent of the schedule.
    const size_t pairs = a.size() * b.size();
    if (pairs >= 16384 && omp_get_max_threads() > 1 && a.is_exact() && b.is_exact())
        return mul_parallel(a, b);
#endif
    return mul_serial(a, b);
}

Jet pow_int(const Jet& a, long e)
{
    if (e < 0) return pow_int(reciprocal(a), -e);
    Jet acc = Jet::constant(a.vars(), a.trunc(), Scalar(1));
    Jet base = a;
    while (e > 0) {
        if (e & 1) acc = mul(acc, base);
        e >>= 1;
        if (e > 0) base = mul(base, base);
    }
    return acc;
}

Jet derive(const Jet& a, int var)
{
    Truncation t = a.trunc();
    t.var_caps[var] = std::max(0, t.var_caps[var] - 1);
    t.total_cap = std::max(0, t.total_cap - 1);
    Jet r(a.vars(), t);
    for (const auto& [e, c] : a.terms()) {
        if (e[var] == 0) continue;
        Jet::Mono d = e;
        d[var] -= 1;
        r.add_term(d, c * Scalar(long(e[var])));
    }
    return r;
}

namespace {

using TermVec = std::vector<std::pair<Jet::Mono, Scalar>>;

Jet compose_rec(const TermVec& terms, size_t lo, size_t hi, size_t var,
                const std::vector<Jet>& inners, const VarsPtr& vars, const Truncation& t)
{
    if (var == inners.size()) {
        // all exponents consumed; at most one term remains
        Jet r(vars, t);
        if (hi > lo) r.add_term(Jet::Mono(vars->size(), 0), terms[lo].second);
        return r;
    }
    // terms[lo..hi) sorted descending lexicographically from position `var`;
    // group by exponent of `var` and run a Horner scheme.
    Jet acc(vars, t);
    int prev_exp = -1;
    size_t i = lo;
    while (i < hi) {
        int d = terms[i].first[var];
        size_t j = i;
        while (j < hi && terms[j].first[var] == d) ++j;
        if (prev_exp >= 0) acc = mul(acc, pow_int(inners[var], prev_exp - d));
        acc += compose_rec(terms, i, j, var + 1, inners, vars, t);
        prev_exp = d;
        i = j;
    }
    if (prev_exp > 0) acc = mul(acc, pow_int(inners[var], prev_exp));
    return acc;
}

} // namespace

namespace {

Jet compose_impl(const Jet& outer, const std::vector<Jet>& inners, bool check_const)
{
    if (inners.size() != outer.nvars())
        throw std::runtime_error("compose: arity mismatch");
    if (inners.empty()) throw std::runtime_error("compose: no variables");
    const VarsPtr& vars = inners[0].vars();
    Truncation t = inners[0].trunc();
    for (size_t i = 1; i < inners.size(); ++i) {
        if (inners[0].vars() != inners[i].vars() && !(*inners[0].vars() == *inners[i].vars()))
            throw std::runtime_error("compose: inner variable lists differ");
        t = t.min_with(inners[i].trunc());
    }
    if (check_const)
        for (const auto& in : inners)
            if (!in.coeff(Jet::Mono(in.nvars(), 0)).is_zero())
                throw std::runtime_error("compose: inner jet has nonzero constant term");

    TermVec terms(outer.terms().begin(), outer.terms().end());
    std::sort(terms.begin(), terms.end(),
              [](const auto& x, const auto& y) { return x.first > y.first; });
    return compose_rec(terms, 0, terms.size(), 0, inners, vars, t);
}

} // namespace

Jet compose(const Jet& outer, const std::vector<Jet>& inners)
{
    return compose_impl(outer, inners, true);
}

Jet compose_unchecked(const Jet& outer, const std::vector<Jet>& inners)
{
    return compose_impl(outer, inners, false);
}

Jet subst_var(const Jet& a, int var, const Jet& replacement)
{
    if (a.vars() != replacement.vars() && !(*a.vars() == *replacement.vars()))
        throw std::runtime_error("subst_var: variable lists differ");
    Truncation t = a.trunc().min_with(replacement.trunc());

    // group terms by exponent of `var` (descending) and apply Horner
    std::map<int, Jet, std::greater<int>> groups;
    for (const auto& [e, c] : a.terms()) {
        int d = e[var];
        auto it = groups.try_emplace(d, Jet(a.vars(), t)).first;
        Jet::Mono m = e;
        m[var] = 0;
        it->second.add_term(m, c);
    }
    Jet acc(a.vars(), t);
    int prev = -1;
    for (const auto& [d, part] : groups) {
        if (prev >= 0) acc = mul(acc, pow_int(replacement, prev - d));
        acc += part;
        prev = d;
    }
    if (prev > 0) acc = mul(acc, pow_int(replacement, prev));
    return acc;
}

namespace {

#ifndef NDEBUG
// postcondition replays in test builds, guarded against recursion
thread_local bool g_in_replay = false;
struct ReplayGuard {
    bool active;
    ReplayGuard() : active(!g_in_replay) { g_in_replay = true; }
    ~ReplayGuard()
    {
        if (active) g_in_replay = false;
    }
};
#endif

} // namespace

Jet reciprocal(const Jet& a)
{
    Scalar c0 = a.coeff(Jet::Mono(a.nvars(), 0));
    if (!c0.is_unit())
        throw std::runtime_error("reciprocal: constant term is not a unit");
    Scalar ic = c0.inv();
    Jet u = a.scaled(ic);
    u -= Jet::constant(a.vars(), a.trunc(), Scalar(1));
    if (!u.is_zero() && u.order() == 0)
        throw std::runtime_error("reciprocal: internal normalization failure");
    Jet neg_u = -u;
    Jet acc = Jet::constant(a.vars(), a.trunc(), Scalar(1));
    Jet pw = acc;
    while (true) {
        pw = mul(pw, neg_u);
        if (pw.is_zero()) break;
        acc += pw;
    }
    Jet r = acc.scaled(ic);
#ifndef NDEBUG
    ReplayGuard guard;
    if (guard.active && a.is_exact()) {
        Jet check = mul(a, r);
        Jet one = Jet::constant(a.vars(), check.trunc(), Scalar(1));
        if (!(check == one))
            throw std::runtime_error("reciprocal: postcondition a * 1/a = 1 failed");
    }
#endif
    return r;
}

Jet exp_trunc(const Jet& a)
{
    if (!a.coeff(Jet::Mono(a.nvars(), 0)).is_zero())
        throw std::runtime_error("exp_trunc: nonzero constant term");
    Jet acc = Jet::constant(a.vars(), a.trunc(), Scalar(1));
    Jet pw = acc;
    long k = 0;
    while (true) {
        ++k;
        pw = mul(pw, a).scaled(Scalar::rat(1, k));
        if (pw.is_zero()) break;
        acc += pw;
    }
#ifndef NDEBUG
    ReplayGuard guard;
    if (guard.active && a.is_exact()) {
        if (!(log_trunc(acc) == a))
            throw std::runtime_error("exp_trunc: postcondition log(exp(a)) = a failed");
    }
#endif
    return acc;
}

Jet log_trunc(const Jet& a)
{
    if (!a.coeff(Jet::Mono(a.nvars(), 0)).is_one())
        throw std::runtime_error("log_trunc: constant term is not 1");
    Jet u = a - Jet::constant(a.vars(), a.trunc(), Scalar(1));
    Jet acc(a.vars(), a.trunc());
    Jet pw = Jet::constant(a.vars(), a.trunc(), Scalar(1));
    long k = 0;
    while (true) {
        ++k;
        pw = mul(pw, u);
        if (pw.is_zero()) break;
        acc += pw.scaled(Scalar::rat(k % 2 == 1 ? 1 : -1, k));
    }
#ifndef NDEBUG
    ReplayGuard guard;
    if (guard.active && a.is_exact()) {
        if (!(exp_trunc(acc) == a))
            throw std::runtime_error("log_trunc: postcondition exp(log(a)) = a failed");
    }
#endif
    return acc;
}

Jet embed(const Jet& a, const VarsPtr& newvars, const Truncation& t)
{
    std::vector<int> pos(a.nvars());
    for (size_t i = 0; i < a.nvars(); ++i) {
        int p = -1;
        for (size_t j = 0; j < newvars->size(); ++j)
            if ((*newvars)[j] == (*a.vars())[i]) {
                p = static_cast<int>(j);
                break;
            }
        if (p < 0) throw std::runtime_error("embed: missing variable " + (*a.vars())[i]);
        pos[i] = p;
    }
    Jet r(newvars, t);
    for (const auto& [e, c] : a.terms()) {
        Jet::Mono m(newvars->size(), 0);
        for (size_t i = 0; i < e.size(); ++i) m[pos[i]] = e[i];
        r.add_term(m, c);
    }
    return r;
}

Jet permute_vars(const Jet& a, const std::vector<int>& perm)
{
    if (perm.size() != a.nvars()) throw std::runtime_error("permute_vars: arity mismatch");
    Truncation t = a.trunc();
    for (size_t i = 0; i < perm.size(); ++i) t.var_caps[perm[i]] = a.trunc().var_caps[i];
    Jet r(a.vars(), t);
    for (const auto& [e, c] : a.terms()) {
        Jet::Mono m(e.size(), 0);
        for (size_t i = 0; i < e.size(); ++i) m[perm[i]] = e[i];
        r.add_term(m, c);
    }
    return r;
}

Jet slice(const Jet& a, const std::vector<std::pair<int, int>>& fixed)
{
    std::vector<bool> is_fixed(a.nvars(), false);
    std::vector<int> want(a.nvars(), 0);
    int total_shift = 0;
    for (auto [v, d] : fixed) {
        is_fixed[v] = true;
        want[v] = d;
        total_shift += d;
    }
    std::vector<std::string> names;
    std::vector<int> caps;
    std::vector<int> keep;
    for (size_t i = 0; i < a.nvars(); ++i)
        if (!is_fixed[i]) {
            keep.push_back(static_cast<int>(i));
            names.push_back((*a.vars())[i]);
            caps.push_back(a.trunc().var_caps[i]);
        }
    Truncation t = Truncation::of(caps, std::max(0, a.trunc().total_cap - total_shift));
    Jet r(make_vars(std::move(names)), t);
    for (const auto& [e, c] : a.terms()) {
        bool match = true;
        for (size_t i = 0; i < a.nvars(); ++i)
            if (is_fixed[i] && e[i] != want[i]) {
                match = false;
                break;
            }
        if (!match) continue;
        Jet::Mono m(keep.size());
        for (size_t i = 0; i < keep.size(); ++i) m[i] = e[keep[i]];
        r.add_term(m, c);
    }
    return r;
}

Jet divide_by_var_power(const Jet& a, int var, int k)
{
    Truncation t = a.trunc();
    t.var_caps[var] = std::max(0, t.var_caps[var] - k);
    t.total_cap = std::max(0, t.total_cap - k);
    Jet r(a.vars(), t);
    for (const auto& [e, c] : a.terms()) {
        if (e[var] < k)
            throw std::runtime_error("divide_by_var_power: term not divisible by " +
                                     (*a.vars())[var] + "^" + std::to_string(k));
        Jet::Mono m = e;
        m[var] = static_cast<unsigned char>(m[var] - k);
        r.add_term(m, c);
    }
    return r;
}

Jet shift_by_var_power(const Jet& a, int var, int k)
{
    // multiplying by var^k shifts the exactness region up by k
    Truncation t = a.trunc();
    t.var_caps[var] += k;
    t.total_cap += k;
    Jet r(a.vars(), t);
    for (const auto& [e, c] : a.terms()) {
        Jet::Mono m = e;
        int d = m[var] + k;
        if (d > 255) throw std::runtime_error("shift_by_var_power: exponent overflow");
        m[var] = static_cast<unsigned char>(d);
        r.add_term(m, c);
    }
    return r;
}

std::complex<double> eval(const Jet& a, const std::vector<std::complex<double>>& point)
{
    if (point.size() != a.nvars()) throw std::runtime_error("eval: arity mismatch");
    std::vector<std::vector<std::complex<double>>> pows(a.nvars());
    for (size_t i = 0; i < a.nvars(); ++i) {
        int dmax = a.var_degree(static_cast<int>(i));
        pows[i].resize(std::max(1, dmax + 1));
        pows[i][0] = 1.0;
        for (int d = 1; d <= dmax; ++d) pows[i][d] = pows[i][d - 1] * point[i];
    }
    std::complex<double> s = 0.0;
    for (const auto& [e, c] : a.terms()) {
        std::complex<double> term = c.to_complex();
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i]) term *= pows[i][e[i]];
        s += term;
    }
    return s;
}


double coefficient_growth(const Jet& a)
{
    double g = 0;
    for (const auto& [e, c] : a.terms()) {
        int t = 0;
        for (auto d : e) t += d;
        if (t < 1) continue;
        g = std::max(g, std::pow(c.abs(), 1.0 / t));
    }
    return g;
}

int numeric_order(const Jet& a, double rel_tol)
{
    double maxabs = 0;
    for (const auto& [e, c] : a.terms()) maxabs = std::max(maxabs, c.abs());
    if (maxabs == 0) return kInfOrder;
    int ord = kInfOrder;
    for (const auto& [e, c] : a.terms()) {
        if (c.abs() <= rel_tol * maxabs) continue;
        int t = 0;
        for (auto d : e) t += d;
        ord = std::min(ord, t);
    }
    return ord;
}

} // namespace crfuchs
