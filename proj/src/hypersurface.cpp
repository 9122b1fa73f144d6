#include "crfuchs/hypersurface.hpp"

#include <optional>
#include <stdexcept>

#include "crfuchs/fixed_point.hpp"

namespace crfuchs {

namespace {

const VarsPtr& u_space()
{
    static VarsPtr v = make_vars({"u"});
    return v;
}
const VarsPtr& tau_space()
{
    static VarsPtr v = make_vars({"wb"});
    return v;
}
const VarsPtr& zzu_space()
{
    static VarsPtr v = make_vars({"z", "zb", "u"});
    return v;
}
const VarsPtr& zzt_space()
{
    static VarsPtr v = make_vars({"z", "zb", "wb"});
    return v;
}

Jet zero_slice(const VarsPtr& vs, int depth)
{
    return Jet::zero(vs, Truncation::of({depth}, depth));
}

std::optional<mpq_class> exact_sqrt(const mpq_class& q)
{
    if (q < 0) return std::nullopt;
    if (!mpz_perfect_square_p(q.get_num().get_mpz_t()) ||
        !mpz_perfect_square_p(q.get_den().get_mpz_t()))
        return std::nullopt;
    mpz_class n, d;
    mpz_sqrt(n.get_mpz_t(), q.get_num().get_mpz_t());
    mpz_sqrt(d.get_mpz_t(), q.get_den().get_mpz_t());
    return mpq_class(n, d);
}

OrderCondition read_condition(std::string subject, std::string bound_expr, int bound,
                              const Jet& s, int depth_avail, bool representable,
                              double numeric_tol)
{
    int ord = 0;
    bool vanishes = false;
    if (representable) {
        if (numeric_tol >= 0) {
            ord = numeric_order(s, numeric_tol);
            vanishes = ord == kInfOrder;
        } else {
            vanishes = s.is_zero();
            ord = vanishes ? 0 : s.order();
        }
    }
    return make_order_condition(std::move(subject), std::move(bound_expr), bound, vanishes,
                                vanishes ? 0 : ord, depth_avail, representable);
}

} // namespace

Jet RealAdmissibleForm::slice(int k, int l) const
{
    auto it = h.find({k, l});
    return it == h.end() ? zero_slice(u_space(), u_cap) : it->second;
}

void RealAdmissibleForm::set(int k, int l, Jet j)
{
    if (j.is_zero())
        h.erase({k, l});
    else
        h[{k, l}] = std::move(j);
}

Jet ComplexDefiningForm::slice(int k, int l) const
{
    auto it = Theta.find({k, l});
    return it == Theta.end() ? zero_slice(tau_space(), tau_cap) : it->second;
}

void ComplexDefiningForm::set(int k, int l, Jet j)
{
    if (j.is_zero())
        Theta.erase({k, l});
    else
        Theta[{k, l}] = std::move(j);
}

Jet ExponentialForm::slice(int k, int l) const
{
    auto it = phi.find({k, l});
    return it == phi.end() ? zero_slice(tau_space(), tau_cap) : it->second;
}

void ExponentialForm::set(int k, int l, Jet j)
{
    if (j.is_zero())
        phi.erase({k, l});
    else
        phi[{k, l}] = std::move(j);
}

RealAdmissibleForm model_hypersurface(int m, int eps, int u_cap, int index_cap)
{
    RealAdmissibleForm h;
    h.m = m;
    h.eps = eps;
    h.u_cap = u_cap < 0 ? 2 * m + 4 : u_cap;
    h.index_cap = index_cap < 0 ? 2 * m + 4 : index_cap;
    return h;
}

ValidationReport validate(const RealAdmissibleForm& h)
{
    ValidationReport r;
    if (h.m < 1) r.violations.push_back("nonminimality order m must be >= 1");
    if (h.eps != 1 && h.eps != -1) r.violations.push_back("eps must be +1 or -1");
    if (h.m % 2 == 0 && h.eps == -1)
        r.violations.push_back("non-canonical eps = -1 for even m");
    for (const auto& [kl, jet] : h.h) {
        auto [k, l] = kl;
        if (k < 1 || l < 1) r.violations.push_back("invalid index pair in h");
        if (k == 1 || l == 1)
            r.violations.push_back("admissible-shape violation: h[" + std::to_string(k) + "," +
                                   std::to_string(l) + "] must be absent");
        if (k > h.index_cap || l > h.index_cap)
            r.violations.push_back("h index beyond declared index cap");
    }
    for (const auto& [kl, jet] : h.h) {
        auto [k, l] = kl;
        if (k > l) continue;
        if (!(h.slice(k, l) == h.slice(l, k).conjugated()))
            r.violations.push_back("reality violation: h[" + std::to_string(k) + "," +
                                   std::to_string(l) + "] != conj(h[" + std::to_string(l) + "," +
                                   std::to_string(k) + "])");
    }
    return r;
}

ValidationReport validate(const ComplexDefiningForm& t)
{
    ValidationReport r;
    if (t.m < 1) r.violations.push_back("nonminimality order m must be >= 1");
    if (t.eps != 1 && t.eps != -1) r.violations.push_back("eps must be +1 or -1");
    for (const auto& [kl, jet] : t.Theta) {
        auto [k, l] = kl;
        if (k < 2 || l < 2) r.violations.push_back("Theta indices must satisfy k,l >= 2");
    }
    // reality round-trip Theta(z, chi, conj-Theta(chi, z, w)) = w
    Jet Th = assemble_theta(t);
    Jet Thbar = permute_vars(Th, {1, 0, 2}).conjugated(); // swap z <-> zb, conjugate
    std::vector<Jet> inners = {Jet::variable(zzt_space(), Th.trunc(), 0),
                               Jet::variable(zzt_space(), Th.trunc(), 1), Thbar};
    Jet round = compose(Th, inners);
    Jet w = Jet::variable(zzt_space(), round.trunc(), 2);
    if (!(round == w.truncated(round.trunc())))
        r.violations.push_back("reality violation: Theta(z,chi,conj-Theta(chi,z,w)) != w");
    return r;
}

ValidationReport validate(const ExponentialForm& x)
{
    ValidationReport r;
    if (x.m < 1) r.violations.push_back("nonminimality order m must be >= 1");
    if (x.eps != 1 && x.eps != -1) r.violations.push_back("eps must be +1 or -1");
    for (const auto& [kl, jet] : x.phi) {
        auto [k, l] = kl;
        if (k < 2 || l < 2) r.violations.push_back("phi indices must satisfy k,l >= 2");
    }
    return r;
}

int nonminimality_order(const RealAdmissibleForm& h) { return h.m; }
int nonminimality_order(const ComplexDefiningForm& t) { return t.m; }
int nonminimality_order(const ExponentialForm& x) { return x.m; }

int nonminimality_order_raw(const Jet& F)
{
    if (F.is_zero())
        throw std::runtime_error("nonminimality order undefined: Levi-flat input (F = 0)");
    int uidx = F.var_index("u");
    return F.var_order(uidx);
}

RealAdmissibleForm ingest_raw(const Jet& F)
{
    Jet Fw = embed(F, zzu_space(), F.trunc());
    if (Fw.is_zero()) throw std::runtime_error("ingest: Levi-flat input (F = 0)");
    // normality: no pure-z or pure-zb slices
    for (const auto& [e, c] : Fw.terms())
        if (e[0] == 0 || e[1] == 0)
            throw std::runtime_error("ingest: input not in normal coordinates (F(z,0,u) or "
                                     "F(0,zb,u) nonzero)");
    // reality
    if (!(permute_vars(Fw, {1, 0, 2}).conjugated() == Fw))
        throw std::runtime_error("ingest: defining series is not real");
    int m = Fw.var_order(2);
    Jet::Mono g(3, 0);
    g[0] = 1;
    g[1] = 1;
    g[2] = static_cast<unsigned char>(m);
    Scalar c = Fw.coeff(g);
    if (c.is_zero())
        throw std::runtime_error("ingest: exceptional infinite-type point (psi_zzb(0,0,0) = 0); "
                                 "out of scope");
    GaussianRational nu = c.rational() + c.rational(); // 2c, real
    if (!nu.is_real()) throw std::runtime_error("ingest: Levi coefficient not real");
    int eps = nu.re() > 0 ? 1 : -1;
    if (m % 2 == 0 && eps < 0) {
        // apply w -> -w: u^j coefficients flip as -(-1)^j
        Jet Fn(zzu_space(), Fw.trunc());
        for (const auto& [e, cc] : Fw.terms()) {
            Scalar s = (e[2] % 2 == 0) ? -cc : cc;
            Fn.add_term(e, s);
        }
        Fw = Fn;
        nu = -nu;
        eps = 1;
    }
    mpq_class target = eps > 0 ? nu.re() : mpq_class(-nu.re());
    auto lam = exact_sqrt(target);
    if (!lam)
        throw std::runtime_error("ingest: |z|^2 coefficient cannot be rescaled to +-1 within "
                                 "rational arithmetic (2|c| is not a rational square)");
    // z -> lambda z with lambda real positive: slice (k,l) scales by lambda^{-k-l}
    RealAdmissibleForm h;
    h.m = m;
    h.eps = eps;
    h.u_cap = std::max(0, std::min(Fw.trunc().var_caps[2] - m, Fw.trunc().total_cap - m - 2));
    h.index_cap = std::min(Fw.trunc().var_caps[0], Fw.trunc().var_caps[1]);
    GaussianRational lam_inv = GaussianRational(*lam).inv();
    for (int k = 1; k <= h.index_cap; ++k)
        for (int l = 1; l <= h.index_cap; ++l) {
            Jet s = slice(Fw, {{0, k}, {1, l}});
            if (s.is_zero()) continue;
            s = divide_by_var_power(s, 0, m); // slice leaves one var "u"
            Scalar f = Scalar(lam_inv.pow(k + l)) * Scalar(2);
            s = s.scaled(f);
            if (k == 1 && l == 1) {
                // must be exactly eps
                Jet expect = Jet::constant(s.vars(), s.trunc(), Scalar(long(eps)));
                if (!(s == expect))
                    throw std::runtime_error("ingest: |z|^2 slice has u-dependent part; input "
                                             "is not in admissible coordinates");
                continue;
            }
            if (k == 1 || l == 1)
                throw std::runtime_error("ingest: admissible-shape violation: nonzero h[" +
                                         std::to_string(k) + "," + std::to_string(l) + "]");
            h.set(k, l, s.truncated(Truncation::of({h.u_cap}, h.u_cap)));
        }
    return h;
}

Jet assemble_defining_series(const RealAdmissibleForm& h, int total_cap)
{
    int Zc = h.index_cap;
    int D = h.u_cap + h.m;
    int total = total_cap < 0 ? 2 * Zc + D : total_cap;
    Truncation t = Truncation::of({Zc, Zc, D}, total);
    Jet F(zzu_space(), t);
    Jet::Mono e(3, 0);
    e[0] = 1;
    e[1] = 1;
    e[2] = static_cast<unsigned char>(h.m);
    F.add_term(e, Scalar::rat(h.eps, 2));
    for (const auto& [kl, s] : h.h) {
        auto [k, l] = kl;
        for (const auto& [eu, c] : s.terms()) {
            Jet::Mono me(3, 0);
            me[0] = static_cast<unsigned char>(k);
            me[1] = static_cast<unsigned char>(l);
            me[2] = static_cast<unsigned char>(eu[0] + h.m);
            F.add_term(me, c * Scalar::rat(1, 2));
        }
    }
    return F;
}

Jet assemble_theta(const ComplexDefiningForm& t, int total_cap)
{
    int Zc = t.index_cap;
    int D = t.tau_cap + t.m;
    int total = total_cap < 0 ? 2 * Zc + D : total_cap;
    Truncation tr = Truncation::of({Zc, Zc, D}, total);
    Jet Th(zzt_space(), tr);
    Jet::Mono e(3, 0);
    e[2] = 1;
    Th.add_term(e, Scalar(1)); // tau
    e[0] = 1;
    e[1] = 1;
    e[2] = static_cast<unsigned char>(t.m);
    Th.add_term(e, Scalar::i() * Scalar(long(t.eps)));
    for (const auto& [kl, s] : t.Theta) {
        auto [k, l] = kl;
        for (const auto& [eu, c] : s.terms()) {
            Jet::Mono me(3, 0);
            me[0] = static_cast<unsigned char>(k);
            me[1] = static_cast<unsigned char>(l);
            me[2] = static_cast<unsigned char>(eu[0] + t.m);
            Th.add_term(me, c * Scalar::i());
        }
    }
    return Th;
}

Jet assemble_phi(const ExponentialForm& x, int total_cap)
{
    int Zc = x.index_cap;
    int D = x.tau_cap;
    int total = total_cap < 0 ? 2 * Zc + D : total_cap;
    Truncation tr = Truncation::of({Zc, Zc, D}, total);
    Jet ph(zzt_space(), tr);
    Jet::Mono e(3, 0);
    e[0] = 1;
    e[1] = 1;
    ph.add_term(e, Scalar(long(x.eps)));
    for (const auto& [kl, s] : x.phi) {
        auto [k, l] = kl;
        for (const auto& [eu, c] : s.terms()) {
            Jet::Mono me(3, 0);
            me[0] = static_cast<unsigned char>(k);
            me[1] = static_cast<unsigned char>(l);
            me[2] = eu[0];
            ph.add_term(me, c);
        }
    }
    return ph;
}

ComplexDefiningForm real_to_complex(const RealAdmissibleForm& h, int total_cap)
{
    ValidationReport vr = validate(h);
    if (!vr.ok()) throw std::runtime_error("real_to_complex: invalid input: " + vr.joined());
    int Zc = h.index_cap;
    int D = h.u_cap + h.m;
    int total = total_cap < 0 ? 2 * Zc + 2 * D : total_cap;

    static VarsPtr vars4 = make_vars({"z", "zb", "wb", "Y"});
    Truncation t4 = Truncation::of({Zc, Zc, D, D}, total);
    Jet F3 = assemble_defining_series(h, total);

    Jet z4 = Jet::variable(vars4, t4, 0);
    Jet zb4 = Jet::variable(vars4, t4, 1);
    Jet tau4 = Jet::variable(vars4, t4, 2);
    Jet Y4 = Jet::variable(vars4, t4, 3);
    Jet inner_u = tau4 + Y4.scaled(Scalar::rat(1, 2));
    Jet G = compose(F3, {z4, zb4, inner_u}).scaled(Scalar::i() * Scalar(2));

    Jet y = solve_fixed_point({G}, 1)[0];
    Jet excess = slice(y, {{3, 0}}); // over (z, zb, wb)
    Jet Q = divide_by_var_power(excess, 2, h.m).scaled(-Scalar::i()); // 1/i = -i

    ComplexDefiningForm out;
    out.m = h.m;
    out.eps = h.eps;
    out.tau_cap = h.u_cap;
    out.index_cap = Zc;
    for (const auto& [e, c] : Q.terms()) {
        if (e[0] == 1 && e[1] == 1 && e[2] == 0) {
            if (!(c == Scalar(long(h.eps))))
                throw std::runtime_error("real_to_complex: internal error: |z|^2 slot != eps");
            continue;
        }
        if (e[0] < 2 || e[1] < 2)
            throw std::runtime_error("real_to_complex: internal error: non-normal slot in Theta");
    }
    for (int k = 2; k <= Zc; ++k)
        for (int l = 2; l <= Zc; ++l) {
            Jet s = slice(Q, {{0, k}, {1, l}});
            if (s.is_zero()) continue;
            Truncation st = Truncation::of({std::min(out.tau_cap, s.trunc().var_caps[0])},
                                           std::min(out.tau_cap, s.trunc().total_cap));
            out.set(k, l, s.truncated(st));
        }
    return out;
}

RealAdmissibleForm complex_to_real(const ComplexDefiningForm& t, int total_cap)
{
    int Zc = t.index_cap;
    int D = t.tau_cap + t.m;
    int total = total_cap < 0 ? 2 * Zc + 2 * D : total_cap;

    // P(z, zb, s) = eps z zb + sum Theta_kl(s) z^k zb^l over (z, zb, wb)
    Truncation t3 = Truncation::of({Zc, Zc, D}, total);
    Jet P(zzt_space(), t3);
    Jet::Mono e(3, 0);
    e[0] = 1;
    e[1] = 1;
    P.add_term(e, Scalar(long(t.eps)));
    for (const auto& [kl, s] : t.Theta) {
        auto [k, l] = kl;
        for (const auto& [eu, c] : s.terms()) {
            Jet::Mono me(3, 0);
            me[0] = static_cast<unsigned char>(k);
            me[1] = static_cast<unsigned char>(l);
            me[2] = eu[0];
            P.add_term(me, c);
        }
    }

    static VarsPtr vars4 = make_vars({"z", "zb", "u", "Y"});
    Truncation t4 = Truncation::of({Zc, Zc, D, D}, total);
    Jet z4 = Jet::variable(vars4, t4, 0);
    Jet zb4 = Jet::variable(vars4, t4, 1);
    Jet u4 = Jet::variable(vars4, t4, 2);
    Jet Y4 = Jet::variable(vars4, t4, 3);
    Jet arg = u4 - Y4.scaled(Scalar::i()); // u - i v
    Jet G = mul(pow_int(arg, t.m), compose(P, {z4, zb4, arg})).scaled(Scalar::rat(1, 2));

    Jet v = solve_fixed_point({G}, 1)[0];
    Jet v3 = slice(v, {{3, 0}}); // (z, zb, u)
    if (!(permute_vars(v3, {1, 0, 2}).conjugated() == v3))
        throw std::runtime_error("complex_to_real: computed defining function is not real "
                                 "(input Theta violates the reality invariant)");
    Jet Q = divide_by_var_power(v3.scaled(Scalar(2)), 2, t.m);

    RealAdmissibleForm out;
    out.m = t.m;
    out.eps = t.eps;
    out.u_cap = t.tau_cap;
    out.index_cap = Zc;
    for (const auto& [me, c] : Q.terms()) {
        if (me[0] == 1 && me[1] == 1 && me[2] == 0) {
            if (!(c == Scalar(long(t.eps))))
                throw std::runtime_error("complex_to_real: internal error: |z|^2 slot != eps");
            continue;
        }
        if (me[0] < 2 || me[1] < 2)
            throw std::runtime_error("complex_to_real: internal error: non-admissible slot");
    }
    for (int k = 2; k <= Zc; ++k)
        for (int l = 2; l <= Zc; ++l) {
            Jet s = slice(Q, {{0, k}, {1, l}});
            if (s.is_zero()) continue;
            Truncation st = Truncation::of({std::min(out.u_cap, s.trunc().var_caps[0])},
                                           std::min(out.u_cap, s.trunc().total_cap));
            out.set(k, l, s.truncated(st));
        }
    return out;
}

ExponentialForm to_exponential(const ComplexDefiningForm& t, int total_cap)
{
    int total = total_cap < 0 ? -1 : total_cap + t.m; // theta needs m more total degrees
    Jet Th = assemble_theta(t, total);
    Jet theta = divide_by_var_power(Th, 2, 1); // Theta / tau, constant term 1
    Jet L = log_trunc(theta);
    Jet phi_full = t.m > 1 ? divide_by_var_power(L, 2, t.m - 1) : L;
    phi_full = phi_full.scaled(-Scalar::i());

    ExponentialForm out;
    out.m = t.m;
    out.eps = t.eps;
    out.tau_cap = t.tau_cap;
    out.index_cap = t.index_cap;
    for (const auto& [e, c] : phi_full.terms()) {
        if (e[0] == 1 && e[1] == 1 && e[2] == 0) {
            if (!(c == Scalar(long(t.eps))))
                throw std::runtime_error("to_exponential: internal error: |z|^2 slot != eps");
            continue;
        }
        if (e[0] < 2 || e[1] < 2)
            throw std::runtime_error("to_exponential: internal error: non-normal slot in phi");
    }
    for (int k = 2; k <= out.index_cap; ++k)
        for (int l = 2; l <= out.index_cap; ++l) {
            Jet s = slice(phi_full, {{0, k}, {1, l}});
            if (s.is_zero()) continue;
            Truncation st = Truncation::of({std::min(out.tau_cap, s.trunc().var_caps[0])},
                                           std::min(out.tau_cap, s.trunc().total_cap));
            out.set(k, l, s.truncated(st));
        }
    return out;
}

ComplexDefiningForm from_exponential(const ExponentialForm& x, int total_cap)
{
    int total = total_cap < 0 ? 2 * x.index_cap + x.tau_cap + x.m : total_cap + x.m;
    Jet ph = assemble_phi(x, total);
    Jet expo = shift_by_var_power(ph.scaled(Scalar::i()), 2, x.m - 1);
    Jet Th = shift_by_var_power(exp_trunc(expo), 2, 1); // tau * exp(i tau^{m-1} phi)

    ComplexDefiningForm out;
    out.m = x.m;
    out.eps = x.eps;
    out.tau_cap = x.tau_cap;
    out.index_cap = x.index_cap;
    Jet Q = divide_by_var_power(Th - Jet::variable(Th.vars(), Th.trunc(), 2), 2, x.m)
                .scaled(-Scalar::i());
    for (int k = 2; k <= out.index_cap; ++k)
        for (int l = 2; l <= out.index_cap; ++l) {
            Jet s = slice(Q, {{0, k}, {1, l}});
            if (s.is_zero()) continue;
            Truncation st = Truncation::of({std::min(out.tau_cap, s.trunc().var_caps[0])},
                                           std::min(out.tau_cap, s.trunc().total_cap));
            out.set(k, l, s.truncated(st));
        }
    return out;
}

FuchsVerdict check_fuchsian_hypersurface(const RealAdmissibleForm& h, double numeric_tol)
{
    FuchsVerdict v;
    const int m = h.m;
    auto add = [&](int k, int l, int bound, const std::string& bexpr) {
        bool representable = k <= h.index_cap && l <= h.index_cap;
        if (bound <= 0) representable = true; // vacuous for holomorphic slices
        const Jet s = representable && k <= h.index_cap && l <= h.index_cap
                          ? h.slice(k, l)
                          : zero_slice(u_space(), 0);
        v.conditions.push_back(read_condition(
            "h[" + std::to_string(k) + "," + std::to_string(l) + "]", bexpr, bound, s,
            representable ? std::min(h.u_cap, s.trunc().total_cap) : -1, representable,
            numeric_tol));
    };
    add(2, 2, m - 1, "m-1");
    add(2, 3, 2 * m - 2, "2m-2");
    add(3, 3, 2 * m - 2, "2m-2");
    for (int l = 4; l <= 2 * m + 1; ++l) add(2, l, 2 * m - l + 2, "2m-l+2");
    for (int k = 3; k <= 2 * m + 1; ++k)
        for (int l = 3; l <= 2 * m + 1; ++l)
            if (k + l >= 7 && k + l <= 2 * m + 4) add(k, l, 2 * m - k - l + 5, "2m-k-l+5");
    v.finalize();
    return v;
}

RealAdmissibleForm apply_dilation(const RealAdmissibleForm& h, const GaussianRational& lambda,
                                  const GaussianRational& mu)
{
    if (lambda.is_zero() || mu.is_zero())
        throw std::runtime_error("dilation: lambda and mu must be nonzero");
    if (!mu.is_real()) throw std::runtime_error("dilation: mu must be real");
    // mu^{1-m} = eps |lambda|^2
    GaussianRational lhs = mu.pow(1 - h.m);
    GaussianRational rhs = GaussianRational(lambda.norm());
    if (h.eps < 0) rhs = -rhs;
    if (lhs != rhs)
        throw std::runtime_error("dilation constraint violated: mu^{1-m} != eps |lambda|^2");

    RealAdmissibleForm out = h;
    out.h.clear();
    GaussianRational mu_inv = mu.inv();
    GaussianRational pref = mu.pow(1 - h.m);
    GaussianRational li = lambda.inv();
    GaussianRational lci = lambda.conj().inv();
    for (const auto& [kl, s] : h.h) {
        auto [k, l] = kl;
        GaussianRational f = pref * li.pow(k) * lci.pow(l);
        Jet ns(s.vars(), s.trunc());
        for (const auto& [e, c] : s.terms())
            ns.add_term(e, c * Scalar(f * mu_inv.pow(e[0])));
        out.set(k, l, ns);
    }
    ValidationReport vr = validate(out);
    if (!vr.ok())
        throw std::runtime_error("dilation: transformed form invalid: " + vr.joined());
    return out;
}

} // namespace crfuchs
