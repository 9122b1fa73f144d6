#include "crfuchs/ode.hpp"

#include <stdexcept>

#include "crfuchs/fixed_point.hpp"

namespace crfuchs {

const VarsPtr& ode_space()
{
    static VarsPtr v = make_vars({"z", "w", "zeta"});
    return v;
}

Truncation default_ode_truncation(int m)
{
    return Truncation::of({2 * m + 2, 2 * m + 4, 2 * m + 2}, 2 * m + 2);
}

Jet SingularODE::phi_slice(int k, int l) const { return slice(Phi, {{0, k}, {2, l}}); }

Scalar SingularODE::phi_coeff(int k, int j, int l) const
{
    Jet::Mono e(3, 0);
    e[0] = static_cast<unsigned char>(k);
    e[1] = static_cast<unsigned char>(j);
    e[2] = static_cast<unsigned char>(l);
    return Phi.coeff(e);
}

ValidationReport validate(const SingularODE& e)
{
    ValidationReport r;
    if (e.m < 1) r.violations.push_back("nonminimality order m must be >= 1");
    for (const auto& [mo, c] : e.Phi.terms())
        if (mo[2] < 2) {
            r.violations.push_back("Phi = O(zeta^2) violated at monomial z^" +
                                   std::to_string(mo[0]) + " w^" + std::to_string(mo[1]) +
                                   " zeta^" + std::to_string(mo[2]));
            break;
        }
    return r;
}

SingularODE model_ode(int m, const Truncation& trunc)
{
    SingularODE e;
    e.m = m;
    e.Phi = Jet(ode_space(), trunc);
    Jet::Mono mo(3, 0);
    mo[1] = static_cast<unsigned char>(m - 1);
    mo[2] = 2;
    e.Phi.add_term(mo, Scalar(1));
    return e;
}

SingularODE model_ode(int m) { return model_ode(m, default_ode_truncation(m)); }

namespace {

const VarsPtr& assoc_space()
{
    static VarsPtr v = make_vars({"z", "w", "zeta", "xi", "eta"});
    return v;
}

/// phi(z, xi, eta) assembled in the 5-variable association space.
Jet phi_in_assoc_space(const ExponentialForm& x, const Truncation& t5)
{
    Jet ph(assoc_space(), t5);
    Jet::Mono e(5, 0);
    e[0] = 1;
    e[3] = 1;
    ph.add_term(e, Scalar(long(x.eps)));
    for (const auto& [kl, s] : x.phi) {
        auto [k, l] = kl;
        for (const auto& [eu, c] : s.terms()) {
            Jet::Mono me(5, 0);
            me[0] = static_cast<unsigned char>(k);
            me[3] = static_cast<unsigned char>(l);
            me[4] = eu[0];
            ph.add_term(me, c);
        }
    }
    return ph;
}

} // namespace

SingularODE associate(const ExponentialForm& x, const Truncation& trunc)
{
    const int m = x.m;
    // Working caps: xi behaves like zeta + 1 order, eta like w.
    const int zc = trunc.var_caps[0], wc = trunc.var_caps[1], cc = trunc.var_caps[2];
    Truncation t5 = Truncation::of({zc + 2, wc, cc, cc, wc}, trunc.total_cap + 2);

    Jet ph = phi_in_assoc_space(x, t5);
    Jet phz = derive(ph, 0);
    Jet phzz = derive(phz, 0);

    Jet eta = Jet::variable(assoc_space(), t5, 4);
    Jet w5 = Jet::variable(assoc_space(), t5, 1);
    Jet zeta5 = Jet::variable(assoc_space(), t5, 2);
    Jet xi5 = Jet::variable(assoc_space(), t5, 3);

    Jet psi = exp_trunc(shift_by_var_power(ph.scaled(Scalar::i()), 4, m - 1));
    Jet psi_inv = reciprocal(psi);
    Jet psi_m1 = pow_int(psi, m - 1);      // psi^{m-1}
    Jet psi_1m = pow_int(psi_inv, m - 1);  // psi^{1-m}

    // Segre graph relations: w = eta psi, zeta = i phi_z psi^{1-m}.
    // Solve for (xi, eta) as functions of (z, w, zeta):
    //   xi  = eps (-i zeta psi^{m-1} - (phi_z - eps xi))
    //   eta = w / psi
    Jet G_xi = (mul(zeta5, psi_m1).scaled(-Scalar::i()) - (phz - xi5.scaled(Scalar(long(x.eps)))))
                   .scaled(Scalar(long(x.eps)));
    Jet G_eta = mul(w5, psi_inv);

    std::vector<Jet> sol = solve_fixed_point({G_xi, G_eta}, 2);

    // Phi = i psi^{1-m} (phi_zz + i eta^{m-1} phi_z^2), evaluated on the solved
    // (xi, eta).
    Jet core = mul(psi_1m, phzz).scaled(Scalar::i());
    core -= mul(psi_1m, shift_by_var_power(mul(phz, phz), 4, m - 1));
    std::vector<Jet> inners = {Jet::variable(assoc_space(), t5, 0), w5, zeta5, sol[0], sol[1]};
    Jet Phi5 = compose(core, inners);
    Jet Phi3 = slice(Phi5, {{3, 0}, {4, 0}});
    Phi3 = embed(Phi3, ode_space(), trunc);

    SingularODE e;
    e.m = m;
    e.Phi = Phi3;
    ValidationReport vr = validate(e);
    if (!vr.ok())
        throw std::runtime_error("associate: construction violated ODE invariants: " +
                                 vr.joined());
    return e;
}

SingularODE associate(const ExponentialForm& x)
{
    return associate(x, default_ode_truncation(x.m));
}

SegreReport verify_segre_solutions(const ExponentialForm& x, const SingularODE& e, int z_depth,
                                   int xi_cap, int eta_cap, int total_box)
{
    const int m = x.m;
    if (z_depth < 0) z_depth = 4;
    if (xi_cap < 0) xi_cap = 4;
    if (eta_cap < 0) eta_cap = 2 * m + 4;

    ParamRingPtr ring = make_param_ring({"xi", "eta"}, {xi_cap, eta_cap}, xi_cap + eta_cap);
    ParamPoly xi = ParamPoly::param(ring, 0);
    ParamPoly eta = ParamPoly::param(ring, 1);

    static VarsPtr zvar = make_vars({"z"});
    const int zc = z_depth + 2;
    Truncation tz = Truncation::of({zc}, zc);

    // phi(z; xi, eta) as a jet in z with parameter coefficients
    Jet ph(zvar, tz);
    {
        Jet::Mono e1(1, 1);
        ph.add_term(e1, Scalar(xi.scaled(GaussianRational(long(x.eps)))));
        for (const auto& [kl, s] : x.phi) {
            auto [k, l] = kl;
            ParamPoly xl(ring, GaussianRational(1));
            for (int q = 0; q < l; ++q) xl *= xi;
            for (const auto& [eu, c] : s.terms()) {
                ParamPoly coeff = xl;
                for (int q = 0; q < int(eu[0]); ++q) coeff *= eta;
                coeff = coeff.scaled(c.rational());
                Jet::Mono me(1, static_cast<unsigned char>(k));
                ph.add_term(me, Scalar(coeff));
            }
        }
    }

    ParamPoly eta_m1(ring, GaussianRational(1));
    for (int q = 0; q < m - 1; ++q) eta_m1 *= eta;

    Jet psi = exp_trunc(ph.scaled(Scalar(eta_m1.scaled(GaussianRational::i()))));
    Jet psi_inv = reciprocal(psi);

    // w = eta psi; w'' = eta psi''
    Jet psi_zz = derive(derive(psi, 0), 0);
    Jet wpp = psi_zz.scaled(Scalar(eta));

    // w^m Phi(z, w, zeta) with w = eta psi, zeta = i phi_z psi^{1-m}:
    // each monomial z^k w^j zeta^l maps to
    //   z^k eta^{m+j} (i phi_z)^l psi^{m+j+(1-m)l}
    Jet phz = derive(ph, 0);
    Jet iphz = phz.scaled(Scalar::i());
    std::map<int, Jet> psi_pow;
    std::map<int, Jet> iphz_pow;
    auto get_psi_pow = [&](int p) -> const Jet& {
        auto it = psi_pow.find(p);
        if (it == psi_pow.end())
            it = psi_pow.emplace(p, p >= 0 ? pow_int(psi, p) : pow_int(psi_inv, -p)).first;
        return it->second;
    };
    auto get_iphz_pow = [&](int p) -> const Jet& {
        auto it = iphz_pow.find(p);
        if (it == iphz_pow.end()) it = iphz_pow.emplace(p, pow_int(iphz, p)).first;
        return it->second;
    };

    Jet rhs(zvar, tz);
    for (const auto& [mo, c] : e.Phi.terms()) {
        int k = mo[0], j = mo[1], l = mo[2];
        ParamPoly etap(ring, GaussianRational(1));
        for (int q = 0; q < m + j; ++q) etap *= eta;
        Jet term = mul(get_iphz_pow(l), get_psi_pow(m + j + (1 - m) * l));
        term = shift_by_var_power(term, 0, k);
        term = term.scaled(c * Scalar(etap));
        rhs += term;
    }

    Jet residual = wpp - rhs;
    // reliable z-depth of the residual: z_depth (wpp lost two orders from zc)
    SegreReport rep;
    rep.checked_z_degree = z_depth;
    rep.checked_total = total_box;
    for (const auto& [mo, c] : residual.terms()) {
        if (int(mo[0]) > z_depth) continue;
        if (total_box >= 0) {
            // restrict to the jointly exact region in z, xi, eta
            bool inside = false;
            if (c.is_param()) {
                for (const auto& [pe, pc] : c.param_poly().terms())
                    if (int(mo[0]) + pe[0] + pe[1] <= total_box) {
                        inside = true;
                        break;
                    }
            } else {
                inside = int(mo[0]) <= total_box;
            }
            if (!inside) continue;
        }
        rep.zero = false;
        rep.offending = "z^" + std::to_string(mo[0]) + " * (" + c.str() + ")";
        break;
    }
    return rep;
}

FuchsVerdict check_fuchsian_ode(const SingularODE& e, double numeric_tol)
{
    FuchsVerdict v;
    const int m = e.m;
    const Truncation& t = e.Phi.trunc();
    auto add = [&](int k, int l, int bound, const std::string& bexpr) {
        bool representable = k <= t.var_caps[0] && l <= t.var_caps[2] && k + l <= t.total_cap;
        std::string subject = "Phi[" + std::to_string(k) + "," + std::to_string(l) + "]";
        if (!representable) {
            if (bound <= 0) {
                // vacuous for holomorphic slices
                v.conditions.push_back(
                    make_order_condition(subject, bexpr, bound, true, 0, bound, true));
            } else {
                v.conditions.push_back(
                    make_order_condition(subject, bexpr, bound, false, 0, -1, false));
            }
            return;
        }
        Jet s = e.phi_slice(k, l);
        int depth = std::min(s.trunc().var_caps[0], s.trunc().total_cap);
        bool vanishes;
        int ord;
        if (numeric_tol >= 0) {
            ord = numeric_order(s, numeric_tol);
            vanishes = ord == kInfOrder;
        } else {
            vanishes = s.is_zero();
            ord = vanishes ? 0 : s.order();
        }
        v.conditions.push_back(
            make_order_condition(subject, bexpr, bound, vanishes, vanishes ? 0 : ord, depth,
                                 true));
    };
    add(0, 2, m - 1, "m-1");
    add(0, 3, 2 * m - 2, "2m-2");
    add(1, 2, m - 1, "m-1");
    add(1, 3, 2 * m - 2, "2m-2");
    for (int l = 4; l <= 2 * m + 1; ++l) add(0, l, 2 * m - l + 2, "2m-l+2");
    for (int k = 2; k <= 2 * m + 1; ++k) add(k, 2, 2 * m - k, "2m-k");
    for (int k = 1; k <= 2 * m + 1; ++k)
        for (int l = 3; l <= 2 * m + 1; ++l)
            if (k + l >= 5 && k + l <= 2 * m + 2) add(k, l, 2 * m - k - l + 3, "2m-k-l+3");
    v.finalize();
    return v;
}

} // namespace crfuchs
