#include "crfuchs/map_transform.hpp"

#include <stdexcept>

namespace crfuchs {

const VarsPtr& map_space()
{
    static VarsPtr v = make_vars({"z", "w"});
    return v;
}

const VarsPtr& w_space()
{
    static VarsPtr v = make_vars({"w"});
    return v;
}

NormalizedMap NormalizedMap::identity(int m, int degree_cap)
{
    NormalizedMap H;
    H.m = m;
    Truncation t2 = Truncation::of({degree_cap, degree_cap}, degree_cap);
    H.f = Jet::zero(map_space(), t2);
    H.g = Jet::zero(map_space(), t2);
    H.g0 = Jet::zero(w_space(), Truncation::of({degree_cap}, degree_cap));
    return H;
}

ValidationReport validate(const NormalizedMap& H)
{
    ValidationReport r;
    if (H.m < 1) r.violations.push_back("m must be >= 1");
    Jet::Mono e00(2, 0);
    if (!H.f.coeff(e00).is_zero()) r.violations.push_back("f(0,0) != 0");
    Jet::Mono e10(2, 0);
    e10[0] = 1;
    if (!H.f.coeff(e10).is_zero()) r.violations.push_back("f_z(0,0) != 0");
    Jet::Mono ew0(1, 0);
    if (!H.g0.coeff(ew0).is_zero()) r.violations.push_back("g0(0) != 0");
    for (int l = 1; l <= H.m - 1; ++l) {
        Jet::Mono el(1, static_cast<unsigned char>(l));
        Scalar c = H.g0.coeff(el);
        if (c.is_rational() && !c.rational().is_real())
            r.violations.push_back("g0^(" + std::to_string(l) + ")(0) not real");
    }
    for (const auto& [e, c] : H.g.terms())
        if (e[0] < 1 || e[1] < 1) {
            r.violations.push_back("g is not O(zw)");
            break;
        }
    return r;
}

ValidationReport validate(const Dilation& d)
{
    ValidationReport r;
    if (d.lambda.is_zero()) r.violations.push_back("lambda must be nonzero");
    if (d.mu.is_zero()) r.violations.push_back("mu must be nonzero");
    if (!d.mu.is_real()) r.violations.push_back("mu must be real");
    GaussianRational rhs(d.lambda.norm());
    if (d.eps < 0) rhs = -rhs;
    if (!d.mu.is_zero() && d.mu.pow(1 - d.m) != rhs)
        r.violations.push_back("dilation constraint mu^{1-m} = eps |lambda|^2 violated");
    return r;
}

ValidationReport validate_map(const GeneralMap& H, int m)
{
    ValidationReport r;
    Jet::Mono e00(2, 0);
    if (!H.F.coeff(e00).is_zero() || !H.G.coeff(e00).is_zero())
        r.violations.push_back("map does not vanish at the origin");
    Jet::Mono ez(2, 0);
    ez[0] = 1;
    Jet::Mono ew(2, 0);
    ew[1] = 1;
    Scalar lam = H.F.coeff(ez);
    Scalar mu = H.G.coeff(ew);
    if (lam.is_zero()) r.violations.push_back("F_z(0,0) = 0 (non-invertible linear part)");
    if (mu.is_zero()) r.violations.push_back("G_w(0,0) = 0 (non-invertible linear part)");
    if (mu.is_rational() && !mu.rational().is_real())
        r.violations.push_back("G_w(0,0) = mu must be real");
    for (const auto& [e, c] : H.G.terms()) {
        if (e[1] < 1) {
            r.violations.push_back("G is not O(w)");
            break;
        }
    }
    for (const auto& [e, c] : H.G.terms()) {
        if (e[0] >= 1 && e[1] < static_cast<unsigned char>(m + 1)) {
            r.violations.push_back("G_z is not O(w^{m+1})");
            break;
        }
    }
    if (lam.is_rational() && mu.is_rational() && mu.rational().is_real() && !mu.is_zero()) {
        if (mu.rational().pow(1 - m) != GaussianRational(lam.rational().norm()))
            r.violations.push_back("mu^{1-m} != |lambda|^2");
    }
    for (int l = 1; l <= m; ++l) {
        Jet::Mono el(2, 0);
        el[1] = static_cast<unsigned char>(l);
        Scalar c = H.G.coeff(el);
        if (c.is_rational() && !c.rational().is_real()) {
            r.violations.push_back("G_{w^" + std::to_string(l) + "}(0,0) not real");
        }
    }
    return r;
}

GeneralMap normalized_to_general(const NormalizedMap& H)
{
    GeneralMap G;
    G.m = H.m;
    Truncation t = H.f.trunc();
    G.F = H.f + Jet::variable(map_space(), t, 0);
    // each channel keeps its own exactness window before the sum takes mins
    Truncation tg0 = Truncation::of({t.var_caps[0], H.g0.trunc().var_caps[0]},
                                    H.g0.trunc().total_cap);
    Jet g0e = embed(H.g0, map_space(), tg0);
    G.G = Jet::variable(map_space(), t, 1) + shift_by_var_power(g0e, 1, 1) +
          shift_by_var_power(H.g, 1, H.m);
    return G;
}

GeneralMap dilation_to_general(const Dilation& d, int degree_cap)
{
    GeneralMap G;
    G.m = d.m;
    Truncation t = Truncation::of({degree_cap, degree_cap}, degree_cap);
    G.F = Jet::variable(map_space(), t, 0).scaled(Scalar(d.lambda));
    G.G = Jet::variable(map_space(), t, 1).scaled(Scalar(d.mu));
    return G;
}

GeneralMap compose_maps(const GeneralMap& H1, const GeneralMap& H2)
{
    GeneralMap r;
    r.m = H1.m;
    std::vector<Jet> inners = {H2.F, H2.G};
    r.F = compose(H1.F, inners);
    r.G = compose(H1.G, inners);
    return r;
}

std::pair<NormalizedMap, Dilation> factor(const GeneralMap& H, int m, int eps)
{
    ValidationReport vr = validate_map(H, m);
    if (!vr.ok()) throw std::runtime_error("factor: invalid map: " + vr.joined());
    Jet::Mono ez(2, 0);
    ez[0] = 1;
    Jet::Mono ew(2, 0);
    ew[1] = 1;
    GaussianRational lam = H.F.coeff(ez).rational();
    GaussianRational mu = H.G.coeff(ew).rational();

    Dilation psi{lam, mu, m, eps};
    ValidationReport dr = validate(psi);
    if (!dr.ok()) throw std::runtime_error("factor: dilation part invalid: " + dr.joined());

    // H0(z, w) = H(z/lambda, w/mu)
    Truncation t = H.F.trunc();
    std::vector<Jet> inners = {Jet::variable(map_space(), t, 0).scaled(Scalar(lam.inv())),
                               Jet::variable(map_space(), t, 1).scaled(Scalar(mu.inv()))};
    Jet F0 = compose(H.F, inners);
    Jet G0 = compose(H.G, inners);

    NormalizedMap H0;
    H0.m = m;
    H0.f = F0 - Jet::variable(map_space(), t, 0);
    Jet Gexcess = G0 - Jet::variable(map_space(), t, 1);
    Jet g0part(map_space(), t);
    Jet gpart(map_space(), t);
    for (const auto& [e, c] : Gexcess.terms())
        (e[0] == 0 ? g0part : gpart).add_term(e, c);
    H0.g0 = slice(divide_by_var_power(g0part, 1, 1), {{0, 0}});
    H0.g = divide_by_var_power(gpart, 1, m);

    ValidationReport nr = validate(H0);
    if (!nr.ok()) throw std::runtime_error("factor: normalized part invalid: " + nr.joined());

    // composition residual H - H0 o psi must vanish
    GeneralMap back = compose_maps(normalized_to_general(H0),
                                   dilation_to_general(psi, t.total_cap));
    if (!(back.F == H.F.truncated(back.F.trunc())) || !(back.G == H.G.truncated(back.G.trunc())))
        throw std::runtime_error("factor: internal error: H != H0 o psi");
    return {H0, psi};
}

TransformParts transform_rule_parts(const Jet& PhiStar, const NormalizedMap& H,
                                    const Truncation& tw)
{
    const int m = H.m;
    const VarsPtr& vs = ode_space();

    // map data embedded with slack so derivative chains keep full depth
    Truncation tmap = Truncation::of(
        {tw.var_caps[0] + 4, tw.var_caps[1] + 4, tw.var_caps[2] + 4}, tw.total_cap + 4);
    Jet f = embed(H.f, vs, tmap);
    Jet g = embed(H.g, vs, tmap);
    Jet g0 = embed(H.g0, vs, tmap);

    Jet fz = derive(f, 0), fw = derive(f, 1);
    Jet fzz = derive(fz, 0), fzw = derive(fz, 1), fww = derive(fw, 1);
    Jet gz = derive(g, 0), gw = derive(g, 1);
    Jet gzz = derive(gz, 0), gzw = derive(gz, 1), gww = derive(gw, 1);
    Jet g0p = derive(g0, 1), g0pp = derive(g0p, 1);

    Jet one = Jet::constant(vs, tmap, Scalar(1));
    Jet z = Jet::variable(vs, tw, 0);
    Jet w = Jet::variable(vs, tw, 1);
    Jet zeta = Jet::variable(vs, tw, 2);

    // A = 1 + w g0' + g0 + m w^{m-1} g + w^m g_w
    Jet A = one + shift_by_var_power(g0p, 1, 1) + g0 +
            shift_by_var_power(g, 1, m - 1).scaled(Scalar(long(m))) +
            shift_by_var_power(gw, 1, m);
    // scale = 1 + g0 + w^{m-1} g
    Jet scale = one + g0 + shift_by_var_power(g, 1, m - 1);
    // B = w g0'' + 2 g0' + m(m-1) w^{m-2} g + 2m w^{m-1} g_w + w^m g_ww
    Jet B = shift_by_var_power(g0pp, 1, 1) + g0p.scaled(Scalar(2)) +
            shift_by_var_power(gw, 1, m - 1).scaled(Scalar(2L * m)) +
            shift_by_var_power(gww, 1, m);
    if (m >= 2) B += shift_by_var_power(g, 1, m - 2).scaled(Scalar(long(m) * (m - 1)));
    // C = m w^{m-1} g_z + w^m g_zw
    Jet C = shift_by_var_power(gz, 1, m - 1).scaled(Scalar(long(m))) +
            shift_by_var_power(gzw, 1, m);

    Jet wm_fw = shift_by_var_power(fw, 1, m);
    Jet pref = one.truncated(tw) + fz.truncated(tw) + mul(wm_fw, zeta);

    Jet J = mul(one + fz, A) - mul(wm_fw, gz);

    // argument of Phi*: (g_z + zeta A) / (scale^m (1 + f_z + w^m zeta f_w))
    Jet arg_num = gz.truncated(tw) + mul(zeta, A);
    Jet scale_m = pow_int(scale.truncated(tw), m);
    Jet arg = mul(arg_num, reciprocal(mul(scale_m, pref)));

    Jet X = z + f.truncated(tw);
    Jet W = w + shift_by_var_power(g0, 1, 1).truncated(tw) +
            shift_by_var_power(g, 1, m).truncated(tw);
    Jet composed = compose(PhiStar, {X, W, arg});

    Jet I0 = mul(gz, fzz) - mul(one + fz, gzz);
    Jet I1 = mul(A, fzz) - mul(wm_fw, gzz) - mul(one + fz, C).scaled(Scalar(2)) +
             mul(shift_by_var_power(gz, 1, m), fzw).scaled(Scalar(2));
    Jet I2 = mul(shift_by_var_power(gz, 1, m), fww) - mul(one + fz, B) -
             mul(fw, C).scaled(Scalar(2)) + mul(A, fzw).scaled(Scalar(2));
    Jet I3 = mul(A, fww) - mul(fw, B);

    Jet bracket = mul(mul(pow_int(pref, 3), scale_m), composed);
    bracket += I0.truncated(tw);
    bracket += mul(I1.truncated(tw), zeta);
    bracket += shift_by_var_power(mul(I2.truncated(tw), mul(zeta, zeta)), 1, m).truncated(tw);
    bracket += shift_by_var_power(mul(I3.truncated(tw), mul(mul(zeta, zeta), zeta)), 1, 2 * m)
                   .truncated(tw);

    TransformParts parts;
    parts.J = J.truncated(tw);
    parts.bracket = bracket.truncated(tw);
    return parts;
}

SingularODE push_forward(const SingularODE& e_star, const NormalizedMap& H0)
{
    if (e_star.m != H0.m) throw std::runtime_error("push_forward: nonminimality order mismatch");
    ValidationReport vr = validate(H0);
    if (!vr.ok()) throw std::runtime_error("push_forward: invalid map: " + vr.joined());
    Truncation tw = e_star.Phi.trunc();
    TransformParts parts = transform_rule_parts(e_star.Phi, H0, tw);
    Jet Phi = mul(reciprocal(parts.J), parts.bracket).truncated(tw);
    SingularODE e;
    e.m = e_star.m;
    e.Phi = Phi;
    ValidationReport ov = validate(e);
    if (!ov.ok())
        throw std::runtime_error("push_forward: transformed ODE invalid: " + ov.joined());
    return e;
}

IdentityResidual verify_transformation_identity(const SingularODE& e_star, const SingularODE& e,
                                                const NormalizedMap& H0)
{
    Truncation tw = e_star.Phi.trunc().min_with(e.Phi.trunc());
    TransformParts parts = transform_rule_parts(e_star.Phi, H0, tw);
    Jet rhs = mul(reciprocal(parts.J), parts.bracket).truncated(tw);
    Jet R = e.Phi.truncated(tw) - rhs;
    IdentityResidual res;
    if (!R.is_zero()) {
        res.zero = false;
        const auto& [mo, c] = *R.terms().begin();
        res.offending = "z^" + std::to_string(mo[0]) + " w^" + std::to_string(mo[1]) + " zeta^" +
                        std::to_string(mo[2]) + " : " + c.str();
    }
    return res;
}

} // namespace crfuchs
