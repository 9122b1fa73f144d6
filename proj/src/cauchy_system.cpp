#include "crfuchs/cauchy_system.hpp"

#include <sstream>
#include <stdexcept>

namespace crfuchs {

namespace {

// symbol layout: Y = (g0, g1, f0, f1), then P = Y', then Q = Y''
enum : int { iG0 = 0, iG1 = 1, iF0 = 2, iF1 = 3 };
constexpr int Y(int i) { return i; }
constexpr int P(int i) { return 4 + i; }
constexpr int Q(int i) { return 8 + i; }

ParamRingPtr cauchy_ring(int pcap)
{
    std::vector<std::string> names = {"g0", "g1", "f0", "f1", "g0'", "g1'", "f0'", "f1'",
                                      "g0''", "g1''", "f0''", "f1''"};
    std::vector<int> caps(12, pcap);
    for (int i = 8; i < 12; ++i) caps[i] = 1;
    return make_param_ring(std::move(names), std::move(caps), pcap);
}

// total w-derivative on the symbols: Y -> P, P -> Q
ParamPoly ppoly_dw(const ParamPoly& p)
{
    ParamPoly r(p.ring());
    for (const auto& [e, c] : p.terms()) {
        for (int i = 0; i < 4; ++i) {
            if (e[Y(i)] > 0) {
                ParamPoly::Expo d = e;
                d[Y(i)] -= 1;
                d[P(i)] += 1;
                r.add_term(d, c * GaussianRational(long(e[Y(i)])));
            }
            if (e[P(i)] > 0) {
                ParamPoly::Expo d = e;
                d[P(i)] -= 1;
                if (d[Q(i)] + 1 > 1)
                    throw std::runtime_error("cauchy derivation: second derivative of a "
                                             "derivative symbol required");
                d[Q(i)] += 1;
                r.add_term(d, c * GaussianRational(long(e[P(i)])));
            }
            if (e[Q(i)] > 0)
                throw std::runtime_error("cauchy derivation: third-order derivative required");
        }
    }
    return r;
}

// total derivative of a jet whose coefficients may contain the data symbols
Jet jet_dw(const Jet& a, int widx)
{
    Jet expl = derive(a, widx);
    Jet chain(a.vars(), expl.trunc());
    for (const auto& [e, c] : a.terms()) {
        if (!c.is_param()) continue;
        ParamPoly d = ppoly_dw(c.param_poly());
        if (!d.is_zero()) chain.add_term(e, Scalar(d));
    }
    return expl + chain;
}

} // namespace

LaurentJet LaurentJet::normalized() const
{
    if (num.is_zero()) return {0, num};
    LaurentJet r = *this;
    int low = num.var_order(0);
    if (r.pole > 0 && low > 0) {
        int k = std::min(r.pole, low);
        r.num = divide_by_var_power(r.num, 0, k);
        r.pole -= k;
    }
    if (r.pole < 0) {
        r.num = shift_by_var_power(r.num, 0, -r.pole);
        r.pole = 0;
    }
    return r;
}

std::string LaurentJet::str() const
{
    if (pole == 0) return num.str();
    return "(" + num.str() + ") / w^" + std::to_string(pole);
}

namespace {

LaurentJet lj_add(const LaurentJet& a, const LaurentJet& b)
{
    int p = std::max(a.pole, b.pole);
    Jet an = a.pole < p ? shift_by_var_power(a.num, 0, p - a.pole) : a.num;
    Jet bn = b.pole < p ? shift_by_var_power(b.num, 0, p - b.pole) : b.num;
    return LaurentJet{p, an + bn}.normalized();
}

LaurentJet lj_mul(const LaurentJet& a, const LaurentJet& b)
{
    return LaurentJet{a.pole + b.pole, mul(a.num, b.num)}.normalized();
}

LaurentJet lj_mul_jet(const LaurentJet& a, const Jet& b)
{
    return LaurentJet{a.pole, mul(a.num, b)}.normalized();
}

LaurentJet lj_neg(const LaurentJet& a) { return {a.pole, -a.num}; }

LaurentJet lj_inv(const LaurentJet& a)
{
    if (a.num.is_zero()) throw std::runtime_error("LaurentJet: division by zero");
    int j = a.num.var_order(0);
    Jet unit_part = j > 0 ? divide_by_var_power(a.num, 0, j) : a.num;
    return LaurentJet{j - a.pole, reciprocal(unit_part)}.normalized();
}

struct Assembled {
    Jet J;
    Jet bracket;
};

struct Components {
    int m = 1;
    ParamRingPtr ring;
    VarsPtr vars3;   // (z, w, zeta)
    Truncation t3;   // z <= 1 head, zeta <= 3, w deep
    Truncation tw;   // w-jets
    Jet base[4];     // numeric part of the data (g0, g1, f0, f1); w-jets
    Jet f2, f3, g2, g3, f2p, g2p; // jets over w_space
};

Jet const_sym(const Components& C, int idx, const Truncation& t, const VarsPtr& vs)
{
    return Jet::constant(vs, t, Scalar(ParamPoly::param(C.ring, idx)));
}

// w-jet -> (z,w,zeta)-jet times z^zdeg
Jet lift_w(const Components& C, const Jet& wj, int zdeg)
{
    Jet r(C.vars3, C.t3);
    for (const auto& [e, c] : wj.terms()) {
        Jet::Mono me(3, 0);
        me[0] = static_cast<unsigned char>(zdeg);
        me[1] = e[0];
        r.add_term(me, c);
    }
    return r;
}

Assembled assemble(const Components& C, const Jet& PhiStar)
{
    const int m = C.m;
    const VarsPtr& vs = C.vars3;
    const Truncation& t3 = C.t3;
    Jet one = Jet::constant(vs, t3, Scalar(1));
    Jet z = Jet::variable(vs, t3, 0);
    Jet w = Jet::variable(vs, t3, 1);
    Jet zeta = Jet::variable(vs, t3, 2);

    // data value = numeric base + symbol; derivatives follow suit
    Jet baseD[4], baseDD[4];
    for (int i = 0; i < 4; ++i) {
        baseD[i] = derive(C.base[i], 0);
        baseDD[i] = derive(baseD[i], 0);
    }
    auto val = [&](int i) { return lift_w(C, C.base[i], 0) + const_sym(C, Y(i), t3, vs); };
    auto valp = [&](int i) { return lift_w(C, baseD[i], 0) + const_sym(C, P(i), t3, vs); };
    auto valpp = [&](int i) { return lift_w(C, baseDD[i], 0) + const_sym(C, Q(i), t3, vs); };
    auto valz = [&](int i) { return mul(val(i), z); };
    auto valpz = [&](int i) { return mul(valp(i), z); };
    auto valppz = [&](int i) { return mul(valpp(i), z); };

    Jet f = val(iF0) + valz(iF1);
    Jet fz = val(iF1) + lift_w(C, C.f2.scaled(Scalar(2)), 1);
    Jet fw = valp(iF0) + valpz(iF1);
    Jet fzz = lift_w(C, C.f2.scaled(Scalar(2)), 0) + lift_w(C, C.f3.scaled(Scalar(6)), 1);
    Jet fzw = valp(iF1) + lift_w(C, C.f2p.scaled(Scalar(2)), 1);
    Jet fww = valpp(iF0) + valppz(iF1);
    Jet g = valz(iG1);
    Jet gz = val(iG1) + lift_w(C, C.g2.scaled(Scalar(2)), 1);
    Jet gw = valpz(iG1);
    Jet gzz = lift_w(C, C.g2.scaled(Scalar(2)), 0) + lift_w(C, C.g3.scaled(Scalar(6)), 1);
    Jet gzw = valp(iG1) + lift_w(C, C.g2p.scaled(Scalar(2)), 1);
    Jet gww = valppz(iG1);
    Jet g0 = val(iG0);
    Jet g0p = valp(iG0);
    Jet g0pp = valpp(iG0);

    Jet A = one + shift_by_var_power(g0p, 1, 1).truncated(t3) + g0 +
            shift_by_var_power(g, 1, m - 1).truncated(t3).scaled(Scalar(long(m))) +
            shift_by_var_power(gw, 1, m).truncated(t3);
    Jet scale = one + g0 + shift_by_var_power(g, 1, m - 1).truncated(t3);
    Jet B = shift_by_var_power(g0pp, 1, 1).truncated(t3) + g0p.scaled(Scalar(2)) +
            shift_by_var_power(gw, 1, m - 1).truncated(t3).scaled(Scalar(2L * m)) +
            shift_by_var_power(gww, 1, m).truncated(t3);
    if (m >= 2)
        B += shift_by_var_power(g, 1, m - 2).truncated(t3).scaled(Scalar(long(m) * (m - 1)));
    Jet Cc = shift_by_var_power(gz, 1, m - 1).truncated(t3).scaled(Scalar(long(m))) +
             shift_by_var_power(gzw, 1, m).truncated(t3);

    Jet wm_fw = shift_by_var_power(fw, 1, m).truncated(t3);
    Jet pref = one + fz + mul(wm_fw, zeta);
    Jet J = mul(one + fz, A) - mul(wm_fw, gz);

    Jet arg_num = gz + mul(zeta, A);
    Jet scale_m = pow_int(scale, m);
    Jet arg = mul(arg_num, reciprocal(mul(scale_m, pref)));

    Jet X = z + f;
    Jet W = w + shift_by_var_power(g0, 1, 1).truncated(t3) +
            shift_by_var_power(g, 1, m).truncated(t3);
    Jet composed = compose_unchecked(PhiStar, {X, W, arg});

    Jet I0 = mul(gz, fzz) - mul(one + fz, gzz);
    Jet I1 = mul(A, fzz) - mul(wm_fw, gzz) - mul(one + fz, Cc).scaled(Scalar(2)) +
             mul(shift_by_var_power(gz, 1, m).truncated(t3), fzw).scaled(Scalar(2));
    Jet I2 = mul(shift_by_var_power(gz, 1, m).truncated(t3), fww) - mul(one + fz, B) -
             mul(fw, Cc).scaled(Scalar(2)) + mul(A, fzw).scaled(Scalar(2));
    Jet I3 = mul(A, fww) - mul(fw, B);

    Jet bracket = mul(mul(pow_int(pref, 3), scale_m), composed);
    bracket += I0;
    bracket += mul(I1, zeta);
    bracket += shift_by_var_power(mul(I2, mul(zeta, zeta)), 1, m).truncated(t3);
    bracket += shift_by_var_power(mul(I3, mul(mul(zeta, zeta), zeta)), 1, 2 * m).truncated(t3);

    return {J, bracket};
}

// slice [z^k zeta^l] of a (z, w, zeta)-jet as a w-jet
Jet zl_slice(const Jet& a, int k, int l)
{
    return slice(a, {{0, k}, {2, l}});
}

} // namespace

namespace {

CauchySystem derive_core(const SingularODE& e_star, const SingularODE& e, const Jet* base4,
                         const CauchyDeriveOptions& opt)
{
    if (e_star.m != e.m)
        throw std::runtime_error("derive_cauchy_system: nonminimality order mismatch");
    const int m = e_star.m;

    Components C;
    C.m = m;
    C.ring = cauchy_ring(opt.param_degree_cap);
    C.vars3 = ode_space();
    Truncation tin = e_star.Phi.trunc().min_with(e.Phi.trunc());
    int D = std::min(tin.var_caps[1], tin.total_cap - 2);
    if (opt.depth_cap > 0) D = std::min(D, opt.depth_cap);
    C.t3 = Truncation::of({1, D, 3}, D + 4);
    C.tw = Truncation::of({D}, D);
    Truncation twd = Truncation::of({D + 2}, D + 2); // slack for base derivatives
    for (int i = 0; i < 4; ++i)
        C.base[i] = base4 ? embed(base4[i], w_space(), twd) : Jet::zero(w_space(), twd);
    C.f2 = C.f3 = C.g2 = C.g3 = C.f2p = C.g2p = Jet::zero(w_space(), C.tw);

    // elimination matrix pieces (shared by both recursion passes)
    Jet one_w = Jet::constant(w_space(), C.tw, Scalar(1));
    auto wsym = [&](int idx) { return const_sym(C, idx, C.tw, w_space()); };
    auto wbase = [&](int i) { return C.base[i].truncated(C.tw); };
    auto wbasep = [&](int i) { return derive(C.base[i], 0).truncated(C.tw); };
    Jet a_e = wbase(iG1) + wsym(Y(iG1));
    Jet b_e = -(one_w + wbase(iF1) + wsym(Y(iF1)));
    Jet c_e = one_w + wbase(iG0) + wsym(Y(iG0)) +
              shift_by_var_power(wbasep(iG0) + wsym(P(iG0)), 0, 1).truncated(C.tw);
    Jet d_e = -shift_by_var_power(wbasep(iF0) + wsym(P(iF0)), 0, m).truncated(C.tw);
    Jet det_inv = reciprocal(mul(a_e, d_e) - mul(b_e, c_e));

    for (int k = 0; k <= 1; ++k) {
        Assembled asem = assemble(C, e_star.Phi);
        Scalar sc = Scalar::rat(-1, long(k + 2) * (k + 1));
        Jet r = zl_slice(asem.bracket, k, 0).scaled(sc);
        Jet s = zl_slice(asem.bracket, k, 1).scaled(sc);
        Jet df = mul(det_inv, mul(d_e, r) - mul(b_e, s));
        Jet dg = mul(det_inv, mul(a_e, s) - mul(c_e, r));
        if (k == 0) {
            C.f2 = df;
            C.g2 = dg;
            C.f2p = jet_dw(C.f2, 0);
            C.g2p = jet_dw(C.g2, 0);
        } else {
            C.f3 = df;
            C.g3 = dg;
        }
    }

    Assembled asem = assemble(C, e_star.Phi);
    Jet R = mul(asem.J, embed(e.Phi, C.vars3, C.t3)) - asem.bracket;
    {
        long count = 0;
        for (const auto& [e2, cc] : R.terms())
            if (cc.is_param()) count += static_cast<long>(cc.param_poly().terms().size());
        if (count > opt.param_budget)
            throw std::runtime_error(
                "derive_cauchy_system: parameter-monomial budget exceeded (" +
                std::to_string(count) + " > " + std::to_string(opt.param_budget) +
                "); raise the budget or lower the degree cap");
    }

    // collect the four equations and split off the second-derivative symbols
    const std::pair<int, int> slots[4] = {{0, 2}, {1, 2}, {0, 3}, {1, 3}};
    LaurentJet Amat[4][4];
    LaurentJet bvec[4];
    for (int r = 0; r < 4; ++r) {
        Jet eq = zl_slice(R, slots[r].first, slots[r].second);
        Jet bj(w_space(), C.tw);
        Jet aj[4] = {Jet(w_space(), C.tw), Jet(w_space(), C.tw), Jet(w_space(), C.tw),
                     Jet(w_space(), C.tw)};
        for (const auto& [e2, c] : eq.terms()) {
            if (!c.is_param()) {
                bj.add_term(e2, c);
                continue;
            }
            ParamPoly rest(C.ring);
            ParamPoly qparts[4] = {ParamPoly(C.ring), ParamPoly(C.ring), ParamPoly(C.ring),
                                   ParamPoly(C.ring)};
            for (const auto& [pe, pc] : c.param_poly().terms()) {
                int qidx = -1, qtot = 0;
                for (int i = 0; i < 4; ++i) {
                    qtot += pe[Q(i)];
                    if (pe[Q(i)] > 0) qidx = i;
                }
                if (qtot == 0) {
                    rest.add_term(pe, pc);
                } else if (qtot == 1) {
                    ParamPoly::Expo d = pe;
                    d[Q(qidx)] = 0;
                    qparts[qidx].add_term(d, pc);
                } else {
                    throw std::runtime_error("derive_cauchy_system: nonlinear second "
                                             "derivatives encountered");
                }
            }
            if (!rest.is_zero()) bj.add_term(e2, Scalar(rest));
            for (int i = 0; i < 4; ++i)
                if (!qparts[i].is_zero()) aj[i].add_term(e2, Scalar(qparts[i]));
        }
        bvec[r] = LaurentJet{0, bj}.normalized();
        for (int i = 0; i < 4; ++i) Amat[r][i] = LaurentJet{0, aj[i]}.normalized();
    }

    // solve A Q = -b exactly over Laurent jets; pole shifts normalize the
    // natural w-power scalings so the elimination keeps full depth
    LaurentJet sol[4];
    {
        LaurentJet M[4][5];
        for (int r = 0; r < 4; ++r) {
            for (int c2 = 0; c2 < 4; ++c2) M[r][c2] = Amat[r][c2];
            M[r][4] = lj_neg(bvec[r]);
        }
        int col_shift[4] = {0, 0, 0, 0};
        for (int c2 = 0; c2 < 4; ++c2) {
            int o = kInfOrder;
            for (int r = 0; r < 4; ++r)
                if (!M[r][c2].is_zero()) o = std::min(o, M[r][c2].ord());
            if (o == kInfOrder) o = 0;
            col_shift[c2] = o;
            for (int r = 0; r < 4; ++r)
                if (!M[r][c2].is_zero()) {
                    M[r][c2].pole += o;
                    M[r][c2] = M[r][c2].normalized();
                }
        }
        for (int r = 0; r < 4; ++r) {
            int o = kInfOrder;
            for (int j = 0; j <= 4; ++j)
                if (!M[r][j].is_zero()) o = std::min(o, M[r][j].ord());
            if (o == kInfOrder || o <= 0) continue;
            for (int j = 0; j <= 4; ++j)
                if (!M[r][j].is_zero()) {
                    M[r][j].pole += o;
                    M[r][j] = M[r][j].normalized();
                }
        }
        for (int c2 = 0; c2 < 4; ++c2) {
            int piv = -1, best_ord = kInfOrder;
            for (int r = c2; r < 4; ++r) {
                const LaurentJet& cand = M[r][c2];
                if (cand.is_zero()) continue;
                int lo = cand.num.var_order(0);
                Jet::Mono e(1, static_cast<unsigned char>(lo));
                if (cand.num.coeff(e).is_unit() && cand.ord() < best_ord) {
                    piv = r;
                    best_ord = cand.ord();
                }
            }
            if (piv < 0)
                throw std::runtime_error(
                    "derive_cauchy_system: singular second-derivative block (column " +
                    std::to_string(c2) + ")");
            std::swap(M[c2], M[piv]);
            LaurentJet inv = lj_inv(M[c2][c2]);
            for (int j = c2; j <= 4; ++j) M[c2][j] = lj_mul(inv, M[c2][j]);
            for (int r = 0; r < 4; ++r) {
                if (r == c2 || M[r][c2].is_zero()) continue;
                LaurentJet f = M[r][c2];
                for (int j = c2; j <= 4; ++j)
                    M[r][j] = lj_add(M[r][j], lj_neg(lj_mul(f, M[c2][j])));
            }
        }
        for (int r = 0; r < 4; ++r) {
            sol[r] = M[r][4];
            sol[r].pole += col_shift[r]; // undo the column scaling
            sol[r] = sol[r].normalized();
        }
    }

    CauchySystem cs;
    cs.m = m;
    cs.param_degree_cap = opt.param_degree_cap;
    // rows: 0 = g0'' scaled by w^{m+1}; 1..3 = (g1, f0, f1)'' scaled by w^{2m}
    const int row_sym[4] = {iG0, iG1, iF0, iF1};
    for (int row = 0; row < 4; ++row) {
        LaurentJet S = sol[row_sym[row]];
        S.pole -= row == 0 ? (m + 1) : 2 * m;
        S = S.normalized();
        for (const auto& [e2, c] : S.num.terms()) {
            if (!c.is_param()) {
                if (!c.is_zero()) {
                    CoeffKey key{};
                    auto it = cs.rows[row].try_emplace(key, LaurentJet{S.pole, Jet(w_space(), S.num.trunc())}).first;
                    it->second.num.add_term(e2, c);
                }
                continue;
            }
            for (const auto& [pe, pc] : c.param_poly().terms()) {
                CoeffKey key{};
                int nb = 0;
                for (int i = 0; i < 4; ++i) {
                    key.alpha[i] = pe[Y(i)];
                    key.beta[i] = pe[P(i)];
                    nb += pe[P(i)];
                    if (pe[Q(i)] != 0)
                        throw std::runtime_error("derive_cauchy_system: residual second "
                                                 "derivative after the solve");
                }
                // convert P^beta to (wY')^beta: divide by w^{|beta|}
                auto it = cs.rows[row]
                              .try_emplace(key, LaurentJet{S.pole + nb,
                                                           Jet(w_space(), S.num.trunc())})
                              .first;
                if (it->second.pole != S.pole + nb)
                    throw std::runtime_error("derive_cauchy_system: pole bookkeeping clash");
                it->second.num.add_term(e2, Scalar(pc));
            }
        }
    }
    for (auto& row : cs.rows)
        for (auto it = row.begin(); it != row.end();) {
            it->second = it->second.normalized();
            if (it->second.is_zero())
                it = row.erase(it);
            else
                ++it;
        }
    return cs;
}

} // namespace

CauchySystem derive_cauchy_system(const SingularODE& e_star, const SingularODE& e,
                                  const CauchyDeriveOptions& opt)
{
    CauchySystem cs = derive_core(e_star, e, nullptr, opt);
    cs.source = std::make_shared<SingularODE>(e_star);
    cs.target = std::make_shared<SingularODE>(e);
    return cs;
}

namespace {

std::string key_str(const CoeffKey& k)
{
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < 4; ++i) os << int(k.alpha[i]) << (i < 3 ? "," : ";");
    for (int i = 0; i < 4; ++i) os << int(k.beta[i]) << (i < 3 ? "," : ")");
    return os.str();
}

OrderCondition laurent_condition(std::string subject, std::string bexpr, int bound,
                                 const LaurentJet& L)
{
    int depth = L.num.trunc().total_cap - L.pole;
    return make_order_condition(std::move(subject), std::move(bexpr), bound, L.is_zero(),
                                L.is_zero() ? 0 : L.ord(), depth, true);
}

} // namespace

std::vector<LaurentJet> cauchy_residual(const CauchySystem& cs, const CauchyData& data)
{
    const int m = cs.m;
    int depth = kInfOrder;
    for (const auto& row : cs.rows)
        for (const auto& [key, L] : row)
            depth = std::min(depth, L.num.trunc().total_cap - L.pole);
    Truncation tw = Truncation::of({depth + 2}, depth + 2);
    const Jet* Yd[4] = {&data.g0, &data.g1, &data.f0, &data.f1};
    std::vector<Jet> Yj, Wp;
    for (int i = 0; i < 4; ++i) {
        Jet y = embed(*Yd[i], w_space(), tw);
        Yj.push_back(y);
        Wp.push_back(shift_by_var_power(derive(y, 0), 0, 1).truncated(tw));
    }
    std::vector<LaurentJet> res;
    for (int row = 0; row < 4; ++row) {
        Jet ypp = derive(derive(Yj[row], 0), 0);
        LaurentJet acc{0, shift_by_var_power(ypp, 0, row == 0 ? m + 1 : 2 * m).truncated(tw)};
        for (const auto& [key, L] : cs.rows[row]) {
            Jet monom = Jet::constant(w_space(), tw, Scalar(1));
            for (int i = 0; i < 4; ++i) {
                if (key.alpha[i]) monom = mul(monom, pow_int(Yj[i], key.alpha[i]));
                if (key.beta[i]) monom = mul(monom, pow_int(Wp[i], key.beta[i]));
            }
            acc = lj_add(acc, lj_neg(lj_mul_jet(L, monom)));
        }
        res.push_back(acc.normalized());
    }
    return res;
}

TSOrderReport check_TS_orders(const CauchySystem& cs, int m)
{
    TSOrderReport rep;
    const char* row_name[4] = {"S", "T1", "T2", "T3"};
    for (int row = 0; row < 4; ++row) {
        for (const auto& [key, L] : cs.rows[row]) {
            int wgt = key.weight();
            int bound;
            std::string bexpr;
            if (row == 0) {
                bound = wgt == 0 ? m : m - wgt;
                bexpr = wgt == 0 ? "m" : "m-|a|-|b|";
            } else {
                bound = wgt == 0 ? 2 * m - 1 : 2 * m - 1 - wgt;
                bexpr = wgt == 0 ? "2m-1" : "2m-1-|a|-|b|";
            }
            rep.conditions.push_back(
                laurent_condition(std::string(row_name[row]) + key_str(key), bexpr, bound, L));
        }
    }
    for (const auto& c : rep.conditions)
        if (!c.holds || !c.decidable) rep.all_hold = false;
    return rep;
}

BBSystem BBReduction::shifted_system() const
{
    BBSystem out = Q;
    const VarsPtr& vs = bb_space(8);
    const Truncation& t = Q.F[0].trunc();
    std::vector<Jet> inners;
    inners.push_back(Jet::variable(vs, t, 0));
    for (int i = 0; i < 8; ++i) {
        Jet yi = Jet::variable(vs, t, 1 + i);
        if (i < 4 && !U0[i].is_zero())
            yi += Jet::constant(vs, t, Scalar(U0[i]));
        inners.push_back(yi);
    }
    for (int i = 0; i < 8; ++i) out.F[i] = compose_unchecked(Q.F[i], inners);
    // a valid shift keeps F(0,0) = 0
    Jet::Mono zero(9, 0);
    for (int i = 0; i < 8; ++i)
        if (!out.F[i].coeff(zero).is_zero())
            throw std::runtime_error("reduce_to_bb: the given Cauchy data does not solve the "
                                     "system at the substitution point");
    return out;
}

BBReduction reduce_to_bb(const CauchySystem& cs, const CauchyData& data, int m)
{
    if (!cs.source || !cs.target)
        throw std::runtime_error("reduce_to_bb: system lacks its defining pair");
    BBReduction red;
    red.m = m;

    // split the data into the polynomial part P (degree <= 2m-1) and the
    // flat tail Z = O(w^{2m}); data in row order (g0, g1, f0, f1)
    const Jet* Yd[4] = {&data.g0, &data.g1, &data.f0, &data.f1};
    int depth = kInfOrder;
    for (int row = 0; row < 4; ++row)
        for (const auto& [key, L] : cs.rows[row])
            depth = std::min(depth, L.num.trunc().total_cap - L.pole);
    if (depth <= 0) throw std::runtime_error("reduce_to_bb: no reliable depth in the system");

    Truncation tw = Truncation::of({depth + 2 * m + 2}, depth + 2 * m + 2);
    Jet Pbase[4];
    std::vector<Jet> Pp, Zp;
    for (int i = 0; i < 4; ++i) {
        Jet Yi = embed(*Yd[i], w_space(), tw);
        Jet Pi(w_space(), tw);
        for (const auto& [e, c] : Yi.terms())
            if (e[0] <= 2 * m - 1) Pi.add_term(e, c);
        Jet Zi = Yi - Pi;
        if (!Zi.is_zero() && Zi.var_order(0) < 2 * m)
            throw std::runtime_error("reduce_to_bb: data minus polynomial part is not "
                                     "O(w^{2m})");
        Pbase[i] = Pi;
        Pp.push_back(Pi);
        Zp.push_back(Zi);
    }
    red.P = Pp;
    red.U0.assign(4, GaussianRational(0));
    for (int i = 0; i < 4; ++i) {
        Jet::Mono e(1, static_cast<unsigned char>(2 * m));
        Scalar c = Zp[i].coeff(e);
        if (!c.is_zero()) red.U0[i] = c.rational();
    }

    // tilde system: exact re-derivation around the polynomial part, so the
    // symbols stand for the flat tail Z and the degree cap costs nothing
    CauchyDeriveOptions opt;
    opt.param_degree_cap = cs.param_degree_cap;
    opt.depth_cap = 4 * m + 7; // the reduced system is read to w-order 4m-2 plus slack
    CauchySystem tilde = derive_core(*cs.source, *cs.target, Pbase, opt);
    tilde.m = m;
    int tilde_depth = kInfOrder;
    for (const auto& row : tilde.rows)
        for (const auto& [key, L] : row)
            tilde_depth = std::min(tilde_depth, L.num.trunc().total_cap - L.pole);
    if (tilde_depth < 4 * m - 2)
        throw std::runtime_error("reduce_to_bb: insufficient depth in the shifted system; "
                                 "supply deeper defining functions");
    depth = std::min(depth, tilde_depth);
    const auto& shifted = tilde.rows;

    // post-shift order bounds (first-order coefficients of the tilde system)
    {
        const char* row_name[4] = {"S~", "T1~", "T2~", "T3~"};
        for (int row = 0; row < 4; ++row)
            for (const auto& [key, L] : shifted[row]) {
                if (key.weight() != 1) continue;
                int bound = row == 0 ? m - 1 : 2 * m - 2;
                red.shifted_orders.conditions.push_back(laurent_condition(
                    std::string(row_name[row]) + key_str(key),
                    row == 0 ? "m-1" : "2m-2", bound, L));
            }
        for (const auto& c : red.shifted_orders.conditions)
            if (!c.holds || !c.decidable) red.shifted_orders.all_hold = false;
    }

    // substitute Z = w^{2m} U and divide the rows down to the w^2 U'' form
    const VarsPtr& vs8 = bb_space(8);
    int pcap = cs.param_degree_cap;
    std::vector<int> caps8(9, pcap);
    caps8[0] = depth;
    Truncation t8 = Truncation::of(caps8, depth + pcap);
    red.R.assign(4, Jet::zero(vs8, t8));
    for (int row = 0; row < 4; ++row) {
        const int sdiv = row == 0 ? 3 * m - 1 : 4 * m - 2;
        for (const auto& [key, L] : shifted[row]) {
            int wgt = key.weight();
            LaurentJet c2 = L;
            c2.pole += sdiv - 2 * m * wgt;
            c2 = c2.normalized();
            if (c2.pole > 0)
                throw std::runtime_error(
                    "reduce_to_bb: negative power of w in the reduced system at row " +
                    std::to_string(row) + ", coefficient " + key_str(key) +
                    " (ord = " + std::to_string(L.ord()) +
                    ", required >= " + std::to_string(2 * m * wgt - sdiv < 0
                                                          ? -(2 * m * wgt - sdiv)
                                                          : 0) +
                    "); a Fuchsian order bound fails");
            // coefficient jet in x times U^gamma (2m U + V)^delta
            Jet term(vs8, t8);
            for (const auto& [e, cc] : c2.num.terms()) {
                Jet::Mono me(9, 0);
                me[0] = e[0];
                term.add_term(me, cc);
            }
            for (int i = 0; i < 4; ++i) {
                for (int q = 0; q < key.alpha[i]; ++q)
                    term = mul(term, Jet::variable(vs8, t8, 1 + i));
                if (key.beta[i] > 0) {
                    Jet lin = Jet::variable(vs8, t8, 1 + i).scaled(Scalar(2L * m)) +
                              Jet::variable(vs8, t8, 5 + i);
                    term = mul(term, pow_int(lin, key.beta[i]));
                }
            }
            red.R[row] += term;
        }
        // move the first-order expansion of the LHS to the right:
        // w^2 U'' = R means R = (divided rhs) - 4m (wU') - 2m(2m-1) U
        red.R[row] -= Jet::variable(vs8, t8, 5 + row).scaled(Scalar(4L * m));
        red.R[row] -= Jet::variable(vs8, t8, 1 + row).scaled(Scalar(2L * m * (2 * m - 1)));
    }


    // first-order Briot-Bouquet form in bold-U = (U, V): w U' = V, w V' = V + R
    red.Q.n = 8;
    red.Q.F.clear();
    for (int i = 0; i < 4; ++i) red.Q.F.push_back(Jet::variable(vs8, t8, 5 + i));
    for (int i = 0; i < 4; ++i)
        red.Q.F.push_back(Jet::variable(vs8, t8, 5 + i) + red.R[i]);
    return red;
}

} // namespace crfuchs
