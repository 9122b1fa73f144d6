#include "crfuchs/briot_bouquet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace crfuchs {

VarsPtr bb_space(int n)
{
    static std::map<int, VarsPtr> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<std::string> names = {"x"};
    for (int i = 1; i <= n; ++i) names.push_back("y" + std::to_string(i));
    return cache.emplace(n, make_vars(std::move(names))).first->second;
}

GRatMatrix BBSystem::principal_matrix() const
{
    GRatMatrix A(n, GRatVector(n, GaussianRational(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Jet::Mono e(n + 1, 0);
            e[1 + j] = 1;
            Scalar c = F[i].coeff(e);
            if (!c.is_zero()) A[i][j] = c.rational();
        }
    return A;
}

namespace {

// characteristic polynomial det(tI - A) by the Faddeev-LeVerrier recursion
std::vector<GaussianRational> char_poly(const GRatMatrix& A)
{
    const size_t n = A.size();
    std::vector<GaussianRational> c(n + 1, GaussianRational(0));
    c[n] = GaussianRational(1);
    GRatMatrix M(n, GRatVector(n, GaussianRational(0)));
    for (size_t k = 1; k <= n; ++k) {
        // M_k = A M_{k-1} + c_{n-k+1} I
        GRatMatrix AM(n, GRatVector(n, GaussianRational(0)));
        if (k == 1) {
            AM = GRatMatrix(n, GRatVector(n, GaussianRational(0)));
            for (size_t i = 0; i < n; ++i) AM[i][i] = GaussianRational(1);
        } else {
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j) {
                    GaussianRational s(0);
                    for (size_t q = 0; q < n; ++q) s += A[i][q] * M[q][j];
                    AM[i][j] = s;
                }
            for (size_t i = 0; i < n; ++i) AM[i][i] += c[n - k + 1];
        }
        M = AM;
        // c_{n-k} = -(1/k) tr(A M_k)
        GaussianRational tr(0);
        for (size_t i = 0; i < n; ++i) {
            GaussianRational s(0);
            for (size_t q = 0; q < n; ++q) s += A[i][q] * M[q][i];
            tr += s;
        }
        mpq_class kk(static_cast<long>(k));
        c[n - k] = -(tr * GaussianRational(mpq_class(1) / kk));
    }
    return c; // c[0] + c[1] t + ... + c[n] t^n
}

GaussianRational eval_poly(const std::vector<GaussianRational>& c, const GaussianRational& t)
{
    GaussianRational acc(0);
    for (size_t i = c.size(); i-- > 0;) acc = acc * t + c[i];
    return acc;
}

} // namespace

namespace {

// synthetic division of p by (t - r); returns true when the division is exact
bool deflate(std::vector<GaussianRational>& p, const GaussianRational& r)
{
    if (p.size() <= 1) return false;
    std::vector<GaussianRational> q(p.size() - 1, GaussianRational(0));
    GaussianRational carry(0);
    for (size_t i = p.size(); i-- > 1;) {
        q[i - 1] = p[i] + carry;
        carry = q[i - 1] * r;
    }
    if (!(p[0] + carry).is_zero()) return false;
    p = std::move(q);
    return true;
}

} // namespace

ResonanceReport analyze_resonances(const BBSystem& sys)
{
    ResonanceReport rep;
    GRatMatrix A = sys.principal_matrix();
    std::vector<GaussianRational> cp = char_poly(A);

    bool real_coeffs = true;
    for (const auto& c : cp)
        if (!c.is_real()) real_coeffs = false;

    std::vector<GaussianRational> work = cp;
    // zero roots first
    while (work.size() > 1 && work[0].is_zero()) {
        if (rep.rational_eigenvalues.empty() || !rep.rational_eigenvalues.back().is_zero())
            rep.rational_eigenvalues.push_back(GaussianRational(0));
        work.erase(work.begin());
    }
    if (real_coeffs) {
        // complete rational-root search on the denominator-cleared polynomial
        mpz_class lcm(1);
        for (const auto& c : work)
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.re().get_den().get_mpz_t());
        mpq_class a0q = work.front().re() * mpq_class(lcm);
        mpq_class anq = work.back().re() * mpq_class(lcm);
        mpz_class a0 = a0q.get_num();
        mpz_class an = anq.get_num();
        auto divisors = [](mpz_class v) {
            std::vector<mpz_class> ds;
            if (v < 0) v = -v;
            for (mpz_class d = 1; d * d <= v; ++d)
                if (v % d == 0) {
                    ds.push_back(d);
                    if (d * d != v) ds.push_back(v / d);
                }
            return ds;
        };
        if (a0 != 0 && mpz_sizeinbase(a0.get_mpz_t(), 2) <= 48 &&
            mpz_sizeinbase(an.get_mpz_t(), 2) <= 48) {
            for (const mpz_class& p : divisors(a0))
                for (const mpz_class& q : divisors(an))
                    for (int sgn : {1, -1}) {
                        mpq_class root(sgn * p, q);
                        root.canonicalize();
                        GaussianRational r{root};
                        if (eval_poly(work, r).is_zero()) {
                            bool seen = false;
                            for (const auto& e : rep.rational_eigenvalues)
                                if (e == r) seen = true;
                            if (!seen) rep.rational_eigenvalues.push_back(r);
                        }
                    }
        } else {
            for (long k = 1; k <= 64; ++k) {
                GaussianRational r{mpq_class(k)};
                if (eval_poly(work, r).is_zero()) rep.rational_eigenvalues.push_back(r);
            }
        }
    } else {
        // complex coefficients: probe integer levels (the only question the
        // resonance test needs)
        for (long k = 1; k <= 64; ++k) {
            GaussianRational r{mpq_class(k)};
            if (eval_poly(work, r).is_zero()) rep.rational_eigenvalues.push_back(r);
        }
    }

    // charpoly splits over the found roots iff full deflation succeeds
    std::vector<GaussianRational> p = cp;
    for (const auto& r : rep.rational_eigenvalues)
        while (p.size() > 1 && eval_poly(p, r).is_zero() && deflate(p, r)) {}
    rep.spectrum_complete = p.size() == 1;

    for (const auto& r : rep.rational_eigenvalues)
        if (r.is_integer() && r.re() > 0)
            rep.resonances.push_back(static_cast<int>(r.re().get_num().get_si()));
    std::sort(rep.resonances.begin(), rep.resonances.end());
    return rep;
}

FormalSolution formal_solve(const BBSystem& sys, int N)
{
    if (N < 1) throw std::runtime_error("formal_solve: order must be >= 1");
    const int n = sys.n;
    const VarsPtr& vs = bb_space(n);
    Truncation tx = sys.F[0].trunc();
    for (const auto& f : sys.F) tx = tx.min_with(f.trunc());

    FormalSolution out;
    // consistency: a solution with y(0) = 0 requires F(0,0) = 0
    {
        Jet::Mono zero(n + 1, 0);
        for (int i = 0; i < n; ++i)
            if (!sys.F[i].coeff(zero).is_zero()) {
                out.complete = false;
                out.blocked_at = 0;
                return out;
            }
    }

    GRatMatrix A = sys.principal_matrix();
    Truncation ty = Truncation::of(std::vector<int>{N}, N);
    static VarsPtr xvar = make_vars({"x"});
    out.y.assign(n, Jet::zero(xvar, ty));

    std::vector<Jet> inners;
    inners.push_back(Jet::variable(vs, tx, 0));
    Truncation tcomp = tx;
    tcomp.total_cap = std::min(tcomp.total_cap, N);
    tcomp.var_caps[0] = std::min(tcomp.var_caps[0], N);
    for (int i = 0; i < n; ++i) inners.push_back(Jet::zero(vs, tcomp));

    auto refresh_inner = [&](int i) {
        Jet yi(vs, tcomp);
        for (const auto& [e, c] : out.y[i].terms()) {
            Jet::Mono me(n + 1, 0);
            me[0] = e[0];
            yi.add_term(me, c);
        }
        inners[1 + i] = yi;
    };

    for (int k = 1; k <= N; ++k) {
        GRatVector rhs(n, GaussianRational(0));
        for (int i = 0; i < n; ++i) {
            Jet comp = compose(sys.F[i], inners);
            Jet::Mono ek(n + 1, 0);
            ek[0] = static_cast<unsigned char>(k);
            Scalar c = comp.coeff(ek);
            if (!c.is_zero()) rhs[i] = c.rational();
        }
        GRatMatrix M(n, GRatVector(n, GaussianRational(0)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                M[i][j] = -A[i][j];
                if (i == j) M[i][j] += GaussianRational(mpq_class(k));
            }
        LinearSolveResult ls = solve_linear_system(M, rhs);
        if (!ls.consistent) {
            out.complete = false;
            out.blocked_at = k;
            out.resonances.push_back({k, 0, false});
            return out;
        }
        if (!ls.free_columns.empty())
            out.resonances.push_back({k, static_cast<int>(ls.free_columns.size()), true});
        for (int i = 0; i < n; ++i) {
            if (ls.particular[i].is_zero()) continue;
            Jet::Mono ek(1, static_cast<unsigned char>(k));
            out.y[i].add_term(ek, Scalar(ls.particular[i]));
            refresh_inner(i);
        }
    }

    // residual replay: x y' - F(x, y) = O(x^{N+1})
    for (int i = 0; i < n; ++i) {
        Jet lhs = shift_by_var_power(derive(out.y[i], 0), 0, 1);
        Jet comp = compose(sys.F[i], inners);
        Jet rhs1(xvar, Truncation::of(std::vector<int>{N}, N));
        for (const auto& [e, c] : comp.terms()) {
            Jet::Mono me(1, e[0]);
            rhs1.add_term(me, c);
        }
        Jet res = lhs.truncated(rhs1.trunc()) - rhs1;
        if (!res.is_zero())
            throw std::runtime_error("formal_solve: residual replay failed at order " +
                                     std::to_string(res.order()));
    }
    return out;
}

int LinearSingularSystem::effective_pole_order() const
{
    int min_ord = kInfOrder;
    for (const auto& row : numerator)
        for (const auto& a : row)
            if (!a.is_zero()) min_ord = std::min(min_ord, a.var_order(0));
    if (min_ord == kInfOrder) return 0; // zero matrix
    return std::max(0, pole_order - min_ord);
}

SingularityClass classify_linear(const LinearSingularSystem& sys)
{
    int p = sys.effective_pole_order();
    if (p == 0) return SingularityClass::Nonsingular;
    if (p == 1) return SingularityClass::Fuchsian;
    return SingularityClass::MeromorphicNonFuchsian;
}

namespace {

// F(e^t, y) split into real coordinates: state u = (Re y, Im y)
struct RealField {
    const BBSystem* sys;
    int n;
    std::vector<double> operator()(double t, const std::vector<double>& u) const
    {
        std::vector<std::complex<double>> point(n + 1);
        point[0] = std::exp(t);
        for (int i = 0; i < n; ++i) point[1 + i] = {u[i], u[n + i]};
        std::vector<double> du(2 * n);
        for (int i = 0; i < n; ++i) {
            std::complex<double> v = eval(sys->F[i], point);
            du[i] = v.real();
            du[n + i] = v.imag();
        }
        return du;
    }
};

// Cash-Karp embedded RK5(4) step
bool rk_step(const RealField& f, double& t, std::vector<double>& u, double& h, double rel_tol,
             double abs_tol)
{
    static const double a2 = 1. / 5, a3 = 3. / 10, a4 = 3. / 5, a5 = 1., a6 = 7. / 8;
    static const double b21 = 1. / 5;
    static const double b31 = 3. / 40, b32 = 9. / 40;
    static const double b41 = 3. / 10, b42 = -9. / 10, b43 = 6. / 5;
    static const double b51 = -11. / 54, b52 = 5. / 2, b53 = -70. / 27, b54 = 35. / 27;
    static const double b61 = 1631. / 55296, b62 = 175. / 512, b63 = 575. / 13824,
                        b64 = 44275. / 110592, b65 = 253. / 4096;
    static const double c1 = 37. / 378, c3 = 250. / 621, c4 = 125. / 594, c6 = 512. / 1771;
    static const double d1 = c1 - 2825. / 27648, d3 = c3 - 18575. / 48384,
                        d4 = c4 - 13525. / 55296, d5 = -277. / 14336, d6 = c6 - 1. / 4;

    const size_t n = u.size();
    std::vector<double> k1 = f(t, u);
    auto at = [&](double frac, std::initializer_list<std::pair<double, const std::vector<double>*>> ks) {
        std::vector<double> v = u;
        for (auto [w, kv] : ks)
            for (size_t i = 0; i < n; ++i) v[i] += h * w * (*kv)[i];
        return f(t + frac * h, v);
    };
    std::vector<double> k2 = at(a2, {{b21, &k1}});
    std::vector<double> k3 = at(a3, {{b31, &k1}, {b32, &k2}});
    std::vector<double> k4 = at(a4, {{b41, &k1}, {b42, &k2}, {b43, &k3}});
    std::vector<double> k5 = at(a5, {{b51, &k1}, {b52, &k2}, {b53, &k3}, {b54, &k4}});
    std::vector<double> k6 = at(a6, {{b61, &k1}, {b62, &k2}, {b63, &k3}, {b64, &k4}, {b65, &k5}});

    double err = 0, scale_norm = 0;
    std::vector<double> unew(n);
    for (size_t i = 0; i < n; ++i) {
        unew[i] = u[i] + h * (c1 * k1[i] + c3 * k3[i] + c4 * k4[i] + c6 * k6[i]);
        double ei = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i]);
        double sc = abs_tol + rel_tol * std::max(std::abs(u[i]), std::abs(unew[i]));
        err += (ei / sc) * (ei / sc);
        scale_norm += 1;
    }
    err = std::sqrt(err / std::max(1.0, scale_norm));
    if (err <= 1.0) {
        t += h;
        u = std::move(unew);
        h *= std::min(5.0, 0.9 * std::pow(std::max(err, 1e-16), -0.2));
        return true;
    }
    h *= std::max(0.1, 0.9 * std::pow(err, -0.25));
    return false;
}

} // namespace

Trajectory numeric_integrate(const BBSystem& sys, const std::vector<std::complex<double>>& y_a,
                             double a, double x_min, const IntegrateOptions& opt)
{
    if (!(0 < x_min && x_min < a))
        throw std::runtime_error("numeric_integrate: need 0 < x_min < a");
    const int n = sys.n;
    if (static_cast<int>(y_a.size()) != n)
        throw std::runtime_error("numeric_integrate: initial vector dimension mismatch");

    RealField field{&sys, n};
    double t = std::log(a);
    const double t_end = std::log(x_min);
    std::vector<double> u(2 * n);
    for (int i = 0; i < n; ++i) {
        u[i] = y_a[i].real();
        u[n + i] = y_a[i].imag();
    }

    Trajectory traj;
    std::vector<double> grid(opt.grid_points);
    for (int i = 0; i < opt.grid_points; ++i)
        grid[i] = std::log(a) + (t_end - std::log(a)) * i / (opt.grid_points - 1);
    size_t next = 0;

    auto record = [&](double tc, const std::vector<double>& uc) {
        TrajectoryPoint p;
        p.x = std::exp(tc);
        p.y.resize(n);
        for (int i = 0; i < n; ++i) p.y[i] = {uc[i], uc[n + i]};
        traj.samples.push_back(std::move(p));
    };

    double h = -std::max(1e-4, (std::log(a) - t_end) / 1e4);
    long steps = 0;
    const long max_steps = 2000000;
    while (t > t_end + 1e-15) {
        while (next < grid.size() && grid[next] >= t - 1e-15) {
            record(grid[next], u); // grid point essentially at current t
            ++next;
        }
        double target = next < grid.size() ? grid[next] : t_end;
        if (t + h < target) h = target - t;
        std::vector<double> usave = u;
        double tsave = t;
        if (rk_step(field, t, u, h, opt.rel_tol, opt.abs_tol)) {
            double norm = 0;
            for (double v : u) norm += v * v;
            if (std::sqrt(norm) > opt.escape_radius) {
                traj.truncated = true;
                traj.note = "trajectory escaped the reliable evaluation radius at x = " +
                            std::to_string(std::exp(t));
                record(t, u);
                return traj;
            }
        } else {
            u = usave;
            t = tsave;
        }
        if (std::abs(h) < 1e-17 * std::max(1.0, std::abs(t))) {
            traj.truncated = true;
            traj.note = "step size underflow at x = " + std::to_string(std::exp(t));
            record(t, u);
            return traj;
        }
        if (++steps > max_steps) {
            traj.truncated = true;
            traj.note = "step budget exhausted";
            record(t, u);
            return traj;
        }
    }
    while (next < grid.size()) {
        record(grid[next], u);
        ++next;
    }
    return traj;
}

FlatnessReport flatness_experiment(const BBSystem& sys,
                                   const std::vector<std::complex<double>>& y_a, double a,
                                   double x_min, const IntegrateOptions& opt)
{
    double norm0 = 0;
    for (auto v : y_a) norm0 += std::norm(v);
    norm0 = std::sqrt(norm0);
    if (norm0 == 0) throw std::runtime_error("flatness_experiment: y(a) must be nonzero");

    FlatnessReport rep;
    rep.trajectory = numeric_integrate(sys, y_a, a, x_min, opt);

    // observed tube radius
    double ymax = 0;
    for (const auto& p : rep.trajectory.samples) {
        double s = 0;
        for (auto v : p.y) s += std::norm(v);
        ymax = std::max(ymax, std::sqrt(s));
    }
    const double R = 2 * ymax;

    // degree-wise majorant: |F_i(x, y)| <= sum |c| a^{j} R^{|alpha|-1} |y|
    // over monomials with |alpha| >= 1; a pure-x monomial breaks the bound.
    const int n = sys.n;
    double Csq = 0;
    for (int i = 0; i < n; ++i) {
        double Ci = 0;
        for (const auto& [e, c] : sys.F[i].terms()) {
            int ydeg = 0;
            for (int q = 0; q < n; ++q) ydeg += e[1 + q];
            if (ydeg == 0)
                throw std::runtime_error("flatness_experiment: F has a pure-x term; the "
                                         "Lipschitz bound |F| <= C|y| is unavailable");
            Ci += c.abs() * std::pow(a, double(e[0])) * std::pow(R, double(ydeg - 1));
        }
        Csq += Ci * Ci;
    }
    rep.C = std::sqrt(Csq);
    rep.Ctilde = norm0 / std::pow(a, rep.C);

    double margin = std::numeric_limits<double>::infinity();
    for (const auto& p : rep.trajectory.samples) {
        double s = 0;
        for (auto v : p.y) s += std::norm(v);
        double lower = rep.Ctilde * std::pow(p.x, rep.C);
        if (lower > 0) margin = std::min(margin, std::sqrt(s) / lower);
    }
    rep.margin = margin;
    // certification up to the accumulated integrator error
    rep.bound_holds = margin >= 1.0 - std::max(1e4 * opt.rel_tol, 1e-9);
    return rep;
}

} // namespace crfuchs
