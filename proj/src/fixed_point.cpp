#include "crfuchs/fixed_point.hpp"

#include <stdexcept>

namespace crfuchs {

namespace {

// Inverse of an n x n Scalar matrix by Gauss-Jordan; throws on singularity.
std::vector<std::vector<Scalar>> invert(std::vector<std::vector<Scalar>> M)
{
    const size_t n = M.size();
    std::vector<std::vector<Scalar>> inv(n, std::vector<Scalar>(n, Scalar(0)));
    for (size_t i = 0; i < n; ++i) inv[i][i] = Scalar(1);
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && !M[p][c].is_unit()) ++p;
        if (p == n) throw std::runtime_error("solve_fixed_point: non-invertible linear part");
        std::swap(M[p], M[c]);
        std::swap(inv[p], inv[c]);
        Scalar f = M[c][c].inv();
        for (size_t j = 0; j < n; ++j) {
            M[c][j] *= f;
            inv[c][j] *= f;
        }
        for (size_t i = 0; i < n; ++i) {
            if (i == c || M[i][c].is_zero()) continue;
            Scalar g = M[i][c];
            for (size_t j = 0; j < n; ++j) {
                M[i][j] -= g * M[c][j];
                inv[i][j] -= g * inv[c][j];
            }
        }
    }
    return inv;
}

int mono_total(const Jet::Mono& e)
{
    int t = 0;
    for (auto d : e) t += d;
    return t;
}

} // namespace

std::vector<Jet> solve_fixed_point(const std::vector<Jet>& G, int ny)
{
    if (G.empty() || ny <= 0 || static_cast<size_t>(ny) != G.size())
        throw std::runtime_error("solve_fixed_point: need one equation per unknown");
    const VarsPtr& vars = G[0].vars();
    const size_t nv = vars->size();
    const size_t nx = nv - ny;
    Truncation t = G[0].trunc();
    for (const auto& g : G) t = t.min_with(g.trunc());

    // linear part A[i][j] = coefficient of the pure y_j monomial in G_i
    std::vector<std::vector<Scalar>> M(ny, std::vector<Scalar>(ny, Scalar(0)));
    for (int i = 0; i < ny; ++i)
        for (int j = 0; j < ny; ++j) {
            Jet::Mono e(nv, 0);
            e[nx + j] = 1;
            M[i][j] = Scalar(0) - G[i].coeff(e); // entry of I - A, diagonal added below
        }
    for (int i = 0; i < ny; ++i) M[i][i] += Scalar(1);
    auto Minv = invert(std::move(M));

    std::vector<Jet> inners;
    inners.reserve(nv);
    for (size_t i = 0; i < nx; ++i) inners.push_back(Jet::variable(vars, t, static_cast<int>(i)));
    std::vector<Jet> y(ny, Jet::zero(vars, t));
    for (int i = 0; i < ny; ++i) inners.push_back(y[i]);

    for (int d = 1; d <= t.total_cap; ++d) {
        std::vector<Jet> g(ny);
        bool fixed = true;
        for (int i = 0; i < ny; ++i) {
            g[i] = compose(G[i], inners);
            if (!(g[i] == y[i])) fixed = false;
        }
        if (fixed) break;
        // collect degree-d monomials of the g_i and solve (I-A) y_d = g_d
        std::vector<Jet> yd(ny, Jet::zero(vars, t));
        std::map<Jet::Mono, std::vector<Scalar>, Jet::GradedLess> rhs;
        for (int i = 0; i < ny; ++i)
            for (const auto& [e, c] : g[i].terms()) {
                if (mono_total(e) != d) continue;
                auto it = rhs.try_emplace(e, std::vector<Scalar>(ny, Scalar(0))).first;
                it->second[i] = c;
            }
        for (const auto& [e, v] : rhs)
            for (int i = 0; i < ny; ++i) {
                Scalar s(0);
                for (int j = 0; j < ny; ++j) s += Minv[i][j] * v[j];
                yd[i].add_term(e, s);
            }
        for (int i = 0; i < ny; ++i) {
            y[i] += yd[i];
            inners[nx + i] = y[i];
        }
    }

    for (int i = 0; i < ny; ++i) {
        Jet res = compose(G[i], inners) - y[i];
        if (!res.is_zero())
            throw std::runtime_error(
                "solve_fixed_point: residual nonzero at order " + std::to_string(res.order()) +
                " (filtration does not contract)");
    }
    return y;
}

} // namespace crfuchs
