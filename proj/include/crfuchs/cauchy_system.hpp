#pragma once

#include <array>

#include "crfuchs/briot_bouquet.hpp"
#include "crfuchs/mapping_solver.hpp"

namespace crfuchs {

/// Laurent series in w: num / w^pole.
struct LaurentJet {
    int pole = 0;
    Jet num; // jet over w_space

    bool is_zero() const { return num.is_zero(); }
    /// order in w (can be negative); kInfOrder for 0
    int ord() const { return num.is_zero() ? kInfOrder : num.order() - pole; }
    /// drops common w factors between num and the pole
    LaurentJet normalized() const;
    std::string str() const;
};

/// Multiindex pair (alpha over Y, beta over Ytilde), four components each.
struct CoeffKey {
    std::array<unsigned char, 4> alpha{};
    std::array<unsigned char, 4> beta{};
    int weight() const
    {
        int s = 0;
        for (auto a : alpha) s += a;
        for (auto b : beta) s += b;
        return s;
    }
    auto operator<=>(const CoeffKey&) const = default;
};

/// The singular second-order system for the Cauchy data of a normalized map:
///   w^{m+1} g0'' = S(w, Y, wY'),   w^{2m} X'' = T(w, Y, wY'),
/// with Y = (g0, g1, f0, f1) and X = (g1, f0, f1). Row 0 carries S; rows
/// 1..3 carry the components of T. Coefficients are stored per multiindex as
/// Laurent series so non-Fuchsian data remains representable.
struct CauchySystem {
    int m = 1;
    int param_degree_cap = 3;
    std::array<std::map<CoeffKey, LaurentJet>, 4> rows;

    // defining pair kept for the exact polynomial-part re-derivation in
    // reduce_to_bb
    std::shared_ptr<const SingularODE> source, target;

    const LaurentJet* coeff(int row, const CoeffKey& key) const
    {
        auto it = rows[row].find(key);
        return it == rows[row].end() ? nullptr : &it->second;
    }
};

struct CauchyDeriveOptions {
    int param_degree_cap = 3;  // total degree kept in the Y/Ytilde symbols
    int depth_cap = -1;        // cap on the working w-depth (-1: from the inputs)
    long param_budget = 100000; // cap on the parameter-monomial count
};

/// Symbolic derivation of the Cauchy-data system from the transformation
/// rule: formal symbols for the data and its derivatives, elimination of the
/// higher z-coefficients through the zeta^0/zeta^1 relations, collection of
/// the zeta^2/zeta^3 coefficients at z-degrees 0 and 1, and normalization to
/// the displayed left-hand sides.
CauchySystem derive_cauchy_system(const SingularODE& e_star, const SingularODE& e,
                                  const CauchyDeriveOptions& opt = {});

struct TSOrderReport {
    bool all_hold = true;
    std::vector<OrderCondition> conditions;
};

/// Residual of the system rows on concrete Cauchy data:
/// w^{m+1} g0'' - S(w, Y, wY') and w^{2m} X'' - T(w, Y, wY').
/// Vanishes modulo the reliable depth iff the data solves the system.
std::vector<LaurentJet> cauchy_residual(const CauchySystem& cs, const CauchyData& data);

/// Order bounds on the stored coefficients: ord T_{a,b} >= 2m-1-|a|-|b| and
/// ord S_{a,b} >= m-|a|-|b| for |a|+|b| > 0, plus ord S_00 >= m and
/// ord T_00 >= 2m-1.
TSOrderReport check_TS_orders(const CauchySystem& cs, int m);

struct BBReduction {
    int m = 1;
    std::vector<Jet> P;       // 4 polynomial parts, degree <= 2m-1, P(0) = 0
    TSOrderReport shifted_orders; // the post-shift bounds (tilde system)
    std::vector<Jet> R;       // w^2 U'' = R_i(w, U, wU'), jets over bb_space(8)
    BBSystem Q;               // first-order Briot-Bouquet form in bold-U = (U, V)
    GRatVector U0;            // constant part of U; y = bold-U - (U0, 0) vanishes at 0

    /// The system for y = (U, V) - (U0, 0); suitable for formal_solve.
    BBSystem shifted_system() const;
};

/// Decomposes the solution H = P + w^{2m} U, substitutes, and rewrites the
/// system in first-order Briot-Bouquet form w U' = Q(w, U). Negative powers
/// in Q signal a Fuchsian-bound violation and raise an error naming the
/// failed coefficient.
BBReduction reduce_to_bb(const CauchySystem& cs, const CauchyData& data, int m);

} // namespace crfuchs
