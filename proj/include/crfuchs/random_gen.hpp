#pragma once

#include <random>

#include "crfuchs/briot_bouquet.hpp"
#include "crfuchs/hypersurface.hpp"
#include "crfuchs/mapping_solver.hpp"

namespace crfuchs {

/// Seedable generator for all randomized property suites. Coefficients are
/// Gaussian rationals with numerators and denominators bounded by 10.
class RandomGen {
public:
    explicit RandomGen(std::uint64_t seed) : eng_(seed) {}

    long pick(long lo, long hi); // inclusive
    bool coin(double p = 0.5);
    GaussianRational grat(bool real_only = false, bool nonzero = false);

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

/// The order bound Def-style tables: minimal admissible u-order for h_kl.
int fuchsian_bound_h(int m, int k, int l);
/// Minimal admissible w-order for Phi_kl.
int fuchsian_bound_phi(int m, int k, int l);

/// Random hypersurface satisfying the Fuchsian inequalities and the reality
/// condition, with sparse slice jets.
RealAdmissibleForm random_fuchsian_hypersurface(int m, std::uint64_t seed);

/// Random ODE defining function satisfying the Fuchsian inequalities
/// (coefficientwise, directly generated).
SingularODE random_fuchsian_ode(int m, std::uint64_t seed);

/// Random Cauchy data of a normalized map: four sparse w-jets respecting the
/// normalization constraints (vanishing at 0, real low-order g0 jets),
/// supported in w-degrees <= degree_cap.
CauchyData random_cauchy_data(int m, std::uint64_t seed, int degree_cap);

/// Random normalized map compatible with e_star (Cauchy data completed by
/// the PDE-system recursion).
NormalizedMap random_compatible_map(const SingularODE& e_star, std::uint64_t seed,
                                    int degree_cap);

/// Random Briot-Bouquet system x y' = F(x, y) of dimension n with holomorphic
/// F, F(0,0) = 0. When `nonresonant`, the principal matrix is triangular with
/// non-positive-integer rational eigenvalues.
BBSystem random_bb_system(int n, std::uint64_t seed, bool nonresonant, int x_cap, int y_cap);

} // namespace crfuchs
