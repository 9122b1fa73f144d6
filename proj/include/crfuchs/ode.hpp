#pragma once

#include "crfuchs/hypersurface.hpp"
#include "crfuchs/jet.hpp"
#include "crfuchs/report.hpp"

namespace crfuchs {

/// Variable space of a singular ODE defining function: (z, w, zeta).
const VarsPtr& ode_space();

/// w'' = w^m Phi(z, w, w'/w^m) with Phi = O(zeta^2), holomorphic at 0.
struct SingularODE {
    int m = 1;
    Jet Phi; // over ode_space()

    /// Coefficient jet Phi_kl(w) of z^k zeta^l.
    Jet phi_slice(int k, int l) const;
    /// Coefficient of z^k w^j zeta^l.
    Scalar phi_coeff(int k, int j, int l) const;
};

Truncation default_ode_truncation(int m);

/// Checks Phi = O(zeta^2) and reports the offending monomial if not.
ValidationReport validate(const SingularODE& e);

/// Builds the associated singular ODE from the Segre family of an
/// exponential-form hypersurface: differentiate the Segre graphs once,
/// eliminate the parameters by jet reversion, differentiate again.
SingularODE associate(const ExponentialForm& x, const Truncation& trunc);
SingularODE associate(const ExponentialForm& x); // default truncation

struct SegreReport {
    bool zero = true;
    std::string offending; // first nonzero residual monomial, empty if zero
    int checked_z_degree = 0;
    int checked_total = -1;
};

/// Substitutes the two-parameter Segre graph family into the ODE and checks
/// that the residual w'' - w^m Phi(z, w, w'/w^m) vanishes identically in
/// (z, xi_bar, eta_bar) modulo the given caps. The stored series of `x` and
/// `e` are read as exact; when they are themselves truncations of a longer
/// pipeline, restrict the check with `total_box` (combined degree in
/// z, xi_bar, eta_bar) to the jointly exact region.
SegreReport verify_segre_solutions(const ExponentialForm& x, const SingularODE& e,
                                   int z_depth = -1, int xi_cap = -1, int eta_cap = -1,
                                   int total_box = -1);

FuchsVerdict check_fuchsian_ode(const SingularODE& e, double numeric_tol = -1);

/// The model ODE Phi = w^{m-1} zeta^2.
SingularODE model_ode(int m, const Truncation& trunc);
SingularODE model_ode(int m);

} // namespace crfuchs
