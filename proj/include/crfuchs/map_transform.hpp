#pragma once

#include "crfuchs/ode.hpp"
#include "crfuchs/report.hpp"

namespace crfuchs {

const VarsPtr& map_space(); // (z, w)
const VarsPtr& w_space();   // (w)

/// z -> z + f(z,w), w -> w + w g0(w) + w^m g(z,w) with
/// f_z(0,0) = 0, g0(0) = 0, g = O(zw), g0^(l)(0) real for l <= m-1.
struct NormalizedMap {
    int m = 1;
    Jet f;  // over map_space
    Jet g0; // over w_space
    Jet g;  // over map_space

    static NormalizedMap identity(int m, int degree_cap);
};

struct Dilation {
    GaussianRational lambda{1};
    GaussianRational mu{1};
    int m = 1;
    int eps = 1;

    static Dilation identity(int m, int eps) { return {GaussianRational(1), GaussianRational(1), m, eps}; }
};

/// A general invertible formal map H = (F, G) subject to Lemma-type
/// constraints checked by validate_map.
struct GeneralMap {
    int m = 1;
    Jet F; // over map_space
    Jet G; // over map_space
};

ValidationReport validate(const NormalizedMap& H);
ValidationReport validate(const Dilation& d);
ValidationReport validate_map(const GeneralMap& H, int m);

GeneralMap normalized_to_general(const NormalizedMap& H);
GeneralMap dilation_to_general(const Dilation& d, int degree_cap);

/// H1 after H2: (H1 o H2)(z, w) = H1(H2(z, w)).
GeneralMap compose_maps(const GeneralMap& H1, const GeneralMap& H2);

/// Factors H = H0 o psi with psi the dilation carrying the linear part.
std::pair<NormalizedMap, Dilation> factor(const GeneralMap& H, int m, int eps);

/// J and the bracketed right-hand side of the ODE transformation rule, so
/// that the transformed defining function is bracket / J. All jets over
/// ode_space at the working truncation `tw`.
struct TransformParts {
    Jet J;
    Jet bracket;
};
TransformParts transform_rule_parts(const Jet& PhiStar, const NormalizedMap& H,
                                    const Truncation& tw);

/// Transforms an ODE by a normalized map (term-for-term transformation rule).
/// Throws if the result violates the singular-ODE shape Phi = O(zeta^2).
SingularODE push_forward(const SingularODE& e_star, const NormalizedMap& H0);

struct IdentityResidual {
    bool zero = true;
    std::string offending;
};

/// Residual of the transformation-rule identity for the triple
/// (source e_star, target e, map H0); zero iff H0 maps E* to E mod truncation.
IdentityResidual verify_transformation_identity(const SingularODE& e_star, const SingularODE& e,
                                                const NormalizedMap& H0);

} // namespace crfuchs
