#pragma once

#include <map>
#include <utility>

#include "crfuchs/jet.hpp"
#include "crfuchs/report.hpp"

namespace crfuchs {

/// v = 1/2 u^m (eps |z|^2 + sum_{k,l>=2} h_kl(u) z^k zbar^l).
/// Slices are jets in the single variable u. Entries with k=1 or l=1 are
/// admissible-shape violations; the container accepts them so validate can
/// report them.
struct RealAdmissibleForm {
    int m = 1;
    int eps = 1;
    int u_cap = 0;     // depth of the h_kl jets
    int index_cap = 0; // largest stored k or l (2m+4 by default)
    std::map<std::pair<int, int>, Jet> h;

    Jet slice(int k, int l) const; // zero jet if absent
    void set(int k, int l, Jet j);
};

/// w = wbar + i wbar^m (eps |z|^2 + sum Theta_kl(wbar) z^k zbar^l).
struct ComplexDefiningForm {
    int m = 1;
    int eps = 1;
    int tau_cap = 0;
    int index_cap = 0;
    std::map<std::pair<int, int>, Jet> Theta;

    Jet slice(int k, int l) const;
    void set(int k, int l, Jet j);
};

/// w = wbar exp(i wbar^{m-1} phi(z, zbar, wbar)), phi = eps z zbar + sum phi_kl.
struct ExponentialForm {
    int m = 1;
    int eps = 1;
    int tau_cap = 0;
    int index_cap = 0;
    std::map<std::pair<int, int>, Jet> phi;

    Jet slice(int k, int l) const;
    void set(int k, int l, Jet j);
};

RealAdmissibleForm model_hypersurface(int m, int eps, int u_cap = -1, int index_cap = -1);

ValidationReport validate(const RealAdmissibleForm& h);
ValidationReport validate(const ComplexDefiningForm& t);
ValidationReport validate(const ExponentialForm& x);

int nonminimality_order(const RealAdmissibleForm& h);
int nonminimality_order(const ComplexDefiningForm& t);
int nonminimality_order(const ExponentialForm& x);
/// u-order of the nonflat part of a raw defining jet v = F(z, zbar, u).
int nonminimality_order_raw(const Jet& F);

/// Accepts a raw defining series in normal coordinates and normalizes the
/// |z|^2 coefficient to +-1 by a real-positive rescaling of z (plus w -> -w
/// for even m with negative Levi coefficient).
RealAdmissibleForm ingest_raw(const Jet& F);

/// Conversions; `total_cap` restricts the working total degree (-1 = full).
ComplexDefiningForm real_to_complex(const RealAdmissibleForm& h, int total_cap = -1);
RealAdmissibleForm complex_to_real(const ComplexDefiningForm& t, int total_cap = -1);
ExponentialForm to_exponential(const ComplexDefiningForm& t, int total_cap = -1);
ComplexDefiningForm from_exponential(const ExponentialForm& x, int total_cap = -1);

/// Decides the Fuchsian inequalities. A nonnegative `numeric_tol` switches
/// to float-mode order reads (relative tolerance); the default is exact.
FuchsVerdict check_fuchsian_hypersurface(const RealAdmissibleForm& h, double numeric_tol = -1);

RealAdmissibleForm apply_dilation(const RealAdmissibleForm& h, const GaussianRational& lambda,
                                  const GaussianRational& mu);

/// Full defining jets over (z, zb, u) / (z, zb, tau).
Jet assemble_defining_series(const RealAdmissibleForm& h, int total_cap = -1);
Jet assemble_theta(const ComplexDefiningForm& t, int total_cap = -1);
Jet assemble_phi(const ExponentialForm& x, int total_cap = -1);

} // namespace crfuchs
