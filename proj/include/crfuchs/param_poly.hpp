#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "crfuchs/gaussian_rational.hpp"

namespace crfuchs {

/// A finite set of formal parameters with per-parameter and total degree caps.
/// Degrees beyond a cap are truncated away; this makes nonconstant elements
/// nilpotent, so elements with invertible constant part are units.
struct ParamRing {
    std::vector<std::string> names;
    std::vector<int> caps;  // per-parameter degree caps, -1 = unbounded
    int total_cap = -1;     // -1 = unbounded

    int index_of(const std::string& name) const;
    bool same_as(const ParamRing& o) const
    {
        return names == o.names && caps == o.caps && total_cap == o.total_cap;
    }
};

using ParamRingPtr = std::shared_ptr<const ParamRing>;

ParamRingPtr make_param_ring(std::vector<std::string> names, std::vector<int> caps, int total_cap);
ParamRingPtr make_param_ring(std::vector<std::string> names, int uniform_cap, int total_cap);

/// Sparse polynomial in the ring's parameters with GaussianRational coefficients.
class ParamPoly {
public:
    using Expo = std::vector<unsigned char>;

    ParamPoly() = default;
    explicit ParamPoly(ParamRingPtr ring) : ring_(std::move(ring)) {}
    ParamPoly(ParamRingPtr ring, const GaussianRational& c);

    static ParamPoly param(const ParamRingPtr& ring, int idx);

    const ParamRingPtr& ring() const { return ring_; }
    const std::map<Expo, GaussianRational>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    GaussianRational constant_part() const;
    int degree() const;                 // total degree, -1 for 0
    int degree_in(int param_idx) const; // -1 for 0

    ParamPoly operator-() const;
    ParamPoly& operator+=(const ParamPoly& o);
    ParamPoly& operator-=(const ParamPoly& o);
    friend ParamPoly operator+(ParamPoly a, const ParamPoly& b) { return a += b; }
    friend ParamPoly operator-(ParamPoly a, const ParamPoly& b) { return a -= b; }
    friend ParamPoly operator*(const ParamPoly& a, const ParamPoly& b);

    ParamPoly& operator*=(const ParamPoly& o) { return *this = *this * o; }
    ParamPoly scaled(const GaussianRational& c) const;

    /// Inverse of a unit (nonzero constant part; nonconstant part nilpotent via caps).
    ParamPoly inv() const;

    ParamPoly conj() const;

    /// Substitutes numeric values for a subset of parameters (by index).
    ParamPoly eval_partial(const std::map<int, GaussianRational>& values) const;

    bool operator==(const ParamPoly& o) const;
    bool operator!=(const ParamPoly& o) const { return !(*this == o); }

    std::string str() const;

    void add_term(const Expo& e, const GaussianRational& c); // truncating, canonicalizing

private:
    void check_ring(const ParamPoly& o) const;
    bool within_caps(const Expo& e) const;

    ParamRingPtr ring_;
    std::map<Expo, GaussianRational> terms_;
};

} // namespace crfuchs
