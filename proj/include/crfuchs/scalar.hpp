#pragma once

#include <complex>
#include <string>
#include <variant>

#include "crfuchs/gaussian_rational.hpp"
#include "crfuchs/param_poly.hpp"

namespace crfuchs {

/// Coefficient of a Jet: exact Gaussian rational, double-precision complex,
/// or a polynomial in formal parameters. Exact and float coefficients never
/// mix with parameters from incompatible rings; rational values promote into
/// the other two kinds as needed.
class Scalar {
public:
    using F64 = std::complex<double>;

    Scalar() : v_(GaussianRational()) {}
    Scalar(long n) : v_(GaussianRational(n)) {}
    Scalar(GaussianRational q) : v_(std::move(q)) {}
    Scalar(F64 z) : v_(z) {}
    Scalar(ParamPoly p) : v_(std::move(p)) {}

    static Scalar i() { return Scalar(GaussianRational::i()); }
    static Scalar rat(long num, long den);

    bool is_rational() const { return std::holds_alternative<GaussianRational>(v_); }
    bool is_float() const { return std::holds_alternative<F64>(v_); }
    bool is_param() const { return std::holds_alternative<ParamPoly>(v_); }

    const GaussianRational& rational() const { return std::get<GaussianRational>(v_); }
    F64 f64() const { return std::get<F64>(v_); }
    const ParamPoly& param_poly() const { return std::get<ParamPoly>(v_); }

    bool is_zero() const;
    bool is_one() const;
    /// True when the scalar is invertible (nonzero number, or unit ParamPoly).
    bool is_unit() const;

    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }

    Scalar inv() const;
    friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inv(); }

    Scalar conj() const;
    Scalar pow(long e) const;

    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    F64 to_complex() const;
    double abs() const;
    std::string str() const;

private:
    std::variant<GaussianRational, F64, ParamPoly> v_;
};

} // namespace crfuchs
