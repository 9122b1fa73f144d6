#include "crfuchs/scalar.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace crfuchs {

namespace {

[[noreturn]] void mix_error()
{
    throw std::runtime_error("cannot mix float64 and parameter-polynomial scalars");
}

} // namespace

Scalar Scalar::rat(long num, long den)
{
    mpq_class q(num, den);
    q.canonicalize();
    return Scalar(GaussianRational(q));
}

bool Scalar::is_zero() const
{
    if (is_rational()) return rational().is_zero();
    if (is_float()) return f64() == F64(0.0, 0.0);
    return param_poly().is_zero();
}

bool Scalar::is_one() const
{
    if (is_rational()) return rational().is_one();
    if (is_float()) return f64() == F64(1.0, 0.0);
    const ParamPoly& p = param_poly();
    return p.is_constant() && p.constant_part().is_one();
}

bool Scalar::is_unit() const
{
    if (is_rational()) return !rational().is_zero();
    if (is_float()) return f64() != F64(0.0, 0.0);
    return !param_poly().constant_part().is_zero();
}

Scalar Scalar::operator-() const
{
    if (is_rational()) return Scalar(-rational());
    if (is_float()) return Scalar(-f64());
    return Scalar(-param_poly());
}

// Promotion: rational lifts into float or param; float+param is an error.
Scalar& Scalar::operator+=(const Scalar& o)
{
    if (is_rational() && o.is_rational()) {
        v_ = rational() + o.rational();
    } else if (is_float() || o.is_float()) {
        if (is_param() || o.is_param()) mix_error();
        v_ = to_complex() + o.to_complex();
    } else {
        // at least one param, other rational or param
        ParamPoly a = is_param() ? param_poly()
                                 : ParamPoly(o.param_poly().ring(), rational());
        ParamPoly b = o.is_param() ? o.param_poly()
                                   : ParamPoly(param_poly().ring(), o.rational());
        v_ = a + b;
    }
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o)
{
    if (is_rational() && o.is_rational()) {
        v_ = rational() * o.rational();
    } else if (is_float() || o.is_float()) {
        if (is_param() || o.is_param()) mix_error();
        v_ = to_complex() * o.to_complex();
    } else if (is_param() && o.is_rational()) {
        v_ = param_poly().scaled(o.rational());
    } else if (is_rational() && o.is_param()) {
        v_ = o.param_poly().scaled(rational());
    } else {
        v_ = param_poly() * o.param_poly();
    }
    return *this;
}

Scalar Scalar::inv() const
{
    if (is_rational()) return Scalar(rational().inv());
    if (is_float()) {
        if (f64() == F64(0.0, 0.0)) throw std::runtime_error("division by zero (float64)");
        return Scalar(F64(1.0, 0.0) / f64());
    }
    return Scalar(param_poly().inv());
}

Scalar Scalar::conj() const
{
    if (is_rational()) return Scalar(rational().conj());
    if (is_float()) return Scalar(std::conj(f64()));
    return Scalar(param_poly().conj());
}

Scalar Scalar::pow(long e) const
{
    if (e < 0) return inv().pow(-e);
    Scalar acc(1), base = *this;
    while (e > 0) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

bool Scalar::operator==(const Scalar& o) const
{
    if (v_.index() != o.v_.index()) {
        // rational vs param constant counts as equal content
        if (is_rational() && o.is_param())
            return o.param_poly().is_constant() && o.param_poly().constant_part() == rational();
        if (is_param() && o.is_rational())
            return param_poly().is_constant() && param_poly().constant_part() == o.rational();
        return false;
    }
    return v_ == o.v_;
}

Scalar::F64 Scalar::to_complex() const
{
    if (is_rational()) return rational().to_complex();
    if (is_float()) return f64();
    if (param_poly().is_constant()) return param_poly().constant_part().to_complex();
    throw std::runtime_error("cannot convert nonconstant ParamPoly to complex");
}

double Scalar::abs() const { return std::abs(to_complex()); }

std::string Scalar::str() const
{
    if (is_rational()) return rational().str();
    if (is_param()) return param_poly().str();
    std::ostringstream os;
    os.precision(17);
    os << f64().real();
    if (f64().imag() != 0.0) os << (f64().imag() > 0 ? "+" : "") << f64().imag() << "i";
    return os.str();
}

} // namespace crfuchs
