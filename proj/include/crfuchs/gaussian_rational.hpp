#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace crfuchs {

/// Exact complex rational a + bi with arbitrary-precision components.
class GaussianRational {
public:
    GaussianRational() : re_(0), im_(0) {}
    GaussianRational(long n) : re_(n), im_(0) {}
    GaussianRational(mpq_class re) : re_(std::move(re)), im_(0) {}
    GaussianRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {}

    static GaussianRational i() { return GaussianRational(mpq_class(0), mpq_class(1)); }

    /// Parses "p/q" or "p".
    static mpq_class parse_rat(const std::string& s)
    {
        mpq_class q;
        if (q.set_str(s, 10) != 0) throw std::runtime_error("bad rational literal: " + s);
        q.canonicalize();
        return q;
    }

    const mpq_class& re() const { return re_; }
    const mpq_class& im() const { return im_; }

    bool is_zero() const { return re_ == 0 && im_ == 0; }
    bool is_one() const { return re_ == 1 && im_ == 0; }
    bool is_real() const { return im_ == 0; }
    bool is_integer() const { return im_ == 0 && re_.get_den() == 1; }

    GaussianRational conj() const { return {re_, -im_}; }

    /// |z|^2 = z * conj(z), a nonnegative rational.
    mpq_class norm() const { return re_ * re_ + im_ * im_; }

    GaussianRational operator-() const { return {-re_, -im_}; }

    GaussianRational& operator+=(const GaussianRational& o)
    {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o)
    {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o)
    {
        mpq_class r = re_ * o.re_ - im_ * o.im_;
        mpq_class i = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(i);
        return *this;
    }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }

    GaussianRational inv() const
    {
        mpq_class n = norm();
        if (n == 0) throw std::runtime_error("division by zero (GaussianRational)");
        return {re_ / n, -im_ / n};
    }

    friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b)
    {
        return a * b.inv();
    }
    GaussianRational& operator/=(const GaussianRational& o) { return *this = *this / o; }

    GaussianRational pow(long e) const
    {
        if (e < 0) return inv().pow(-e);
        GaussianRational acc(1), base = *this;
        while (e > 0) {
            if (e & 1) acc *= base;
            base *= base;
            e >>= 1;
        }
        return acc;
    }

    bool operator==(const GaussianRational& o) const { return re_ == o.re_ && im_ == o.im_; }
    bool operator!=(const GaussianRational& o) const { return !(*this == o); }

    std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

    std::string str() const
    {
        if (im_ == 0) return re_.get_str();
        if (re_ == 0) return im_.get_str() + "*i";
        std::string s = re_.get_str();
        if (im_ > 0) s += "+";
        return s + im_.get_str() + "*i";
    }

private:
    mpq_class re_, im_;
};

} // namespace crfuchs
