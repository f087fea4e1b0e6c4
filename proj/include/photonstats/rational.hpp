#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>

#include "photonstats/errors.hpp"

namespace photonstats {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Exact: every finite double is a dyadic rational.
inline Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw ValidationError("rational_from_double: non-finite value");
    return Rational(x);
}

inline Rational rational_pow(const Rational& base, int e) {
    if (e < 0) {
        if (base == 0) throw NumericError("rational_pow: zero to negative power");
        Rational inv = Rational(denominator(base), numerator(base));
        return rational_pow(inv, -e);
    }
    Rational r(1), b = base;
    while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

// Complex number with exact rational real and imaginary parts.
struct CRational {
    Rational re, im;

    CRational() : re(0), im(0) {}
    CRational(Rational r) : re(std::move(r)), im(0) {}
    CRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    explicit CRational(const std::complex<double>& z)
        : re(rational_from_double(z.real())), im(rational_from_double(z.imag())) {}

    bool is_real() const { return im == 0; }
    bool is_zero() const { return re == 0 && im == 0; }

    CRational& operator+=(const CRational& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    CRational& operator-=(const CRational& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    CRational& operator*=(const CRational& o) {
        Rational r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = std::move(r);
        return *this;
    }

    // Hidden friends: found by ADL only, so they never enter overload
    // resolution for unrelated (e.g. Eigen expression) operands.
    friend CRational operator+(CRational a, const CRational& b) { return a += b; }
    friend CRational operator-(CRational a, const CRational& b) { return a -= b; }
    friend CRational operator*(CRational a, const CRational& b) { return a *= b; }
    friend CRational operator*(const Rational& s, CRational a) {
        a.re *= s;
        a.im *= s;
        return a;
    }
    friend bool operator==(const CRational& a, const CRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const CRational& a, const CRational& b) { return !(a == b); }
};

inline CRational conj(const CRational& z) { return {z.re, -z.im}; }
inline Rational norm2(const CRational& z) { return z.re * z.re + z.im * z.im; }
inline std::complex<double> to_complex(const CRational& z) {
    return {to_double(z.re), to_double(z.im)};
}

inline CRational crational_pow(const CRational& base, int e) {
    CRational r(Rational(1)), b = base;
    while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

}  // namespace photonstats
