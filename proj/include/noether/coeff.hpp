#pragma once

#include <compare>
#include <complex>
#include <ostream>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace noether {

using Rational = mpq_class;

/// Exact element of Q(i): re + i*im with arbitrary-precision rational parts.
class Coeff {
public:
  Coeff() = default;
  Coeff(long v) : re_(v), im_(0) {}  // NOLINT: implicit from integer literals
  Coeff(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static Coeff imag_unit() { return {0, 1}; }
  static Coeff fraction(long num, long den) { return Coeff(Rational(num, den)); }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  Coeff conj() const { return {re_, -im_}; }

  Coeff inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero coefficient");
    Rational n = re_ * re_ + im_ * im_;
    return {re_ / n, -im_ / n};
  }

  Coeff operator-() const { return {-re_, -im_}; }
  Coeff& operator+=(const Coeff& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  Coeff& operator-=(const Coeff& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  Coeff& operator*=(const Coeff& o) {
    Rational r = re_ * o.re_ - im_ * o.im_;
    Rational i = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
  }
  Coeff& operator/=(const Coeff& o) { return *this *= o.inverse(); }

  friend Coeff operator+(Coeff a, const Coeff& b) { return a += b; }
  friend Coeff operator-(Coeff a, const Coeff& b) { return a -= b; }
  friend Coeff operator*(Coeff a, const Coeff& b) { return a *= b; }
  friend Coeff operator/(Coeff a, const Coeff& b) { return a /= b; }

  friend bool operator==(const Coeff& a, const Coeff& b) { return a.re_ == b.re_ && a.im_ == b.im_; }

  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

  /// Rendering used by the DSL printer: "3/2", "-i", "(1/2+3/2*i)".
  std::string str() const {
    auto rat = [](const Rational& q) { return q.get_str(); };
    if (sgn(im_) == 0) return rat(re_);
    std::string imag;
    if (im_ == 1)
      imag = "i";
    else if (im_ == -1)
      imag = "-i";
    else
      imag = rat(im_) + "*i";
    if (sgn(re_) == 0) return imag;
    std::string s = "(" + rat(re_);
    if (sgn(im_) > 0) s += "+";
    return s + imag + ")";
  }

private:
  Rational re_{0};
  Rational im_{0};
};

inline std::ostream& operator<<(std::ostream& os, const Coeff& c) { return os << c.str(); }

}  // namespace noether
