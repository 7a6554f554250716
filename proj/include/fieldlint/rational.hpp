#ifndef FIELDLINT_RATIONAL_HPP
#define FIELDLINT_RATIONAL_HPP

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace fieldlint {

/// Exact arbitrary-precision rational number.
using Rational = boost::multiprecision::cpp_rational;

std::string to_string(const Rational& r);

/// Parses "3", "-3/2", "+1/4".  Throws std::invalid_argument.
Rational parse_rational(const std::string& text);

double to_double(const Rational& r);

/// Gaussian rational a + b*i; the coefficient ring of canonical monomials.
struct Coefficient {
  Rational re{0};
  Rational im{0};

  Coefficient() = default;
  Coefficient(Rational r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  Coefficient(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static Coefficient imaginary_unit() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_one() const { return re == 1 && im == 0; }

  Coefficient conjugate() const { return {re, -im}; }
  Coefficient inverse() const;

  Coefficient& operator+=(const Coefficient& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  friend Coefficient operator+(Coefficient a, const Coefficient& b) { return a += b; }
  friend Coefficient operator-(const Coefficient& a) { return {-a.re, -a.im}; }
  friend Coefficient operator-(const Coefficient& a, const Coefficient& b) { return a + (-b); }
  friend Coefficient operator*(const Coefficient& a, const Coefficient& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend bool operator==(const Coefficient& a, const Coefficient& b) {
    return a.re == b.re && a.im == b.im;
  }
};

std::string to_string(const Coefficient& c);

}  // namespace fieldlint

#endif  // FIELDLINT_RATIONAL_HPP
