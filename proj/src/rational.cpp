#include "fieldlint/rational.hpp"

#include <stdexcept>

namespace fieldlint {

std::string to_string(const Rational& r) { return r.str(); }

Rational parse_rational(const std::string& text) {
  std::string s = text;
  if (!s.empty() && s.front() == '+') s.erase(0, 1);
  const auto slash = s.find('/');
  auto check_digits = [&](const std::string& part, bool allow_sign) {
    std::size_t start = (allow_sign && !part.empty() && part.front() == '-') ? 1 : 0;
    if (part.size() <= start) throw std::invalid_argument("bad rational: " + text);
    for (std::size_t i = start; i < part.size(); ++i) {
      if (part[i] < '0' || part[i] > '9') throw std::invalid_argument("bad rational: " + text);
    }
  };
  if (slash == std::string::npos) {
    check_digits(s, true);
    return Rational(boost::multiprecision::cpp_int(s));
  }
  const std::string num = s.substr(0, slash);
  const std::string den = s.substr(slash + 1);
  check_digits(num, true);
  check_digits(den, false);
  boost::multiprecision::cpp_int d(den);
  if (d == 0) throw std::invalid_argument("zero denominator: " + text);
  return Rational(boost::multiprecision::cpp_int(num), d);
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Coefficient Coefficient::inverse() const {
  const Rational norm = re * re + im * im;
  if (norm == 0) throw std::domain_error("inverse of zero coefficient");
  return {re / norm, -im / norm};
}

std::string to_string(const Coefficient& c) {
  if (c.im == 0) return to_string(c.re);
  std::string imag = (c.im == 1) ? "i" : (c.im == -1 ? "-i" : to_string(c.im) + "*i");
  if (c.re == 0) return imag;
  if (imag.front() == '-') return "(" + to_string(c.re) + " - " + imag.substr(1) + ")";
  return "(" + to_string(c.re) + " + " + imag + ")";
}

}  // namespace fieldlint
