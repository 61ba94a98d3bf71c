#include "mldr/rational.hpp"

#include <ostream>

namespace mldr {

Rational::Rational(long n, long d) {
  if (d == 0) throw DivisionByZero("rational with zero denominator");
  v_ = mpq_class(n, d);
  v_.canonicalize();
}

Rational Rational::operator/(const Rational& o) const {
  if (o.is_zero()) throw DivisionByZero("rational division by zero");
  return Rational(mpq_class(v_ / o.v_));
}

Rational Rational::inverse() const {
  if (is_zero()) throw DivisionByZero("inverse of zero rational");
  mpq_class r;
  mpq_inv(r.get_mpq_t(), v_.get_mpq_t());
  return Rational(r);
}

Rational Rational::parse(const std::string& text) {
  auto first = text.find_first_not_of(" \t");
  auto last = text.find_last_not_of(" \t");
  if (first == std::string::npos) throw FormatError("empty rational literal");
  std::string body = text.substr(first, last - first + 1);

  std::string num = body, den = "1";
  if (auto slash = body.find('/'); slash != std::string::npos) {
    num = body.substr(0, slash);
    den = body.substr(slash + 1);
  }
  auto valid_int = [](const std::string& s) {
    size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i)
      if (!isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  if (!valid_int(num) || !valid_int(den)) throw FormatError("bad rational literal: " + text);

  mpz_class n(num), d(den);
  if (d == 0) throw DivisionByZero("rational literal with zero denominator: " + text);
  mpq_class v(n);
  v /= mpq_class(d);
  Rational out;
  out.v_ = v;
  return out;
}

std::string Rational::str() const {
  if (is_integer()) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace mldr
