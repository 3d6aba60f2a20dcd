// Licensed under the Apache License 2.0 (see LICENSE file).
#include "continua/rational.hpp"

#include <algorithm>

namespace continua {

Rat rat_from_string(const std::string& s) {
  if (s.empty()) throw InvalidInput("empty rational literal");
  std::size_t pos = 0;
  if (s[pos] == '+' || s[pos] == '-') ++pos;
  if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
    throw InvalidInput("bad rational literal: '" + s + "'");
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den == 0) throw InvalidInput("zero denominator in '" + s + "'");
    return Rat(num, den);
  } catch (const std::runtime_error& e) {
    throw InvalidInput("bad rational literal: '" + s + "'");
  }
}

std::string rat_to_string(const Rat& r) {
  Int num = numerator(r), den = denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

Int rat_floor(const Rat& r) {
  Int num = numerator(r), den = denominator(r);
  Int q = num / den;
  if (num < 0 && q * den != num) --q;
  return q;
}

CertifiedValue cv_add(const CertifiedValue& a, const CertifiedValue& b) {
  return {a.lower + b.lower, a.upper + b.upper};
}

CertifiedValue cv_sub(const CertifiedValue& a, const CertifiedValue& b) {
  return {a.lower - b.upper, a.upper - b.lower};
}

CertifiedValue cv_truncsub(const CertifiedValue& a, const CertifiedValue& b) {
  Rat lo = a.lower - b.upper, hi = a.upper - b.lower;
  return {std::max(lo, Rat(0)), std::max(hi, Rat(0))};
}

CertifiedValue cv_min(const CertifiedValue& a, const CertifiedValue& b) {
  return {std::min(a.lower, b.lower), std::min(a.upper, b.upper)};
}

CertifiedValue cv_max(const CertifiedValue& a, const CertifiedValue& b) {
  return {std::max(a.lower, b.lower), std::max(a.upper, b.upper)};
}

CertifiedValue cv_scale(const Rat& c, const CertifiedValue& a) {
  if (c >= 0) return {c * a.lower, c * a.upper};
  return {c * a.upper, c * a.lower};
}

CertifiedValue sqrt_bounds(const Rat& r, const Rat& width) {
  if (r < 0) throw Error("sqrt of negative rational");
  if (r == 0) return CertifiedValue::exact(Rat(0));
  if (width <= 0) throw Error("sqrt width must be positive");
  // Scale so that one integer step is at most `width`: find k = isqrt(r*4^m)
  // with 2^m >= 1/width, giving sqrt(r) in [k/2^m, (k+1)/2^m].
  Int scale = 1;
  Rat inv = 1 / width;
  while (Rat(scale) < inv) scale <<= 1;
  Int num = numerator(r), den = denominator(r);
  // floor(r * scale^2) = floor(num*scale^2 / den)
  Int scaled = (num * scale * scale) / den;
  Int k = sqrt(scaled);
  Rat lo = Rat(k, scale);
  Rat hi = Rat(k + 1, scale);
  // Tighten when exact: k^2 * den == num * scale^2 means lo^2 == r.
  if (lo * lo == r) return CertifiedValue::exact(lo);
  return {lo, hi};
}

CertifiedValue cv_sqrt(const CertifiedValue& a, const Rat& width) {
  if (a.upper < 0) throw Error("sqrt of a negative certified value");
  Rat lo = std::max(a.lower, Rat(0));
  CertifiedValue blo = sqrt_bounds(lo, width / 2);
  CertifiedValue bhi = sqrt_bounds(a.upper, width / 2);
  return {blo.lower, bhi.upper};
}

}  // namespace continua
