// Licensed under the Apache License 2.0 (see LICENSE file).
#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <stdexcept>
#include <string>

namespace continua {

using Rat = boost::multiprecision::mpq_rational;
using Int = boost::multiprecision::mpz_int;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad user-supplied data (graphs, functions, schemas, preconditions).
struct InvalidInput : Error {
  using Error::Error;
};

// A checked mathematical property failed on well-formed input (carries a
// witness in its message); distinct from malformed input.
struct VerificationFailure : Error {
  using Error::Error;
};

// Formula or file syntax error, with a character position.
struct ParseError : Error {
  ParseError(const std::string& msg, std::size_t pos)
      : Error(msg + " at position " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};

Rat rat_from_string(const std::string& s);
std::string rat_to_string(const Rat& r);
double rat_to_double(const Rat& r);

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

// Floor of r as an integer.
Int rat_floor(const Rat& r);

// A closed rational interval [lower, upper] guaranteed to contain the
// real value being approximated.  Exact values have lower == upper.
struct CertifiedValue {
  Rat lower;
  Rat upper;

  CertifiedValue() = default;
  CertifiedValue(Rat lo, Rat hi) : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower > upper) throw Error("CertifiedValue: lower > upper");
  }
  static CertifiedValue exact(Rat v) { return CertifiedValue(v, v); }

  Rat width() const { return upper - lower; }
  bool is_exact() const { return lower == upper; }
  Rat mid() const { return (lower + upper) / 2; }
};

CertifiedValue cv_add(const CertifiedValue& a, const CertifiedValue& b);
CertifiedValue cv_sub(const CertifiedValue& a, const CertifiedValue& b);
// Truncated subtraction max(a - b, 0), outward at the interval level.
CertifiedValue cv_truncsub(const CertifiedValue& a, const CertifiedValue& b);
CertifiedValue cv_min(const CertifiedValue& a, const CertifiedValue& b);
CertifiedValue cv_max(const CertifiedValue& a, const CertifiedValue& b);
CertifiedValue cv_scale(const Rat& c, const CertifiedValue& a);

// Certified square root with outward rounding; the result interval is at
// most `width` wider than [sqrt(a.lower), sqrt(a.upper)].  Requires
// a.upper >= 0; negative lower bounds are clamped to 0.
CertifiedValue cv_sqrt(const CertifiedValue& a, const Rat& width);

// Rational bounds on sqrt(r) of the given width (r >= 0).
CertifiedValue sqrt_bounds(const Rat& r, const Rat& width);

}  // namespace continua
