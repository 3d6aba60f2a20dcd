// Licensed under the Apache License 2.0 (see LICENSE file).
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "continua/rational.hpp"

namespace continua {

// Quantifier-free terms in the (real, abelian) C*-algebra signature.
// Degree is tracked so that evaluation stays inside the exact
// piecewise-polynomial pipeline: products take two piecewise-linear
// factors, |.| applies to piecewise-linear arguments only.
struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Var, One, Zero, Scale, Add, Sub, Mul, Abs };
  Kind kind;
  int var = -1;  // 0-based; surface syntax x1, x2, ...
  Rat scalar;
  TermPtr a, b;
  int degree = 0;

  static TermPtr variable(int index);
  static TermPtr one();
  static TermPtr zero();
  static TermPtr scale(Rat c, TermPtr t);
  static TermPtr add(TermPtr x, TermPtr y);
  static TermPtr sub(TermPtr x, TermPtr y);
  static TermPtr mul(TermPtr x, TermPtr y);  // both factors degree <= 1
  static TermPtr abs(TermPtr t);             // argument degree <= 1
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Continuous-logic formulas over the above terms: ||t||, rational
// constants, +, truncated subtraction, max, min, scalar multiples,
// square root and the metric d(t1, t2) = ||t1 - t2||.
struct Formula {
  enum class Kind { Norm, Const, Add, TruncSub, Max, Min, Scale, Sqrt, Dist };
  Kind kind;
  Rat scalar;
  TermPtr t1, t2;
  std::vector<FormulaPtr> args;

  static FormulaPtr norm(TermPtr t);
  static FormulaPtr constant(Rat c);
  static FormulaPtr add(FormulaPtr x, FormulaPtr y);
  static FormulaPtr truncsub(FormulaPtr x, FormulaPtr y);
  static FormulaPtr fmax(std::vector<FormulaPtr> xs);
  static FormulaPtr fmin(std::vector<FormulaPtr> xs);
  static FormulaPtr scale(Rat c, FormulaPtr x);
  static FormulaPtr sqrt(FormulaPtr x);
  static FormulaPtr dist(TermPtr x, TermPtr y);

  // Largest variable index used, plus one (0 for a closed formula).
  int var_count() const;
};

bool term_equal(const TermPtr& a, const TermPtr& b);
bool formula_equal(const FormulaPtr& a, const FormulaPtr& b);

std::string print_term(const TermPtr& t);
std::string print_formula(const FormulaPtr& f);

// Parses the documented concrete syntax (see docs/formula-grammar.md).
// Throws ParseError with a character position on bad input; degree-cap
// violations are reported here, at parse time.
FormulaPtr parse_formula(const std::string& text);

}  // namespace continua
