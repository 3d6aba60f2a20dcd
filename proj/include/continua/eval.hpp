// Licensed under the Apache License 2.0 (see LICENSE file).
#pragma once

#include <variant>

#include "continua/formula.hpp"
#include "continua/poly.hpp"
#include "continua/sets.hpp"

namespace continua {

// A term's value in C(X): exactly piecewise linear or piecewise
// polynomial (degree <= 4).
using FnValue = std::variant<PLFunction, PiecewisePoly>;

struct Assignment {
  GraphPtr graph;
  std::vector<PLFunction> vars;  // index i backs variable x_{i+1}
};

struct EvalOptions {
  Rat width = Rat(1, Int("1000000000"));  // certified interval width
};

FnValue eval_term(const TermPtr& t, const Assignment& a);

// Certified evaluation of a quantifier-free formula; exact whenever the
// whole tree stays piecewise linear/quadratic.
CertifiedValue eval_qf(const FormulaPtr& f, const Assignment& a,
                       const EvalOptions& opts = {});

struct QuantifierBudget {
  int breakpoints = 3;  // interior breakpoints per edge per candidate
  int samples = 50;     // random candidates
  unsigned long long seed = 0;
};

enum class BoundMode { Sup, Inf };

struct QuantifierBound {
  CertifiedValue bound;  // lower bound of the sup / upper bound of the inf
  Assignment witness;
  int candidate_index = -1;
};

// Heuristic one-sided bound over PL candidates in the sup-norm ball of
// radius `radius`.  Deterministic for a fixed seed; nondecreasing (sup)
// or nonincreasing (inf) in the number of samples.
QuantifierBound bound_quantifier(BoundMode mode, const FormulaPtr& f,
                                 const GraphPtr& graph, int var_count,
                                 const QuantifierBudget& budget,
                                 const Rat& radius = Rat(1),
                                 const EvalOptions& opts = {});

// min(2*||1 - f^2|| dot- 1, 1 dot- 4*||f^2 - f^4||) for real f with
// ||f|| = 1; identically 0 on connected spaces, 1 at a proper projection.
CertifiedValue projectionless_value(const PLFunction& f,
                                    const EvalOptions& opts = {});

// Deterministic pseudo-random PL functions (shared by quantifier search
// and the randomized test suites).
class PLSampler {
 public:
  PLSampler(GraphPtr graph, unsigned long long seed)
      : graph_(std::move(graph)), state_(seed ^ 0x9e3779b97f4a7c15ULL) {}

  // Values uniform on [lo, hi] (denominator 64), `breakpoints` interior
  // breakpoints per edge at random dyadic parameters.
  PLFunction sample(const Rat& lo, const Rat& hi, int breakpoints);
  // Nonnegative sample scaled to sup-norm exactly 1.
  PLFunction sample_normalized(int breakpoints);
  unsigned long long next_raw();

 private:
  GraphPtr graph_;
  unsigned long long state_;
};

}  // namespace continua
