// Licensed under the Apache License 2.0 (see LICENSE file).
#pragma once

#include <optional>
#include <string>

#include "continua/sets.hpp"

namespace continua {

// A map into the circle, represented by a real piecewise-linear angle
// lift in units of full turns: x maps to exp(2*pi*i*lift(x)).  Equality
// of circle maps is equality of lifts mod 1, exactly decidable.
struct CircleMap {
  GraphPtr domain;
  PLFunction lift;

  CircleMap(GraphPtr d, PLFunction l);
};

// A map into the arc [0, 1].
struct ArcMap {
  GraphPtr domain;
  PLFunction values;

  ArcMap(GraphPtr d, PLFunction v);
  bool surjective() const {
    return values.min_value() == 0 && values.max_value() == 1;
  }
};

struct ComposeResult {
  bool equal = false;
  std::optional<Point> witness;  // where the lifts differ mod 1
  Rat lift1, lift2;              // angle lifts at the witness
};

// Exact equality of f(r(.)) and g(s(.)) as circle maps on the shared
// domain of r and s.  Both f and g must live on arcs; r and s must take
// values inside those arcs' parameter ranges.
ComposeResult compose_check(const CircleMap& f, const ArcMap& r,
                            const CircleMap& g, const ArcMap& s);

// {w : a <= m(w) <= b} with generator max(a - values, values - b).
ClosedSet closed_preimage(const ArcMap& m, const Rat& a, const Rat& b);

struct Verdict {
  enum class Outcome {
    DisconnectionCertified,
    CompositionMismatch,
    NotSurjective,
    DichotomyViolation,
  };
  Outcome outcome;
  std::string detail;
  std::optional<Point> witness;
  std::optional<Point> witness2;
  Rat value1, value2;      // exact values backing the witness
  int component_count = 0;  // components of W (disconnection verdict)
};

// The amalgamation counterexample pipeline over the family f = exp(2 pi
// i x), g = exp(2 pi i (y + c)) with non-integer rational shift c:
// surjectivity of r and s, the composition identity, the A/B closed
// dichotomy, and the disconnection conclusion.
Verdict hoehn_check(const GraphPtr& w, const ArcMap& r, const ArcMap& s,
                    const CircleMap& f, const CircleMap& g);

struct FiberProduct {
  GraphPtr w;
  ArcMap r, s;
};

// W = {(x, y) : lift_f(x) - lift_g(y) is an integer} as an exact PL
// 1-complex, with the coordinate projections.  Edge lengths use the
// Chebyshev metric of the square, so both projections are 1-Lipschitz.
FiberProduct fiber_product_circle(const CircleMap& f, const CircleMap& g);

}  // namespace continua
