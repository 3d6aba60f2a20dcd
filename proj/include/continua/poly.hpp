// Licensed under the Apache License 2.0 (see LICENSE file).
#pragma once

#include <vector>

#include "continua/plfunction.hpp"

namespace continua {

// Dense univariate polynomial with rational coefficients, degree <= 4.
struct Poly {
  std::vector<Rat> c;  // c[i] * t^i; normalized (no trailing zeros)

  static constexpr int kMaxDegree = 4;

  Poly() = default;
  explicit Poly(std::vector<Rat> coef);
  static Poly constant(const Rat& v) { return Poly({v}); }
  static Poly linear(const Rat& c0, const Rat& c1) { return Poly({c0, c1}); }

  int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 if zero
  bool is_zero() const { return c.empty(); }
  Rat eval(const Rat& t) const;
  Poly derivative() const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;  // throws past kMaxDegree
  Poly scaled(const Rat& k) const;

  bool operator==(const Poly&) const = default;
};

// Interval evaluation of p over [a, b] by Horner with rational interval
// arithmetic; the result encloses the range of p on [a, b].
CertifiedValue poly_range(const Poly& p, const Rat& a, const Rat& b);

// Distinct real roots of p in the open interval (a, b), reported as
// enclosing intervals of width <= width (exact roots as point intervals).
std::vector<CertifiedValue> isolate_roots(const Poly& p, const Rat& a,
                                          const Rat& b, const Rat& width);

struct PolyPiece {
  Rat t0, t1;  // in edge coordinates, t0 < t1
  Poly p;
};

struct Extrema {
  CertifiedValue min, max;
  Point min_witness, max_witness;
};

// Continuous piecewise polynomial (degree <= 4) on a MetricGraph; the
// pieces partition each edge and adjacent pieces agree at the seams.
class PiecewisePoly {
 public:
  PiecewisePoly(GraphPtr graph, std::vector<std::vector<PolyPiece>> data,
                std::vector<Rat> vertex_values);

  static PiecewisePoly from_pl(const PLFunction& f);
  static PiecewisePoly mul(const PLFunction& f, const PLFunction& g);

  const GraphPtr& graph() const { return graph_; }
  const std::vector<std::vector<PolyPiece>>& data() const { return data_; }

  PiecewisePoly add(const PiecewisePoly& o) const;
  PiecewisePoly sub(const PiecewisePoly& o) const;
  PiecewisePoly mul(const PiecewisePoly& o) const;
  PiecewisePoly scaled(const Rat& k) const;
  PiecewisePoly add_const(const Rat& k) const;
  PiecewisePoly negate() const { return scaled(Rat(-1)); }

  Rat eval_edge(int e, const Rat& t) const;
  bool is_zero() const;
  int max_degree() const;

  // Certified extrema: exact for degree <= 2 pieces, root isolation of
  // the derivative for cubic/quartic pieces.  Result widths <= width.
  Extrema extrema(const Rat& width) const;
  // sup |p| over the graph.
  CertifiedValue sup_norm(const Rat& width) const;

 private:
  GraphPtr graph_;
  std::vector<std::vector<PolyPiece>> data_;
  std::vector<Rat> vertex_values_;

  template <typename F>
  PiecewisePoly zip(const PiecewisePoly& o, F&& combine) const;
};

// sup-norm of a general value that is either PL (exact) or piecewise
// polynomial (certified).
CertifiedValue norm_of(const Extrema& ex);

}  // namespace continua
