// Licensed under the Apache License 2.0 (see LICENSE file).
#pragma once

#include <cmath>
#include <vector>

#include "continua/chain.hpp"
#include "continua/eval.hpp"

namespace continua::testing {

// Dense double-precision samples of a PL function: per edge, n + 1
// equally spaced values.  The grid oracle works entirely in doubles; its
// comparisons use a tolerance well above double noise.
inline std::vector<std::vector<double>> dense_samples(const PLFunction& f,
                                                      int n) {
  const MetricGraph& g = *f.graph();
  std::vector<std::vector<double>> out(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    const Polyline& pl = f.edge_data(e);
    double len = rat_to_double(g.edge(e).length);
    std::vector<double> ts, vs;
    for (const auto& bp : pl) {
      ts.push_back(rat_to_double(bp.t));
      vs.push_back(rat_to_double(bp.v));
    }
    out[e].resize(n + 1);
    std::size_t seg = 0;
    for (int i = 0; i <= n; ++i) {
      double t = len * i / n;
      while (seg + 2 < ts.size() && t > ts[seg + 1]) ++seg;
      double t0 = ts[seg], t1 = ts[seg + 1];
      double w = t1 > t0 ? (t - t0) / (t1 - t0) : 0.0;
      if (w < 0) w = 0;
      if (w > 1) w = 1;
      out[e][i] = vs[seg] + (vs[seg + 1] - vs[seg]) * w;
    }
  }
  return out;
}

using Samples = std::vector<std::vector<double>>;

inline Samples term_samples(const TermPtr& t,
                            const std::vector<Samples>& vars) {
  auto map2 = [](const Samples& a, const Samples& b, auto&& op) {
    Samples out = a;
    for (std::size_t e = 0; e < a.size(); ++e)
      for (std::size_t i = 0; i < a[e].size(); ++i)
        out[e][i] = op(a[e][i], b[e][i]);
    return out;
  };
  auto map1 = [](const Samples& a, auto&& op) {
    Samples out = a;
    for (auto& row : out)
      for (auto& v : row) v = op(v);
    return out;
  };
  switch (t->kind) {
    case Term::Kind::Var:
      return vars.at(t->var);
    case Term::Kind::One:
      return map1(vars.at(0), [](double) { return 1.0; });
    case Term::Kind::Zero:
      return map1(vars.at(0), [](double) { return 0.0; });
    case Term::Kind::Scale: {
      double c = rat_to_double(t->scalar);
      return map1(term_samples(t->a, vars), [c](double v) { return c * v; });
    }
    case Term::Kind::Add:
      return map2(term_samples(t->a, vars), term_samples(t->b, vars),
                  [](double x, double y) { return x + y; });
    case Term::Kind::Sub:
      return map2(term_samples(t->a, vars), term_samples(t->b, vars),
                  [](double x, double y) { return x - y; });
    case Term::Kind::Mul:
      return map2(term_samples(t->a, vars), term_samples(t->b, vars),
                  [](double x, double y) { return x * y; });
    case Term::Kind::Abs:
      return map1(term_samples(t->a, vars),
                  [](double v) { return std::fabs(v); });
  }
  throw Error("unreachable");
}

inline double sup_abs(const Samples& s) {
  double m = 0;
  for (const auto& row : s)
    for (double v : row) m = std::max(m, std::fabs(v));
  return m;
}

// Grid-sampling oracle for quantifier-free formulas.
inline double formula_oracle(const FormulaPtr& f,
                             const std::vector<Samples>& vars) {
  switch (f->kind) {
    case Formula::Kind::Norm:
      return sup_abs(term_samples(f->t1, vars));
    case Formula::Kind::Dist:
      return sup_abs(term_samples(Term::sub(f->t1, f->t2), vars));
    case Formula::Kind::Const:
      return rat_to_double(f->scalar);
    case Formula::Kind::Add:
      return formula_oracle(f->args[0], vars) +
             formula_oracle(f->args[1], vars);
    case Formula::Kind::TruncSub:
      return std::max(formula_oracle(f->args[0], vars) -
                          formula_oracle(f->args[1], vars),
                      0.0);
    case Formula::Kind::Max: {
      double m = formula_oracle(f->args[0], vars);
      for (std::size_t i = 1; i < f->args.size(); ++i)
        m = std::max(m, formula_oracle(f->args[i], vars));
      return m;
    }
    case Formula::Kind::Min: {
      double m = formula_oracle(f->args[0], vars);
      for (std::size_t i = 1; i < f->args.size(); ++i)
        m = std::min(m, formula_oracle(f->args[i], vars));
      return m;
    }
    case Formula::Kind::Scale:
      return rat_to_double(f->scalar) * formula_oracle(f->args[0], vars);
    case Formula::Kind::Sqrt:
      return std::sqrt(std::max(formula_oracle(f->args[0], vars), 0.0));
  }
  throw Error("unreachable");
}

inline double psi0_oracle(const std::vector<Samples>& f) {
  double best = 1e300;
  for (std::size_t e = 0; e < f[0].size(); ++e)
    for (std::size_t i = 0; i < f[0][e].size(); ++i) {
      double s = 0;
      for (const auto& fn : f) s += std::fabs(fn[e][i]);
      best = std::min(best, s);
    }
  return best;
}

inline double psi1_oracle(const std::vector<Samples>& g) {
  double best = 0;
  for (std::size_t i = 0; i + 2 < g.size(); ++i)
    for (std::size_t j = i + 2; j < g.size(); ++j) {
      double m = 0;
      for (std::size_t e = 0; e < g[i].size(); ++e)
        for (std::size_t p = 0; p < g[i][e].size(); ++p)
          m = std::max(m, std::fabs(g[i][e][p] * g[j][e][p]));
      best = std::max(best, std::sqrt(m));
    }
  return best;
}

inline double psi2_oracle(const std::vector<Samples>& f,
                          const std::vector<Samples>& g,
                          const std::vector<std::vector<Samples>>& h) {
  double outer = 0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    double inner = 1e300;
    for (std::size_t i = 0; i < f.size(); ++i) {
      double m = 0;
      for (std::size_t e = 0; e < f[i].size(); ++e)
        for (std::size_t p = 0; p < f[i][e].size(); ++p)
          m = std::max(m, std::fabs(std::fabs(f[i][e][p]) -
                                    std::fabs(g[j][e][p]) -
                                    std::fabs(h[j][i][e][p])));
      inner = std::min(inner, m);
    }
    outer = std::max(outer, inner);
  }
  return outer;
}

inline double cv_dist(const CertifiedValue& v, double x) {
  double lo = rat_to_double(v.lower), hi = rat_to_double(v.upper);
  if (x < lo) return lo - x;
  if (x > hi) return x - hi;
  return 0;
}

// Rational points covering the graph: k/n per unit length on each edge
// plus every vertex.
inline std::vector<Point> grid_points(const GraphPtr& g, int n) {
  std::vector<Point> pts;
  for (int v = 0; v < g->vertex_count(); ++v) pts.push_back(Point::at_vertex(v));
  for (int e = 0; e < g->edge_count(); ++e) {
    const Rat& len = g->edge(e).length;
    for (int i = 1; i < n; ++i)
      pts.push_back(Point::on_edge(*g, e, len * i / n));
  }
  return pts;
}

}  // namespace continua::testing
