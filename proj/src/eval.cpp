// Licensed under the Apache License 2.0 (see LICENSE file).
#include "continua/eval.hpp"

#include <utility>

namespace continua {

namespace {

PiecewisePoly to_pp(const FnValue& v) {
  if (std::holds_alternative<PLFunction>(v))
    return PiecewisePoly::from_pl(std::get<PLFunction>(v));
  return std::get<PiecewisePoly>(v);
}

bool is_pl(const FnValue& v) { return std::holds_alternative<PLFunction>(v); }

FnValue binary(const FnValue& x, const FnValue& y, bool add) {
  if (is_pl(x) && is_pl(y)) {
    const auto& a = std::get<PLFunction>(x);
    const auto& b = std::get<PLFunction>(y);
    return add ? a.add(b) : a.sub(b);
  }
  PiecewisePoly a = to_pp(x), b = to_pp(y);
  return add ? a.add(b) : a.sub(b);
}

CertifiedValue norm_value(const FnValue& v, const Rat& width) {
  if (is_pl(v)) return CertifiedValue::exact(std::get<PLFunction>(v).sup_norm());
  return std::get<PiecewisePoly>(v).sup_norm(width);
}

CertifiedValue eval_rec(const FormulaPtr& f, const Assignment& a,
                        const Rat& leaf_width) {
  switch (f->kind) {
    case Formula::Kind::Norm:
      return norm_value(eval_term(f->t1, a), leaf_width);
    case Formula::Kind::Const:
      return CertifiedValue::exact(f->scalar);
    case Formula::Kind::Add:
      return cv_add(eval_rec(f->args[0], a, leaf_width),
                    eval_rec(f->args[1], a, leaf_width));
    case Formula::Kind::TruncSub:
      return cv_truncsub(eval_rec(f->args[0], a, leaf_width),
                         eval_rec(f->args[1], a, leaf_width));
    case Formula::Kind::Max: {
      CertifiedValue r = eval_rec(f->args[0], a, leaf_width);
      for (std::size_t i = 1; i < f->args.size(); ++i)
        r = cv_max(r, eval_rec(f->args[i], a, leaf_width));
      return r;
    }
    case Formula::Kind::Min: {
      CertifiedValue r = eval_rec(f->args[0], a, leaf_width);
      for (std::size_t i = 1; i < f->args.size(); ++i)
        r = cv_min(r, eval_rec(f->args[i], a, leaf_width));
      return r;
    }
    case Formula::Kind::Scale:
      return cv_scale(f->scalar, eval_rec(f->args[0], a, leaf_width));
    case Formula::Kind::Sqrt:
      return cv_sqrt(eval_rec(f->args[0], a, leaf_width), leaf_width);
    case Formula::Kind::Dist:
      return norm_value(binary(eval_term(f->t1, a), eval_term(f->t2, a), false),
                        leaf_width);
  }
  throw Error("eval: unknown formula node");
}

}  // namespace

FnValue eval_term(const TermPtr& t, const Assignment& a) {
  if (!a.graph) throw InvalidInput("eval: assignment has no graph");
  switch (t->kind) {
    case Term::Kind::Var:
      if (t->var < 0 || t->var >= static_cast<int>(a.vars.size()))
        throw InvalidInput("eval: variable x" + std::to_string(t->var + 1) +
                           " has no assigned value");
      if (a.vars[t->var].graph() != a.graph)
        throw InvalidInput("eval: assigned function lives on another graph");
      return a.vars[t->var];
    case Term::Kind::One:
      return PLFunction::constant(a.graph, Rat(1));
    case Term::Kind::Zero:
      return PLFunction::constant(a.graph, Rat(0));
    case Term::Kind::Scale: {
      FnValue v = eval_term(t->a, a);
      if (is_pl(v)) return std::get<PLFunction>(v).scale(t->scalar);
      return std::get<PiecewisePoly>(v).scaled(t->scalar);
    }
    case Term::Kind::Add:
      return binary(eval_term(t->a, a), eval_term(t->b, a), true);
    case Term::Kind::Sub:
      return binary(eval_term(t->a, a), eval_term(t->b, a), false);
    case Term::Kind::Mul: {
      FnValue x = eval_term(t->a, a);
      FnValue y = eval_term(t->b, a);
      if (!is_pl(x) || !is_pl(y))
        throw InvalidInput("eval: product factors must be degree <= 1");
      return PiecewisePoly::mul(std::get<PLFunction>(x),
                                std::get<PLFunction>(y));
    }
    case Term::Kind::Abs: {
      FnValue v = eval_term(t->a, a);
      if (!is_pl(v))
        throw InvalidInput("eval: |.| argument must be degree <= 1");
      return std::get<PLFunction>(v).plabs();
    }
  }
  throw Error("eval: unknown term node");
}

CertifiedValue eval_qf(const FormulaPtr& f, const Assignment& a,
                       const EvalOptions& opts) {
  if (opts.width <= 0) throw InvalidInput("eval: width must be positive");
  // Leaves are evaluated to a shared per-leaf width; connectives can
  // accumulate widths, so refine until the overall interval is narrow
  // enough.  PL-only formulas come out exact on the first pass.
  Rat leaf_width = opts.width / 4;
  for (int round = 0; round < 64; ++round) {
    CertifiedValue r = eval_rec(f, a, leaf_width);
    if (r.width() <= opts.width) return r;
    leaf_width /= 16;
  }
  throw Error("eval: failed to certify requested width");
}

unsigned long long PLSampler::next_raw() {
  // splitmix64
  state_ += 0x9e3779b97f4a7c15ULL;
  unsigned long long z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

PLFunction PLSampler::sample(const Rat& lo, const Rat& hi, int breakpoints) {
  auto draw = [&]() {
    return lo + (hi - lo) * Rat(static_cast<long>(next_raw() % 65), 64);
  };
  std::vector<Rat> vertex_vals(graph_->vertex_count());
  for (auto& v : vertex_vals) v = draw();
  std::vector<Polyline> data;
  for (int e = 0; e < graph_->edge_count(); ++e) {
    const auto& ed = graph_->edge(e);
    Polyline p;
    p.push_back({Rat(0), vertex_vals[ed.u]});
    for (int i = 1; i <= breakpoints; ++i)
      p.push_back({ed.length * Rat(i, breakpoints + 1), draw()});
    p.push_back({ed.length, vertex_vals[ed.v]});
    data.push_back(std::move(p));
  }
  return PLFunction(graph_, std::move(data), vertex_vals);
}

PLFunction PLSampler::sample_normalized(int breakpoints) {
  PLFunction f = sample(Rat(0), Rat(1), breakpoints);
  Rat m = f.sup_norm();
  if (m == 0) return PLFunction::constant(graph_, Rat(1));
  return f.scale(1 / m);
}

QuantifierBound bound_quantifier(BoundMode mode, const FormulaPtr& f,
                                 const GraphPtr& graph, int var_count,
                                 const QuantifierBudget& budget,
                                 const Rat& radius, const EvalOptions& opts) {
  if (var_count < f->var_count())
    throw InvalidInput("quantifier: formula uses more variables than bound");
  if (radius < 0) throw InvalidInput("quantifier: negative radius");

  std::vector<Assignment> candidates;
  for (const Rat& c : {Rat(0), radius, Rat(-radius)}) {
    Assignment a{graph, {}};
    for (int i = 0; i < var_count; ++i)
      a.vars.push_back(PLFunction::constant(graph, c));
    candidates.push_back(std::move(a));
  }
  PLSampler sampler(graph, budget.seed);
  for (int s = 0; s < budget.samples; ++s) {
    Assignment a{graph, {}};
    for (int i = 0; i < var_count; ++i)
      a.vars.push_back(sampler.sample(-radius, radius, budget.breakpoints));
    candidates.push_back(std::move(a));
  }

  QuantifierBound best;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    CertifiedValue v = eval_qf(f, candidates[i], opts);
    bool better;
    if (best.candidate_index < 0)
      better = true;
    else if (mode == BoundMode::Sup)
      better = v.lower > best.bound.lower;
    else
      better = v.upper < best.bound.upper;
    if (better) {
      best.bound = v;
      best.witness = candidates[i];
      best.candidate_index = static_cast<int>(i);
    }
  }
  return best;
}

CertifiedValue projectionless_value(const PLFunction& f,
                                    const EvalOptions& opts) {
  Rat norm = f.sup_norm();
  Rat tol(1, Int("1000000000"));
  if (rat_abs(norm - 1) > tol)
    throw InvalidInput("projectionless_value: ||f|| must be 1");

  Rat w = opts.width / 8;
  PiecewisePoly f2 = PiecewisePoly::mul(f, f);
  PiecewisePoly f4 = f2.mul(f2);
  // 2*||1 - f^2|| dot- 1
  CertifiedValue left = cv_truncsub(
      cv_scale(Rat(2), f2.negate().add_const(Rat(1)).sup_norm(w)),
      CertifiedValue::exact(Rat(1)));
  // 1 dot- 4*||f^2 - f^4||
  CertifiedValue right =
      cv_truncsub(CertifiedValue::exact(Rat(1)),
                  cv_scale(Rat(4), f2.sub(f4).sup_norm(w)));
  return cv_min(left, right);
}

}  // namespace continua
