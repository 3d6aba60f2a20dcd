// Licensed under the Apache License 2.0 (see LICENSE file).
#include "continua/poly.hpp"

#include <algorithm>

namespace continua {

Poly::Poly(std::vector<Rat> coef) : c(std::move(coef)) {
  while (!c.empty() && c.back() == 0) c.pop_back();
  if (degree() > kMaxDegree)
    throw InvalidInput("polynomial degree exceeds cap 4");
}

Rat Poly::eval(const Rat& t) const {
  Rat acc(0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

Poly Poly::derivative() const {
  std::vector<Rat> d;
  for (std::size_t i = 1; i < c.size(); ++i) d.push_back(Rat(i) * c[i]);
  return Poly(std::move(d));
}

Poly Poly::operator+(const Poly& o) const {
  std::vector<Rat> s(std::max(c.size(), o.c.size()), Rat(0));
  for (std::size_t i = 0; i < c.size(); ++i) s[i] += c[i];
  for (std::size_t i = 0; i < o.c.size(); ++i) s[i] += o.c[i];
  return Poly(std::move(s));
}

Poly Poly::operator-(const Poly& o) const { return *this + o.scaled(Rat(-1)); }

Poly Poly::operator*(const Poly& o) const {
  if (is_zero() || o.is_zero()) return Poly();
  std::vector<Rat> s(c.size() + o.c.size() - 1, Rat(0));
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < o.c.size(); ++j) s[i + j] += c[i] * o.c[j];
  return Poly(std::move(s));
}

Poly Poly::scaled(const Rat& k) const {
  std::vector<Rat> s;
  s.reserve(c.size());
  for (const Rat& x : c) s.push_back(k * x);
  return Poly(std::move(s));
}

CertifiedValue poly_range(const Poly& p, const Rat& a, const Rat& b) {
  // Horner on the interval [a, b].
  Rat lo(0), hi(0);
  for (auto it = p.c.rbegin(); it != p.c.rend(); ++it) {
    // [lo,hi] * [a,b]
    Rat p1 = lo * a, p2 = lo * b, p3 = hi * a, p4 = hi * b;
    Rat nlo = std::min(std::min(p1, p2), std::min(p3, p4));
    Rat nhi = std::max(std::max(p1, p2), std::max(p3, p4));
    lo = nlo + *it;
    hi = nhi + *it;
  }
  return {lo, hi};
}

namespace {

// Polynomial remainder (standard long division), used for Sturm chains.
// These helpers intentionally bypass the degree cap.
std::vector<Rat> raw_rem(std::vector<Rat> a, const std::vector<Rat>& b) {
  while (a.size() >= b.size() && !a.empty()) {
    Rat q = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= q * b[i];
    while (!a.empty() && a.back() == 0) a.pop_back();
  }
  return a;
}

std::vector<Rat> raw_deriv(const std::vector<Rat>& a) {
  std::vector<Rat> d;
  for (std::size_t i = 1; i < a.size(); ++i) d.push_back(Rat(i) * a[i]);
  return d;
}

Rat raw_eval(const std::vector<Rat>& a, const Rat& t) {
  Rat acc(0);
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * t + *it;
  return acc;
}

std::vector<Rat> raw_gcd(std::vector<Rat> a, std::vector<Rat> b) {
  while (!b.empty()) {
    auto r = raw_rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

std::vector<Rat> raw_div_exact(const std::vector<Rat>& a,
                               const std::vector<Rat>& b) {
  std::vector<Rat> rem = a, quot(a.size() >= b.size() ? a.size() - b.size() + 1
                                                      : 0,
                                 Rat(0));
  while (rem.size() >= b.size() && !rem.empty()) {
    Rat q = rem.back() / b.back();
    std::size_t shift = rem.size() - b.size();
    quot[shift] = q;
    for (std::size_t i = 0; i < b.size(); ++i) rem[shift + i] -= q * b[i];
    while (!rem.empty() && rem.back() == 0) rem.pop_back();
  }
  return quot;
}

struct SturmChain {
  std::vector<std::vector<Rat>> seq;

  explicit SturmChain(const std::vector<Rat>& p) {
    seq.push_back(p);
    auto d = raw_deriv(p);
    if (!d.empty()) seq.push_back(d);
    while (seq.back().size() > 1) {
      auto r = raw_rem(seq[seq.size() - 2], seq.back());
      if (r.empty()) break;
      for (Rat& x : r) x = -x;
      seq.push_back(std::move(r));
    }
  }

  int sign_variations(const Rat& t) const {
    int var = 0, prev = 0;
    for (const auto& p : seq) {
      Rat v = raw_eval(p, t);
      int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
      if (s != 0) {
        if (prev != 0 && s != prev) ++var;
        prev = s;
      }
    }
    return var;
  }
};

// Square-free part, with rational roots at the given points divided out.
std::vector<Rat> reduce_at(std::vector<Rat> p,
                           const std::vector<Rat>& exclude_roots) {
  if (p.size() <= 1) return p;
  auto g = raw_gcd(p, raw_deriv(p));
  if (g.size() > 1) p = raw_div_exact(p, g);
  for (const Rat& r : exclude_roots)
    while (p.size() > 1 && raw_eval(p, r) == 0)
      p = raw_div_exact(p, {-r, Rat(1)});
  return p;
}

void isolate_rec(const std::vector<Rat>& p, const SturmChain& chain,
                 const Rat& a, const Rat& b, const Rat& width,
                 std::vector<CertifiedValue>& out) {
  int cnt = chain.sign_variations(a) - chain.sign_variations(b);
  if (cnt <= 0) return;
  if (b - a <= width && cnt == 1) {
    out.push_back({a, b});
    return;
  }
  Rat m = (a + b) / 2;
  if (raw_eval(p, m) == 0) {
    out.push_back(CertifiedValue::exact(m));
    auto q = reduce_at(p, {m});
    SturmChain sub(q);
    isolate_rec(q, sub, a, m, width, out);
    isolate_rec(q, sub, m, b, width, out);
    return;
  }
  isolate_rec(p, chain, a, m, width, out);
  isolate_rec(p, chain, m, b, width, out);
}

}  // namespace

std::vector<CertifiedValue> isolate_roots(const Poly& p, const Rat& a,
                                          const Rat& b, const Rat& width) {
  if (p.is_zero()) throw Error("cannot isolate roots of the zero polynomial");
  auto q = reduce_at(p.c, {a, b});
  if (q.size() <= 1) return {};
  SturmChain chain(q);
  std::vector<CertifiedValue> out;
  isolate_rec(q, chain, a, b, width, out);
  return out;
}

PiecewisePoly::PiecewisePoly(GraphPtr graph,
                             std::vector<std::vector<PolyPiece>> data,
                             std::vector<Rat> vertex_values)
    : graph_(std::move(graph)),
      data_(std::move(data)),
      vertex_values_(std::move(vertex_values)) {
  if (static_cast<int>(data_.size()) != graph_->edge_count())
    throw InvalidInput("PiecewisePoly: one piece list per edge required");
  for (int e = 0; e < graph_->edge_count(); ++e) {
    const auto& pieces = data_[e];
    if (pieces.empty()) throw InvalidInput("PiecewisePoly: empty edge data");
    if (pieces.front().t0 != 0 || pieces.back().t1 != graph_->edge(e).length)
      throw InvalidInput("PiecewisePoly: pieces must span the edge");
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      if (pieces[i].t0 >= pieces[i].t1)
        throw InvalidInput("PiecewisePoly: degenerate piece");
      if (i > 0) {
        if (pieces[i - 1].t1 != pieces[i].t0)
          throw InvalidInput("PiecewisePoly: pieces must partition the edge");
        if (pieces[i - 1].p.eval(pieces[i].t0) != pieces[i].p.eval(pieces[i].t0))
          throw InvalidInput("PiecewisePoly: discontinuity at a seam");
      }
    }
  }
}

PiecewisePoly PiecewisePoly::from_pl(const PLFunction& f) {
  std::vector<std::vector<PolyPiece>> data(f.graph()->edge_count());
  for (int e = 0; e < f.graph()->edge_count(); ++e) {
    const Polyline& p = f.edge_data(e);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      // Line through (t0,v0), (t1,v1).
      Rat slope = (p[i + 1].v - p[i].v) / (p[i + 1].t - p[i].t);
      data[e].push_back(
          {p[i].t, p[i + 1].t, Poly::linear(p[i].v - slope * p[i].t, slope)});
    }
  }
  std::vector<Rat> verts;
  for (int v = 0; v < f.graph()->vertex_count(); ++v)
    verts.push_back(f.vertex_value(v));
  return PiecewisePoly(f.graph(), std::move(data), std::move(verts));
}

template <typename F>
PiecewisePoly PiecewisePoly::zip(const PiecewisePoly& o, F&& combine) const {
  if (graph_ != o.graph_)
    throw InvalidInput("operands live on different graphs");
  std::vector<std::vector<PolyPiece>> data(graph_->edge_count());
  for (int e = 0; e < graph_->edge_count(); ++e) {
    std::vector<Rat> cuts;
    for (const auto& pc : data_[e]) {
      cuts.push_back(pc.t0);
      cuts.push_back(pc.t1);
    }
    for (const auto& pc : o.data_[e]) {
      cuts.push_back(pc.t0);
      cuts.push_back(pc.t1);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    auto piece_at = [](const std::vector<PolyPiece>& pieces, const Rat& t0) {
      for (const auto& pc : pieces)
        if (pc.t0 <= t0 && t0 < pc.t1) return &pc.p;
      return &pieces.back().p;
    };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      data[e].push_back({cuts[i], cuts[i + 1],
                         combine(*piece_at(data_[e], cuts[i]),
                                 *piece_at(o.data_[e], cuts[i]))});
    }
  }
  std::vector<Rat> verts(graph_->vertex_count());
  for (int v = 0; v < graph_->vertex_count(); ++v) {
    Poly a = Poly::constant(vertex_values_[v]);
    Poly b = Poly::constant(o.vertex_values_[v]);
    verts[v] = combine(a, b).eval(Rat(0));
  }
  return PiecewisePoly(graph_, std::move(data), std::move(verts));
}

PiecewisePoly PiecewisePoly::add(const PiecewisePoly& o) const {
  return zip(o, [](const Poly& a, const Poly& b) { return a + b; });
}
PiecewisePoly PiecewisePoly::sub(const PiecewisePoly& o) const {
  return zip(o, [](const Poly& a, const Poly& b) { return a - b; });
}
PiecewisePoly PiecewisePoly::mul(const PiecewisePoly& o) const {
  return zip(o, [](const Poly& a, const Poly& b) { return a * b; });
}

PiecewisePoly PiecewisePoly::mul(const PLFunction& f, const PLFunction& g) {
  require_same_graph(f, g);
  return from_pl(f).mul(from_pl(g));
}

PiecewisePoly PiecewisePoly::scaled(const Rat& k) const {
  std::vector<std::vector<PolyPiece>> data(graph_->edge_count());
  for (int e = 0; e < graph_->edge_count(); ++e)
    for (const auto& pc : data_[e])
      data[e].push_back({pc.t0, pc.t1, pc.p.scaled(k)});
  std::vector<Rat> verts;
  for (const Rat& v : vertex_values_) verts.push_back(k * v);
  return PiecewisePoly(graph_, std::move(data), std::move(verts));
}

PiecewisePoly PiecewisePoly::add_const(const Rat& k) const {
  std::vector<std::vector<PolyPiece>> data(graph_->edge_count());
  for (int e = 0; e < graph_->edge_count(); ++e)
    for (const auto& pc : data_[e])
      data[e].push_back({pc.t0, pc.t1, pc.p + Poly::constant(k)});
  std::vector<Rat> verts;
  for (const Rat& v : vertex_values_) verts.push_back(v + k);
  return PiecewisePoly(graph_, std::move(data), std::move(verts));
}

Rat PiecewisePoly::eval_edge(int e, const Rat& t) const {
  for (const auto& pc : data_.at(e))
    if (pc.t0 <= t && t <= pc.t1) return pc.p.eval(t);
  throw InvalidInput("parameter outside edge");
}

bool PiecewisePoly::is_zero() const {
  for (const auto& edge : data_)
    for (const auto& pc : edge)
      if (!pc.p.is_zero()) return false;
  for (const Rat& v : vertex_values_)
    if (v != 0) return false;
  return true;
}

int PiecewisePoly::max_degree() const {
  int d = 0;
  for (const auto& edge : data_)
    for (const auto& pc : edge) d = std::max(d, pc.p.degree());
  return d;
}

Extrema PiecewisePoly::extrema(const Rat& width) const {
  struct Cand {
    CertifiedValue value;
    Point where;
  };
  std::vector<Cand> cands;
  for (int v = 0; v < graph_->vertex_count(); ++v)
    if (graph_->degree(v) == 0)
      cands.push_back(
          {CertifiedValue::exact(vertex_values_[v]), Point::at_vertex(v)});
  for (int e = 0; e < graph_->edge_count(); ++e) {
    for (const auto& pc : data_[e]) {
      auto point = [&](const Rat& t) { return Point::on_edge(*graph_, e, t); };
      cands.push_back({CertifiedValue::exact(pc.p.eval(pc.t0)), point(pc.t0)});
      cands.push_back({CertifiedValue::exact(pc.p.eval(pc.t1)), point(pc.t1)});
      int deg = pc.p.degree();
      if (deg <= 1) continue;
      if (deg == 2) {
        Rat crit = -pc.p.c[1] / (2 * pc.p.c[2]);
        if (pc.t0 < crit && crit < pc.t1)
          cands.push_back({CertifiedValue::exact(pc.p.eval(crit)), point(crit)});
        continue;
      }
      // Cubic/quartic: isolate the derivative's roots, then refine until
      // the enclosed value interval is narrow enough.
      Poly dp = pc.p.derivative();
      Rat root_width = (pc.t1 - pc.t0) / 2;
      while (true) {
        bool all_ok = true;
        std::vector<Cand> local;
        for (const auto& root : isolate_roots(dp, pc.t0, pc.t1, root_width)) {
          if (root.is_exact()) {
            local.push_back(
                {CertifiedValue::exact(pc.p.eval(root.lower)),
                 point(root.lower)});
            continue;
          }
          CertifiedValue range = poly_range(pc.p, root.lower, root.upper);
          if (range.width() > width) all_ok = false;
          local.push_back({range, point(root.mid())});
        }
        if (all_ok) {
          for (auto& c : local) cands.push_back(std::move(c));
          break;
        }
        root_width /= 4;
      }
    }
  }
  if (cands.empty()) throw Error("no extremum candidates");
  Extrema ex;
  const Cand* best_min = &cands[0];
  const Cand* best_max = &cands[0];
  Rat min_lo = cands[0].value.lower, min_hi = cands[0].value.upper;
  Rat max_lo = cands[0].value.lower, max_hi = cands[0].value.upper;
  for (const Cand& c : cands) {
    if (c.value.upper < best_min->value.upper) best_min = &c;
    if (c.value.lower > best_max->value.lower) best_max = &c;
    min_lo = std::min(min_lo, c.value.lower);
    min_hi = std::min(min_hi, c.value.upper);
    max_lo = std::max(max_lo, c.value.lower);
    max_hi = std::max(max_hi, c.value.upper);
  }
  ex.min = {min_lo, min_hi};
  ex.max = {max_lo, max_hi};
  ex.min_witness = best_min->where;
  ex.max_witness = best_max->where;
  return ex;
}

CertifiedValue norm_of(const Extrema& ex) {
  // sup |p| = max(max, -min)
  return cv_max(ex.max, cv_scale(Rat(-1), ex.min));
}

CertifiedValue PiecewisePoly::sup_norm(const Rat& width) const {
  return norm_of(extrema(width));
}

}  // namespace continua
