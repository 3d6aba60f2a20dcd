// Licensed under the Apache License 2.0 (see LICENSE file).
#include "continua/plfunction.hpp"

#include <algorithm>

namespace continua {

Rat polyline_eval(const Polyline& p, const Rat& t) {
  if (p.empty()) throw Error("empty polyline");
  if (t < p.front().t || t > p.back().t)
    throw InvalidInput("polyline evaluated outside its domain");
  // Last breakpoint with t_i <= t.
  auto it = std::upper_bound(p.begin(), p.end(), t,
                             [](const Rat& x, const BP& b) { return x < b.t; });
  --it;
  if (it->t == t) return it->v;
  auto next = it + 1;
  return it->v + (next->v - it->v) * (t - it->t) / (next->t - it->t);
}

Polyline polyline_simplify(const Polyline& p) {
  if (p.size() <= 2) return p;
  Polyline out;
  out.push_back(p.front());
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    const BP& a = out.back();
    const BP& b = p[i];
    const BP& c = p[i + 1];
    // collinear iff (b-a) x (c-a) == 0
    if ((b.t - a.t) * (c.v - a.v) == (c.t - a.t) * (b.v - a.v)) continue;
    out.push_back(b);
  }
  out.push_back(p.back());
  return out;
}

static void validate_polyline(const Polyline& p, const Rat& len,
                              const std::string& edge_id) {
  if (p.size() < 2)
    throw InvalidInput("edge '" + edge_id + "': needs at least two breakpoints");
  if (p.front().t != 0)
    throw InvalidInput("edge '" + edge_id + "': first breakpoint must be at 0");
  if (p.back().t != len)
    throw InvalidInput("edge '" + edge_id +
                       "': last breakpoint must be at the edge length");
  for (std::size_t i = 1; i < p.size(); ++i)
    if (p[i].t <= p[i - 1].t)
      throw InvalidInput("edge '" + edge_id +
                         "': breakpoints must be strictly increasing");
}

PLFunction::PLFunction(GraphPtr graph, std::vector<Polyline> data,
                       std::optional<std::vector<Rat>> isolated_vertex_values)
    : graph_(std::move(graph)), data_(std::move(data)) {
  if (!graph_) throw InvalidInput("PLFunction: null graph");
  if (static_cast<int>(data_.size()) != graph_->edge_count())
    throw InvalidInput("PLFunction: one polyline per edge required");
  for (int e = 0; e < graph_->edge_count(); ++e)
    validate_polyline(data_[e], graph_->edge(e).length, graph_->edge(e).id);

  // Vertex consistency: all incident edge endpoints agree.
  vertex_values_.assign(graph_->vertex_count(), Rat(0));
  std::vector<bool> seen(graph_->vertex_count(), false);
  for (int e = 0; e < graph_->edge_count(); ++e) {
    const auto& ed = graph_->edge(e);
    const Rat& vu = data_[e].front().v;
    const Rat& vv = data_[e].back().v;
    for (auto [vtx, val] : {std::pair{ed.u, vu}, std::pair{ed.v, vv}}) {
      if (seen[vtx]) {
        if (vertex_values_[vtx] != val)
          throw InvalidInput("discontinuity at vertex '" +
                             graph_->vertex_ids()[vtx] + "'");
      } else {
        seen[vtx] = true;
        vertex_values_[vtx] = val;
      }
    }
  }
  for (int v = 0; v < graph_->vertex_count(); ++v) {
    if (seen[v]) continue;
    if (!isolated_vertex_values ||
        static_cast<int>(isolated_vertex_values->size()) !=
            graph_->vertex_count())
      throw InvalidInput("missing value for isolated vertex '" +
                         graph_->vertex_ids()[v] + "'");
    vertex_values_[v] = (*isolated_vertex_values)[v];
  }
}

PLFunction PLFunction::constant(GraphPtr graph, const Rat& c) {
  std::vector<Polyline> data;
  for (int e = 0; e < graph->edge_count(); ++e)
    data.push_back({{Rat(0), c}, {graph->edge(e).length, c}});
  std::vector<Rat> verts(graph->vertex_count(), c);
  return PLFunction(std::move(graph), std::move(data), verts);
}

PLFunction PLFunction::arc_coordinate(GraphPtr graph) {
  auto layout = graph->arc_layout();
  std::vector<Polyline> data(graph->edge_count());
  for (std::size_t i = 0; i < layout.edge_order.size(); ++i) {
    int e = layout.edge_order[i];
    const Rat& len = graph->edge(e).length;
    Rat lo = layout.offset[i], hi = layout.offset[i] + len;
    if (layout.forward[i])
      data[e] = {{Rat(0), lo}, {len, hi}};
    else
      data[e] = {{Rat(0), hi}, {len, lo}};
  }
  return PLFunction(std::move(graph), std::move(data));
}

PLFunction PLFunction::from_arc_polyline(GraphPtr graph, const Polyline& p) {
  auto layout = graph->arc_layout();
  if (p.front().t != 0 || p.back().t != layout.total_length)
    throw InvalidInput("arc polyline must span [0, total length]");
  std::vector<Polyline> data(graph->edge_count());
  for (std::size_t i = 0; i < layout.edge_order.size(); ++i) {
    int e = layout.edge_order[i];
    const Rat& len = graph->edge(e).length;
    Rat lo = layout.offset[i], hi = lo + len;
    Polyline piece;
    piece.push_back({Rat(0), polyline_eval(p, lo)});
    for (const BP& b : p)
      if (b.t > lo && b.t < hi) piece.push_back({b.t - lo, b.v});
    piece.push_back({len, polyline_eval(p, hi)});
    if (!layout.forward[i]) {
      Polyline rev;
      for (auto it = piece.rbegin(); it != piece.rend(); ++it)
        rev.push_back({len - it->t, it->v});
      piece = std::move(rev);
    }
    data[e] = std::move(piece);
  }
  return PLFunction(std::move(graph), std::move(data));
}

Polyline PLFunction::to_arc_polyline() const {
  auto layout = graph_->arc_layout();
  if (layout.edge_order.empty())
    throw InvalidInput("degenerate arc has no polyline");
  Polyline out;
  for (std::size_t i = 0; i < layout.edge_order.size(); ++i) {
    int e = layout.edge_order[i];
    const Rat& len = graph_->edge(e).length;
    Polyline piece = data_[e];
    if (!layout.forward[i]) {
      Polyline rev;
      for (auto it = piece.rbegin(); it != piece.rend(); ++it)
        rev.push_back({len - it->t, it->v});
      piece = std::move(rev);
    }
    for (const BP& b : piece) {
      BP shifted{b.t + layout.offset[i], b.v};
      if (!out.empty() && out.back().t == shifted.t) continue;
      out.push_back(shifted);
    }
  }
  return polyline_simplify(out);
}

Rat PLFunction::eval_edge(int e, const Rat& t) const {
  return polyline_eval(data_.at(e), t);
}

Rat PLFunction::eval(const Point& p) const {
  if (p.edge == -1) return vertex_values_.at(p.vertex);
  return eval_edge(p.edge, p.t);
}

void require_same_graph(const PLFunction& f, const PLFunction& g) {
  if (!f.same_graph(g))
    throw InvalidInput("operands live on different graphs");
}

// Merge breakpoint parameters of two polylines; optionally insert the
// crossing parameters of f - g (needed for exact min/max).
static std::vector<Rat> merged_params(const Polyline& f, const Polyline& g,
                                      bool with_crossings) {
  std::vector<Rat> ts;
  for (const BP& b : f) ts.push_back(b.t);
  for (const BP& b : g) ts.push_back(b.t);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  if (!with_crossings) return ts;
  std::vector<Rat> out;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i > 0) {
      Rat d0 = polyline_eval(f, ts[i - 1]) - polyline_eval(g, ts[i - 1]);
      Rat d1 = polyline_eval(f, ts[i]) - polyline_eval(g, ts[i]);
      if ((d0 < 0 && d1 > 0) || (d0 > 0 && d1 < 0)) {
        Rat cross = ts[i - 1] + (ts[i] - ts[i - 1]) * d0 / (d0 - d1);
        out.push_back(cross);
      }
    }
    out.push_back(ts[i]);
  }
  return out;
}

template <typename F>
PLFunction PLFunction::binary_op(const PLFunction& g, bool with_crossings,
                                 F&& pick) const {
  require_same_graph(*this, g);
  std::vector<Polyline> data(graph_->edge_count());
  for (int e = 0; e < graph_->edge_count(); ++e) {
    for (const Rat& t : merged_params(data_[e], g.data_[e], with_crossings))
      data[e].push_back({t, pick(polyline_eval(data_[e], t),
                                 polyline_eval(g.data_[e], t))});
    data[e] = polyline_simplify(data[e]);
  }
  std::vector<Rat> verts(graph_->vertex_count());
  for (int v = 0; v < graph_->vertex_count(); ++v)
    verts[v] = pick(vertex_values_[v], g.vertex_values_[v]);
  return PLFunction(graph_, std::move(data), std::move(verts));
}

PLFunction PLFunction::add(const PLFunction& g) const {
  return binary_op(g, false, [](const Rat& a, const Rat& b) { return a + b; });
}
PLFunction PLFunction::sub(const PLFunction& g) const {
  return binary_op(g, false, [](const Rat& a, const Rat& b) { return a - b; });
}
PLFunction PLFunction::plmin(const PLFunction& g) const {
  return binary_op(g, true,
                   [](const Rat& a, const Rat& b) { return std::min(a, b); });
}
PLFunction PLFunction::plmax(const PLFunction& g) const {
  return binary_op(g, true,
                   [](const Rat& a, const Rat& b) { return std::max(a, b); });
}

PLFunction PLFunction::scale(const Rat& c) const {
  std::vector<Polyline> data(graph_->edge_count());
  for (int e = 0; e < graph_->edge_count(); ++e)
    for (const BP& b : data_[e]) data[e].push_back({b.t, c * b.v});
  std::vector<Rat> verts(graph_->vertex_count());
  for (int v = 0; v < graph_->vertex_count(); ++v)
    verts[v] = c * vertex_values_[v];
  return PLFunction(graph_, std::move(data), std::move(verts));
}

PLFunction PLFunction::add_const(const Rat& c) const {
  std::vector<Polyline> data(graph_->edge_count());
  for (int e = 0; e < graph_->edge_count(); ++e)
    for (const BP& b : data_[e]) data[e].push_back({b.t, b.v + c});
  std::vector<Rat> verts(graph_->vertex_count());
  for (int v = 0; v < graph_->vertex_count(); ++v)
    verts[v] = vertex_values_[v] + c;
  return PLFunction(graph_, std::move(data), std::move(verts));
}

PLFunction PLFunction::plabs() const { return plmax(negate()); }

Rat PLFunction::min_value(Point* witness) const {
  bool first = true;
  Rat best;
  auto consider = [&](const Rat& v, const Point& p) {
    if (first || v < best) {
      first = false;
      best = v;
      if (witness) *witness = p;
    }
  };
  for (int v = 0; v < graph_->vertex_count(); ++v)
    consider(vertex_values_[v], Point::at_vertex(v));
  for (int e = 0; e < graph_->edge_count(); ++e)
    for (const BP& b : data_[e])
      consider(b.v, Point::on_edge(*graph_, e, b.t));
  return best;
}

Rat PLFunction::max_value(Point* witness) const {
  Point w;
  Rat m = negate().min_value(&w);
  if (witness) *witness = w;
  return -m;
}

Rat PLFunction::sup_norm() const { return plabs().max_value(); }

std::vector<PLFunction::Interval> PLFunction::positive_intervals(int e) const {
  const Polyline& p = data_.at(e);
  // Refine with zero crossings, then sweep sign.
  std::vector<Rat> ts;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i > 0 && ((p[i - 1].v < 0 && p[i].v > 0) ||
                  (p[i - 1].v > 0 && p[i].v < 0))) {
      ts.push_back(p[i - 1].t + (p[i].t - p[i - 1].t) * p[i - 1].v /
                                    (p[i - 1].v - p[i].v));
    }
    ts.push_back(p[i].t);
  }
  std::vector<Interval> out;
  std::optional<Rat> open_start;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    // Sign on the open segment (ts[i], ts[i+1]) is the sign at its midpoint.
    Rat mid = (ts[i] + ts[i + 1]) / 2;
    bool pos = polyline_eval(p, mid) > 0;
    // A zero at the shared breakpoint splits two positive segments.
    if (i > 0 && open_start && polyline_eval(p, ts[i]) <= 0) {
      out.push_back({*open_start, ts[i]});
      open_start.reset();
    }
    if (pos && !open_start) open_start = ts[i];
    if (!pos && open_start) {
      out.push_back({*open_start, ts[i]});
      open_start.reset();
    }
  }
  if (open_start) out.push_back({*open_start, ts.back()});
  return out;
}

PLFunction compose(const Polyline& outer, const PLFunction& inner) {
  const GraphPtr& graph = inner.graph();
  std::vector<Polyline> data(graph->edge_count());
  for (int e = 0; e < graph->edge_count(); ++e) {
    const Polyline& in = inner.edge_data(e);
    Polyline out;
    out.push_back({Rat(0), polyline_eval(outer, in.front().v)});
    for (std::size_t i = 0; i + 1 < in.size(); ++i) {
      const Rat& u0 = in[i].v;
      const Rat& u1 = in[i + 1].v;
      // Pull back outer breakpoints strictly between u0 and u1.
      if (u0 != u1) {
        std::vector<Rat> pulled;
        for (const BP& ob : outer) {
          if ((u0 < ob.t && ob.t < u1) || (u1 < ob.t && ob.t < u0)) {
            Rat t = in[i].t + (in[i + 1].t - in[i].t) * (ob.t - u0) / (u1 - u0);
            pulled.push_back(t);
          }
        }
        std::sort(pulled.begin(), pulled.end());
        for (const Rat& t : pulled) {
          Rat u = u0 + (u1 - u0) * (t - in[i].t) / (in[i + 1].t - in[i].t);
          if (out.back().t != t) out.push_back({t, polyline_eval(outer, u)});
        }
      }
      if (out.back().t != in[i + 1].t)
        out.push_back({in[i + 1].t, polyline_eval(outer, u1)});
    }
    data[e] = polyline_simplify(out);
  }
  // Isolated vertices: compose the stored value.
  std::vector<Rat> verts(graph->vertex_count());
  for (int v = 0; v < graph->vertex_count(); ++v)
    verts[v] = polyline_eval(outer, inner.vertex_value(v));
  return PLFunction(graph, std::move(data), std::move(verts));
}

}  // namespace continua
