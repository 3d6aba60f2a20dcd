// Licensed under the Apache License 2.0 (see LICENSE file).
#include "continua/sets.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace continua {

bool ClosedSet::is_everything(Point* counterexample) const {
  Point w;
  Rat m = gen_.max_value(&w);
  if (m <= 0) return true;
  if (counterexample) *counterexample = w;
  return false;
}

CoverCheck covers(const GraphPtr& graph, const std::vector<OpenSet>& sets) {
  CoverCheck out;
  if (sets.empty()) {
    out.covered = false;
    out.witness = Point::at_vertex(0);
    return out;
  }
  PLFunction best = sets[0].generator();
  for (std::size_t i = 1; i < sets.size(); ++i) {
    if (sets[i].graph() != graph)
      throw InvalidInput("cover member lives on a different graph");
    best = best.plmax(sets[i].generator());
  }
  if (sets[0].graph() != graph)
    throw InvalidInput("cover member lives on a different graph");
  Point w;
  Rat m = best.min_value(&w);
  out.covered = m > 0;
  if (!out.covered) out.witness = w;
  return out;
}

namespace {

// Merged parameter grid for two polylines on one edge, refined with the
// sign-change parameters of both.
std::vector<Rat> sign_grid(const Polyline& f, const Polyline& g) {
  std::vector<Rat> ts;
  for (const BP& b : f) ts.push_back(b.t);
  for (const BP& b : g) ts.push_back(b.t);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  std::vector<Rat> out;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i > 0) {
      std::vector<Rat> crossings;
      for (const Polyline* p : {&f, &g}) {
        Rat v0 = polyline_eval(*p, ts[i - 1]);
        Rat v1 = polyline_eval(*p, ts[i]);
        if ((v0 < 0 && v1 > 0) || (v0 > 0 && v1 < 0))
          crossings.push_back(ts[i - 1] +
                              (ts[i] - ts[i - 1]) * v0 / (v0 - v1));
      }
      std::sort(crossings.begin(), crossings.end());
      for (const Rat& c : crossings)
        if (out.back() != c) out.push_back(c);
    }
    if (out.empty() || out.back() != ts[i]) out.push_back(ts[i]);
  }
  return out;
}

}  // namespace

bool is_subset(const OpenSet& inner, const OpenSet& outer, Point* witness) {
  if (inner.graph() != outer.graph())
    throw InvalidInput("containment across different graphs");
  const PLFunction& v = inner.generator();
  const PLFunction& u = outer.generator();
  const MetricGraph& g = *inner.graph();
  for (int vi = 0; vi < g.vertex_count(); ++vi) {
    if (v.vertex_value(vi) > 0 && u.vertex_value(vi) <= 0) {
      if (witness) *witness = Point::at_vertex(vi);
      return false;
    }
  }
  for (int e = 0; e < g.edge_count(); ++e) {
    auto ts = sign_grid(v.edge_data(e), u.edge_data(e));
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (v.eval_edge(e, ts[i]) > 0 && u.eval_edge(e, ts[i]) <= 0) {
        if (witness) *witness = Point::on_edge(g, e, ts[i]);
        return false;
      }
      if (i > 0) {
        Rat m = (ts[i - 1] + ts[i]) / 2;
        if (v.eval_edge(e, m) > 0 && u.eval_edge(e, m) <= 0) {
          if (witness) *witness = Point::on_edge(g, e, m);
          return false;
        }
      }
    }
  }
  return true;
}

std::vector<OpenSet> open_components(const OpenSet& uset) {
  const PLFunction& gen = uset.generator();
  const GraphPtr& graph = gen.graph();
  const MetricGraph& g = *graph;

  struct Piece {
    int edge;
    PLFunction::Interval iv;
  };
  std::vector<Piece> pieces;
  std::vector<std::vector<int>> edge_pieces(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    for (const auto& iv : gen.positive_intervals(e)) {
      edge_pieces[e].push_back(static_cast<int>(pieces.size()));
      pieces.push_back({e, iv});
    }
  }

  // Union-find over pieces and positive vertices.
  int n = static_cast<int>(pieces.size()) + g.vertex_count();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
  int vbase = static_cast<int>(pieces.size());

  for (int pi = 0; pi < static_cast<int>(pieces.size()); ++pi) {
    const Piece& p = pieces[pi];
    const auto& ed = g.edge(p.edge);
    if (p.iv.a == 0 && gen.vertex_value(ed.u) > 0) unite(pi, vbase + ed.u);
    if (p.iv.b == ed.length && gen.vertex_value(ed.v) > 0)
      unite(pi, vbase + ed.v);
  }

  // Canonical component order: first appearance over pieces, then over
  // positive isolated vertices.
  std::map<int, int> comp_index;
  std::vector<std::vector<int>> comp_pieces;
  std::vector<std::vector<int>> comp_vertices;
  auto comp_of = [&](int node) {
    int r = find(node);
    auto it = comp_index.find(r);
    if (it != comp_index.end()) return it->second;
    int idx = static_cast<int>(comp_pieces.size());
    comp_index.emplace(r, idx);
    comp_pieces.emplace_back();
    comp_vertices.emplace_back();
    return idx;
  };
  for (int pi = 0; pi < static_cast<int>(pieces.size()); ++pi)
    comp_pieces[comp_of(pi)].push_back(pi);
  for (int vi = 0; vi < g.vertex_count(); ++vi) {
    if (gen.vertex_value(vi) <= 0) continue;
    comp_vertices[comp_of(vbase + vi)].push_back(vi);
  }

  std::vector<OpenSet> out;
  for (std::size_t c = 0; c < comp_pieces.size(); ++c) {
    // Clip the generator to <= 0 outside this component's pieces.
    std::vector<Polyline> data(g.edge_count());
    std::vector<bool> mine(pieces.size(), false);
    for (int pi : comp_pieces[c]) mine[pi] = true;
    for (int e = 0; e < g.edge_count(); ++e) {
      std::vector<Rat> ts;
      for (const BP& b : gen.edge_data(e)) ts.push_back(b.t);
      for (int pi : edge_pieces[e]) {
        ts.push_back(pieces[pi].iv.a);
        ts.push_back(pieces[pi].iv.b);
      }
      std::sort(ts.begin(), ts.end());
      ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
      auto in_mine = [&](const Rat& t) {
        for (int pi : edge_pieces[e])
          if (mine[pi] && pieces[pi].iv.a <= t && t <= pieces[pi].iv.b)
            return true;
        return false;
      };
      for (const Rat& t : ts) {
        Rat val = gen.eval_edge(e, t);
        if (!in_mine(t)) val = std::min(val, Rat(0));
        data[e].push_back({t, val});
      }
      data[e] = polyline_simplify(data[e]);
    }
    std::vector<Rat> verts(g.vertex_count());
    std::vector<bool> vmine(g.vertex_count(), false);
    for (int vi : comp_vertices[c]) vmine[vi] = true;
    for (int vi = 0; vi < g.vertex_count(); ++vi) {
      Rat val = gen.vertex_value(vi);
      if (!vmine[vi]) val = std::min(val, Rat(0));
      verts[vi] = val;
    }
    out.push_back(OpenSet(PLFunction(graph, std::move(data), verts)));
  }
  return out;
}

OpenSet interval_cell(const GraphPtr& graph, int e, const Rat& a,
                      const Rat& b) {
  const auto& ed = graph->edge(e);
  if (!(0 <= a && a < b && b <= ed.length))
    throw InvalidInput("bad interval cell bounds");
  // End values: 0 when the interval reaches the edge end (the vertex is
  // excluded, being a boundary point), otherwise negative.  A loop edge
  // must give both ends the same value.
  bool loop = ed.u == ed.v;
  Rat head = (a == 0) ? Rat(0) : Rat(-1);
  Rat tail = (b == ed.length) ? Rat(0) : Rat(-1);
  if (loop) head = tail = std::max(head, tail);

  Polyline main;
  main.push_back({Rat(0), head});
  if (a > 0) main.push_back({a, Rat(0)});
  main.push_back({(a + b) / 2, (b - a) / 2});
  if (b < ed.length) main.push_back({b, Rat(0)});
  main.push_back({ed.length, tail});

  std::vector<Rat> verts(graph->vertex_count(), Rat(-1));
  verts[ed.u] = head;
  verts[ed.v] = tail;

  std::vector<Polyline> data(graph->edge_count());
  for (int e2 = 0; e2 < graph->edge_count(); ++e2) {
    if (e2 == e) {
      data[e2] = std::move(main);
      continue;
    }
    const auto& ed2 = graph->edge(e2);
    data[e2] = {{Rat(0), verts[ed2.u]}, {ed2.length, verts[ed2.v]}};
  }
  return OpenSet(PLFunction(graph, std::move(data), verts));
}

OpenSet vertex_star(const GraphPtr& graph, int v,
                    const std::vector<Rat>& radii_per_incidence) {
  const auto& inc = graph->incident_edges(v);
  if (radii_per_incidence.size() != inc.size())
    throw InvalidInput("vertex_star: one radius per incidence required");
  std::vector<Rat> verts(graph->vertex_count(), Rat(-1));
  verts[v] = 1;

  // Per edge, the radii applying at its u end / v end (for this star).
  std::vector<std::optional<Rat>> r_head(graph->edge_count());
  std::vector<std::optional<Rat>> r_tail(graph->edge_count());
  std::vector<int> seen(graph->edge_count(), 0);
  for (std::size_t i = 0; i < inc.size(); ++i) {
    int e = inc[i];
    const auto& ed = graph->edge(e);
    const Rat& r = radii_per_incidence[i];
    bool loop = ed.u == ed.v;
    // A loop end may reach at most halfway around; a plain edge end may
    // reach anywhere short of the far vertex.
    if (r <= 0 || (loop ? 2 * r > ed.length : r >= ed.length))
      throw InvalidInput("vertex_star: radius out of range for edge '" +
                         ed.id + "'");
    // For loops the incidence list holds the edge twice: first the u end
    // (t = 0), then the v end (t = length).
    if ((loop && seen[e] == 0) || (!loop && ed.u == v))
      r_head[e] = r;
    else
      r_tail[e] = r;
    ++seen[e];
  }

  std::vector<Polyline> data(graph->edge_count());
  for (int e = 0; e < graph->edge_count(); ++e) {
    const auto& ed = graph->edge(e);
    Polyline p;
    if (r_head[e])
      p.push_back({Rat(0), Rat(1)});
    else
      p.push_back({Rat(0), verts[ed.u]});
    if (r_head[e]) p.push_back({*r_head[e], Rat(0)});
    if (r_tail[e] && ed.length - *r_tail[e] != (r_head[e] ? *r_head[e] : Rat(-1)))
      p.push_back({ed.length - *r_tail[e], Rat(0)});
    if (r_tail[e])
      p.push_back({ed.length, Rat(1)});
    else
      p.push_back({ed.length, verts[ed.v]});
    data[e] = p;
  }
  return OpenSet(PLFunction(graph, std::move(data), verts));
}

std::vector<OpenSet> mesh_cells(const GraphPtr& graph, int depth) {
  if (depth < 1) throw InvalidInput("mesh depth must be >= 1");
  std::vector<OpenSet> out;
  Int steps = Int(1) << depth;
  for (int e = 0; e < graph->edge_count(); ++e) {
    const Rat& len = graph->edge(e).length;
    Rat h = len / Rat(steps);
    for (Int a = 0; a < steps; ++a)
      for (Int b = a + 1; b <= steps; ++b)
        out.push_back(interval_cell(graph, e, Rat(a) * h, Rat(b) * h));
  }
  for (int v = 0; v < graph->vertex_count(); ++v) {
    const auto& inc = graph->incident_edges(v);
    if (inc.empty()) continue;  // an isolated vertex has no open star here
    std::vector<Rat> radii;
    for (int e : inc) radii.push_back(graph->edge(e).length / Rat(steps));
    out.push_back(vertex_star(graph, v, radii));
  }
  return out;
}

}  // namespace continua
