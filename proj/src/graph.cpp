// Licensed under the Apache License 2.0 (see LICENSE file).
#include "continua/graph.hpp"

#include <algorithm>
#include <numeric>

namespace continua {

MetricGraph::MetricGraph(std::vector<std::string> vertex_ids,
                         std::vector<Edge> edges)
    : vertex_ids_(std::move(vertex_ids)), edges_(std::move(edges)) {
  if (vertex_ids_.empty()) throw InvalidInput("graph needs at least one vertex");
  for (int i = 0; i < static_cast<int>(vertex_ids_.size()); ++i) {
    if (!vertex_index_.emplace(vertex_ids_[i], i).second)
      throw InvalidInput("duplicate vertex id '" + vertex_ids_[i] + "'");
  }
  incident_.assign(vertex_ids_.size(), {});
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    Edge& ed = edges_[e];
    if (ed.u < 0 || ed.u >= vertex_count() || ed.v < 0 || ed.v >= vertex_count())
      throw InvalidInput("edge '" + ed.id + "' references unknown vertex");
    if (ed.length <= 0)
      throw InvalidInput("edge '" + ed.id + "' must have positive length");
    if (!edge_index_.emplace(ed.id, e).second)
      throw InvalidInput("duplicate edge id '" + ed.id + "'");
    incident_[ed.u].push_back(e);
    incident_[ed.v].push_back(e);
  }
}

int MetricGraph::vertex_index(const std::string& id) const {
  auto it = vertex_index_.find(id);
  if (it == vertex_index_.end())
    throw InvalidInput("unknown vertex id '" + id + "'");
  return it->second;
}

int MetricGraph::edge_index(const std::string& id) const {
  auto it = edge_index_.find(id);
  if (it == edge_index_.end()) throw InvalidInput("unknown edge id '" + id + "'");
  return it->second;
}

MetricGraph::Components MetricGraph::components() const {
  Components out;
  out.vertex_component.assign(vertex_count(), -1);
  out.edge_component.assign(edge_count(), -1);
  for (int start = 0; start < vertex_count(); ++start) {
    if (out.vertex_component[start] != -1) continue;
    int c = out.count++;
    std::vector<int> stack{start};
    out.vertex_component[start] = c;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int e : incident_[v]) {
        out.edge_component[e] = c;
        for (int w : {edges_[e].u, edges_[e].v}) {
          if (out.vertex_component[w] == -1) {
            out.vertex_component[w] = c;
            stack.push_back(w);
          }
        }
      }
    }
  }
  return out;
}

bool MetricGraph::is_arc() const {
  if (!connected()) return false;
  if (edge_count() != vertex_count() - 1) return false;  // acyclic + connected
  for (int v = 0; v < vertex_count(); ++v)
    if (degree(v) > 2) return false;
  for (const Edge& e : edges_)
    if (e.u == e.v) return false;
  return true;
}

MetricGraph::ArcLayout MetricGraph::arc_layout() const {
  if (!is_arc()) throw InvalidInput("graph is not an arc");
  ArcLayout layout;
  layout.total_length = 0;
  if (edge_count() == 0) return layout;
  int start = -1;
  for (int v = 0; v < vertex_count(); ++v)
    if (degree(v) == 1) {
      start = v;
      break;
    }
  std::vector<bool> used(edge_count(), false);
  int cur = start;
  for (int step = 0; step < edge_count(); ++step) {
    int next_edge = -1;
    for (int e : incident_[cur])
      if (!used[e]) {
        next_edge = e;
        break;
      }
    used[next_edge] = true;
    bool fwd = edges_[next_edge].u == cur;
    layout.edge_order.push_back(next_edge);
    layout.forward.push_back(fwd);
    layout.offset.push_back(layout.total_length);
    layout.total_length += edges_[next_edge].length;
    cur = fwd ? edges_[next_edge].v : edges_[next_edge].u;
  }
  return layout;
}

Point Point::on_edge(const MetricGraph& g, int e, Rat t) {
  const auto& ed = g.edge(e);
  if (t < 0 || t > ed.length)
    throw InvalidInput("point parameter outside [0, length] on edge '" +
                       ed.id + "'");
  if (t == 0) return at_vertex(ed.u);
  if (t == ed.length) return at_vertex(ed.v);
  Point p;
  p.edge = e;
  p.t = std::move(t);
  return p;
}

GraphPtr make_interval_graph(const Rat& len) {
  return std::make_shared<MetricGraph>(
      std::vector<std::string>{"a", "b"},
      std::vector<MetricGraph::Edge>{{"e", 0, 1, len}});
}

GraphPtr make_circle_graph(const Rat& len) {
  return std::make_shared<MetricGraph>(
      std::vector<std::string>{"v"},
      std::vector<MetricGraph::Edge>{{"e", 0, 0, len}});
}

}  // namespace continua
