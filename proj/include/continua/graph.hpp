// Licensed under the Apache License 2.0 (see LICENSE file).
#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "continua/rational.hpp"

namespace continua {

// A finite 1-complex with rational edge lengths.  Loops and multi-edges
// are allowed; the circle is one vertex plus one loop.
class MetricGraph {
 public:
  struct Edge {
    std::string id;
    int u = -1;
    int v = -1;
    Rat length;
  };

  MetricGraph(std::vector<std::string> vertex_ids, std::vector<Edge> edges);

  int vertex_count() const { return static_cast<int>(vertex_ids_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::string>& vertex_ids() const { return vertex_ids_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_.at(e); }

  int vertex_index(const std::string& id) const;
  int edge_index(const std::string& id) const;

  // Edges incident to a vertex (a loop appears twice).
  const std::vector<int>& incident_edges(int v) const {
    return incident_.at(v);
  }
  int degree(int v) const { return static_cast<int>(incident_.at(v).size()); }

  struct Components {
    int count = 0;
    std::vector<int> vertex_component;  // per vertex
    std::vector<int> edge_component;    // per edge
  };
  Components components() const;
  bool connected() const { return components().count == 1; }

  // True when the graph is an arc: connected, acyclic, max degree 2
  // (a single path, possibly one isolated vertex for a degenerate arc).
  bool is_arc() const;

  // For an arc: edges in path order with orientation flags (true if the
  // edge is traversed u->v) and the cumulative offset of each edge start.
  struct ArcLayout {
    std::vector<int> edge_order;
    std::vector<bool> forward;
    std::vector<Rat> offset;  // per entry of edge_order
    Rat total_length;
  };
  ArcLayout arc_layout() const;

 private:
  std::vector<std::string> vertex_ids_;
  std::vector<Edge> edges_;
  std::map<std::string, int> vertex_index_;
  std::map<std::string, int> edge_index_;
  std::vector<std::vector<int>> incident_;
};

using GraphPtr = std::shared_ptr<const MetricGraph>;

// A point on a metric graph: either a vertex or an interior point of an
// edge.  Edge endpoints canonicalize to their vertex.
struct Point {
  int edge = -1;  // -1 when the point is a vertex
  Rat t;
  int vertex = -1;  // set iff edge == -1

  static Point at_vertex(int v) {
    Point p;
    p.vertex = v;
    return p;
  }
  static Point on_edge(const MetricGraph& g, int e, Rat t);

  bool operator==(const Point& o) const {
    return edge == o.edge && vertex == o.vertex && (edge == -1 || t == o.t);
  }
};

// Canonical interval-graph on [0, len]: two vertices "a", "b", one edge "e".
GraphPtr make_interval_graph(const Rat& len = Rat(1));
// Circle: one vertex "v", one loop "e" of the given length.
GraphPtr make_circle_graph(const Rat& len = Rat(1));

}  // namespace continua
