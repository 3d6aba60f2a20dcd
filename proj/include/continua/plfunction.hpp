// Licensed under the Apache License 2.0 (see LICENSE file).
#pragma once

#include <optional>
#include <vector>

#include "continua/graph.hpp"
#include "continua/rational.hpp"

namespace continua {

struct BP {
  Rat t;
  Rat v;
  bool operator==(const BP&) const = default;
};

// Piecewise-linear data over a single parameter interval [0, L].
using Polyline = std::vector<BP>;

Rat polyline_eval(const Polyline& p, const Rat& t);
// Drop interior breakpoints lying on the segment between their neighbours.
Polyline polyline_simplify(const Polyline& p);

// A continuous piecewise-linear rational function on a MetricGraph.
class PLFunction {
 public:
  // `data` holds one polyline per edge (breakpoints strictly increasing,
  // first at 0, last at the edge length).  Isolated vertices, if any,
  // need explicit values.
  PLFunction(GraphPtr graph, std::vector<Polyline> data,
             std::optional<std::vector<Rat>> isolated_vertex_values = {});

  static PLFunction constant(GraphPtr graph, const Rat& c);
  // The arc-coordinate function on an arc graph (0 at one endpoint,
  // total length at the other).
  static PLFunction arc_coordinate(GraphPtr graph);
  // Rebuild a function on an arc graph from a polyline over [0, total].
  static PLFunction from_arc_polyline(GraphPtr graph, const Polyline& p);

  const GraphPtr& graph() const { return graph_; }
  const std::vector<Polyline>& data() const { return data_; }
  const Polyline& edge_data(int e) const { return data_.at(e); }
  const Rat& vertex_value(int v) const { return vertex_values_.at(v); }

  Rat eval_edge(int e, const Rat& t) const;
  Rat eval(const Point& p) const;

  PLFunction add(const PLFunction& g) const;
  PLFunction sub(const PLFunction& g) const;
  PLFunction scale(const Rat& c) const;
  PLFunction add_const(const Rat& c) const;
  PLFunction negate() const { return scale(Rat(-1)); }
  PLFunction plmin(const PLFunction& g) const;
  PLFunction plmax(const PLFunction& g) const;
  PLFunction plabs() const;

  // Exact extrema with an attaining point.
  Rat min_value(Point* witness = nullptr) const;
  Rat max_value(Point* witness = nullptr) const;
  Rat sup_norm() const;  // max |f|

  // Maximal open parameter intervals (a, b) on edge e where f > 0.
  // Endpoint membership at t = 0 or t = len is the vertex's business:
  // the positive set is the union of these open intervals over edges
  // plus the vertices where f > 0.
  struct Interval {
    Rat a, b;
  };
  std::vector<Interval> positive_intervals(int e) const;

  // Flatten to a polyline over [0, total] on an arc graph.
  Polyline to_arc_polyline() const;

  bool same_graph(const PLFunction& g) const { return graph_ == g.graph_; }
  bool operator==(const PLFunction& g) const {
    return graph_ == g.graph_ && data_ == g.data_ &&
           vertex_values_ == g.vertex_values_;
  }

 private:
  GraphPtr graph_;
  std::vector<Polyline> data_;
  std::vector<Rat> vertex_values_;

  template <typename F>
  PLFunction binary_op(const PLFunction& g, bool with_crossings,
                       F&& pick) const;
};

// Compose a polyline function on [0, L'] with a graph function whose
// values lie in [0, L'] (exact pullback of breakpoints).
PLFunction compose(const Polyline& outer, const PLFunction& inner);

void require_same_graph(const PLFunction& f, const PLFunction& g);

}  // namespace continua
