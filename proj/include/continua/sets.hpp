// Licensed under the Apache License 2.0 (see LICENSE file).
#pragma once

#include <optional>
#include <vector>

#include "continua/plfunction.hpp"

namespace continua {

// An open subset in normal form: the strict superlevel set {g > 0} of a
// piecewise-linear generator.  All boolean structure (union, intersection,
// emptiness, covering, containment) is exactly decidable.
class OpenSet {
 public:
  explicit OpenSet(PLFunction gen) : gen_(std::move(gen)) {}

  static OpenSet superlevel(const PLFunction& f, const Rat& c) {
    return OpenSet(f.add_const(-c));
  }

  const PLFunction& generator() const { return gen_; }
  const GraphPtr& graph() const { return gen_.graph(); }

  bool is_empty() const { return gen_.max_value() <= 0; }
  bool contains_point(const Point& p) const { return gen_.eval(p) > 0; }

  OpenSet unite(const OpenSet& o) const {
    return OpenSet(gen_.plmax(o.gen_));
  }
  OpenSet intersect(const OpenSet& o) const {
    return OpenSet(gen_.plmin(o.gen_));
  }

 private:
  PLFunction gen_;
};

// A closed subset in normal form: {g <= 0}.
class ClosedSet {
 public:
  explicit ClosedSet(PLFunction gen) : gen_(std::move(gen)) {}

  const PLFunction& generator() const { return gen_; }
  const GraphPtr& graph() const { return gen_.graph(); }

  bool is_empty() const { return gen_.min_value() > 0; }
  bool contains_point(const Point& p) const { return gen_.eval(p) <= 0; }

  ClosedSet unite(const ClosedSet& o) const {
    return ClosedSet(gen_.plmin(o.gen_));
  }
  ClosedSet intersect(const ClosedSet& o) const {
    return ClosedSet(gen_.plmax(o.gen_));
  }
  // The whole graph, i.e. g <= 0 everywhere?
  bool is_everything(Point* counterexample = nullptr) const;

 private:
  PLFunction gen_;
};

struct CoverCheck {
  bool covered = false;
  std::optional<Point> witness;  // an uncovered point when covered == false
};

// Exact covering test: true iff min over X of max_i(generator_i) > 0.
CoverCheck covers(const GraphPtr& graph, const std::vector<OpenSet>& sets);

// Exact containment inner `subseteq` outer; on failure gives a point of
// inner outside outer.
bool is_subset(const OpenSet& inner, const OpenSet& outer,
               Point* witness = nullptr);

// Connected components of an open set, each again in normal form; their
// union is the input and pairwise intersections are empty.
std::vector<OpenSet> open_components(const OpenSet& u);

// The dyadic search universe at a given depth: all open subintervals with
// endpoints on the per-edge grid of 2^depth equal steps, plus one open
// star per vertex at that resolution.
std::vector<OpenSet> mesh_cells(const GraphPtr& graph, int depth);

// Generator for the open interval (a, b) in edge coordinates (0 <= a < b
// <= length); the set excludes the edge's endpoint vertices.
OpenSet interval_cell(const GraphPtr& graph, int e, const Rat& a,
                      const Rat& b);
// Open star of a vertex with a given radius along each incident edge end.
OpenSet vertex_star(const GraphPtr& graph, int v,
                    const std::vector<Rat>& radii_per_incidence);

}  // namespace continua
