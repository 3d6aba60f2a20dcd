// Licensed under the Apache License 2.0 (see LICENSE file).
#pragma once

#include <optional>
#include <vector>

#include "continua/sets.hpp"

namespace continua {

// An ordered finite open cover of a metric graph; covering is checked at
// construction.
class Cover {
 public:
  Cover(GraphPtr graph, std::vector<OpenSet> sets);

  const GraphPtr& graph() const { return graph_; }
  const std::vector<OpenSet>& sets() const { return sets_; }
  const OpenSet& set(int i) const { return sets_.at(i); }
  int size() const { return static_cast<int>(sets_.size()); }

 private:
  GraphPtr graph_;
  std::vector<OpenSet> sets_;
};

// Intersection pattern of a cover: edge (i, j) iff sets i and j meet.
struct Nerve {
  int n = 0;
  std::vector<std::vector<bool>> adj;
  bool has_edge(int i, int j) const { return adj.at(i).at(j); }
};

struct ChainViolation {
  enum class Kind { LongRangeIntersect, ConsecutiveDisjoint, EmptyLink };
  Kind kind;
  int i = -1, j = -1;
  std::optional<Point> point;  // a point of the offending intersection
};

struct NerveResult {
  Nerve nerve;
  bool is_chain = false;
  std::optional<ChainViolation> violation;
};

// A cover is a chain when its nerve is exactly the path 1-2-...-m: no
// long-range intersections and every consecutive pair meets.  Links must
// be nonempty.
NerveResult nerve_and_is_chain(const Cover& c);

struct RefinesResult {
  bool ok = false;
  std::vector<int> assignment;  // j -> minimal i with V_j subseteq U_i
  int failed_index = -1;
  std::vector<Point> escapes;  // escapes[i] lies in V_j but not in U_i
};

RefinesResult refines(const Cover& v, const Cover& u);

// A chain cover together with its refinement assignment into a target
// cover (empty assignment when only chain-ness is being certified).
struct ChainCertificate {
  Cover chain;
  std::vector<int> assignment;
};

struct ChainSearchResult {
  std::optional<ChainCertificate> certificate;  // nullopt: exhausted
  int depth = 0;
};

// Searches for a chain refinement of `u` among connected unions of
// mesh_cells(X, depth): dyadic subintervals of edges and dyadic vertex
// stars.  Shortest chains first, lexicographic within a length, so the
// result is deterministic.  An exhausted result only says no chain was
// found in that search universe.
ChainSearchResult find_chain_refinement(const Cover& u, int depth);

// psi0 of a tuple: ||sum |f_i||| - || ||sum |f_i||| - sum |f_i| ||, which
// equals the minimum of sum |f_i| over the graph.  Exact.
CertifiedValue psi0(const std::vector<PLFunction>& f);

inline const Rat& default_width() {
  static const Rat w(1, Int("1000000000"));
  return w;
}

// max over |i-j| >= 2 of sqrt(||g_i * g_j||); 0 when m <= 2.
CertifiedValue psi1(const std::vector<PLFunction>& g,
                    const Rat& width = default_width());

// max_j min_i || |f_i| - |g_j| - |h_{j,i}| ||.  Exact.  h has one row of
// k entries per j.
CertifiedValue psi2(const std::vector<PLFunction>& f,
                    const std::vector<PLFunction>& g,
                    const std::vector<std::vector<PLFunction>>& h);

struct Witness {
  int m = 0;
  std::vector<PLFunction> g;               // m functions
  std::vector<std::vector<PLFunction>> h;  // m rows of k functions
  Rat eps, eps_prime, delta;
};

void validate_witness(const std::vector<PLFunction>& f, const Witness& w);

// min(psi0(f), max(psi0(f) dot- k*psi0(g), m*psi1(g), m*psi2(f,g,h))).
// An upper bound on sigma_k(f) for any witness.
CertifiedValue sigma_inner(const std::vector<PLFunction>& f, const Witness& w,
                           const Rat& width = default_width());

struct PruneResult {
  std::vector<int> kept;  // indices into the input, increasing
  std::vector<OpenSet> sets;
};

// Repairs missing consecutive intersections in a covering sequence with
// no long-range intersections: whenever W_i and W_{i+1} are disjoint,
// exactly one of the prefix or the suffix still covers (by connectedness)
// and the other side is dropped.
PruneResult prune_chain(const GraphPtr& graph,
                        const std::vector<OpenSet>& w);

// The backward direction: turns a witness with the proof's hypotheses
// into a verified chain refinement of U_i = {f_i > 0} via the superlevel
// sets W_j = {g_j > eps/(2m)} and prune_chain.
ChainCertificate extract_chain(const std::vector<PLFunction>& f,
                               const Witness& w);

// The forward direction on an arc: from nonnegative f (normalized to
// sup-norm 1 internally) with psi0(f) > delta, builds a witness whose
// sigma_inner is at most delta, verifying every step exactly.
Witness build_witness(const std::vector<PLFunction>& f, const Rat& delta,
                      int max_depth = 10);

}  // namespace continua
