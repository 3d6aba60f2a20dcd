// Licensed under the Apache License 2.0 (see LICENSE file).
#include "continua/chain.hpp"

#include <algorithm>
#include <unordered_map>

#include "continua/poly.hpp"

namespace continua {

namespace {

void require_nonempty_same_graph(const std::vector<PLFunction>& f,
                                 const char* what) {
  if (f.empty()) throw InvalidInput(std::string(what) + ": empty tuple");
  for (const auto& g : f) require_same_graph(f.front(), g);
}

// ---------------------------------------------------------------------
// Atom bitsets for the mesh search.

struct Bits {
  std::vector<unsigned long long> w;

  explicit Bits(int n = 0) : w((n + 63) / 64, 0) {}
  void set(int i) { w[i >> 6] |= 1ULL << (i & 63); }
  bool intersects(const Bits& o) const {
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i] & o.w[i]) return true;
    return false;
  }
  bool subset_of(const Bits& o) const {
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i] & ~o.w[i]) return false;
    return true;
  }
  Bits united(const Bits& o) const {
    Bits r = *this;
    for (std::size_t i = 0; i < w.size(); ++i) r.w[i] |= o.w[i];
    return r;
  }
  bool operator==(const Bits& o) const { return w == o.w; }
};

struct MemoKey {
  Bits prev;
  int last;
  bool operator==(const MemoKey& o) const {
    return last == o.last && prev == o.prev;
  }
};

struct MemoHash {
  std::size_t operator()(const MemoKey& k) const {
    std::size_t h = static_cast<std::size_t>(k.last) * 0x9e3779b97f4a7c15ULL;
    for (auto word : k.prev.w) {
      h ^= word + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

// Atom layout: every edge contributes 2^depth open segments and
// 2^depth - 1 interior grid points; every vertex is one atom.  Atoms
// partition the graph, and each search candidate is exactly a union of
// atoms, so intersection and covering checks reduce to bit operations.
struct AtomLayout {
  int depth = 0;
  long long steps = 0;
  std::vector<int> seg_base, grid_base;  // per edge
  int vertex_base = 0;
  int total = 0;

  AtomLayout(const MetricGraph& g, int depth_)
      : depth(depth_), steps(1LL << depth_) {
    int at = 0;
    for (int e = 0; e < g.edge_count(); ++e) {
      seg_base.push_back(at);
      at += static_cast<int>(steps);
      grid_base.push_back(at);
      at += static_cast<int>(steps) - 1;
    }
    vertex_base = at;
    at += g.vertex_count();
    total = at;
  }

  int seg(int e, long long s) const {
    return seg_base[e] + static_cast<int>(s);
  }
  int grid(int e, long long i) const {
    return grid_base[e] + static_cast<int>(i) - 1;
  }
  int vertex(int v) const { return vertex_base + v; }

  // Atoms of a half-open run [0, j*step) from an edge end (head = the
  // t = 0 end), excluding the vertex itself.
  void mark_run(Bits& b, int e, long long j, bool head) const {
    if (head) {
      for (long long s = 0; s < j; ++s) b.set(seg(e, s));
      for (long long i = 1; i < j; ++i) b.set(grid(e, i));
    } else {
      for (long long s = steps - j; s < steps; ++s) b.set(seg(e, s));
      for (long long i = steps - j + 1; i < steps; ++i) b.set(grid(e, i));
    }
  }
};

struct Candidate {
  OpenSet set;
  Bits atoms;
  int min_target = -1;
};

std::vector<Candidate> enumerate_candidates(const GraphPtr& graph,
                                            const AtomLayout& lay) {
  std::vector<Candidate> out;
  long long steps = lay.steps;

  for (int e = 0; e < graph->edge_count(); ++e) {
    Rat h = graph->edge(e).length / Rat(Int(steps));
    for (long long a = 0; a < steps; ++a) {
      for (long long b = a + 1; b <= steps; ++b) {
        Bits bits(lay.total);
        for (long long s = a; s < b; ++s) bits.set(lay.seg(e, s));
        for (long long i = a + 1; i < b; ++i) bits.set(lay.grid(e, i));
        out.push_back(
            {interval_cell(graph, e, Rat(Int(a)) * h, Rat(Int(b)) * h),
             std::move(bits)});
      }
    }
  }

  for (int v = 0; v < graph->vertex_count(); ++v) {
    const auto& inc = graph->incident_edges(v);
    int deg = static_cast<int>(inc.size());
    if (deg == 0) continue;

    // Per-incidence radius caps (in grid steps) and head/tail sides.
    std::vector<long long> cap(deg);
    std::vector<bool> head(deg);
    std::vector<int> loop_seen(graph->edge_count(), 0);
    for (int i = 0; i < deg; ++i) {
      const auto& ed = graph->edge(inc[i]);
      bool loop = ed.u == ed.v;
      cap[i] = loop ? steps / 2 : steps - 1;
      head[i] = loop ? loop_seen[inc[i]] == 0 : ed.u == v;
      ++loop_seen[inc[i]];
    }

    // Degree >= 3 stars use a shared radius to keep the enumeration
    // small; low degrees get the full grid of radius combinations.
    bool uniform = deg >= 3;
    std::vector<long long> radii(deg, 1);
    while (true) {
      Bits bits(lay.total);
      bits.set(lay.vertex(v));
      std::vector<Rat> rat_radii;
      for (int i = 0; i < deg; ++i) {
        int e = inc[i];
        lay.mark_run(bits, e, radii[i], head[i]);
        rat_radii.push_back(graph->edge(e).length * Rat(Int(radii[i])) /
                            Rat(Int(steps)));
      }
      out.push_back({vertex_star(graph, v, rat_radii), std::move(bits)});

      // Advance the radius odometer (last incidence fastest).
      if (uniform) {
        long long shared_cap = *std::min_element(cap.begin(), cap.end());
        if (radii[0] >= shared_cap) break;
        for (auto& r : radii) ++r;
      } else {
        int pos = deg - 1;
        while (pos >= 0 && radii[pos] >= cap[pos]) {
          radii[pos] = 1;
          --pos;
        }
        if (pos < 0) break;
        ++radii[pos];
      }
    }
  }
  return out;
}

// Depth-first search for covering chains over the candidate list.
// State: the union of all links before the last one (prev), the last
// link, and an optional remaining-length budget (-1 = unbounded).
struct ChainSearch {
  const std::vector<Candidate>& cands;
  const std::vector<std::vector<int>>& nbrs;
  Bits full;
  std::unordered_map<MemoKey, long long, MemoHash> failed;  // max budget
  static constexpr std::size_t kMemoCap = 4'000'000;
  std::vector<int> chain;

  bool extend(const Bits& prev, int last, const Bits& covered,
              long long remaining) {
    if (covered == full) return remaining <= 0 || remaining == -1;
    if (remaining == 0) return false;
    MemoKey key{prev, last};
    auto it = failed.find(key);
    if (it != failed.end() &&
        (it->second == -1 || (remaining != -1 && it->second >= remaining)))
      return false;

    Bits next_prev = prev.united(cands[last].atoms);
    for (int c : nbrs[last]) {
      if (cands[c].atoms.intersects(prev)) continue;
      if (cands[c].atoms.subset_of(covered)) continue;
      chain.push_back(c);
      if (extend(next_prev, c, covered.united(cands[c].atoms),
                 remaining == -1 ? -1 : remaining - 1))
        return true;
      chain.pop_back();
    }
    if (failed.size() < kMemoCap) {
      auto& slot = failed[key];
      if (remaining == -1)
        slot = -1;
      else if (slot != -1)
        slot = std::max(slot, remaining);
    }
    return false;
  }

  bool run(long long length) {
    chain.clear();
    int n = static_cast<int>(cands.size());
    Bits none(static_cast<int>(full.w.size()) * 64);
    for (int c = 0; c < n; ++c) {
      chain.push_back(c);
      if (extend(none, c, cands[c].atoms, length == -1 ? -1 : length - 1))
        return true;
      chain.pop_back();
    }
    return false;
  }
};

}  // namespace

// ---------------------------------------------------------------------
// Cover, nerve, refinement.

Cover::Cover(GraphPtr graph, std::vector<OpenSet> sets)
    : graph_(std::move(graph)), sets_(std::move(sets)) {
  if (!graph_) throw InvalidInput("Cover: null graph");
  if (sets_.empty()) throw InvalidInput("Cover: no sets");
  for (const auto& s : sets_)
    if (s.graph() != graph_)
      throw InvalidInput("Cover: set lives on another graph");
  CoverCheck c = covers(graph_, sets_);
  if (!c.covered) throw InvalidInput("Cover: sets do not cover the graph");
}

NerveResult nerve_and_is_chain(const Cover& c) {
  int n = c.size();
  NerveResult res;
  res.nerve.n = n;
  res.nerve.adj.assign(n, std::vector<bool>(n, false));
  res.is_chain = true;

  for (int i = 0; i < n && res.is_chain; ++i) {
    if (c.set(i).is_empty()) {
      res.is_chain = false;
      res.violation = ChainViolation{ChainViolation::Kind::EmptyLink, i, i, {}};
    }
  }

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      OpenSet meet = c.set(i).intersect(c.set(j));
      Point p;
      bool nonempty = meet.generator().max_value(&p) > 0;
      res.nerve.adj[i][j] = res.nerve.adj[j][i] = nonempty;
      if (!res.is_chain) continue;
      if (j - i >= 2 && nonempty) {
        res.is_chain = false;
        res.violation =
            ChainViolation{ChainViolation::Kind::LongRangeIntersect, i, j, p};
      } else if (j - i == 1 && !nonempty) {
        res.is_chain = false;
        res.violation =
            ChainViolation{ChainViolation::Kind::ConsecutiveDisjoint, i, j, {}};
      }
    }
  }
  return res;
}

RefinesResult refines(const Cover& v, const Cover& u) {
  if (v.graph() != u.graph())
    throw InvalidInput("refines: covers live on different graphs");
  RefinesResult res;
  res.ok = true;
  for (int j = 0; j < v.size(); ++j) {
    int found = -1;
    std::vector<Point> escapes;
    for (int i = 0; i < u.size(); ++i) {
      Point w;
      if (is_subset(v.set(j), u.set(i), &w)) {
        found = i;
        break;
      }
      escapes.push_back(w);
    }
    if (found < 0) {
      res.ok = false;
      res.failed_index = j;
      res.escapes = std::move(escapes);
      res.assignment.clear();
      return res;
    }
    res.assignment.push_back(found);
  }
  return res;
}

ChainSearchResult find_chain_refinement(const Cover& u, int depth) {
  if (depth < 1) throw InvalidInput("find_chain_refinement: depth must be >= 1");
  ChainSearchResult out;
  out.depth = depth;

  // A cover that is already a chain refines itself.
  if (nerve_and_is_chain(u).is_chain) {
    std::vector<int> identity(u.size());
    for (int i = 0; i < u.size(); ++i) identity[i] = i;
    out.certificate = ChainCertificate{u, identity};
    return out;
  }

  const GraphPtr& graph = u.graph();
  AtomLayout lay(*graph, depth);
  std::vector<Candidate> all = enumerate_candidates(graph, lay);

  // Keep only candidates contained in some cover member, recording the
  // minimal such index.
  std::vector<Candidate> cands;
  for (auto& c : all) {
    for (int i = 0; i < u.size(); ++i) {
      if (is_subset(c.set, u.set(i))) {
        c.min_target = i;
        break;
      }
    }
    if (c.min_target >= 0) cands.push_back(std::move(c));
  }

  Bits full(lay.total);
  for (int i = 0; i < lay.total; ++i) full.set(i);

  if (cands.empty()) return out;

  int n = static_cast<int>(cands.size());
  std::vector<std::vector<int>> nbrs(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b && cands[a].atoms.intersects(cands[b].atoms))
        nbrs[a].push_back(b);

  ChainSearch search{cands, nbrs, full, {}, {}};

  // First decide existence with no length bound (each link must add an
  // atom, so recursion depth is bounded by the atom count); then rerun
  // with iterative deepening for the shortest, lexicographically least
  // chain.
  if (!search.run(-1)) return out;
  long long found_len = static_cast<long long>(search.chain.size());
  for (long long len = 1; len <= found_len; ++len)
    if (search.run(len)) break;

  std::vector<OpenSet> sets;
  std::vector<int> assignment;
  for (int c : search.chain) {
    sets.push_back(cands[c].set);
    assignment.push_back(cands[c].min_target);
  }
  Cover chain_cover(graph, sets);
  NerveResult nr = nerve_and_is_chain(chain_cover);
  RefinesResult rr = refines(chain_cover, u);
  if (!nr.is_chain || !rr.ok)
    throw Error("find_chain_refinement: internal verification failed");
  out.certificate = ChainCertificate{std::move(chain_cover), rr.assignment};
  return out;
}

// ---------------------------------------------------------------------
// The psi formulas.

CertifiedValue psi0(const std::vector<PLFunction>& f) {
  require_nonempty_same_graph(f, "psi0");
  PLFunction s = f[0].plabs();
  for (std::size_t i = 1; i < f.size(); ++i) s = s.add(f[i].plabs());
  Rat n1 = s.sup_norm();
  Rat n2 = s.negate().add_const(n1).sup_norm();
  return CertifiedValue::exact(n1 - n2);
}

namespace {

// Exact max over |i-j| >= 2 of ||g_i * g_j|| (quadratic, so the norm is
// an exact rational).
Rat psi1_squared(const std::vector<PLFunction>& g) {
  Rat best(0);
  for (std::size_t i = 0; i + 2 < g.size(); ++i) {
    for (std::size_t j = i + 2; j < g.size(); ++j) {
      CertifiedValue n =
          PiecewisePoly::mul(g[i], g[j]).sup_norm(Rat(1, 1000000));
      if (!n.is_exact())
        throw Error("psi1: quadratic norm was not exact");
      best = std::max(best, n.lower);
    }
  }
  return best;
}

}  // namespace

CertifiedValue psi1(const std::vector<PLFunction>& g, const Rat& width) {
  require_nonempty_same_graph(g, "psi1");
  if (g.size() <= 2) return CertifiedValue::exact(Rat(0));
  return sqrt_bounds(psi1_squared(g), width);
}

CertifiedValue psi2(const std::vector<PLFunction>& f,
                    const std::vector<PLFunction>& g,
                    const std::vector<std::vector<PLFunction>>& h) {
  require_nonempty_same_graph(f, "psi2");
  require_nonempty_same_graph(g, "psi2");
  if (h.size() != g.size())
    throw InvalidInput("psi2: h needs one row per g entry");
  for (const auto& row : h)
    if (row.size() != f.size())
      throw InvalidInput("psi2: h rows need one entry per f entry");
  require_same_graph(f[0], g[0]);

  Rat outer(0);
  for (std::size_t j = 0; j < g.size(); ++j) {
    Rat inner;
    bool first = true;
    for (std::size_t i = 0; i < f.size(); ++i) {
      require_same_graph(f[0], h[j][i]);
      Rat d = f[i].plabs().sub(g[j].plabs()).sub(h[j][i].plabs()).sup_norm();
      if (first || d < inner) inner = d;
      first = false;
    }
    outer = std::max(outer, inner);
  }
  return CertifiedValue::exact(outer);
}

void validate_witness(const std::vector<PLFunction>& f, const Witness& w) {
  require_nonempty_same_graph(f, "witness");
  if (w.m <= 0 || static_cast<int>(w.g.size()) != w.m)
    throw InvalidInput("witness: m must match the number of g functions");
  if (w.h.size() != w.g.size())
    throw InvalidInput("witness: h needs one row per g function");
  for (const auto& row : w.h)
    if (row.size() != f.size())
      throw InvalidInput("witness: h rows need one entry per f function");
  for (const auto& gj : w.g) {
    require_same_graph(f[0], gj);
    if (gj.min_value() < 0)
      throw InvalidInput("witness: g functions must be nonnegative");
  }
  for (const auto& row : w.h)
    for (const auto& hij : row) {
      require_same_graph(f[0], hij);
      if (hij.min_value() < 0)
        throw InvalidInput("witness: h functions must be nonnegative");
    }
  if (w.eps <= 0 || w.eps_prime <= 0 || w.delta <= 0)
    throw InvalidInput("witness: parameters must be positive");
}

CertifiedValue sigma_inner(const std::vector<PLFunction>& f, const Witness& w,
                           const Rat& width) {
  validate_witness(f, w);
  Rat k(static_cast<long>(f.size()));
  Rat m(w.m);
  CertifiedValue p0f = psi0(f);
  CertifiedValue p0g = psi0(w.g);
  CertifiedValue a = cv_truncsub(p0f, cv_scale(k, p0g));
  CertifiedValue b = cv_scale(m, psi1(w.g, width / m));
  CertifiedValue c = cv_scale(m, psi2(f, w.g, w.h));
  return cv_min(p0f, cv_max(cv_max(a, b), c));
}

// ---------------------------------------------------------------------
// Pruning and the backward direction.

PruneResult prune_chain(const GraphPtr& graph,
                        const std::vector<OpenSet>& w) {
  if (w.empty()) throw InvalidInput("prune_chain: empty list");
  for (const auto& s : w)
    if (s.graph() != graph)
      throw InvalidInput("prune_chain: set lives on another graph");
  if (!covers(graph, w).covered)
    throw InvalidInput("prune_chain: sets do not cover the graph");
  for (std::size_t i = 0; i + 2 < w.size(); ++i)
    for (std::size_t j = i + 2; j < w.size(); ++j)
      if (!w[i].intersect(w[j]).is_empty())
        throw InvalidInput("prune_chain: long-range intersection at (" +
                           std::to_string(i) + ", " + std::to_string(j) + ")");

  PruneResult res;
  for (std::size_t i = 0; i < w.size(); ++i)
    res.kept.push_back(static_cast<int>(i));
  res.sets = w;

  while (true) {
    int bad = -1;
    for (std::size_t i = 0; i + 1 < res.sets.size(); ++i) {
      if (res.sets[i].intersect(res.sets[i + 1]).is_empty()) {
        bad = static_cast<int>(i);
        break;
      }
    }
    if (bad < 0) break;

    std::vector<OpenSet> prefix(res.sets.begin(), res.sets.begin() + bad + 1);
    std::vector<OpenSet> suffix(res.sets.begin() + bad + 1, res.sets.end());
    bool pre = covers(graph, prefix).covered;
    bool suf = covers(graph, suffix).covered;
    if (pre == suf)
      throw VerificationFailure(
          "prune_chain: connectedness violation (prefix and suffix " +
          std::string(pre ? "both cover" : "both fail to cover") + ")");
    if (pre) {
      res.sets = std::move(prefix);
      res.kept.resize(bad + 1);
    } else {
      res.sets = std::move(suffix);
      res.kept.erase(res.kept.begin(), res.kept.begin() + bad + 1);
    }
  }
  return res;
}

ChainCertificate extract_chain(const std::vector<PLFunction>& f,
                               const Witness& w) {
  validate_witness(f, w);
  const GraphPtr& graph = f[0].graph();
  Rat k(static_cast<long>(f.size()));
  Rat m(w.m);

  // The proof's hypotheses, in the exactly decidable form it uses them:
  // a covering bound on psi0(g), no long-range overlap (m*psi1 <= eps/2)
  // and the refinement bound m*psi2 < eps/2.
  Rat p0f = psi0(f).lower;
  if (!(p0f > k * w.eps))
    throw InvalidInput("extract_chain: hypothesis psi0(f) > k*eps fails (" +
                       rat_to_string(p0f) + " vs " +
                       rat_to_string(k * w.eps) + ")");
  Rat p0g = psi0(w.g).lower;
  if (!(p0g > w.eps / 2))
    throw InvalidInput("extract_chain: hypothesis psi0(g) > eps/2 fails (" +
                       rat_to_string(p0g) + " vs " +
                       rat_to_string(w.eps / 2) + ")");
  Rat sq = psi1_squared(w.g);
  Rat bound = w.eps / (2 * m);
  if (!(sq <= bound * bound))
    throw InvalidInput("extract_chain: hypothesis m*psi1(g) <= eps/2 fails");
  Rat p2 = psi2(f, w.g, w.h).lower;
  if (!(m * p2 < w.eps / 2))
    throw InvalidInput("extract_chain: hypothesis m*psi2 < eps/2 fails (" +
                       rat_to_string(m * p2) + " vs " +
                       rat_to_string(w.eps / 2) + ")");

  std::vector<OpenSet> u_sets;
  for (const auto& fi : f) u_sets.push_back(OpenSet(fi));
  Cover u(graph, u_sets);

  Rat level = w.eps / (2 * m);
  std::vector<OpenSet> wsets;
  for (const auto& gj : w.g) wsets.push_back(OpenSet::superlevel(gj, level));

  CoverCheck cc = covers(graph, wsets);
  if (!cc.covered)
    throw InvalidInput("extract_chain: the sets {g_j > eps/2m} fail to cover");
  for (std::size_t i = 0; i + 2 <= wsets.size(); ++i)
    for (std::size_t j = i + 2; j < wsets.size(); ++j)
      if (!wsets[i].intersect(wsets[j]).is_empty())
        throw InvalidInput("extract_chain: long-range intersection at (" +
                           std::to_string(i) + ", " + std::to_string(j) + ")");

  Cover wcover(graph, wsets);
  RefinesResult rr = refines(wcover, u);
  if (!rr.ok)
    throw InvalidInput("extract_chain: W_" + std::to_string(rr.failed_index) +
                       " is contained in no {f_i > 0}");

  PruneResult pr = prune_chain(graph, wsets);
  std::vector<int> assignment;
  for (int idx : pr.kept) assignment.push_back(rr.assignment[idx]);

  Cover chain(graph, pr.sets);
  if (!nerve_and_is_chain(chain).is_chain)
    throw Error("extract_chain: pruned sequence is not a chain");
  return ChainCertificate{std::move(chain), std::move(assignment)};
}

// ---------------------------------------------------------------------
// The forward direction: interval-set bookkeeping on a flattened arc.

namespace {

// A finite union of subintervals of [0, L] with per-endpoint closedness,
// kept sorted, disjoint and merged.  Open subsets of the arc only carry
// closed endpoints at 0 or L; closed subsets may have them anywhere
// (including degenerate points).
struct IvSet {
  struct Iv {
    Rat a, b;
    bool ca = false, cb = false;
  };
  std::vector<Iv> iv;

  bool empty() const { return iv.empty(); }

  static bool valid(const Iv& v) {
    return v.a < v.b || (v.a == v.b && v.ca && v.cb);
  }

  void normalize() {
    std::sort(iv.begin(), iv.end(), [](const Iv& x, const Iv& y) {
      if (x.a != y.a) return x.a < y.a;
      return x.ca && !y.ca;
    });
    std::vector<Iv> out;
    for (const auto& v : iv) {
      if (!valid(v)) continue;
      if (!out.empty()) {
        Iv& p = out.back();
        if (v.a < p.b || (v.a == p.b && (p.cb || v.ca))) {
          if (v.b > p.b || (v.b == p.b && v.cb)) {
            p.b = v.b;
            p.cb = v.cb;
          }
          continue;
        }
      }
      out.push_back(v);
    }
    iv = std::move(out);
  }

  IvSet unite(const IvSet& o) const {
    IvSet r = *this;
    r.iv.insert(r.iv.end(), o.iv.begin(), o.iv.end());
    r.normalize();
    return r;
  }

  IvSet intersect(const IvSet& o) const {
    IvSet r;
    for (const auto& x : iv) {
      for (const auto& y : o.iv) {
        Iv z;
        if (x.a > y.a) {
          z.a = x.a;
          z.ca = x.ca;
        } else if (x.a < y.a) {
          z.a = y.a;
          z.ca = y.ca;
        } else {
          z.a = x.a;
          z.ca = x.ca && y.ca;
        }
        if (x.b < y.b) {
          z.b = x.b;
          z.cb = x.cb;
        } else if (x.b > y.b) {
          z.b = y.b;
          z.cb = y.cb;
        } else {
          z.b = x.b;
          z.cb = x.cb && y.cb;
        }
        if (valid(z)) r.iv.push_back(z);
      }
    }
    r.normalize();
    return r;
  }

  IvSet complement(const Rat& len) const {
    IvSet r;
    Rat at(0);
    bool cat = true;
    for (const auto& v : iv) {
      Iv gap{at, v.a, cat, !v.ca};
      if (valid(gap)) r.iv.push_back(gap);
      at = v.b;
      cat = !v.cb;
    }
    Iv tail{at, len, cat, true};
    if (valid(tail)) r.iv.push_back(tail);
    r.normalize();
    return r;
  }

  IvSet closure() const {
    IvSet r = *this;
    for (auto& v : r.iv) v.ca = v.cb = true;
    r.normalize();
    return r;
  }

  bool disjoint(const IvSet& o) const { return intersect(o).empty(); }

  bool subset_of(const IvSet& o, const Rat& len) const {
    return intersect(o.complement(len)).empty();
  }

  bool contains(const Rat& t) const {
    for (const auto& v : iv) {
      if (t < v.a || t > v.b) continue;
      if (t > v.a && t < v.b) return true;
      if (t == v.a && v.ca) return true;
      if (t == v.b && v.cb) return true;
    }
    return false;
  }

  // Some point of the set (it must be nonempty).
  Rat pick() const {
    const Iv& v = iv.front();
    if (v.ca) return v.a;
    if (v.cb) return v.b;
    return (v.a + v.b) / 2;
  }

  bool operator==(const IvSet& o) const {
    if (iv.size() != o.iv.size()) return false;
    for (std::size_t i = 0; i < iv.size(); ++i) {
      if (iv[i].a != o.iv[i].a || iv[i].b != o.iv[i].b ||
          iv[i].ca != o.iv[i].ca || iv[i].cb != o.iv[i].cb)
        return false;
    }
    return true;
  }
};

// {p > 0} for a polyline over [0, L], as an IvSet.
IvSet positive_set(const Polyline& p) {
  IvSet r;
  for (std::size_t s = 0; s + 1 < p.size(); ++s) {
    const Rat &t0 = p[s].t, &t1 = p[s + 1].t;
    const Rat &v0 = p[s].v, &v1 = p[s + 1].v;
    if (v0 > 0 && v1 > 0) {
      r.iv.push_back({t0, t1, false, false});
    } else if (v0 > 0 && v1 <= 0) {
      Rat x = v1 == 0 ? t1 : t0 + (t1 - t0) * v0 / (v0 - v1);
      r.iv.push_back({t0, x, false, false});
    } else if (v0 <= 0 && v1 > 0) {
      Rat x = v0 == 0 ? t0 : t0 + (t1 - t0) * v0 / (v0 - v1);
      r.iv.push_back({x, t1, false, false});
    } else if (v0 < 0 && v1 < 0) {
      continue;
    } else if (v0 == 0 && v1 == 0) {
      continue;
    }
  }
  // Positive breakpoints glue adjacent pieces together; positive arc
  // endpoints make the set closed there.
  for (const auto& bp : p)
    if (bp.v > 0) r.iv.push_back({bp.t, bp.t, true, true});
  r.normalize();
  // Interior degenerate points cannot survive for a continuous function;
  // drop closedness away from the arc ends.
  for (auto& v : r.iv) {
    if (v.a != p.front().t) v.ca = false;
    if (v.b != p.back().t) v.cb = false;
  }
  return r;
}

Rat polyline_min_over(const Polyline& p, const Rat& a, const Rat& b) {
  Rat best = polyline_eval(p, a);
  best = std::min(best, polyline_eval(p, b));
  for (const auto& bp : p)
    if (bp.t > a && bp.t < b) best = std::min(best, bp.v);
  return best;
}

}  // namespace

Witness build_witness(const std::vector<PLFunction>& f, const Rat& delta,
                      int max_depth) {
  require_nonempty_same_graph(f, "build_witness");
  const GraphPtr& graph = f[0].graph();
  if (!graph->is_arc() || graph->edge_count() == 0)
    throw InvalidInput("build_witness: the space must be an arc");
  if (delta <= 0) throw InvalidInput("build_witness: delta must be positive");
  int k = static_cast<int>(f.size());

  // Normalize to nonnegative, sup-norm-1 inputs; the witness targets the
  // normalized tuple.
  std::vector<PLFunction> fn;
  for (const auto& fi : f) {
    if (fi.min_value() < 0)
      throw InvalidInput("build_witness: functions must be nonnegative");
    Rat n = fi.sup_norm();
    if (n == 0)
      throw InvalidInput("build_witness: a zero function generates no cover set");
    fn.push_back(fi.scale(1 / n));
  }

  Rat p0 = psi0(fn).lower;
  if (!(p0 > delta))
    throw InvalidInput("build_witness: psi0(f) > delta required, got psi0 = " +
                       rat_to_string(p0));
  Rat kk(k);
  Rat eps = (p0 - delta) / kk + delta / (3 * kk);
  Rat eps_prime = eps + delta / (3 * kk);

  std::vector<OpenSet> u_sets;
  for (const auto& fi : fn) u_sets.push_back(OpenSet::superlevel(fi, eps));
  Cover u(graph, u_sets);

  std::optional<ChainCertificate> cert;
  for (int depth = 1; depth <= max_depth; ++depth) {
    ChainSearchResult r = find_chain_refinement(u, depth);
    if (r.certificate) {
      cert = std::move(r.certificate);
      break;
    }
  }
  if (!cert)
    throw Error("build_witness: no chain refinement found up to depth " +
                std::to_string(max_depth));

  // Drop end links swallowed by their neighbor; the rest stays a chain
  // cover and the z-point below needs the first link to stick out.
  {
    std::vector<OpenSet> links = cert->chain.sets();
    std::vector<int> asg = cert->assignment;
    while (links.size() >= 2 && is_subset(links[0], links[1])) {
      links.erase(links.begin());
      asg.erase(asg.begin());
    }
    while (links.size() >= 2 &&
           is_subset(links.back(), links[links.size() - 2])) {
      links.pop_back();
      asg.pop_back();
    }
    if (static_cast<int>(links.size()) != cert->chain.size())
      cert = ChainCertificate{Cover(graph, links), asg};
  }

  // A first link that sticks out of the second only at an arc endpoint
  // starves the z-point below; trim the second link to open a gap.
  if (cert->chain.size() >= 2) {
    Rat alen = graph->arc_layout().total_length;
    IvSet w0 = positive_set(cert->chain.set(0).generator().to_arc_polyline());
    IvSet w1 = positive_set(cert->chain.set(1).generator().to_arc_polyline());
    IvSet diff = w0.intersect(w1.complement(alen));
    bool interior = false;
    for (const auto& v : diff.iv)
      if (v.a < v.b) interior = true;
    IvSet overlap = w0.intersect(w1);
    if (!diff.empty() && !interior && !overlap.empty()) {
      PLFunction x = PLFunction::arc_coordinate(graph);
      std::vector<OpenSet> links = cert->chain.sets();
      if (diff.iv.front().a == 0) {
        Rat t = (overlap.iv.front().a + overlap.iv.front().b) / 2;
        links[1] = OpenSet(links[1].generator().plmin(x.add_const(-t)));
      } else if (diff.iv.back().b == alen) {
        Rat t = (overlap.iv.back().a + overlap.iv.back().b) / 2;
        links[1] = OpenSet(links[1].generator().plmin(x.negate().add_const(t)));
      }
      cert = ChainCertificate{Cover(graph, links), cert->assignment};
    }
  }

  int m = cert->chain.size();
  const std::vector<int>& ij = cert->assignment;

  // g_j: a bump of height between eps and (eps + eps')/2 over W_j,
  // clipped under f_{i(j)} and at zero.  This meets the proof's (i)-(iii).
  std::vector<PLFunction> g;
  for (int j = 0; j < m; ++j) {
    const PLFunction& gen = cert->chain.set(j).generator();
    Rat peak = gen.max_value();
    PLFunction bump =
        gen.scale((eps_prime - eps) / (2 * peak)).add_const(eps);
    PLFunction gj = fn[ij[j]].plmin(bump).plmax(PLFunction::constant(graph, Rat(0)));
    if (fn[ij[j]].sub(gj).min_value() < 0)
      throw Error("build_witness: (i) g_j <= f_i(j) failed");
    if (!is_subset(cert->chain.set(j), OpenSet::superlevel(gj, eps)))
      throw Error("build_witness: (ii) g_j > eps on W_j failed");
    if (!(gj.sup_norm() < eps_prime))
      throw Error("build_witness: (iii) ||g_j|| < eps' failed");
    g.push_back(std::move(gj));
  }

  // Work on the flattened arc [0, L].
  Rat len = graph->arc_layout().total_length;
  std::vector<IvSet> W;
  std::vector<Polyline> wgen;
  for (int j = 0; j < m; ++j) {
    wgen.push_back(cert->chain.set(j).generator().to_arc_polyline());
    W.push_back(positive_set(wgen.back()));
  }

  // Z_j around bd(W_j) cap W_{j-1}, radii halved together until the
  // proof's three conditions verify exactly.
  std::vector<std::vector<Rat>> bd_pts(m);
  for (int j = 1; j < m; ++j) {
    for (const auto& v : W[j].iv) {
      if (!(v.a == 0 && v.ca) && W[j - 1].contains(v.a))
        bd_pts[j].push_back(v.a);
      if (!(v.b == len && v.cb) && W[j - 1].contains(v.b))
        bd_pts[j].push_back(v.b);
    }
  }

  std::vector<Rat> radius(m, len / 8);
  std::vector<IvSet> Z(m);
  auto rebuild_z = [&](int j) {
    Z[j] = IvSet();
    for (const Rat& p : bd_pts[j]) {
      IvSet::Iv v;
      v.a = std::max(Rat(0), Rat(p - radius[j]));
      v.ca = p - radius[j] < 0;
      v.b = std::min(len, Rat(p + radius[j]));
      v.cb = p + radius[j] > len;
      Z[j].iv.push_back(v);
    }
    Z[j].normalize();
  };
  for (int j = 1; j < m; ++j) rebuild_z(j);

  for (int round = 0;; ++round) {
    if (round > 64)
      throw Error("build_witness: Z radius shrinking did not stabilize");
    std::vector<bool> shrink(m, false);
    for (int j = 1; j < m; ++j) {
      if (!Z[j].subset_of(W[j - 1].unite(W[j]), len)) shrink[j] = true;
      if (j + 1 < m && !Z[j].closure().disjoint(W[j + 1].closure()))
        shrink[j] = true;
      if (j + 1 < m && !Z[j].closure().disjoint(Z[j + 1].closure())) {
        shrink[j] = true;
        shrink[j + 1] = true;
      }
    }
    // The minimal-m argument needs a point of W_1 outside Z_2 and W_2.
    if (m >= 2) {
      IvSet zfree = W[0]
                        .intersect(Z[1].closure().complement(len))
                        .intersect(W[1].complement(len));
      if (zfree.empty()) shrink[1] = true;
    }
    bool any = false;
    for (int j = 1; j < m; ++j) {
      if (shrink[j]) {
        radius[j] /= 2;
        rebuild_z(j);
        any = true;
      }
    }
    if (!any) break;
  }

  // N_j and M_j, then the exact structural checks the proof leaves to
  // the reader.
  std::vector<IvSet> N(m), M(m);
  IvSet suffix_open;  // union of W_i for i > j, built backwards
  std::vector<IvSet> suffix(m);
  for (int j = m - 1; j >= 0; --j) {
    suffix[j] = suffix_open;
    suffix_open = suffix_open.unite(W[j]);
  }
  for (int j = 0; j < m; ++j) {
    IvSet nj = W[j].intersect(suffix[j].closure().complement(len));
    if (j >= 1) nj = nj.unite(Z[j]);
    if (j + 1 < m) nj = nj.unite(Z[j + 1]);
    N[j] = nj;
    M[j] = W[j].closure().intersect(suffix[j].complement(len));
  }

  IvSet mcover;
  for (int j = 0; j < m; ++j) mcover = mcover.unite(M[j]);
  IvSet whole;
  whole.iv.push_back({Rat(0), len, true, true});
  if (!(mcover == whole))
    throw Error("build_witness: the M_j do not cover the arc");
  for (int i = 0; i < m; ++i)
    for (int j = i + 2; j < m; ++j)
      if (!N[i].disjoint(N[j]))
        throw Error("build_witness: N_" + std::to_string(i) + " meets N_" +
                    std::to_string(j));
  for (int j = 0; j < m; ++j)
    if (!M[j].subset_of(N[j], len))
      throw Error("build_witness: M_" + std::to_string(j) +
                  " escapes N_" + std::to_string(j));

  // The minimal-m point z in W_1 \ (closure(Z_2) cup W_2).
  if (m >= 2) {
    IvSet zfree = W[0]
                      .intersect(Z[1].closure().complement(len))
                      .intersect(W[1].complement(len));
    if (zfree.empty())
      throw Error("build_witness: no point of W_1 avoids Z_2 and W_2");
  }

  // g'_j: a clamped tent profile, positive exactly on N_j and 1 on M_j;
  // g''_j = min(g_j, ||g_j|| g'_j) stays piecewise linear and keeps all
  // the properties the proof needs from g_j * g'_j.
  std::vector<PLFunction> gpp;
  for (int j = 0; j < m; ++j) {
    std::vector<BP> pts;
    auto push = [&](const Rat& t, const Rat& v) {
      if (!pts.empty() && pts.back().t == t) return;
      pts.push_back({t, v});
    };
    for (const auto& ivn : N[j].iv) {
      // Plateau bounds: the span of M_j within this component.
      IvSet piece;
      piece.iv.push_back(ivn);
      IvSet mpart = M[j].intersect(piece);
      Rat c0, d0;
      if (!mpart.empty()) {
        c0 = mpart.iv.front().a;
        d0 = mpart.iv.back().b;
      } else {
        c0 = d0 = (ivn.a + ivn.b) / 2;
      }
      if (ivn.ca && ivn.a == 0) {
        push(Rat(0), c0 == 0 ? Rat(1) : Rat(1, 2));
      } else {
        push(ivn.a, Rat(0));
      }
      if (c0 > ivn.a || !(ivn.ca && ivn.a == 0)) push(c0, Rat(1));
      else if (c0 == 0) push(Rat(0), Rat(1));
      if (d0 > c0) push(d0, Rat(1));
      if (ivn.cb && ivn.b == len) {
        if (d0 < len) push(len, d0 == len ? Rat(1) : Rat(1, 2));
      } else {
        push(ivn.b, Rat(0));
      }
    }
    if (pts.empty() || pts.front().t > 0) {
      pts.insert(pts.begin(), {Rat(0), Rat(0)});
    }
    if (pts.back().t < len) {
      if (!N[j].iv.empty() && N[j].iv.back().b < len)
        push(N[j].iv.back().b, Rat(0));
      push(len, Rat(0));
    }
    Polyline gp = polyline_simplify(pts);

    if (!(positive_set(gp) == N[j]))
      throw Error("build_witness: g'_" + std::to_string(j) +
                  " support mismatch");
    for (const auto& mv : M[j].iv)
      if (polyline_min_over(gp, mv.a, mv.b) != 1)
        throw Error("build_witness: g'_" + std::to_string(j) +
                    " is not 1 on M_" + std::to_string(j));

    PLFunction gprime = PLFunction::from_arc_polyline(graph, gp);
    PLFunction gj2 = g[j].plmin(gprime.scale(g[j].sup_norm()));
    Polyline flat = gj2.to_arc_polyline();
    for (const auto& mv : M[j].iv)
      if (polyline_min_over(flat, mv.a, mv.b) < eps)
        throw Error("build_witness: g''_" + std::to_string(j) +
                    " dips below eps on M_" + std::to_string(j));
    gpp.push_back(std::move(gj2));
  }

  // The canonical h matrix: h_{j,i(j)} = f_{i(j)} - g''_j, zero elsewhere.
  std::vector<std::vector<PLFunction>> h;
  for (int j = 0; j < m; ++j) {
    std::vector<PLFunction> row;
    for (int i = 0; i < k; ++i) {
      if (i == ij[j]) {
        PLFunction d = fn[i].sub(gpp[j]);
        if (d.min_value() < 0)
          throw Error("build_witness: h entry turned negative");
        row.push_back(std::move(d));
      } else {
        row.push_back(PLFunction::constant(graph, Rat(0)));
      }
    }
    h.push_back(std::move(row));
  }

  // Final verification of every conjunct of the target bound.
  Rat p0g = psi0(gpp).lower;
  if (!(p0g >= eps))
    throw Error("build_witness: psi0(g'') >= eps failed (dagger, first conjunct)");
  if (!(p0g < eps_prime))
    throw Error("build_witness: psi0(g'') < eps' failed");
  if (!(p0 - kk * p0g < delta))
    throw Error("build_witness: psi0(f) - k*psi0(g'') < delta failed");
  for (int i = 0; i < m; ++i)
    for (int j = i + 2; j < m; ++j)
      if (!PiecewisePoly::mul(gpp[i], gpp[j]).is_zero())
        throw Error("build_witness: psi1 term (g''_" + std::to_string(i) +
                    " * g''_" + std::to_string(j) + ") is not zero");
  Rat p2 = psi2(fn, gpp, h).lower;
  if (p2 != 0)
    throw Error("build_witness: psi2 with the canonical h is not zero");

  Witness w;
  w.m = m;
  w.g = std::move(gpp);
  w.h = std::move(h);
  w.eps = eps;
  w.eps_prime = eps_prime;
  w.delta = delta;
  return w;
}

}  // namespace continua
