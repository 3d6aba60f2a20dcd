// Licensed under the Apache License 2.0 (see LICENSE file).
//
// End-to-end acceptance suite.  Each criterion prints exactly one
// PASS/FAIL line; the process exits nonzero when any criterion fails.
// Criterion 7 re-runs criteria 1-6 with the same seeds and demands
// byte-identical JSON reports.
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "continua/amalgam.hpp"
#include "continua/serialize.hpp"
#include "helpers.hpp"

using namespace continua;
using namespace continua::testing;

namespace {

// Pinned tolerances.
const Rat kWidth(1, Int("1000000000"));       // certified interval width
constexpr int kOracleMesh = 10000;            // grid mesh 1e-4 on unit arcs
constexpr double kOracleTol = 1e-3;

struct CritResult {
  bool pass = true;
  std::string detail;
  Json report;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

GraphPtr unit_arc() { return make_interval_graph(Rat(1)); }

// Subspace-open interval of [0, 1].
OpenSet iv(const GraphPtr& g, const Rat& a, const Rat& b) {
  PLFunction x = PLFunction::arc_coordinate(g);
  if (a == 0 && b == 1) return OpenSet(PLFunction::constant(g, Rat(1)));
  if (a == 0) return OpenSet(x.negate().add_const(b));
  if (b == 1) return OpenSet(x.add_const(-a));
  return OpenSet(x.add_const(-a).plmin(x.negate().add_const(b)));
}

Cover triangle_cover(const GraphPtr& g) {
  return Cover(g, {iv(g, Rat(0), Rat(1, 2)), iv(g, Rat(1, 4), Rat(3, 4)),
                   iv(g, Rat(2, 5), Rat(1))});
}

Cover circle_half_arcs() {
  GraphPtr c = make_circle_graph(Rat(1));
  auto arc = [&](const Rat& center) {
    Polyline pl;
    Rat anti = center + Rat(1, 2);
    if (anti >= 1) anti -= 1;
    auto dist = [&](const Rat& x) {
      Rat d = rat_abs(x - center);
      if (d > Rat(1, 2)) d = 1 - d;
      return Rat(1, 4) - d;
    };
    std::vector<Rat> ts{Rat(0), center, anti, Rat(1)};
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    for (const Rat& t : ts) pl.push_back({t, dist(t)});
    return OpenSet(PLFunction(c, {pl}));
  };
  return Cover(c, {arc(Rat(0)), arc(Rat(1, 3)), arc(Rat(2, 3))});
}

std::vector<PLFunction> random_tuple(PLSampler& sampler, int k) {
  while (true) {
    std::vector<PLFunction> f;
    for (int i = 0; i < k; ++i) f.push_back(sampler.sample_normalized(2));
    if (psi0(f).lower > 0) return f;
  }
}

// Criterion 1: forward direction of the chainability theorem on 50
// random nonnegative tuples, delta = psi0/2, sigma_inner <= delta.
CritResult criterion1(std::vector<std::vector<PLFunction>>& tuples,
                      std::vector<Witness>& witnesses) {
  CritResult res;
  const unsigned long long seed = 424242;
  GraphPtr g = unit_arc();
  PLSampler sampler(g, seed);
  auto t0 = std::chrono::steady_clock::now();
  Json cases = Json::array();
  for (int i = 0; i < 50; ++i) {
    int k = 2 + i % 3;
    std::vector<PLFunction> f = random_tuple(sampler, k);
    Rat p0 = psi0(f).lower;
    Rat delta = p0 / 2;
    Witness w;
    try {
      w = build_witness(f, delta);
    } catch (const std::exception& e) {
      res.fail(std::string("case ") + std::to_string(i) +
               " build_witness threw: " + e.what());
      continue;
    }
    CertifiedValue s = sigma_inner(f, w, kWidth);
    if (!(s.upper <= delta))
      res.fail("case " + std::to_string(i) + " sigma_inner exceeds delta");
    if (!(s.width() <= kWidth))
      res.fail("case " + std::to_string(i) + " interval too wide");
    cases.push_back(Json{{"k", k},
                         {"psi0", rat_to_json_string(p0)},
                         {"delta", rat_to_json_string(delta)},
                         {"m", w.m},
                         {"sigma_inner", cv_to_json(s)}});
    tuples.push_back(std::move(f));
    witnesses.push_back(std::move(w));
  }
  double elapsed = seconds_since(t0);
  if (elapsed >= 60.0) res.fail("runtime over 60 s");
  res.report = Json{{"format", kFormatVersion},
                    {"criterion", 1},
                    {"seed", seed},
                    {"cases", cases}};
  return res;
}

// Criterion 2: backward direction on every criterion-1 witness.
CritResult criterion2(const std::vector<std::vector<PLFunction>>& tuples,
                      const std::vector<Witness>& witnesses) {
  CritResult res;
  if (tuples.size() != 50) res.fail("criterion 1 produced too few witnesses");
  Json cases = Json::array();
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    const auto& f = tuples[i];
    const Witness& w = witnesses[i];
    ChainCertificate cert = extract_chain(f, w);
    NerveResult nr = nerve_and_is_chain(cert.chain);
    if (!nr.is_chain) res.fail("case " + std::to_string(i) + " not a chain");
    std::vector<OpenSet> targets;
    for (const auto& fi : f) targets.emplace_back(fi);
    Cover target(f[0].graph(), targets);
    RefinesResult rr = refines(cert.chain, target);
    if (!rr.ok) res.fail("case " + std::to_string(i) + " refines failed");
    if (rr.assignment != cert.assignment)
      res.fail("case " + std::to_string(i) + " assignment mismatch");

    CertifiedValue p1 = psi1(w.g, kWidth);
    CertifiedValue p2 = psi2(f, w.g, w.h);
    if (p1.upper != 0) res.fail("case " + std::to_string(i) + " psi1 != 0");
    if (p2.upper != 0) res.fail("case " + std::to_string(i) + " psi2 != 0");
    Rat p0f = psi0(f).lower;
    Rat p0g = psi0(w.g).lower;
    Rat gap = std::max(Rat(p0f - Rat(static_cast<long>(f.size())) * p0g),
                       Rat(0));
    if (!(gap < w.delta))
      res.fail("case " + std::to_string(i) + " dotminus gap >= delta");
    cases.push_back(Json{{"m", cert.chain.size()},
                         {"assignment", cert.assignment},
                         {"gap", rat_to_json_string(gap)}});
  }
  res.report =
      Json{{"format", kFormatVersion}, {"criterion", 2}, {"cases", cases}};
  return res;
}

// Criterion 3: the arc cover refines to a chain quickly; the circle's
// half-arc cover exhausts every bounded search.
CritResult criterion3() {
  CritResult res;
  GraphPtr g = unit_arc();
  Cover tri = triangle_cover(g);
  auto t0 = std::chrono::steady_clock::now();
  ChainSearchResult tr = find_chain_refinement(tri, 3);
  double tri_elapsed = seconds_since(t0);
  if (!tr.certificate) res.fail("triangle cover found no chain at depth 3");
  if (tri_elapsed >= 1.0) res.fail("triangle refinement over 1 s");
  Json tri_json;
  if (tr.certificate) {
    if (!nerve_and_is_chain(tr.certificate->chain).is_chain)
      res.fail("triangle result is not a chain");
    if (!refines(tr.certificate->chain, tri).ok)
      res.fail("triangle result does not refine");
    tri_json = Json{{"links", tr.certificate->chain.size()},
                    {"assignment", tr.certificate->assignment}};
  }

  Cover circle = circle_half_arcs();
  auto c0 = std::chrono::steady_clock::now();
  Json exhausted = Json::array();
  for (int depth = 1; depth <= 6; ++depth) {
    ChainSearchResult cr = find_chain_refinement(circle, depth);
    if (cr.certificate)
      res.fail("circle cover refined at depth " + std::to_string(depth));
    exhausted.push_back(depth);
  }
  if (seconds_since(c0) >= 60.0) res.fail("circle search over 60 s");
  res.report = Json{{"format", kFormatVersion},
                    {"criterion", 3},
                    {"triangle", tri_json},
                    {"circle_exhausted_depths", exhausted}};
  return res;
}

// Criterion 4: the connectedness axiom vanishes on connected graphs and
// is exactly 1 at a component indicator.
CritResult criterion4() {
  CritResult res;
  const unsigned long long seed = 777;
  Rat max_upper(0);
  int checked = 0;
  for (GraphPtr g : {make_interval_graph(Rat(1)), make_circle_graph(Rat(1))}) {
    PLSampler sampler(g, seed);
    for (int i = 0; i < 100; ++i) {
      PLFunction f = sampler.sample_normalized(3);
      CertifiedValue v = projectionless_value(f);
      if (v.upper > max_upper) max_upper = v.upper;
      if (!(v.upper <= kWidth))
        res.fail("connected sample " + std::to_string(checked) +
                 " exceeds 1e-9");
      ++checked;
    }
  }

  std::vector<MetricGraph::Edge> edges;
  edges.push_back({"e1", 0, 1, Rat(1)});
  edges.push_back({"e2", 2, 3, Rat(1)});
  GraphPtr two = std::make_shared<const MetricGraph>(
      std::vector<std::string>{"a", "b", "c", "d"}, std::move(edges));
  PLFunction ind(two, {{{Rat(0), Rat(1)}, {Rat(1), Rat(1)}},
                       {{Rat(0), Rat(0)}, {Rat(1), Rat(0)}}});
  CertifiedValue one = projectionless_value(ind);
  if (!(one.lower == 1 && one.upper == 1))
    res.fail("component indicator does not reach exactly 1");
  res.report = Json{{"format", kFormatVersion},
                    {"criterion", 4},
                    {"seed", seed},
                    {"samples", checked},
                    {"max_upper", rat_to_json_string(max_upper)},
                    {"indicator", cv_to_json(one)}};
  return res;
}

// Criterion 5: the circle amalgamation counterexample, exactly.
CritResult criterion5() {
  CritResult res;
  GraphPtr a = unit_arc();
  CircleMap f(a, PLFunction::arc_coordinate(a));
  CircleMap g(a, PLFunction::arc_coordinate(a).add_const(Rat(1, 2)));

  FiberProduct fp = fiber_product_circle(f, g);
  if (fp.w->components().count != 2) res.fail("fiber product not 2 components");
  Verdict v = hoehn_check(fp.w, fp.r, fp.s, f, g);
  if (v.outcome != Verdict::Outcome::DisconnectionCertified)
    res.fail("disconnection not certified on the fiber product");

  // A and B are exactly the two congruence segments and split W.
  ClosedSet A = closed_preimage(fp.r, Rat(0), Rat(1, 2))
                    .intersect(closed_preimage(fp.s, Rat(1, 2), Rat(1)));
  ClosedSet B = closed_preimage(fp.r, Rat(1, 2), Rat(1))
                    .intersect(closed_preimage(fp.s, Rat(0), Rat(1, 2)));
  if (!A.unite(B).is_everything()) res.fail("A union B misses part of W");
  for (const Point& p : grid_points(fp.w, 64))
    if (A.contains_point(p) && B.contains_point(p))
      res.fail("A and B intersect");

  // Connected candidates never reach the disconnection verdict.
  const unsigned long long seed = 90210;
  PLSampler sampler(a, seed);
  PLFunction x = PLFunction::arc_coordinate(a);
  Json outcomes = Json::array();
  for (int round = 0; round < 20; ++round) {
    PLFunction rv = round % 2 == 0 ? sampler.sample_normalized(3) : x;
    PLFunction sv = sampler.sample(Rat(0), Rat(1), 3);
    Verdict cv = hoehn_check(a, ArcMap(a, rv), ArcMap(a, sv), f, g);
    if (cv.outcome != Verdict::Outcome::CompositionMismatch &&
        cv.outcome != Verdict::Outcome::NotSurjective)
      res.fail("connected candidate " + std::to_string(round) +
               " got verdict " + verdict_outcome_name(cv.outcome));
    outcomes.push_back(verdict_outcome_name(cv.outcome));
  }
  res.report = Json{{"format", kFormatVersion},
                    {"criterion", 5},
                    {"seed", seed},
                    {"components", fp.w->components().count},
                    {"verdict", verdict_outcome_name(v.outcome)},
                    {"candidates", outcomes}};
  return res;
}

// Criterion 6: psi0/psi1/psi2/eval_qf against the dense-grid oracle.
CritResult criterion6() {
  CritResult res;
  const unsigned long long seed = 6001;
  GraphPtr g = unit_arc();
  PLSampler sampler(g, seed);

  int exact_min_hits = 0;
  for (int i = 0; i < 100; ++i) {
    int k = 2 + static_cast<int>(sampler.next_raw() % 3);
    std::vector<PLFunction> f;
    for (int j = 0; j < k; ++j) f.push_back(sampler.sample(Rat(-1), Rat(1), 3));
    CertifiedValue v = psi0(f);
    PLFunction sum = f[0].plabs();
    for (int j = 1; j < k; ++j) sum = sum.add(f[j].plabs());
    if (!(v.is_exact() && v.lower == sum.min_value())) {
      res.fail("psi0 instance " + std::to_string(i) + " not the exact min");
    } else {
      ++exact_min_hits;
    }
    std::vector<Samples> s;
    for (const auto& fi : f) s.push_back(dense_samples(fi, kOracleMesh));
    if (cv_dist(v, psi0_oracle(s)) >= kOracleTol)
      res.fail("psi0 instance " + std::to_string(i) + " off the oracle");
  }

  for (int i = 0; i < 100; ++i) {
    int m = 3 + static_cast<int>(sampler.next_raw() % 2);
    std::vector<PLFunction> gs;
    for (int j = 0; j < m; ++j) gs.push_back(sampler.sample(Rat(0), Rat(1), 2));
    CertifiedValue v = psi1(gs, kWidth);
    std::vector<Samples> s;
    for (const auto& x : gs) s.push_back(dense_samples(x, kOracleMesh));
    if (cv_dist(v, psi1_oracle(s)) >= kOracleTol)
      res.fail("psi1 instance " + std::to_string(i) + " off the oracle");
  }

  for (int i = 0; i < 100; ++i) {
    int m = 2 + static_cast<int>(sampler.next_raw() % 2);
    int k = 2 + static_cast<int>(sampler.next_raw() % 2);
    std::vector<PLFunction> fs, gs;
    for (int j = 0; j < k; ++j) fs.push_back(sampler.sample(Rat(0), Rat(1), 2));
    for (int j = 0; j < m; ++j) gs.push_back(sampler.sample(Rat(0), Rat(1), 2));
    std::vector<std::vector<PLFunction>> h;
    for (int j = 0; j < m; ++j) {
      std::vector<PLFunction> row;
      for (int l = 0; l < k; ++l)
        row.push_back(sampler.sample(Rat(0), Rat(1, 2), 2));
      h.push_back(std::move(row));
    }
    CertifiedValue v = psi2(fs, gs, h);
    std::vector<Samples> sf, sg;
    std::vector<std::vector<Samples>> sh;
    for (const auto& x : fs) sf.push_back(dense_samples(x, kOracleMesh));
    for (const auto& x : gs) sg.push_back(dense_samples(x, kOracleMesh));
    for (const auto& row : h) {
      std::vector<Samples> srow;
      for (const auto& x : row) srow.push_back(dense_samples(x, kOracleMesh));
      sh.push_back(std::move(srow));
    }
    if (cv_dist(v, psi2_oracle(sf, sg, sh)) >= kOracleTol)
      res.fail("psi2 instance " + std::to_string(i) + " off the oracle");
  }

  const std::vector<std::string> pool = {
      "norm(x1)",
      "norm(x1*x2 - x1)",
      "dot-(norm(x1 + x2), 1/3)",
      "max(norm(x1), norm(x2), 1/7)",
      "min(norm(abs(x1) - x2), d(x1, x2))",
      "sqrt(norm(x1*x1))",
      "1/2*norm(x1 - 2*x2) + dot-(1/4, norm(x2))",
      "norm(abs(x1 - x2) + abs(x2))",
      "d(x1*x2, x2)",
      "min(sqrt(max(norm(x1), 1/9)), norm(x2*x2 - x1))",
  };
  for (int i = 0; i < 100; ++i) {
    FormulaPtr formula = parse_formula(pool[i % pool.size()]);
    PLFunction x1 = sampler.sample(Rat(-1), Rat(1), 3);
    PLFunction x2 = sampler.sample(Rat(-1), Rat(1), 3);
    Assignment a{g, {x1, x2}};
    CertifiedValue v = eval_qf(formula, a);
    double oracle = formula_oracle(
        formula,
        {dense_samples(x1, kOracleMesh), dense_samples(x2, kOracleMesh)});
    if (cv_dist(v, oracle) >= kOracleTol)
      res.fail("eval_qf instance " + std::to_string(i) + " off the oracle");
  }

  res.report = Json{{"format", kFormatVersion},
                    {"criterion", 6},
                    {"seed", seed},
                    {"instances_each", 100},
                    {"psi0_exact_min_hits", exact_min_hits}};
  return res;
}

std::vector<CritResult> run_all() {
  std::vector<std::vector<PLFunction>> tuples;
  std::vector<Witness> witnesses;
  std::vector<CritResult> out;
  out.push_back(criterion1(tuples, witnesses));
  out.push_back(criterion2(tuples, witnesses));
  out.push_back(criterion3());
  out.push_back(criterion4());
  out.push_back(criterion5());
  out.push_back(criterion6());
  return out;
}

}  // namespace

int main() {
  std::vector<CritResult> first = run_all();
  std::vector<CritResult> second = run_all();

  CritResult det;
  for (std::size_t i = 0; i < first.size(); ++i) {
    if (dump_report(first[i].report) != dump_report(second[i].report))
      det.fail("criterion " + std::to_string(i + 1) + " report differs");
  }

  bool all = true;
  for (std::size_t i = 0; i < first.size(); ++i) {
    const CritResult& r = first[i];
    std::printf("criterion %zu: %s%s%s\n", i + 1, r.pass ? "PASS" : "FAIL",
                r.pass ? "" : " - ", r.pass ? "" : r.detail.c_str());
    all = all && r.pass;
  }
  std::printf("criterion 7: %s%s%s\n", det.pass ? "PASS" : "FAIL",
              det.pass ? "" : " - ", det.pass ? "" : det.detail.c_str());
  all = all && det.pass;
  return all ? 0 : 1;
}
