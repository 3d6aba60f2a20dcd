// Licensed under the Apache License 2.0 (see LICENSE file).
#include "continua/engine.hpp"

#include <sstream>

namespace continua {

namespace {

Json resolve(const Json& v) {
  if (v.is_string()) return load_json_file(v.get<std::string>());
  return v;
}

const Json& field(const Json& req, const char* key) {
  auto it = req.find(key);
  if (it == req.end())
    throw InvalidInput(std::string("missing required field \"") + key + "\"");
  return *it;
}

Json input(const Json& req, const char* key) { return resolve(field(req, key)); }

int int_field(const Json& req, const char* key, int fallback) {
  auto it = req.find(key);
  if (it == req.end()) return fallback;
  if (!it->is_number_integer())
    throw InvalidInput(std::string("field \"") + key + "\" must be an integer");
  return it->get<int>();
}

Rat rat_field(const Json& req, const char* key, const Rat& fallback) {
  auto it = req.find(key);
  if (it == req.end()) return fallback;
  return rat_from_json(*it, key);
}

unsigned long long seed_of(const Json& req) {
  auto it = req.find("seed");
  if (it == req.end()) return 0;
  if (!it->is_number_unsigned() && !it->is_number_integer())
    throw InvalidInput("field \"seed\" must be an integer");
  return it->get<unsigned long long>();
}

std::vector<PLFunction> fn_list(const Json& arr, const GraphPtr& graph,
                                const char* key) {
  if (!arr.is_array() || arr.empty())
    throw InvalidInput(std::string("field \"") + key +
                       "\" must be a nonempty array of functions");
  std::vector<PLFunction> out;
  for (const auto& f : arr) out.push_back(fn_from_json(resolve(f), graph));
  return out;
}

Json certificate_json(const ChainCertificate& cert,
                      const std::vector<PLFunction>& target_gens) {
  Json chain = Json::array();
  for (const auto& s : cert.chain.sets())
    chain.push_back(fn_to_json(s.generator()));
  Json target = Json::array();
  for (const auto& g : target_gens) target.push_back(fn_to_json(g));
  return Json{{"format", kFormatVersion},
              {"kind", "chain-certificate"},
              {"graph", graph_to_json(*cert.chain.graph())},
              {"target", target},
              {"chain", chain},
              {"assignment", cert.assignment}};
}

std::vector<PLFunction> cover_generators(const Cover& c) {
  std::vector<PLFunction> gens;
  for (const auto& s : c.sets()) gens.push_back(s.generator());
  return gens;
}

PLFunction component_indicator(const GraphPtr& g,
                               const MetricGraph::Components& comp, int c) {
  std::vector<Polyline> data(g->edge_count());
  for (int e = 0; e < g->edge_count(); ++e) {
    Rat v(comp.edge_component[e] == c ? 1 : 0);
    data[e] = {{Rat(0), v}, {g->edge(e).length, v}};
  }
  std::vector<Rat> verts(g->vertex_count());
  for (int v = 0; v < g->vertex_count(); ++v)
    verts[v] = Rat(comp.vertex_component[v] == c ? 1 : 0);
  return PLFunction(g, std::move(data), std::move(verts));
}

// r and s may arrive as bare function files or as arc-map files; either
// way the function is rebuilt on the given graph.
PLFunction side_function(const Json& j, const GraphPtr& graph,
                         const char* key) {
  if (j.is_object() && j.contains("kind")) {
    const std::string kind = j.at("kind").get<std::string>();
    const char* fn_key = kind == "circle" ? "lift" : "values";
    if (!j.contains(fn_key))
      throw InvalidInput(std::string(key) + ": map file missing \"" + fn_key +
                         "\"");
    return fn_from_json(resolve(j.at(fn_key)), graph);
  }
  return fn_from_json(j, graph);
}

CircleMap default_family_map(const Rat& shift) {
  GraphPtr arc = make_interval_graph(Rat(1));
  PLFunction lift = PLFunction::arc_coordinate(arc).add_const(shift);
  return CircleMap(std::move(arc), std::move(lift));
}

struct Outcome {
  std::string status;  // "ok", "fail" or "error"
  Json result;
};

Outcome do_eval(const Json& req) {
  GraphPtr graph = graph_from_json(input(req, "graph"));
  FormulaPtr formula = parse_formula(field(req, "formula").get<std::string>());
  EvalOptions opts;
  opts.width = rat_field(req, "width", opts.width);
  if (req.contains("quantifier")) {
    const Json& q = req.at("quantifier");
    BoundMode mode;
    const std::string m = field(q, "mode").get<std::string>();
    if (m == "sup")
      mode = BoundMode::Sup;
    else if (m == "inf")
      mode = BoundMode::Inf;
    else
      throw InvalidInput("quantifier mode must be \"sup\" or \"inf\"");
    QuantifierBudget budget;
    budget.breakpoints = int_field(q, "breakpoints", budget.breakpoints);
    budget.samples = int_field(q, "samples", budget.samples);
    budget.seed = seed_of(req);
    int vars = int_field(q, "vars", formula->var_count());
    Rat radius = rat_field(q, "radius", Rat(1));
    QuantifierBound b =
        bound_quantifier(mode, formula, graph, vars, budget, radius, opts);
    Json witness = Json::array();
    for (const auto& f : b.witness.vars) witness.push_back(fn_to_json(f));
    return {"ok", Json{{"bound", cv_to_json(b.bound)},
                       {"mode", m},
                       {"candidate_index", b.candidate_index},
                       {"witness", witness}}};
  }
  Assignment a{graph, fn_list(input(req, "functions"), graph, "functions")};
  if (formula->var_count() > static_cast<int>(a.vars.size()))
    throw InvalidInput("formula uses more variables than supplied functions");
  CertifiedValue v = eval_qf(formula, a, opts);
  return {"ok", Json{{"value", cv_to_json(v)}}};
}

Outcome do_psi(const Json& req) {
  GraphPtr graph = graph_from_json(input(req, "graph"));
  const std::string which = field(req, "which").get<std::string>();
  Rat width = rat_field(req, "width", default_width());
  auto f = fn_list(input(req, "f"), graph, "f");
  CertifiedValue v;
  if (which == "psi0") {
    v = psi0(f);
  } else if (which == "psi1") {
    v = psi1(f, width);
  } else if (which == "psi2") {
    auto g = fn_list(input(req, "g"), graph, "g");
    std::vector<std::vector<PLFunction>> h;
    const Json hj = input(req, "h");
    if (!hj.is_array()) throw InvalidInput("field \"h\" must be an array");
    for (const auto& row : hj) h.push_back(fn_list(row, graph, "h"));
    v = psi2(f, g, h);
  } else {
    throw InvalidInput("\"which\" must be psi0, psi1 or psi2");
  }
  return {"ok", Json{{"which", which}, {"value", cv_to_json(v)}}};
}

Outcome do_sigma_inner(const Json& req) {
  GraphPtr graph = graph_from_json(input(req, "graph"));
  auto f = fn_list(input(req, "f"), graph, "f");
  Witness w = witness_from_json(input(req, "witness"), graph);
  validate_witness(f, w);
  Rat width = rat_field(req, "width", default_width());
  CertifiedValue v = sigma_inner(f, w, width);
  return {"ok", Json{{"value", cv_to_json(v)}}};
}

Outcome do_witness(const Json& req) {
  GraphPtr graph = graph_from_json(input(req, "graph"));
  auto f = fn_list(input(req, "f"), graph, "f");
  Rat delta = rat_from_json(field(req, "delta"), "delta");
  int max_depth = int_field(req, "max_depth", 10);
  Witness w = build_witness(f, delta, max_depth);
  CertifiedValue s = sigma_inner(f, w);
  bool holds = s.upper <= delta;
  Json result{{"witness", witness_to_json(w)},
              {"sigma_inner", cv_to_json(s)},
              {"delta", rat_to_json_string(delta)},
              {"holds", holds}};
  return {holds ? "ok" : "fail", std::move(result)};
}

Outcome do_extract_chain(const Json& req) {
  GraphPtr graph = graph_from_json(input(req, "graph"));
  auto f = fn_list(input(req, "f"), graph, "f");
  Witness w = witness_from_json(input(req, "witness"), graph);
  ChainCertificate cert = extract_chain(f, w);
  return {"ok", Json{{"certificate", certificate_json(cert, f)},
                     {"links", cert.chain.size()}}};
}

Outcome do_refine(const Json& req) {
  Cover cover = cover_from_json(input(req, "cover"));
  int depth = int_field(req, "depth", 4);
  ChainSearchResult res = find_chain_refinement(cover, depth);
  if (!res.certificate)
    return {"fail", Json{{"exhausted", true}, {"depth", depth}}};
  return {"ok",
          Json{{"certificate",
                certificate_json(*res.certificate, cover_generators(cover))},
               {"links", res.certificate->chain.size()},
               {"depth", res.depth}}};
}

const char* violation_name(ChainViolation::Kind k) {
  switch (k) {
    case ChainViolation::Kind::LongRangeIntersect:
      return "long-range-intersect";
    case ChainViolation::Kind::ConsecutiveDisjoint:
      return "consecutive-disjoint";
    case ChainViolation::Kind::EmptyLink:
      return "empty-link";
  }
  throw Error("unknown violation kind");
}

Outcome do_nerve(const Json& req) {
  Cover cover = cover_from_json(input(req, "cover"));
  NerveResult res = nerve_and_is_chain(cover);
  Json edges = Json::array();
  for (int i = 0; i < res.nerve.n; ++i)
    for (int j = i + 1; j < res.nerve.n; ++j)
      if (res.nerve.has_edge(i, j)) edges.push_back(Json::array({i, j}));
  Json result{{"n", res.nerve.n}, {"edges", edges},
              {"is_chain", res.is_chain}};
  if (res.violation) {
    Json v{{"kind", violation_name(res.violation->kind)},
           {"i", res.violation->i},
           {"j", res.violation->j}};
    if (res.violation->point)
      v["point"] = point_to_json(*cover.graph(), *res.violation->point);
    result["violation"] = std::move(v);
  }
  return {res.is_chain ? "ok" : "fail", std::move(result)};
}

Outcome do_prune(const Json& req) {
  Cover cover = cover_from_json(input(req, "cover"));
  PruneResult res = prune_chain(cover.graph(), cover.sets());
  Json sets = Json::array();
  for (const auto& s : res.sets) sets.push_back(fn_to_json(s.generator()));
  return {"ok", Json{{"kept", res.kept}, {"chain", sets}}};
}

Outcome do_fiber(const Json& req) {
  MapFile fj = map_from_json(input(req, "f"));
  MapFile gj = map_from_json(input(req, "g"));
  if (fj.kind != "circle" || gj.kind != "circle")
    throw InvalidInput("fiber: f and g must be circle maps");
  CircleMap f(fj.graph, fj.fn), g(gj.graph, gj.fn);
  FiberProduct fp = fiber_product_circle(f, g);
  int components = fp.w->components().count;
  return {"ok", Json{{"w", graph_to_json(*fp.w)},
                     {"r", fn_to_json(fp.r.values)},
                     {"s", fn_to_json(fp.s.values)},
                     {"components", components}}};
}

Json hoehn_report_body(const GraphPtr& w, const ArcMap& r, const ArcMap& s,
                       const CircleMap& f, const CircleMap& g,
                       const Verdict& verdict) {
  return Json{{"format", kFormatVersion},
              {"kind", "hoehn-verdict"},
              {"w", graph_to_json(*w)},
              {"r", fn_to_json(r.values)},
              {"s", fn_to_json(s.values)},
              {"f", circle_map_to_json(f)},
              {"g", circle_map_to_json(g)},
              {"verdict", verdict_to_json(verdict, *w)}};
}

Outcome do_hoehn(const Json& req) {
  GraphPtr w;
  Json rj, sj;
  if (req.contains("fiber")) {
    Json fr = resolve(req.at("fiber"));
    if (fr.contains("result")) fr = fr.at("result");
    w = graph_from_json(fr.at("w"));
    rj = fr.at("r");
    sj = fr.at("s");
  } else {
    w = graph_from_json(input(req, "w"));
    rj = input(req, "r");
    sj = input(req, "s");
  }
  ArcMap r(w, side_function(rj, w, "r"));
  ArcMap s(w, side_function(sj, w, "s"));
  Rat shift = rat_field(req, "shift", Rat(1, 2));
  CircleMap f = req.contains("f")
                    ? [&] {
                        MapFile m = map_from_json(input(req, "f"));
                        return CircleMap(m.graph, m.fn);
                      }()
                    : default_family_map(Rat(0));
  CircleMap g = req.contains("g")
                    ? [&] {
                        MapFile m = map_from_json(input(req, "g"));
                        return CircleMap(m.graph, m.fn);
                      }()
                    : default_family_map(shift);
  Verdict verdict = hoehn_check(w, r, s, f, g);
  bool ok = verdict.outcome == Verdict::Outcome::DisconnectionCertified;
  return {ok ? "ok" : "fail", hoehn_report_body(w, r, s, f, g, verdict)};
}

Outcome do_axiom_conn(const Json& req) {
  GraphPtr graph = graph_from_json(input(req, "graph"));
  int samples = int_field(req, "samples", 100);
  int breakpoints = int_field(req, "breakpoints", 3);
  if (samples < 0 || breakpoints < 0)
    throw InvalidInput("samples and breakpoints must be nonnegative");
  EvalOptions opts;
  opts.width = rat_field(req, "width", opts.width);

  std::vector<std::pair<std::string, PLFunction>> candidates;
  auto comp = graph->components();
  if (comp.count >= 2)
    for (int c = 0; c < comp.count; ++c)
      candidates.emplace_back("component-indicator-" + std::to_string(c),
                              component_indicator(graph, comp, c));
  PLSampler sampler(graph, seed_of(req));
  for (int i = 0; i < samples; ++i)
    candidates.emplace_back("sample-" + std::to_string(i),
                            sampler.sample_normalized(breakpoints));

  CertifiedValue max_value = CertifiedValue::exact(Rat(0));
  Json failures = Json::array();
  for (const auto& [name, f] : candidates) {
    CertifiedValue v = projectionless_value(f, opts);
    max_value = cv_max(max_value, v);
    if (v.upper > opts.width)
      failures.push_back(Json{{"candidate", name},
                              {"value", cv_to_json(v)},
                              {"function", fn_to_json(f)}});
  }
  bool ok = failures.empty();
  return {ok ? "ok" : "fail",
          Json{{"candidates", static_cast<int>(candidates.size())},
               {"max_value", cv_to_json(max_value)},
               {"failures", failures}}};
}

Json verify_payload(const Json& j) {
  if (j.contains("kind")) return j;
  if (j.contains("result")) {
    const Json& r = j.at("result");
    if (r.contains("certificate")) return r.at("certificate");
    if (r.contains("kind")) return r;
  }
  throw InvalidInput("verify: no certificate or verdict payload found");
}

Outcome verify_chain_certificate(const Json& payload) {
  std::string reason;
  try {
    GraphPtr graph = graph_from_json(payload.at("graph"));
    Cover target(graph, [&] {
      std::vector<OpenSet> sets;
      for (const auto& g : payload.at("target"))
        sets.emplace_back(fn_from_json(g, graph));
      return sets;
    }());
    Cover chain(graph, [&] {
      std::vector<OpenSet> sets;
      for (const auto& g : payload.at("chain"))
        sets.emplace_back(fn_from_json(g, graph));
      return sets;
    }());
    std::vector<int> assignment =
        payload.at("assignment").get<std::vector<int>>();
    NerveResult nr = nerve_and_is_chain(chain);
    if (!nr.is_chain) {
      reason = "the recorded cover is not a chain";
    } else {
      RefinesResult rr = refines(chain, target);
      if (!rr.ok)
        reason = "the chain does not refine the target cover";
      else if (rr.assignment != assignment)
        reason = "the recorded assignment does not match";
    }
  } catch (const Error& e) {
    reason = e.what();
  }
  Json result{{"kind", "chain-certificate"}, {"valid", reason.empty()}};
  if (!reason.empty()) result["reason"] = reason;
  return {reason.empty() ? "ok" : "fail", std::move(result)};
}

Outcome verify_hoehn_verdict(const Json& payload) {
  std::string reason;
  try {
    GraphPtr w = graph_from_json(payload.at("w"));
    ArcMap r(w, fn_from_json(payload.at("r"), w));
    ArcMap s(w, fn_from_json(payload.at("s"), w));
    MapFile fm = map_from_json(payload.at("f"));
    MapFile gm = map_from_json(payload.at("g"));
    Verdict v = hoehn_check(w, r, s, CircleMap(fm.graph, fm.fn),
                            CircleMap(gm.graph, gm.fn));
    const Json& stored = payload.at("verdict");
    if (verdict_outcome_name(v.outcome) !=
        stored.at("outcome").get<std::string>())
      reason = "recomputed outcome differs: " + verdict_outcome_name(v.outcome);
    else if (v.component_count != stored.at("components").get<int>())
      reason = "recomputed component count differs";
  } catch (const Error& e) {
    reason = e.what();
  }
  Json result{{"kind", "hoehn-verdict"}, {"valid", reason.empty()}};
  if (!reason.empty()) result["reason"] = reason;
  return {reason.empty() ? "ok" : "fail", std::move(result)};
}

Outcome do_verify(const Json& req) {
  Json payload = verify_payload(input(req, "report"));
  const std::string kind = payload.at("kind").get<std::string>();
  if (kind == "chain-certificate") return verify_chain_certificate(payload);
  if (kind == "hoehn-verdict") return verify_hoehn_verdict(payload);
  throw InvalidInput("verify: unknown payload kind '" + kind + "'");
}

}  // namespace

RunResult run_request(const Json& request) {
  std::string command = "?";
  Json report{{"format", kFormatVersion}};
  try {
    if (!request.is_object())
      throw InvalidInput("request must be a JSON object");
    command = field(request, "command").get<std::string>();
    report["command"] = command;
    report["seed"] = seed_of(request);

    Outcome out;
    if (command == "eval")
      out = do_eval(request);
    else if (command == "psi")
      out = do_psi(request);
    else if (command == "sigma-inner")
      out = do_sigma_inner(request);
    else if (command == "witness")
      out = do_witness(request);
    else if (command == "extract-chain")
      out = do_extract_chain(request);
    else if (command == "refine")
      out = do_refine(request);
    else if (command == "nerve")
      out = do_nerve(request);
    else if (command == "prune")
      out = do_prune(request);
    else if (command == "hoehn")
      out = do_hoehn(request);
    else if (command == "fiber")
      out = do_fiber(request);
    else if (command == "axiom-conn")
      out = do_axiom_conn(request);
    else if (command == "verify")
      out = do_verify(request);
    else
      throw InvalidInput("unknown command '" + command + "'");

    report["status"] = out.status;
    report["result"] = std::move(out.result);
    return {out.status == "ok" ? 0 : 1, std::move(report)};
  } catch (const VerificationFailure& e) {
    report["command"] = command;
    report["status"] = "fail";
    report["failure"] = e.what();
    return {1, std::move(report)};
  } catch (const std::exception& e) {
    report["command"] = command;
    report["status"] = "error";
    report["error"] = e.what();
    return {2, std::move(report)};
  }
}

RunResult run_request_text(const std::string& request_json) {
  Json req;
  try {
    req = Json::parse(request_json);
  } catch (const Json::parse_error& e) {
    Json report{{"format", kFormatVersion},
                {"status", "error"},
                {"error", std::string("request: ") + e.what()}};
    return {2, std::move(report)};
  }
  return run_request(req);
}

namespace {

bool looks_like_cv(const Json& j) {
  return j.is_object() && j.size() == 2 && j.contains("lower") &&
         j.contains("upper");
}

std::string text_scalar(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (looks_like_cv(j))
    return "[" + j.at("lower").get<std::string>() + ", " +
           j.at("upper").get<std::string>() + "]";
  return j.dump();
}

}  // namespace

std::string report_to_text(const Json& report) {
  std::ostringstream out;
  out << "command: " << report.value("command", std::string("?")) << "\n";
  out << "status: " << report.value("status", std::string("?")) << "\n";
  if (report.contains("seed")) out << "seed: " << report.at("seed") << "\n";
  for (const char* key : {"error", "failure"})
    if (report.contains(key))
      out << key << ": " << report.at(key).get<std::string>() << "\n";
  if (report.contains("result"))
    for (const auto& [key, value] : report.at("result").items())
      out << key << ": " << text_scalar(value) << "\n";
  return out.str();
}

}  // namespace continua
