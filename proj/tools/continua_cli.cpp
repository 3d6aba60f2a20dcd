// Licensed under the Apache License 2.0 (see LICENSE file).
//
// Batch front end over the C API: assembles one engine request per
// subcommand, runs it, and prints the report as JSON or text.
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "continua.h"

namespace {

using Json = nlohmann::json;

// Either an inline JSON object or a path; paths are resolved engine-side.
Json ref(const std::string& s) { return Json(s); }

int run_and_print(const Json& request, const std::string& format) {
  char* report = nullptr;
  ctn_status code = ctn_run(request.dump().c_str(), &report);
  if (!report) {
    std::fprintf(stderr, "error: %s\n", ctn_last_error());
    return 2;
  }
  if (format == "json") {
    std::fputs(report, stdout);
  } else {
    char* text = nullptr;
    if (ctn_report_text(report, &text) == CTN_OK && text) {
      std::fputs(text, stdout);
      ctn_string_free(text);
    } else {
      std::fputs(report, stdout);
    }
  }
  ctn_string_free(report);
  return static_cast<int>(code);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"continua: exact piecewise-linear model theory workbench"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "text";
  app.add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  unsigned long long seed = 0;
  app.add_option("--seed", seed, "Seed for all randomized search")
      ->capture_default_str();
  std::string width;
  app.add_option("--width", width,
                 "Certified interval width as p/q (default 1/10^9)");

  Json req;

  // eval ---------------------------------------------------------------
  auto* eval = app.add_subcommand("eval", "Evaluate a formula exactly");
  std::string ev_graph, ev_formula, ev_mode, ev_radius;
  std::vector<std::string> ev_fns;
  int ev_vars = -1, ev_samples = -1, ev_breakpoints = -1;
  eval->add_option("--graph", ev_graph, "Graph file")->required();
  eval->add_option("--formula", ev_formula, "Formula text")->required();
  eval->add_option("--fn", ev_fns, "Function file per variable");
  eval->add_option("--quantifier", ev_mode, "One-sided bound mode")
      ->check(CLI::IsMember({"sup", "inf"}));
  eval->add_option("--vars", ev_vars, "Quantified variable count");
  eval->add_option("--samples", ev_samples, "Quantifier candidates");
  eval->add_option("--breakpoints", ev_breakpoints,
                   "Breakpoints per candidate edge");
  eval->add_option("--radius", ev_radius, "Quantifier ball radius p/q");
  eval->callback([&] {
    req = Json{{"command", "eval"},
               {"graph", ref(ev_graph)},
               {"formula", ev_formula}};
    if (!ev_mode.empty()) {
      Json q{{"mode", ev_mode}};
      if (ev_vars >= 0) q["vars"] = ev_vars;
      if (ev_samples >= 0) q["samples"] = ev_samples;
      if (ev_breakpoints >= 0) q["breakpoints"] = ev_breakpoints;
      if (!ev_radius.empty()) q["radius"] = ev_radius;
      req["quantifier"] = q;
    } else {
      Json fns = Json::array();
      for (const auto& f : ev_fns) fns.push_back(ref(f));
      req["functions"] = fns;
    }
  });

  // psi ----------------------------------------------------------------
  auto* psi = app.add_subcommand("psi", "Chainability formulas");
  std::string ps_graph, ps_which, ps_h;
  std::vector<std::string> ps_f, ps_g;
  psi->add_option("--graph", ps_graph, "Graph file")->required();
  psi->add_option("--which", ps_which, "psi0, psi1 or psi2")->required();
  psi->add_option("--f", ps_f, "Function files")->required();
  psi->add_option("--g", ps_g, "Second tuple (psi2)");
  psi->add_option("--hmat", ps_h, "Correction matrix file (psi2)");
  psi->callback([&] {
    req = Json{{"command", "psi"},
               {"graph", ref(ps_graph)},
               {"which", ps_which}};
    Json f = Json::array();
    for (const auto& x : ps_f) f.push_back(ref(x));
    req["f"] = f;
    if (!ps_g.empty()) {
      Json g = Json::array();
      for (const auto& x : ps_g) g.push_back(ref(x));
      req["g"] = g;
    }
    if (!ps_h.empty()) req["h"] = ref(ps_h);
  });

  // sigma-inner ----------------------------------------------------------
  auto* sigma = app.add_subcommand("sigma-inner",
                                   "Inner value of the chainability type");
  std::string sg_graph, sg_witness;
  std::vector<std::string> sg_f;
  sigma->add_option("--graph", sg_graph, "Graph file")->required();
  sigma->add_option("--f", sg_f, "Function files")->required();
  sigma->add_option("--witness", sg_witness, "Witness file")->required();
  sigma->callback([&] {
    Json f = Json::array();
    for (const auto& x : sg_f) f.push_back(ref(x));
    req = Json{{"command", "sigma-inner"},
               {"graph", ref(sg_graph)},
               {"f", f},
               {"witness", ref(sg_witness)}};
  });

  // witness --------------------------------------------------------------
  auto* wit = app.add_subcommand("witness", "Build a chainability witness");
  std::string wt_graph, wt_delta;
  std::vector<std::string> wt_f;
  int wt_depth = 10;
  wit->add_option("--graph", wt_graph, "Graph file")->required();
  wit->add_option("--f", wt_f, "Function files")->required();
  wit->add_option("--delta", wt_delta, "Target delta as p/q")->required();
  wit->add_option("--max-depth", wt_depth, "Chain search depth limit")
      ->capture_default_str();
  wit->callback([&] {
    Json f = Json::array();
    for (const auto& x : wt_f) f.push_back(ref(x));
    req = Json{{"command", "witness"},
               {"graph", ref(wt_graph)},
               {"f", f},
               {"delta", wt_delta},
               {"max_depth", wt_depth}};
  });

  // extract-chain ----------------------------------------------------------
  auto* ext = app.add_subcommand("extract-chain",
                                 "Chain certificate from a witness");
  std::string ex_graph, ex_witness;
  std::vector<std::string> ex_f;
  ext->add_option("--graph", ex_graph, "Graph file")->required();
  ext->add_option("--f", ex_f, "Function files")->required();
  ext->add_option("--witness", ex_witness, "Witness file")->required();
  ext->callback([&] {
    Json f = Json::array();
    for (const auto& x : ex_f) f.push_back(ref(x));
    req = Json{{"command", "extract-chain"},
               {"graph", ref(ex_graph)},
               {"f", f},
               {"witness", ref(ex_witness)}};
  });

  // refine -----------------------------------------------------------------
  auto* refine = app.add_subcommand("refine", "Search for a chain refinement");
  std::string rf_cover;
  int rf_depth = 4;
  refine->add_option("--cover", rf_cover, "Cover file")->required();
  refine->add_option("--depth", rf_depth, "Mesh depth")->capture_default_str();
  refine->callback([&] {
    req = Json{{"command", "refine"},
               {"cover", ref(rf_cover)},
               {"depth", rf_depth}};
  });

  // nerve --------------------------------------------------------------
  auto* nerve = app.add_subcommand("nerve", "Nerve and chain check");
  std::string nv_cover;
  nerve->add_option("--cover", nv_cover, "Cover file")->required();
  nerve->callback(
      [&] { req = Json{{"command", "nerve"}, {"cover", ref(nv_cover)}}; });

  // prune --------------------------------------------------------------
  auto* prune = app.add_subcommand("prune", "Repair a broken chain sequence");
  std::string pr_cover;
  prune->add_option("--cover", pr_cover, "Cover file (ordered)")->required();
  prune->callback(
      [&] { req = Json{{"command", "prune"}, {"cover", ref(pr_cover)}}; });

  // hoehn --------------------------------------------------------------
  auto* hoehn = app.add_subcommand("hoehn", "Amalgamation dichotomy pipeline");
  std::string hx_w, hx_r, hx_s, hx_f, hx_g, hx_shift, hx_fiber;
  hoehn->add_option("--w", hx_w, "Domain graph file");
  hoehn->add_option("--r", hx_r, "First projection (function or map file)");
  hoehn->add_option("--s", hx_s, "Second projection (function or map file)");
  hoehn->add_option("--f", hx_f, "Circle map file (default lift x)");
  hoehn->add_option("--g", hx_g, "Circle map file (default lift y + shift)");
  hoehn->add_option("--shift", hx_shift, "Family shift c as p/q");
  hoehn->add_option("--fiber", hx_fiber, "Fiber report supplying w, r, s");
  hoehn->callback([&] {
    req = Json{{"command", "hoehn"}};
    if (!hx_fiber.empty()) {
      req["fiber"] = ref(hx_fiber);
    } else {
      req["w"] = ref(hx_w);
      req["r"] = ref(hx_r);
      req["s"] = ref(hx_s);
    }
    if (!hx_f.empty()) req["f"] = ref(hx_f);
    if (!hx_g.empty()) req["g"] = ref(hx_g);
    if (!hx_shift.empty()) req["shift"] = hx_shift;
  });

  // fiber --------------------------------------------------------------
  auto* fiber = app.add_subcommand("fiber", "Fiber product of circle maps");
  std::string fb_f, fb_g;
  fiber->add_option("--f", fb_f, "Circle map file")->required();
  fiber->add_option("--g", fb_g, "Circle map file")->required();
  fiber->callback([&] {
    req = Json{{"command", "fiber"}, {"f", ref(fb_f)}, {"g", ref(fb_g)}};
  });

  // axiom-conn ----------------------------------------------------------
  auto* conn = app.add_subcommand("axiom-conn",
                                  "Connectedness axiom over random samples");
  std::string ac_graph;
  int ac_samples = 100, ac_breakpoints = 3;
  conn->add_option("--graph", ac_graph, "Graph file")->required();
  conn->add_option("--samples", ac_samples, "Random candidates")
      ->capture_default_str();
  conn->add_option("--breakpoints", ac_breakpoints,
                   "Breakpoints per candidate edge")
      ->capture_default_str();
  conn->callback([&] {
    req = Json{{"command", "axiom-conn"},
               {"graph", ref(ac_graph)},
               {"samples", ac_samples},
               {"breakpoints", ac_breakpoints}};
  });

  // verify --------------------------------------------------------------
  auto* verify = app.add_subcommand("verify",
                                    "Re-check a certificate or verdict");
  std::string vf_report;
  verify->add_option("--report", vf_report, "Report or certificate file")
      ->required();
  verify->callback(
      [&] { req = Json{{"command", "verify"}, {"report", ref(vf_report)}}; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (app.got_subcommand(hoehn) && hx_fiber.empty() &&
      (hx_w.empty() || hx_r.empty() || hx_s.empty())) {
    std::fprintf(stderr, "hoehn needs --w/--r/--s or --fiber\n");
    return 2;
  }

  req["seed"] = seed;
  if (!width.empty()) req["width"] = width;
  return run_and_print(req, format);
}
