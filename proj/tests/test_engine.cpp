// Licensed under the Apache License 2.0 (see LICENSE file).
#include "doctest.h"
#include "helpers.hpp"

#include "continua/engine.hpp"

using namespace continua;
using namespace continua::testing;

namespace {

Json data_file(const std::string& name) {
  return load_json_file(std::string(TEST_DATA_DIR) + "/" + name);
}

Json fn_x() {
  return Json{{"format", 1},
              {"edges", Json{{"e", Json::array({Json::array({"0/1", "0/1"}),
                                                Json::array({"1/1", "1/1"})})}}}};
}

}  // namespace

TEST_CASE("graph json roundtrip") {
  Json j = data_file("interval.json");
  GraphPtr g = graph_from_json(j);
  CHECK(g->vertex_count() == 2);
  CHECK(g->edge(0).length == 1);
  CHECK(graph_to_json(*graph_from_json(graph_to_json(*g))) ==
        graph_to_json(*g));

  Json bad = j;
  bad.erase("format");
  CHECK_THROWS_AS(graph_from_json(bad), InvalidInput);
  bad = j;
  bad["format"] = 2;
  CHECK_THROWS_AS(graph_from_json(bad), InvalidInput);
}

TEST_CASE("function json roundtrip keeps exact rationals") {
  GraphPtr g = graph_from_json(data_file("interval.json"));
  PLSampler sampler(g, 19);
  for (int i = 0; i < 10; ++i) {
    PLFunction f = sampler.sample(Rat(-2), Rat(2), 4);
    PLFunction back = fn_from_json(fn_to_json(f), g);
    CHECK(back == f);
  }
  CHECK_THROWS_AS(fn_from_json(Json{{"format", 1}}, g), InvalidInput);
}

TEST_CASE("isolated vertex values survive serialization") {
  std::vector<MetricGraph::Edge> edges;
  edges.push_back({"e", 0, 1, Rat(1)});
  GraphPtr g = std::make_shared<const MetricGraph>(
      std::vector<std::string>{"a", "b", "lone"}, std::move(edges));
  std::vector<Rat> iso(3, Rat(0));
  iso[2] = Rat(7, 3);
  PLFunction f(g, {{{Rat(0), Rat(1)}, {Rat(1), Rat(0)}}}, iso);
  PLFunction back = fn_from_json(fn_to_json(f), g);
  CHECK(back == f);
  CHECK(back.vertex_value(2) == Rat(7, 3));
}

TEST_CASE("witness and cover roundtrips") {
  Cover c = cover_from_json(data_file("triangle.json"));
  CHECK(c.size() == 3);
  CHECK(cover_to_json(cover_from_json(cover_to_json(c))) == cover_to_json(c));

  GraphPtr g = c.graph();
  PLFunction one = PLFunction::constant(g, Rat(1));
  Witness w;
  w.m = 2;
  w.g = {one, one.scale(Rat(1, 2))};
  w.h = {{one}, {one}};
  w.eps = Rat(1, 5);
  w.eps_prime = Rat(1, 4);
  w.delta = Rat(1, 2);
  Witness back = witness_from_json(witness_to_json(w), g);
  CHECK(back.m == w.m);
  CHECK(back.g == w.g);
  CHECK(back.h == w.h);
  CHECK(back.eps == w.eps);
}

TEST_CASE("rationals travel as p/q strings") {
  CHECK(rat_to_json_string(Rat(3)) == "3/1");
  CHECK(rat_to_json_string(Rat(-1, 2)) == "-1/2");
  CHECK(rat_from_json(Json("7/4"), "t") == Rat(7, 4));
  CHECK_THROWS_AS(rat_from_json(Json(0.5), "t"), InvalidInput);
  Json cv = cv_to_json(CertifiedValue(Rat(0), Rat(1, 3)));
  CertifiedValue v = cv_from_json(cv);
  CHECK(v.lower == 0);
  CHECK(v.upper == Rat(1, 3));
}

TEST_CASE("engine eval and psi requests") {
  Json req{{"command", "eval"},
           {"graph", data_file("interval.json")},
           {"functions", Json::array({fn_x()})},
           {"formula", "norm(x1*x1 - x1)"}};
  RunResult r = run_request(req);
  CHECK(r.exit_code == 0);
  CHECK(r.report.at("status") == "ok");
  CHECK(r.report.at("result").at("value").at("lower") == "1/4");

  Json preq{{"command", "psi"},
            {"graph", data_file("interval.json")},
            {"which", "psi0"},
            {"f", Json::array({fn_x(), fn_x()})}};
  RunResult pr = run_request(preq);
  CHECK(pr.exit_code == 0);
  CHECK(pr.report.at("result").at("value").at("lower") == "0/1");
}

TEST_CASE("engine reports are byte-identical across runs") {
  Json req{{"command", "refine"},
           {"cover", data_file("triangle.json")},
           {"depth", 3},
           {"seed", 4}};
  RunResult a = run_request(req);
  RunResult b = run_request(req);
  CHECK(a.exit_code == 0);
  CHECK(dump_report(a.report) == dump_report(b.report));

  Json conn{{"command", "axiom-conn"},
            {"graph", data_file("circle.json")},
            {"samples", 10},
            {"seed", 12}};
  CHECK(dump_report(run_request(conn).report) ==
        dump_report(run_request(conn).report));
}

TEST_CASE("engine exit codes follow the contract") {
  // Unknown command and schema violations: 2.
  CHECK(run_request(Json{{"command", "frobnicate"}}).exit_code == 2);
  CHECK(run_request(Json{{"command", "eval"}}).exit_code == 2);
  Json bad{{"command", "refine"},
           {"cover", Json{{"format", 1}}},
           {"depth", 2}};
  RunResult br = run_request(bad);
  CHECK(br.exit_code == 2);
  CHECK(br.report.at("status") == "error");

  // Exhausted search: 1 with the verdict in the report.
  Json circle{{"command", "refine"},
              {"cover", data_file("circle3.json")},
              {"depth", 2}};
  RunResult cr = run_request(circle);
  CHECK(cr.exit_code == 1);
  CHECK(cr.report.at("result").at("exhausted") == true);
}

TEST_CASE("verify agrees with original runs and catches tampering") {
  Json req{{"command", "refine"},
           {"cover", data_file("triangle.json")},
           {"depth", 3}};
  RunResult r = run_request(req);
  REQUIRE(r.exit_code == 0);

  Json ver{{"command", "verify"}, {"report", r.report}};
  RunResult v = run_request(ver);
  CHECK(v.exit_code == 0);
  CHECK(v.report.at("result").at("valid") == true);

  // Swap two links: no longer a chain in the recorded order.
  Json tampered = r.report;
  auto& chain = tampered.at("result").at("certificate").at("chain");
  std::swap(chain.at(0), chain.at(chain.size() - 1));
  RunResult tv = run_request(Json{{"command", "verify"}, {"report", tampered}});
  CHECK(tv.exit_code == 1);
  CHECK(tv.report.at("result").at("valid") == false);
}

TEST_CASE("fiber, hoehn and verify round through the engine") {
  Json fiber{{"command", "fiber"},
             {"f", data_file("fiber_f.json")},
             {"g", data_file("fiber_g.json")}};
  RunResult fr = run_request(fiber);
  REQUIRE(fr.exit_code == 0);
  CHECK(fr.report.at("result").at("components") == 2);

  Json hoehn{{"command", "hoehn"}, {"fiber", fr.report}};
  RunResult hr = run_request(hoehn);
  CHECK(hr.exit_code == 0);
  CHECK(hr.report.at("result").at("verdict").at("outcome") ==
        "disconnection-certified");

  RunResult vr =
      run_request(Json{{"command", "verify"}, {"report", hr.report}});
  CHECK(vr.exit_code == 0);

  Json tampered = hr.report;
  tampered.at("result").at("verdict").at("outcome") = "composition-mismatch";
  RunResult tv = run_request(Json{{"command", "verify"}, {"report", tampered}});
  CHECK(tv.exit_code == 1);
}

TEST_CASE("witness pipeline through the engine") {
  Json f1{{"format", 1},
          {"edges",
           Json{{"e", Json::array({Json::array({"0/1", "1/1"}),
                                   Json::array({"1/1", "1/4"})})}}}};
  Json req{{"command", "witness"},
           {"graph", data_file("interval.json")},
           {"f", Json::array({f1, fn_x()})},
           {"delta", "1/2"}};
  RunResult wr = run_request(req);
  REQUIRE(wr.exit_code == 0);
  CHECK(wr.report.at("result").at("holds") == true);

  Json ex{{"command", "extract-chain"},
          {"graph", data_file("interval.json")},
          {"f", Json::array({f1, fn_x()})},
          {"witness", wr.report.at("result").at("witness")}};
  RunResult er = run_request(ex);
  REQUIRE(er.exit_code == 0);
  RunResult vr = run_request(
      Json{{"command", "verify"}, {"report", er.report}});
  CHECK(vr.exit_code == 0);
}

TEST_CASE("report text rendering stays readable") {
  Json req{{"command", "psi"},
           {"graph", data_file("interval.json")},
           {"which", "psi0"},
           {"f", Json::array({fn_x()})}};
  RunResult r = run_request(req);
  std::string text = report_to_text(r.report);
  CHECK(text.find("command: psi") != std::string::npos);
  CHECK(text.find("status: ok") != std::string::npos);
  CHECK(text.find("value: [0/1, 0/1]") != std::string::npos);
}
