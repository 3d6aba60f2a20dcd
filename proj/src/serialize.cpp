// Licensed under the Apache License 2.0 (see LICENSE file).
#include "continua/serialize.hpp"

#include <fstream>
#include <sstream>

namespace continua {

void require_format(const Json& j, const std::string& what) {
  if (!j.is_object()) throw InvalidInput(what + ": expected a JSON object");
  auto it = j.find("format");
  if (it == j.end())
    throw InvalidInput(what + ": missing required \"format\" field");
  if (!it->is_number_integer() || it->get<int>() != kFormatVersion)
    throw InvalidInput(what + ": unsupported format version");
}

std::string rat_to_json_string(const Rat& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

Rat rat_from_json(const Json& j, const std::string& what) {
  if (!j.is_string())
    throw InvalidInput(what + ": rationals must be \"p/q\" strings");
  return rat_from_string(j.get<std::string>());
}

Json cv_to_json(const CertifiedValue& v) {
  return Json{{"lower", rat_to_json_string(v.lower)},
              {"upper", rat_to_json_string(v.upper)}};
}

CertifiedValue cv_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("lower") || !j.contains("upper"))
    throw InvalidInput("certified value: expected {lower, upper}");
  return CertifiedValue(rat_from_json(j.at("lower"), "certified value"),
                        rat_from_json(j.at("upper"), "certified value"));
}

Json point_to_json(const MetricGraph& g, const Point& p) {
  if (p.edge == -1)
    return Json{{"vertex", g.vertex_ids().at(p.vertex)}};
  return Json{{"edge", g.edge(p.edge).id}, {"t", rat_to_json_string(p.t)}};
}

Json graph_to_json(const MetricGraph& g) {
  Json edges = Json::array();
  for (const auto& e : g.edges()) {
    edges.push_back(Json{{"id", e.id},
                         {"u", g.vertex_ids().at(e.u)},
                         {"v", g.vertex_ids().at(e.v)},
                         {"len", rat_to_json_string(e.length)}});
  }
  return Json{{"format", kFormatVersion},
              {"vertices", g.vertex_ids()},
              {"edges", edges}};
}

GraphPtr graph_from_json(const Json& j) {
  require_format(j, "graph");
  if (!j.contains("vertices") || !j.at("vertices").is_array())
    throw InvalidInput("graph: missing \"vertices\" array");
  if (!j.contains("edges") || !j.at("edges").is_array())
    throw InvalidInput("graph: missing \"edges\" array");
  std::vector<std::string> vertices;
  for (const auto& v : j.at("vertices")) {
    if (!v.is_string()) throw InvalidInput("graph: vertex ids must be strings");
    vertices.push_back(v.get<std::string>());
  }
  std::vector<MetricGraph::Edge> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_object() || !e.contains("id") || !e.contains("u") ||
        !e.contains("v") || !e.contains("len"))
      throw InvalidInput("graph: each edge needs {id, u, v, len}");
    MetricGraph::Edge edge;
    edge.id = e.at("id").get<std::string>();
    const std::string us = e.at("u").get<std::string>();
    const std::string vs = e.at("v").get<std::string>();
    auto find = [&](const std::string& id) {
      for (std::size_t i = 0; i < vertices.size(); ++i)
        if (vertices[i] == id) return static_cast<int>(i);
      throw InvalidInput("graph: edge '" + edge.id +
                         "' references unknown vertex '" + id + "'");
    };
    edge.u = find(us);
    edge.v = find(vs);
    edge.length = rat_from_json(e.at("len"), "graph edge '" + edge.id + "'");
    edges.push_back(std::move(edge));
  }
  return std::make_shared<const MetricGraph>(std::move(vertices),
                                             std::move(edges));
}

Json fn_to_json(const PLFunction& f) {
  const MetricGraph& g = *f.graph();
  Json edges = Json::object();
  for (int e = 0; e < g.edge_count(); ++e) {
    Json pl = Json::array();
    for (const auto& bp : f.edge_data(e))
      pl.push_back(Json::array(
          {rat_to_json_string(bp.t), rat_to_json_string(bp.v)}));
    edges[g.edge(e).id] = std::move(pl);
  }
  Json out{{"format", kFormatVersion}, {"edges", edges}};
  Json verts = Json::object();
  for (int v = 0; v < g.vertex_count(); ++v)
    if (g.degree(v) == 0)
      verts[g.vertex_ids()[v]] = rat_to_json_string(f.vertex_value(v));
  if (!verts.empty()) out["vertices"] = std::move(verts);
  return out;
}

PLFunction fn_from_json(const Json& j, const GraphPtr& graph) {
  require_format(j, "function");
  if (!j.contains("edges") || !j.at("edges").is_object())
    throw InvalidInput("function: missing \"edges\" object");
  const Json& edges = j.at("edges");
  std::vector<Polyline> data(graph->edge_count());
  for (int e = 0; e < graph->edge_count(); ++e) {
    const std::string& id = graph->edge(e).id;
    auto it = edges.find(id);
    if (it == edges.end())
      throw InvalidInput("function: missing polyline for edge '" + id + "'");
    if (!it->is_array() || it->size() < 2)
      throw InvalidInput("function: edge '" + id +
                         "' needs at least two [t, v] breakpoints");
    for (const auto& bp : *it) {
      if (!bp.is_array() || bp.size() != 2)
        throw InvalidInput("function: breakpoints are [\"t\", \"v\"] pairs");
      data[e].push_back(BP{rat_from_json(bp.at(0), "breakpoint"),
                           rat_from_json(bp.at(1), "breakpoint")});
    }
  }
  for (const auto& [id, _] : edges.items()) graph->edge_index(id);
  std::optional<std::vector<Rat>> isolated;
  if (j.contains("vertices")) {
    if (!j.at("vertices").is_object())
      throw InvalidInput("function: \"vertices\" must be an object");
    std::vector<Rat> vals(graph->vertex_count(), Rat(0));
    for (const auto& [id, val] : j.at("vertices").items())
      vals[graph->vertex_index(id)] =
          rat_from_json(val, "vertex value '" + id + "'");
    isolated = std::move(vals);
  }
  return PLFunction(graph, std::move(data), std::move(isolated));
}

Json cover_to_json(const Cover& c) {
  Json gens = Json::array();
  for (const auto& s : c.sets()) gens.push_back(fn_to_json(s.generator()));
  return Json{{"format", kFormatVersion},
              {"graph", graph_to_json(*c.graph())},
              {"generators", gens}};
}

Cover cover_from_json(const Json& j) {
  require_format(j, "cover");
  if (!j.contains("graph")) throw InvalidInput("cover: missing \"graph\"");
  if (!j.contains("generators") || !j.at("generators").is_array())
    throw InvalidInput("cover: missing \"generators\" array");
  GraphPtr graph = graph_from_json(j.at("graph"));
  std::vector<OpenSet> sets;
  for (const auto& g : j.at("generators"))
    sets.emplace_back(fn_from_json(g, graph));
  return Cover(std::move(graph), std::move(sets));
}

Json witness_to_json(const Witness& w) {
  Json g = Json::array();
  for (const auto& f : w.g) g.push_back(fn_to_json(f));
  Json h = Json::array();
  for (const auto& row : w.h) {
    Json r = Json::array();
    for (const auto& f : row) r.push_back(fn_to_json(f));
    h.push_back(std::move(r));
  }
  return Json{{"format", kFormatVersion},
              {"m", w.m},
              {"eps", rat_to_json_string(w.eps)},
              {"eps_prime", rat_to_json_string(w.eps_prime)},
              {"delta", rat_to_json_string(w.delta)},
              {"g", g},
              {"h", h}};
}

Witness witness_from_json(const Json& j, const GraphPtr& graph) {
  require_format(j, "witness");
  for (const char* key : {"m", "eps", "eps_prime", "delta", "g", "h"})
    if (!j.contains(key))
      throw InvalidInput(std::string("witness: missing \"") + key + "\"");
  Witness w;
  if (!j.at("m").is_number_integer())
    throw InvalidInput("witness: \"m\" must be an integer");
  w.m = j.at("m").get<int>();
  w.eps = rat_from_json(j.at("eps"), "witness eps");
  w.eps_prime = rat_from_json(j.at("eps_prime"), "witness eps_prime");
  w.delta = rat_from_json(j.at("delta"), "witness delta");
  for (const auto& g : j.at("g")) w.g.push_back(fn_from_json(g, graph));
  for (const auto& row : j.at("h")) {
    if (!row.is_array()) throw InvalidInput("witness: \"h\" rows are arrays");
    std::vector<PLFunction> r;
    for (const auto& f : row) r.push_back(fn_from_json(f, graph));
    w.h.push_back(std::move(r));
  }
  return w;
}

MapFile map_from_json(const Json& j) {
  require_format(j, "map");
  if (!j.contains("kind") || !j.at("kind").is_string())
    throw InvalidInput("map: missing \"kind\" (\"circle\" or \"arc\")");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind != "circle" && kind != "arc")
    throw InvalidInput("map: kind must be \"circle\" or \"arc\"");
  if (!j.contains("graph")) throw InvalidInput("map: missing \"graph\"");
  GraphPtr graph = graph_from_json(j.at("graph"));
  const char* fn_key = kind == "circle" ? "lift" : "values";
  if (!j.contains(fn_key))
    throw InvalidInput(std::string("map: missing \"") + fn_key +
                       "\" for kind \"" + kind + "\"");
  PLFunction fn = fn_from_json(j.at(fn_key), graph);
  return MapFile{kind, std::move(graph), std::move(fn)};
}

Json circle_map_to_json(const CircleMap& m) {
  return Json{{"format", kFormatVersion},
              {"kind", "circle"},
              {"graph", graph_to_json(*m.domain)},
              {"lift", fn_to_json(m.lift)}};
}

Json arc_map_to_json(const ArcMap& m) {
  return Json{{"format", kFormatVersion},
              {"kind", "arc"},
              {"graph", graph_to_json(*m.domain)},
              {"values", fn_to_json(m.values)}};
}

std::string verdict_outcome_name(Verdict::Outcome o) {
  switch (o) {
    case Verdict::Outcome::DisconnectionCertified:
      return "disconnection-certified";
    case Verdict::Outcome::CompositionMismatch:
      return "composition-mismatch";
    case Verdict::Outcome::NotSurjective:
      return "not-surjective";
    case Verdict::Outcome::DichotomyViolation:
      return "dichotomy-violation";
  }
  throw Error("unknown verdict outcome");
}

Json verdict_to_json(const Verdict& v, const MetricGraph& w) {
  Json out{{"outcome", verdict_outcome_name(v.outcome)},
           {"detail", v.detail},
           {"value1", rat_to_json_string(v.value1)},
           {"value2", rat_to_json_string(v.value2)},
           {"components", v.component_count}};
  if (v.witness) out["witness"] = point_to_json(w, *v.witness);
  if (v.witness2) out["witness2"] = point_to_json(w, *v.witness2);
  return out;
}

std::string dump_report(const Json& report) { return report.dump(2) + "\n"; }

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw InvalidInput("'" + path + "': " + e.what());
  }
  return j;
}

void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << dump_report(j);
}

}  // namespace continua
