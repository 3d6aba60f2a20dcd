// Licensed under the Apache License 2.0 (see LICENSE file).
#pragma once

#include <string>

#include "json.hpp"

#include "continua/amalgam.hpp"
#include "continua/chain.hpp"
#include "continua/eval.hpp"

namespace continua {

using Json = nlohmann::json;

// All on-disk objects carry "format": 1; rationals travel as "p/q"
// strings (never floats), certified values as {lower, upper}.
inline constexpr int kFormatVersion = 1;

void require_format(const Json& j, const std::string& what);

std::string rat_to_json_string(const Rat& r);
Rat rat_from_json(const Json& j, const std::string& what);

Json cv_to_json(const CertifiedValue& v);
CertifiedValue cv_from_json(const Json& j);

Json point_to_json(const MetricGraph& g, const Point& p);

Json graph_to_json(const MetricGraph& g);
GraphPtr graph_from_json(const Json& j);

Json fn_to_json(const PLFunction& f);
PLFunction fn_from_json(const Json& j, const GraphPtr& graph);

// Cover files embed their graph so they are self-contained.
Json cover_to_json(const Cover& c);
Cover cover_from_json(const Json& j);

Json witness_to_json(const Witness& w);
Witness witness_from_json(const Json& j, const GraphPtr& graph);

// Map files: {"kind": "circle"|"arc", "graph": ..., "lift"|"values": ...}.
struct MapFile {
  std::string kind;
  GraphPtr graph;
  PLFunction fn;
};
MapFile map_from_json(const Json& j);
Json circle_map_to_json(const CircleMap& m);
Json arc_map_to_json(const ArcMap& m);

std::string verdict_outcome_name(Verdict::Outcome o);
Json verdict_to_json(const Verdict& v, const MetricGraph& w);

// Canonical report text: sorted keys, two-space indent, trailing newline.
// Byte-identical output for equal reports.
std::string dump_report(const Json& report);

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

}  // namespace continua
