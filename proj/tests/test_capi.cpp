// Licensed under the Apache License 2.0 (see LICENSE file).
//
// Exercises the shared-library C API end to end: handles, error
// reporting, and the request runner.
#include <cassert>
#include <cstdio>
#include <cstring>
#include <string>

#include "continua.h"

#define REQUIRE(cond)                                                      \
  do {                                                                     \
    if (!(cond)) {                                                         \
      std::fprintf(stderr, "FAILED %s:%d: %s (last error: %s)\n",          \
                   __FILE__, __LINE__, #cond, ctn_last_error());           \
      return 1;                                                            \
    }                                                                      \
  } while (0)

static const char* kGraph =
    "{\"format\":1,\"vertices\":[\"a\",\"b\"],"
    "\"edges\":[{\"id\":\"e\",\"u\":\"a\",\"v\":\"b\",\"len\":\"1/1\"}]}";

static const char* kTwoComponents =
    "{\"format\":1,\"vertices\":[\"a\",\"b\",\"c\",\"d\"],"
    "\"edges\":[{\"id\":\"e1\",\"u\":\"a\",\"v\":\"b\",\"len\":\"1/1\"},"
    "{\"id\":\"e2\",\"u\":\"c\",\"v\":\"d\",\"len\":\"1/1\"}]}";

static const char* kFnX =
    "{\"format\":1,\"edges\":{\"e\":[[\"0/1\",\"0/1\"],[\"1/1\",\"1/1\"]]}}";

static const char* kIndicator =
    "{\"format\":1,\"edges\":{\"e1\":[[\"0/1\",\"1/1\"],[\"1/1\",\"1/1\"]],"
    "\"e2\":[[\"0/1\",\"0/1\"],[\"1/1\",\"0/1\"]]}}";

int main() {
  // Graph handles.
  ctn_graph* g = nullptr;
  REQUIRE(ctn_graph_from_json(kGraph, &g) == CTN_OK);
  REQUIRE(ctn_graph_vertex_count(g) == 2);
  REQUIRE(ctn_graph_edge_count(g) == 1);
  REQUIRE(ctn_graph_component_count(g) == 1);

  ctn_graph* bad = nullptr;
  REQUIRE(ctn_graph_from_json("{\"vertices\":[]}", &bad) == CTN_ERROR);
  REQUIRE(std::strlen(ctn_last_error()) > 0);

  // Function handles.
  ctn_fn* f = nullptr;
  REQUIRE(ctn_fn_from_json(g, kFnX, &f) == CTN_OK);
  char* value = nullptr;
  REQUIRE(ctn_fn_eval(f, "e", "1/3", &value) == CTN_OK);
  REQUIRE(std::string(value) == "1/3");
  ctn_string_free(value);
  REQUIRE(ctn_fn_eval(f, "nope", "0/1", &value) == CTN_ERROR);
  REQUIRE(ctn_fn_sup_norm(f, &value) == CTN_OK);
  REQUIRE(std::string(value) == "1/1");
  ctn_string_free(value);

  // Connectedness axiom through the flat API.
  ctn_graph* g2 = nullptr;
  REQUIRE(ctn_graph_from_json(kTwoComponents, &g2) == CTN_OK);
  REQUIRE(ctn_graph_component_count(g2) == 2);
  ctn_fn* ind = nullptr;
  REQUIRE(ctn_fn_from_json(g2, kIndicator, &ind) == CTN_OK);
  char* lo = nullptr;
  char* hi = nullptr;
  REQUIRE(ctn_projectionless(ind, &lo, &hi) == CTN_OK);
  REQUIRE(std::string(lo) == "1/1");
  REQUIRE(std::string(hi) == "1/1");
  ctn_string_free(lo);
  ctn_string_free(hi);

  // Request runner: value computation, determinism and error paths.
  std::string req = std::string("{\"command\":\"eval\",\"graph\":") + kGraph +
                    ",\"functions\":[" + kFnX +
                    "],\"formula\":\"norm(x1*x1 - x1)\",\"seed\":0}";
  char* report1 = nullptr;
  char* report2 = nullptr;
  REQUIRE(ctn_run(req.c_str(), &report1) == CTN_OK);
  REQUIRE(ctn_run(req.c_str(), &report2) == CTN_OK);
  REQUIRE(std::string(report1) == std::string(report2));
  REQUIRE(std::string(report1).find("\"1/4\"") != std::string::npos);

  char* text = nullptr;
  REQUIRE(ctn_report_text(report1, &text) == CTN_OK);
  REQUIRE(std::string(text).find("status: ok") != std::string::npos);
  ctn_string_free(text);
  ctn_string_free(report1);
  ctn_string_free(report2);

  char* err_report = nullptr;
  REQUIRE(ctn_run("{\"command\":\"nope\"}", &err_report) == CTN_ERROR);
  REQUIRE(err_report != nullptr);
  ctn_string_free(err_report);
  REQUIRE(ctn_run("not json", &err_report) == CTN_ERROR);
  ctn_string_free(err_report);

  ctn_fn_free(f);
  ctn_fn_free(ind);
  ctn_graph_free(g);
  ctn_graph_free(g2);
  std::puts("capi tests passed");
  return 0;
}
