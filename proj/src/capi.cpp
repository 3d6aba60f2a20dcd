// Licensed under the Apache License 2.0 (see LICENSE file).
#include "continua.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "continua/engine.hpp"

using namespace continua;

struct ctn_graph {
  GraphPtr g;
};

struct ctn_fn {
  PLFunction f;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename F>
ctn_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CTN_ERROR;
  } catch (...) {
    g_last_error = "unknown error";
    return CTN_ERROR;
  }
}

}  // namespace

extern "C" {

const char* ctn_last_error(void) { return g_last_error.c_str(); }

void ctn_string_free(char* s) { std::free(s); }

ctn_status ctn_run(const char* request_json, char** report) {
  if (!request_json || !report) {
    g_last_error = "null argument";
    return CTN_ERROR;
  }
  ctn_status code = CTN_ERROR;
  ctn_status rc = guarded([&]() -> ctn_status {
    RunResult r = run_request_text(request_json);
    *report = dup_string(dump_report(r.report));
    if (!*report) throw Error("out of memory");
    code = static_cast<ctn_status>(r.exit_code);
    if (code == CTN_ERROR && r.report.contains("error"))
      g_last_error = r.report.at("error").get<std::string>();
    return CTN_OK;
  });
  return rc == CTN_OK ? code : rc;
}

ctn_status ctn_report_text(const char* report_json, char** text) {
  if (!report_json || !text) {
    g_last_error = "null argument";
    return CTN_ERROR;
  }
  return guarded([&]() -> ctn_status {
    Json report = Json::parse(report_json);
    *text = dup_string(report_to_text(report));
    if (!*text) throw Error("out of memory");
    return CTN_OK;
  });
}

ctn_status ctn_graph_from_json(const char* json_text, ctn_graph** out) {
  if (!json_text || !out) {
    g_last_error = "null argument";
    return CTN_ERROR;
  }
  return guarded([&]() -> ctn_status {
    GraphPtr g = graph_from_json(Json::parse(json_text));
    *out = new ctn_graph{std::move(g)};
    return CTN_OK;
  });
}

void ctn_graph_free(ctn_graph* g) { delete g; }

int ctn_graph_vertex_count(const ctn_graph* g) {
  return g ? g->g->vertex_count() : -1;
}

int ctn_graph_edge_count(const ctn_graph* g) {
  return g ? g->g->edge_count() : -1;
}

int ctn_graph_component_count(const ctn_graph* g) {
  return g ? g->g->components().count : -1;
}

ctn_status ctn_fn_from_json(const ctn_graph* g, const char* json_text,
                            ctn_fn** out) {
  if (!g || !json_text || !out) {
    g_last_error = "null argument";
    return CTN_ERROR;
  }
  return guarded([&]() -> ctn_status {
    PLFunction f = fn_from_json(Json::parse(json_text), g->g);
    *out = new ctn_fn{std::move(f)};
    return CTN_OK;
  });
}

void ctn_fn_free(ctn_fn* f) { delete f; }

ctn_status ctn_fn_eval(const ctn_fn* f, const char* edge_id, const char* t,
                       char** value) {
  if (!f || !edge_id || !t || !value) {
    g_last_error = "null argument";
    return CTN_ERROR;
  }
  return guarded([&]() -> ctn_status {
    int e = f->f.graph()->edge_index(edge_id);
    Rat v = f->f.eval_edge(e, rat_from_string(t));
    *value = dup_string(rat_to_json_string(v));
    return CTN_OK;
  });
}

ctn_status ctn_fn_sup_norm(const ctn_fn* f, char** value) {
  if (!f || !value) {
    g_last_error = "null argument";
    return CTN_ERROR;
  }
  return guarded([&]() -> ctn_status {
    *value = dup_string(rat_to_json_string(f->f.sup_norm()));
    return CTN_OK;
  });
}

ctn_status ctn_projectionless(const ctn_fn* f, char** lower, char** upper) {
  if (!f || !lower || !upper) {
    g_last_error = "null argument";
    return CTN_ERROR;
  }
  return guarded([&]() -> ctn_status {
    CertifiedValue v = projectionless_value(f->f);
    *lower = dup_string(rat_to_json_string(v.lower));
    *upper = dup_string(rat_to_json_string(v.upper));
    return CTN_OK;
  });
}

}  // extern "C"
