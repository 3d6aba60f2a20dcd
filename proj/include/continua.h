/* Licensed under the Apache License 2.0 (see LICENSE file). */
#ifndef CONTINUA_H
#define CONTINUA_H

#ifdef __cplusplus
extern "C" {
#endif

/* Exit-code contract shared with the command line: 0 = property holds or
   value computed, 1 = property fails (witness in the report), 2 = input
   or usage error. */
typedef enum { CTN_OK = 0, CTN_FAIL = 1, CTN_ERROR = 2 } ctn_status;

typedef struct ctn_graph ctn_graph;
typedef struct ctn_fn ctn_fn;

/* Message of the last failure on this thread; never NULL. */
const char* ctn_last_error(void);

/* Frees any string returned through a char** out-parameter. */
void ctn_string_free(char* s);

/* Runs one engine request given as JSON text and stores the JSON report
   in *report (free with ctn_string_free).  The report is byte-identical
   for identical requests.  Returns the exit-code contract above. */
ctn_status ctn_run(const char* request_json, char** report);

/* Renders a JSON report as human-readable text. */
ctn_status ctn_report_text(const char* report_json, char** text);

/* Metric graphs. */
ctn_status ctn_graph_from_json(const char* json_text, ctn_graph** out);
void ctn_graph_free(ctn_graph* g);
int ctn_graph_vertex_count(const ctn_graph* g);
int ctn_graph_edge_count(const ctn_graph* g);
int ctn_graph_component_count(const ctn_graph* g);

/* Piecewise-linear functions on a graph.  Rationals are "p/q" strings. */
ctn_status ctn_fn_from_json(const ctn_graph* g, const char* json_text,
                            ctn_fn** out);
void ctn_fn_free(ctn_fn* f);
ctn_status ctn_fn_eval(const ctn_fn* f, const char* edge_id, const char* t,
                       char** value);
ctn_status ctn_fn_sup_norm(const ctn_fn* f, char** value);

/* Certified value of the connectedness axiom at a normalized function. */
ctn_status ctn_projectionless(const ctn_fn* f, char** lower, char** upper);

#ifdef __cplusplus
}
#endif

#endif /* CONTINUA_H */
