/*
 * Copyright 2026 The qwlift Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * qwlift C interface.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_destroy function. Every fallible call returns a qwl_status;
 * on failure qwl_last_error() describes the problem and any handle output
 * is set to NULL. Error state is kept
 * per thread. Node indices are zero-based throughout this interface.
 */

#ifndef QWLIFT_QWLIFT_H_
#define QWLIFT_QWLIFT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(QWLIFT_BUILDING_LIBRARY)
#define QWL_API __declspec(dllexport)
#else
#define QWL_API __declspec(dllimport)
#endif
#else
#define QWL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qwl_status {
  QWL_OK = 0,
  QWL_ERR_INVALID_ARGUMENT = 1,
  QWL_ERR_DIMENSION_MISMATCH = 2,
  QWL_ERR_INFEASIBLE = 3,
  QWL_ERR_NOT_CONVERGED = 4,
  QWL_ERR_TOO_LARGE = 5,
  QWL_ERR_IO = 6,
  QWL_ERR_PARSE = 7,
  QWL_ERR_INVARIANT = 8,
  QWL_ERR_INTERNAL = 9
} qwl_status;

typedef struct qwl_graph qwl_graph;
typedef struct qwl_process qwl_process;
typedef struct qwl_lift qwl_lift;

QWL_API const char* qwl_version(void);
QWL_API const char* qwl_status_string(qwl_status status);
/* Message of the last failed call on this thread, "" if none. */
QWL_API const char* qwl_last_error(void);

/* Graphs. Every graph carries a self-loop at each node. */
QWL_API qwl_status qwl_graph_cycle(size_t n, qwl_graph** out);
QWL_API qwl_status qwl_graph_path(size_t n, qwl_graph** out);
QWL_API qwl_status qwl_graph_complete(size_t n, qwl_graph** out);
QWL_API qwl_status qwl_graph_torus(size_t m, size_t d, qwl_graph** out);
/* Edge list text: first line "n" (optionally "n directed"), then one
 * "u v" pair per line. This text format numbers nodes from 1. */
QWL_API qwl_status qwl_graph_parse(const char* text, qwl_graph** out);
QWL_API size_t qwl_graph_size(const qwl_graph* g);
QWL_API size_t qwl_graph_edge_count(const qwl_graph* g);
QWL_API void qwl_graph_destroy(qwl_graph* g);

QWL_API qwl_status qwl_tv_distance(const double* p, const double* q, size_t n,
                                   double* out);

/* Processes: node-marginal dynamics of walks and chains. */
QWL_API qwl_status qwl_process_cycle_qw(size_t n, double alpha, double phi,
                                        double theta, double q,
                                        qwl_process** out);
QWL_API qwl_status qwl_process_cycle_lmc(size_t n, double alpha,
                                         qwl_process** out);
QWL_API qwl_status qwl_process_classical(size_t n, qwl_process** out);
/* alpha < 0 selects 1/(2dM); lazy < 0 selects lazy for even M. */
QWL_API qwl_status qwl_process_torus_lmc(size_t m, size_t d, double alpha,
                                         int lazy, qwl_process** out);
QWL_API qwl_status qwl_process_hadamard(qwl_process** out);
QWL_API size_t qwl_process_nodes(const qwl_process* p);
/* Writes Psi_t[p0] into out (length n). */
QWL_API qwl_status qwl_process_evolve(const qwl_process* p, const double* p0,
                                      size_t n, size_t t, double* out);
QWL_API void qwl_process_destroy(qwl_process* p);

/* Worst-case mixing time towards the uniform distribution. *resolved is
 * 0 when the horizon was too short; *tau is then left at horizon + 1. */
QWL_API qwl_status qwl_mixing_time(const qwl_process* p, double eps,
                                   size_t horizon, size_t* tau, int* resolved);

/* Optimal conductance over local pbar-invariant chains. pbar may be NULL
 * for the uniform target. cut_mask (optional, length n) receives 1 for
 * the nodes of the witness cut. */
QWL_API qwl_status qwl_graph_conductance(const qwl_graph* g, const double* pbar,
                                         double* phi, unsigned char* cut_mask);

/* Max-flow value of the transport network from y to z along g. */
QWL_API qwl_status qwl_max_flow(const qwl_graph* g, const double* y,
                                const double* z, double* value);

/* Lifts. */
QWL_API qwl_status qwl_lift_build(const qwl_process* p, size_t horizon,
                                  double eps0, qwl_lift** out);
QWL_API qwl_status qwl_lift_amplify(const qwl_lift* lift, qwl_lift** out);
/* Largest L1 deviation between lifted marginals and the process. */
QWL_API qwl_status qwl_lift_verify(const qwl_lift* lift, const qwl_process* p,
                                   size_t horizon, double* residual);
QWL_API size_t qwl_lift_states(const qwl_lift* lift);
QWL_API void qwl_lift_destroy(qwl_lift* lift);

/* Scenario runner. Returns the process exit code: 0 success,
 * 1 validation failure, 2 assertion failure. */
typedef struct qwl_run_options {
  const char* out_dir; /* NULL: output.dir from the config */
  size_t horizon;      /* 0: scenario default */
  int has_seed;
  int64_t seed;
  int verify;
} qwl_run_options;

QWL_API void qwl_run_options_init(qwl_run_options* opts);
QWL_API int qwl_run_scenario(const char* config_text, const char* base_dir,
                             const qwl_run_options* opts);
QWL_API int qwl_run_scenario_file(const char* path,
                                  const qwl_run_options* opts);
/* Newline-separated diagnostics of the last run on this thread. */
QWL_API const char* qwl_last_diagnostics(void);
/* Directory the last successful run wrote to. */
QWL_API const char* qwl_last_output_dir(void);

#ifdef __cplusplus
}
#endif

#endif /* QWLIFT_QWLIFT_H_ */
