// Copyright 2026 The qwlift Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qwlift/qwlift.h"

#include <exception>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "qwlift/bridge.hpp"
#include "qwlift/conductance.hpp"
#include "qwlift/error.hpp"
#include "qwlift/lattice.hpp"
#include "qwlift/lift.hpp"
#include "qwlift/mixing.hpp"
#include "qwlift/scenario.hpp"

struct qwl_graph {
  qwlift::Graph graph;
};

struct qwl_process {
  qwlift::StochProcess proc;
};

struct qwl_lift {
  qwlift::ClockLift lift;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_diagnostics;
thread_local std::string g_last_output_dir;

qwl_status status_of(qwlift::ErrorCode code) {
  return static_cast<qwl_status>(static_cast<int>(code));
}

// Runs body and converts every exception into a status code.
template <typename F>
qwl_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return QWL_OK;
  } catch (const qwlift::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return QWL_ERR_TOO_LARGE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QWL_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown exception";
    return QWL_ERR_INTERNAL;
  }
}

void require_ptr(const void* p, const char* name) {
  QWLIFT_REQUIRE(p != nullptr, qwlift::ErrorCode::kInvalidArgument, name,
                 " must not be null");
}

qwlift::Dist dist_from(const double* p, std::size_t n) {
  return qwlift::Dist(std::vector<double>(p, p + n));
}

template <typename Make>
qwl_status make_graph(qwl_graph** out, Make&& make) {
  return guarded([&] {
    require_ptr(out, "out");
    *out = nullptr;
    *out = new qwl_graph{make()};
  });
}

template <typename Make>
qwl_status make_process(qwl_process** out, Make&& make) {
  return guarded([&] {
    require_ptr(out, "out");
    *out = nullptr;
    *out = new qwl_process{make()};
  });
}

qwlift::RunOptions to_options(const qwl_run_options* opts) {
  qwlift::RunOptions o;
  if (opts == nullptr) return o;
  if (opts->out_dir != nullptr) o.out_dir = opts->out_dir;
  if (opts->horizon > 0) o.horizon = opts->horizon;
  if (opts->has_seed) o.seed = opts->seed;
  o.verify = opts->verify != 0;
  return o;
}

int finish_run(const qwlift::ScenarioOutcome& outcome) {
  g_last_diagnostics.clear();
  for (const std::string& d : outcome.diagnostics) {
    g_last_diagnostics += d;
    g_last_diagnostics += '\n';
  }
  g_last_output_dir.clear();
  if (outcome.results.is_null()) return outcome.exit_code;
  try {
    qwlift::emit_report(outcome);
    g_last_output_dir = outcome.out_dir.string();
  } catch (const std::exception& e) {
    g_last_diagnostics += std::string("cannot write results: ") + e.what() +
                          "\n";
    return qwlift::kExitValidation;
  }
  return outcome.exit_code;
}

}  // namespace

extern "C" {

const char* qwl_version(void) { return "0.1.0"; }

const char* qwl_status_string(qwl_status status) {
  switch (status) {
    case QWL_OK: return "ok";
    case QWL_ERR_INVALID_ARGUMENT: return "invalid argument";
    case QWL_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
    case QWL_ERR_INFEASIBLE: return "infeasible";
    case QWL_ERR_NOT_CONVERGED: return "not converged";
    case QWL_ERR_TOO_LARGE: return "too large";
    case QWL_ERR_IO: return "i/o error";
    case QWL_ERR_PARSE: return "parse error";
    case QWL_ERR_INVARIANT: return "invariant violated";
    case QWL_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* qwl_last_error(void) { return g_last_error.c_str(); }

qwl_status qwl_graph_cycle(size_t n, qwl_graph** out) {
  return make_graph(out, [&] { return qwlift::Graph::cycle(n); });
}

qwl_status qwl_graph_path(size_t n, qwl_graph** out) {
  return make_graph(out, [&] { return qwlift::Graph::path(n); });
}

qwl_status qwl_graph_complete(size_t n, qwl_graph** out) {
  return make_graph(out, [&] { return qwlift::Graph::complete(n); });
}

qwl_status qwl_graph_torus(size_t m, size_t d, qwl_graph** out) {
  return make_graph(out, [&] { return qwlift::torus_graph(m, d); });
}

qwl_status qwl_graph_parse(const char* text, qwl_graph** out) {
  return make_graph(out, [&] {
    require_ptr(text, "text");
    return qwlift::parse_edge_list(text);
  });
}

size_t qwl_graph_size(const qwl_graph* g) {
  return g == nullptr ? 0 : g->graph.size();
}

size_t qwl_graph_edge_count(const qwl_graph* g) {
  return g == nullptr ? 0 : g->graph.edge_count();
}

void qwl_graph_destroy(qwl_graph* g) { delete g; }

qwl_status qwl_tv_distance(const double* p, const double* q, size_t n,
                           double* out) {
  return guarded([&] {
    require_ptr(p, "p");
    require_ptr(q, "q");
    require_ptr(out, "out");
    *out = qwlift::tv_distance(std::span<const double>(p, n),
                               std::span<const double>(q, n));
  });
}

qwl_status qwl_process_cycle_qw(size_t n, double alpha, double phi,
                                double theta, double q, qwl_process** out) {
  return make_process(out, [&] {
    return qwlift::cycle_qw({n, alpha, phi, theta, q}).process();
  });
}

qwl_status qwl_process_cycle_lmc(size_t n, double alpha, qwl_process** out) {
  return make_process(
      out, [&] { return qwlift::induced_process(qwlift::cycle_lmc(n, alpha)); });
}

qwl_status qwl_process_classical(size_t n, qwl_process** out) {
  return make_process(out, [&] {
    return qwlift::markov_process(qwlift::classical_walk(n).chain);
  });
}

qwl_status qwl_process_torus_lmc(size_t m, size_t d, double alpha, int lazy,
                                 qwl_process** out) {
  return make_process(out, [&] {
    qwlift::TorusParams p;
    p.m = m;
    p.d = d;
    if (alpha >= 0.0) p.alpha = alpha;
    if (lazy >= 0) p.lazy = lazy != 0;
    return qwlift::induced_process(qwlift::torus_lmc(p));
  });
}

qwl_status qwl_process_hadamard(qwl_process** out) {
  return make_process(out, [] { return qwlift::hadamard_process(); });
}

size_t qwl_process_nodes(const qwl_process* p) {
  return p == nullptr ? 0 : p->proc.num_nodes();
}

qwl_status qwl_process_evolve(const qwl_process* p, const double* p0, size_t n,
                              size_t t, double* out) {
  return guarded([&] {
    require_ptr(p, "process");
    require_ptr(p0, "p0");
    require_ptr(out, "out");
    QWLIFT_REQUIRE(n == p->proc.num_nodes(),
                   qwlift::ErrorCode::kDimensionMismatch, "process has ",
                   p->proc.num_nodes(), " nodes, got a vector of length ", n);
    const qwlift::Dist result = p->proc.evolve(dist_from(p0, n), t);
    for (std::size_t v = 0; v < n; ++v) out[v] = result[v];
  });
}

void qwl_process_destroy(qwl_process* p) { delete p; }

qwl_status qwl_mixing_time(const qwl_process* p, double eps, size_t horizon,
                           size_t* tau, int* resolved) {
  return guarded([&] {
    require_ptr(p, "process");
    require_ptr(tau, "tau");
    require_ptr(resolved, "resolved");
    const auto m = qwlift::mixing_time(
        p->proc, qwlift::Dist::uniform(p->proc.num_nodes()), eps, horizon);
    *resolved = m.resolved() ? 1 : 0;
    *tau = m.tau ? *m.tau : horizon + 1;
  });
}

qwl_status qwl_graph_conductance(const qwl_graph* g, const double* pbar,
                                 double* phi, unsigned char* cut_mask) {
  return guarded([&] {
    require_ptr(g, "graph");
    require_ptr(phi, "phi");
    const std::size_t n = g->graph.size();
    const qwlift::Dist target =
        pbar == nullptr ? qwlift::Dist::uniform(n) : dist_from(pbar, n);
    const auto gc = qwlift::graph_conductance(g->graph, target);
    *phi = gc.phi;
    if (cut_mask != nullptr) {
      for (std::size_t v = 0; v < n; ++v) cut_mask[v] = 0;
      for (qwlift::NodeId v : gc.witness_cut.cut.members()) cut_mask[v] = 1;
    }
  });
}

qwl_status qwl_max_flow(const qwl_graph* g, const double* y, const double* z,
                        double* value) {
  return guarded([&] {
    require_ptr(g, "graph");
    require_ptr(y, "y");
    require_ptr(z, "z");
    require_ptr(value, "value");
    const std::size_t n = g->graph.size();
    *value = qwlift::max_flow(qwlift::build_flow_network(
                                  dist_from(y, n), dist_from(z, n), g->graph))
                 .value;
  });
}

qwl_status qwl_lift_build(const qwl_process* p, size_t horizon, double eps0,
                          qwl_lift** out) {
  return guarded([&] {
    require_ptr(p, "process");
    require_ptr(out, "out");
    *out = nullptr;
    *out = new qwl_lift{qwlift::build_clock_lift(p->proc, horizon, eps0)};
  });
}

qwl_status qwl_lift_amplify(const qwl_lift* lift, qwl_lift** out) {
  return guarded([&] {
    require_ptr(lift, "lift");
    require_ptr(out, "out");
    *out = nullptr;
    *out = new qwl_lift{qwlift::amplified_lift(lift->lift)};
  });
}

qwl_status qwl_lift_verify(const qwl_lift* lift, const qwl_process* p,
                           size_t horizon, double* residual) {
  return guarded([&] {
    require_ptr(lift, "lift");
    require_ptr(p, "process");
    require_ptr(residual, "residual");
    *residual =
        qwlift::verify_simulation(lift->lift, p->proc, horizon).max_residual;
  });
}

size_t qwl_lift_states(const qwl_lift* lift) {
  return lift == nullptr ? 0 : lift->lift.chain.space().dim();
}

void qwl_lift_destroy(qwl_lift* lift) { delete lift; }

void qwl_run_options_init(qwl_run_options* opts) {
  if (opts == nullptr) return;
  opts->out_dir = nullptr;
  opts->horizon = 0;
  opts->has_seed = 0;
  opts->seed = 0;
  opts->verify = 0;
}

int qwl_run_scenario(const char* config_text, const char* base_dir,
                     const qwl_run_options* opts) {
  if (config_text == nullptr) {
    g_last_diagnostics = "config text must not be null\n";
    return qwlift::kExitValidation;
  }
  try {
    return finish_run(qwlift::run_scenario_text(
        config_text, to_options(opts),
        base_dir == nullptr ? std::filesystem::path{} : base_dir));
  } catch (const std::exception& e) {
    g_last_diagnostics = std::string("internal error: ") + e.what() + "\n";
    return qwlift::kExitValidation;
  }
}

int qwl_run_scenario_file(const char* path, const qwl_run_options* opts) {
  if (path == nullptr) {
    g_last_diagnostics = "config path must not be null\n";
    return qwlift::kExitValidation;
  }
  std::string text;
  try {
    text = qwlift::read_text(path);
  } catch (const std::exception& e) {
    g_last_diagnostics = std::string(e.what()) + "\n";
    return qwlift::kExitValidation;
  }
  const std::filesystem::path p(path);
  return qwl_run_scenario(text.c_str(), p.parent_path().string().c_str(), opts);
}

const char* qwl_last_diagnostics(void) { return g_last_diagnostics.c_str(); }

const char* qwl_last_output_dir(void) { return g_last_output_dir.c_str(); }

}  // extern "C"
