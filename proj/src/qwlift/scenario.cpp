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

#include "qwlift/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <limits>
#include <sstream>

#include "qwlift/bridge.hpp"
#include "qwlift/conductance.hpp"
#include "qwlift/error.hpp"
#include "qwlift/lattice.hpp"
#include "qwlift/lift.hpp"
#include "qwlift/mixing.hpp"

namespace qwlift {

// ---------------------------------------------------------------------------
// Config

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const auto end = comma == std::string_view::npos ? s.size() : comma;
    out.emplace_back(trim(s.substr(pos, end - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

double parse_plain(std::string_view s) {
  s = trim(s);
  double x = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, x);
  if (s.empty() || ec != std::errc() || ptr != end)
    detail::fail(ErrorCode::kParse, "not a number: '", std::string(s), "'");
  return x;
}

}  // namespace

double parse_number(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_plain(text);
  const double num = parse_plain(text.substr(0, slash));
  const double den = parse_plain(text.substr(slash + 1));
  QWLIFT_REQUIRE(den != 0.0, ErrorCode::kParse, "zero denominator in '",
                 std::string(text), "'");
  return num / den;
}

Config Config::parse(std::string_view text) {
  Config c;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      detail::fail(ErrorCode::kParse, "line ", line_no,
                   ": expected 'key = value', got '", std::string(line), "'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty() || value.empty())
      detail::fail(ErrorCode::kParse, "line ", line_no,
                   ": empty key or value");
    for (char ch : key)
      if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' ||
            ch == '_' || ch == '-'))
        detail::fail(ErrorCode::kParse, "line ", line_no,
                     ": invalid character in key '", key, "'");
    if (c.values_.count(key))
      detail::fail(ErrorCode::kParse, "line ", line_no, ": duplicate key '",
                   key, "' (first on line ", c.lines_[key], ")");
    c.values_[key] = value;
    c.lines_[key] = line_no;
  }
  return c;
}

bool Config::has(const std::string& key) const {
  used_.insert(key);
  return values_.count(key) > 0;
}

std::string Config::text(const std::string& key) const {
  used_.insert(key);
  const auto it = values_.find(key);
  if (it == values_.end())
    detail::fail(ErrorCode::kInvalidArgument, "missing required key '", key,
                 "'");
  return it->second;
}

std::string Config::text_or(const std::string& key,
                            std::string fallback) const {
  return has(key) ? text(key) : std::move(fallback);
}

double Config::number(const std::string& key) const {
  try {
    return parse_number(text(key));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kParse) throw;
    detail::fail(ErrorCode::kParse, "key '", key, "' (line ",
                 lines_.at(key), "): ", e.what());
  }
}

double Config::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::size_t Config::count(const std::string& key) const {
  const double x = number(key);
  if (!(x >= 0.0) || x != std::floor(x) || x > 1e15)
    detail::fail(ErrorCode::kInvalidArgument, "key '", key,
                 "' must be a non-negative integer, got ", text(key));
  return static_cast<std::size_t>(x);
}

std::size_t Config::count_or(const std::string& key,
                             std::size_t fallback) const {
  return has(key) ? count(key) : fallback;
}

bool Config::flag_or(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = text(key);
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  detail::fail(ErrorCode::kParse, "key '", key, "' must be true or false, got ",
               v);
}

std::vector<double> Config::numbers(const std::string& key) const {
  std::vector<double> out;
  for (const std::string& item : split_list(text(key))) {
    try {
      out.push_back(parse_number(item));
    } catch (const Error&) {
      detail::fail(ErrorCode::kParse, "key '", key, "' (line ",
                   lines_.at(key), "): bad list entry '", item, "'");
    }
  }
  return out;
}

std::vector<std::string> Config::unused() const {
  std::vector<std::string> out;
  for (const auto& [key, value] : values_)
    if (!used_.count(key)) out.push_back(key);
  return out;
}

Scenario parse_scenario(std::string_view text, std::filesystem::path base_dir) {
  Scenario s{{}, Config::parse(text), std::move(base_dir)};
  s.kind = s.config.text("scenario.kind");
  const bool known = std::any_of(std::begin(kScenarioKinds),
                                 std::end(kScenarioKinds),
                                 [&](const char* k) { return s.kind == k; });
  QWLIFT_REQUIRE(known, ErrorCode::kInvalidArgument, "unknown scenario kind '",
                 s.kind, "'");
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_text(path), path.parent_path());
}

// ---------------------------------------------------------------------------
// Runners

namespace {

constexpr std::size_t kMatrixExportLimit = 512;
constexpr std::size_t kChannelExportLimit = 64;

Json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round_sig(x);
}

Json one_based(const std::vector<NodeId>& nodes) {
  Json out = Json::array();
  for (NodeId v : nodes) out.push_back(v + 1);
  return out;
}

bool is_member(std::string_view kind,
               std::initializer_list<std::string_view> set) {
  return std::find(set.begin(), set.end(), kind) != set.end();
}

// Shared state for one run.
struct Context {
  const Scenario& scenario;
  const RunOptions& opts;
  Json results = Json::object();
  Json checks = Json::array();
  std::vector<Artifact> artifacts;
  std::vector<std::string> warnings;
  std::vector<std::string> diagnostics;
  bool failed = false;

  Context(const Scenario& s, const RunOptions& o) : scenario(s), opts(o) {}

  void check(const std::string& name, bool ok, const std::string& detail = {}) {
    Json c{{"name", name}, {"passed", ok}};
    if (!detail.empty()) c["detail"] = detail;
    checks.push_back(std::move(c));
    if (!ok) {
      failed = true;
      diagnostics.push_back("assertion failed: " + name +
                            (detail.empty() ? "" : " (" + detail + ")"));
    }
  }
  void artifact(std::string name, std::string content) {
    artifacts.push_back({std::move(name), std::move(content)});
  }
};

using Runner = std::function<void(Context&)>;

// -- processes ---------------------------------------------------------------

struct ProcessSpec {
  std::string kind;
  std::size_t n = 0;  // cycle length
  std::optional<double> alpha;
  double phi = 0.0;
  double theta = 0.0;
  std::optional<double> q;
  TorusParams torus;

  bool quantum() const { return kind == "cycle-qw" || kind == "hadamard"; }
  std::size_t nodes() const {
    if (kind == "hadamard") return 2;
    if (kind == "torus-lmc") {
      std::size_t v = 1;
      for (std::size_t k = 0; k < torus.d; ++k) v *= torus.m;
      return v;
    }
    return n;
  }
  std::size_t default_horizon() const {
    return (quantum() ? 40 : 20) * nodes();
  }
};

void require_range(bool ok, const std::string& what) {
  QWLIFT_REQUIRE(ok, ErrorCode::kInvalidArgument, what);
}

ProcessSpec read_process(const Config& c, const std::string& kind) {
  ProcessSpec s;
  s.kind = kind;
  if (is_member(kind, {"cycle-qw", "cycle-lmc", "classical-walk"})) {
    s.n = c.count("cycle.n");
    require_range(s.n >= 2 && s.n <= 4096, "cycle.n must lie in [2, 4096]");
    if (kind != "classical-walk" && c.has("cycle.alpha")) {
      s.alpha = c.number("cycle.alpha");
      require_range(*s.alpha >= 0.0 && *s.alpha <= 1.0,
                    "cycle.alpha must lie in [0, 1]");
    }
    if (kind == "cycle-qw") {
      s.phi = c.number_or("cycle.phi", 0.0);
      s.theta = c.number_or("cycle.theta", 0.0);
      if (c.has("cycle.q")) {
        s.q = c.number("cycle.q");
        require_range(*s.q >= 0.0 && *s.q <= 1.0, "cycle.q must lie in [0, 1]");
      }
    }
  } else if (kind == "torus-lmc") {
    s.torus.m = c.count("torus.m");
    s.torus.d = c.count("torus.d");
    require_range(s.torus.m >= 2 && s.torus.d >= 1,
                  "torus needs torus.m >= 2 and torus.d >= 1");
    require_range(std::pow(static_cast<double>(s.torus.m),
                           static_cast<double>(s.torus.d)) <= 4096.0,
                  "torus larger than 4096 nodes");
    if (c.has("torus.alpha")) s.torus.alpha = c.number("torus.alpha");
    if (c.has("torus.lazy")) s.torus.lazy = c.flag_or("torus.lazy", false);
    const double a = s.torus.resolved_alpha();
    require_range(a >= 0.0 && 2.0 * static_cast<double>(s.torus.d) * a <= 1.0,
                  "torus.alpha must satisfy 0 <= 2 d alpha <= 1");
  } else if (kind != "hadamard") {
    detail::fail(ErrorCode::kInvalidArgument, "unknown process kind '", kind,
                 "'");
  }
  return s;
}

struct BuiltProcess {
  StochProcess proc;
  Dist pbar;
  Json description;
  std::optional<LiftedChain> chain;
  std::optional<Json> channel;
  std::vector<std::string> warnings;
};

BuiltProcess build_process(const ProcessSpec& s) {
  const std::size_t n = s.nodes();
  const Dist uniform = Dist::uniform(n);
  Json d{{"kind", s.kind}};
  std::vector<std::string> warnings;
  if ((s.kind == "cycle-qw" || s.kind == "cycle-lmc") && s.n % 2 == 0)
    warnings.push_back(
        "even cycle: every step moves one node, so the parity of the "
        "position alternates and the node marginal never mixes");
  if (s.kind == "cycle-qw") {
    const CycleParams p{s.n, s.alpha.value_or(0.5), s.phi, s.theta,
                        s.q.value_or(1.0 / static_cast<double>(s.n))};
    CycleWalk walk = cycle_qw(p);
    d["n"] = p.n;
    d["alpha"] = num(p.alpha);
    d["phi"] = num(p.phi);
    d["theta"] = num(p.theta);
    d["q"] = num(p.q);
    std::optional<Json> ch;
    if (2 * p.n <= kChannelExportLimit) ch = channel_to_json(walk.channel);
    return {walk.process(), uniform, d, std::nullopt, ch, warnings};
  }
  if (s.kind == "cycle-lmc") {
    const double alpha = s.alpha.value_or(1.0 / static_cast<double>(s.n));
    LiftedChain chain = cycle_lmc(s.n, alpha);
    d["n"] = s.n;
    d["alpha"] = num(alpha);
    return {induced_process(chain), uniform, d, chain, std::nullopt, warnings};
  }
  if (s.kind == "classical-walk") {
    ClassicalWalk w = classical_walk(s.n);
    d["n"] = s.n;
    d["lazy"] = w.lazy;
    BuiltProcess b{markov_process(w.chain), uniform, d,
                   LiftedChain(w.chain, CoinAssignment::constant(
                                            w.chain.space(), 0)),
                   std::nullopt, {}};
    if (w.warning) b.warnings.push_back(*w.warning);
    return b;
  }
  if (s.kind == "torus-lmc") {
    LiftedChain chain = torus_lmc(s.torus);
    d["m"] = s.torus.m;
    d["d"] = s.torus.d;
    d["alpha"] = num(s.torus.resolved_alpha());
    d["lazy"] = s.torus.resolved_lazy();
    BuiltProcess b{induced_process(chain), uniform, d, chain, std::nullopt, {}};
    if (s.torus.m % 2 == 0 && !s.torus.resolved_lazy())
      b.warnings.push_back("even M without the lazy chain is periodic");
    return b;
  }
  // hadamard
  return {hadamard_process(), uniform, d, std::nullopt, std::nullopt, {}};
}

void export_matrices(Context& ctx, const BuiltProcess& b) {
  if (b.chain && b.chain->space().dim() <= kMatrixExportLimit) {
    ctx.artifact("transition.csv", matrix_csv(b.chain->transition()));
    ctx.artifact("transition.json",
                 matrix_sidecar(b.chain->transition(), &b.chain->init())
                         .dump(2) + "\n");
  }
  if (b.channel) ctx.artifact("channel.json", b.channel->dump(2) + "\n");
}

std::string trajectory_csv(const TvTrajectory& traj) {
  std::string out = "t,max_tv,argmax_start\n";
  for (std::size_t t = 0; t < traj.max_tv.size(); ++t)
    out += std::to_string(t) + "," + format_number(traj.max_tv[t]) + "," +
           std::to_string(traj.argmax[t] + 1) + "\n";
  return out;
}

Json mixing_json(const MixingResult& m) {
  Json j{{"epsilon", num(m.epsilon)}};
  j["tau"] = m.tau ? Json(*m.tau) : Json(nullptr);
  j["resolved"] = m.resolved();
  j["worst_start"] = m.worst_start + 1;
  return j;
}

void verify_process(Context& ctx, const BuiltProcess& b, std::size_t horizon) {
  Json v = Json::object();
  const bool invariant = check_invariance(b.proc, b.pbar, horizon);
  v["invariance"] = invariant;
  ctx.check("target invariant under the process", invariant);
  const std::size_t n = b.proc.num_nodes();
  if (n <= kMaxLocalityTraceNodes) {
    bool local = true;
    for (NodeId s = 0; s < n && local; ++s)
      local = check_locality_trace(b.proc.trajectory(Dist::delta(n, s), horizon),
                                   b.proc.graph())
                  .ok;
    v["locality"] = local;
    ctx.check("locality inequality along every basis trace", local);
  } else {
    v["locality"] = "structural";
  }
  if (b.chain) {
    const bool irreducible = is_irreducible(b.chain->transition());
    v["irreducible"] = irreducible;
  }
  ctx.results["verify"] = std::move(v);
}

// -- mixing kinds ------------------------------------------------------------

Runner plan_mixing(const Scenario& s, const RunOptions& opts) {
  const Config& c = s.config;
  const ProcessSpec spec = read_process(c, s.kind);
  std::vector<double> eps{0.25};
  if (c.has("mixing.epsilon")) eps = c.numbers("mixing.epsilon");
  for (double e : eps)
    require_range(e > 0.0 && e <= 1.0, "mixing.epsilon entries must lie in (0, 1]");
  const std::size_t horizon =
      opts.horizon ? *opts.horizon
                   : c.count_or("mixing.horizon", spec.default_horizon());
  require_range(horizon >= 1, "mixing horizon must be >= 1");
  const bool bound = c.flag_or("bound.check",
                               spec.nodes() <= kMaxConductanceNodes);
  require_range(!bound || spec.nodes() <= kMaxConductanceNodes,
                "bound.check needs at most 26 nodes");
  std::vector<double> sweep;
  if (c.has("sweep.values")) sweep = c.numbers("sweep.values");
  const std::size_t factor =
      c.count_or("sweep.horizon_factor", spec.quantum() ? 40 : 20);
  for (double x : sweep)
    require_range(x >= 2 && x == std::floor(x) && x <= 4096,
                  "sweep.values must be integers in [2, 4096]");

  return [spec, eps, horizon, bound, sweep, factor](Context& ctx) {
    const BuiltProcess b = build_process(spec);
    ctx.warnings.insert(ctx.warnings.end(), b.warnings.begin(),
                        b.warnings.end());
    ctx.results["process"] = b.description;
    ctx.results["nodes"] = b.proc.num_nodes();
    ctx.results["horizon"] = horizon;
    const TvTrajectory traj = tv_trajectory(b.proc, b.pbar, horizon);
    Json mix = Json::array();
    for (double e : eps) mix.push_back(mixing_json(mixing_time(traj, e)));
    ctx.results["mixing"] = std::move(mix);
    ctx.results["justification"] = kBasisReductionNote;
    ctx.artifact("trajectory.csv", trajectory_csv(traj));
    export_matrices(ctx, b);

    if (bound) {
      const GraphConductance gc = graph_conductance(b.proc.graph(), b.pbar);
      const MixingResult quarter = mixing_time(traj, 0.25);
      const double lower = 1.0 / (4.0 * gc.phi);
      Json j{{"phi", num(gc.phi)}, {"lower_bound", num(lower)}};
      bool holds;
      if (quarter.resolved()) {
        holds = static_cast<double>(*quarter.tau) + 1.0 >= lower - 1e-12;
      } else {
        holds = static_cast<double>(horizon) + 2.0 >= lower;
        j["note"] = "tau(1/4) unresolved within the horizon";
      }
      j["holds"] = holds;
      ctx.results["conductance_bound"] = std::move(j);
      ctx.check("tau(1/4) >= 1/(4 phi) - 1", holds);
    }
    if (ctx.opts.verify) verify_process(ctx, b, horizon);

    if (!sweep.empty()) {
      Json rows = Json::array();
      std::vector<double> xs, ys;
      std::string csv = "x,tau\n";
      for (double x : sweep) {
        ProcessSpec sp = spec;
        const auto size = static_cast<std::size_t>(x);
        if (sp.kind == "torus-lmc") sp.torus.m = size;
        else sp.n = size;
        const BuiltProcess bx = build_process(sp);
        const std::size_t h = factor * size;
        const MixingResult m = mixing_time(bx.proc, bx.pbar, eps.front(), h);
        Json r{{"x", size}, {"horizon", h}};
        r["tau"] = m.tau ? Json(*m.tau) : Json(nullptr);
        rows.push_back(std::move(r));
        csv += std::to_string(size) + "," +
               (m.tau ? std::to_string(*m.tau) : std::string()) + "\n";
        if (m.tau && *m.tau > 0) {
          xs.push_back(x);
          ys.push_back(static_cast<double>(*m.tau));
        }
      }
      ctx.results["sweep"] = std::move(rows);
      if (xs.size() >= 2)
        ctx.results["sweep_exponent"] = num(fit_power_law(xs, ys).exponent);
      ctx.artifact("sweep.csv", csv);
    }
  };
}

// -- bridge-build ------------------------------------------------------------

Runner plan_bridge(const Scenario& s, const RunOptions&) {
  const Config& c = s.config;
  const ProcessSpec spec = read_process(c, c.text("process.kind"));
  const std::size_t start = c.count_or("bridge.start", 1);
  const std::size_t steps = c.count("bridge.steps");
  require_range(start >= 1 && start <= spec.nodes(),
                "bridge.start must be a node in [1, n]");
  require_range(steps >= 1, "bridge.steps must be >= 1");
  return [spec, start, steps](Context& ctx) {
    const BuiltProcess b = build_process(spec);
    ctx.results["process"] = b.description;
    ctx.results["start"] = start;
    ctx.warnings.insert(ctx.warnings.end(), b.warnings.begin(),
                        b.warnings.end());
    ctx.results["steps"] = steps;
    const std::size_t n = b.proc.num_nodes();
    try {
      const BridgeSequence seq =
          bridge_sequence(b.proc, Dist::delta(n, start - 1), steps);
      const double residual = bridge_residual(seq, b.proc);
      double min_flow = 1.0;
      Json flows = Json::array();
      for (double f : seq.flow_values) {
        flows.push_back(num(f));
        min_flow = std::min(min_flow, f);
      }
      ctx.results["flow_values"] = std::move(flows);
      ctx.results["residual"] = num(residual);
      ctx.check("every max-flow value is 1", min_flow >= 1.0 - 1e-9);
      ctx.check("bridge reproduces the trace", residual <= 1e-8);
      for (Artifact& a : bridge_artifacts({seq}, "bridges"))
        ctx.artifacts.push_back(std::move(a));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInfeasible) throw;
      ctx.check("every step locally feasible", false, e.what());
    }
  };
}

// -- lift-build --------------------------------------------------------------

Runner plan_lift(const Scenario& s, const RunOptions& opts) {
  const Config& c = s.config;
  const ProcessSpec spec = read_process(c, c.text("process.kind"));
  const double eps0 = c.number_or("lift.eps0", 0.25);
  require_range(eps0 > 0.0 && eps0 < 0.5, "lift.eps0 must lie in (0, 1/2)");
  std::optional<std::size_t> fixed;
  if (c.has("lift.horizon")) {
    fixed = c.count("lift.horizon");
    require_range(*fixed >= 1, "lift.horizon must be >= 1");
  }
  const std::size_t horizon =
      opts.horizon ? *opts.horizon
                   : c.count_or("mixing.horizon", spec.default_horizon());
  std::vector<double> eps{1e-2, 1e-3};
  if (c.has("lift.epsilon")) eps = c.numbers("lift.epsilon");
  for (double e : eps)
    require_range(e > 0.0 && e < 1.0, "lift.epsilon entries must lie in (0, 1)");
  require_range(spec.nodes() <= 64, "lift-build limited to 64 nodes");

  return [spec, eps0, fixed, horizon, eps](Context& ctx) {
    const BuiltProcess b = build_process(spec);
    ctx.results["process"] = b.description;
    ctx.results["eps0"] = num(eps0);
    ctx.warnings.insert(ctx.warnings.end(), b.warnings.begin(),
                        b.warnings.end());
    // tau_bar(eps0) certifies that T steps bring every start within eps0,
    // which is what the amplification bound needs.
    const MixingResult source = mixing_time(b.proc, b.pbar, eps0, horizon);
    ctx.results["tau_bar"] = source.tau ? Json(*source.tau) : Json(nullptr);
    if (!fixed && !source.resolved()) {
      ctx.check("source mixes to eps0 within the horizon", false,
                "no T given and tau_bar(eps0) unresolved after " +
                    std::to_string(horizon) + " steps");
      return;
    }
    const std::size_t period =
        fixed ? *fixed : std::max<std::size_t>(*source.tau, 1);
    const bool certified = source.resolved() && *source.tau <= period;
    ctx.results["T"] = period;
    try {
      const ClockLift plain = build_clock_lift(b.proc, period, eps0);
      const ClockLift amp = amplified_lift(plain);
      const SimulationReport rp = verify_simulation(plain, b.proc, period);
      const SimulationReport ra = verify_simulation(amp, b.proc, 3 * period);
      ctx.results["states"] = plain.chain.space().dim();
      ctx.results["plain_residual"] = num(rp.max_residual);
      ctx.results["amplified_residual"] = num(ra.max_residual);
      ctx.check("plain lift reproduces the process up to T",
                rp.max_residual <= 1e-8);
      ctx.check("amplified lift reproduces the wrapped process up to 3T",
                ra.max_residual <= 1e-7);
      ctx.check("lift transitions respect the base graph", rp.local && ra.local);

      Json rows = Json::array();
      if (!certified) {
        ctx.warnings.push_back(
            "amplified mixing not checked: T is not certified to reach eps0");
      } else {
        std::size_t longest = 0;
        std::vector<AmplificationBound> bounds;
        for (double e : eps) {
          bounds.push_back(amplification_bound(period, eps0, e));
          longest = std::max(longest, bounds.back().value);
        }
        const TvTrajectory traj = tv_trajectory(induced_process(amp.chain),
                                                b.pbar, longest + period);
        for (std::size_t k = 0; k < eps.size(); ++k) {
          const MixingResult m = mixing_time(traj, eps[k]);
          Json r = mixing_json(m);
          r["bound"] = bounds[k].value;
          const bool ok = m.resolved() && *m.tau <= bounds[k].value;
          r["within_bound"] = ok;
          rows.push_back(std::move(r));
          ctx.check("amplified lift mixes within the amplification bound", ok,
                    "epsilon = " + format_number(eps[k]));
        }
      }
      ctx.results["amplified_mixing"] = std::move(rows);
      ctx.artifact("lift.csv", triplet_csv(plain.chain.transition()));
      ctx.artifact("lift_manifest.json",
                   lift_manifest(plain, "lift.csv").dump(2) + "\n");
      ctx.artifact("lift_amplified.csv", triplet_csv(amp.chain.transition()));
      ctx.artifact("lift_amplified_manifest.json",
                   lift_manifest(amp, "lift_amplified.csv").dump(2) + "\n");
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kInfeasible) throw;
      ctx.check("every bridge step locally feasible", false, e.what());
    }
  };
}

// -- conductance -------------------------------------------------------------

Graph read_graph(const Scenario& s) {
  const Config& c = s.config;
  const std::string kind = c.text("graph.kind");
  if (kind == "file") {
    std::filesystem::path p = c.text("graph.file");
    if (p.is_relative() && !s.base_dir.empty()) p = s.base_dir / p;
    return parse_edge_list(read_text(p));
  }
  if (kind == "torus") return torus_graph(c.count("graph.m"), c.count("graph.d"));
  const std::size_t n = c.count("graph.n");
  require_range(n >= 1, "graph.n must be >= 1");
  if (kind == "cycle") {
    require_range(n >= 2, "a cycle needs graph.n >= 2");
    return Graph::cycle(n);
  }
  if (kind == "path") return Graph::path(n);
  if (kind == "complete") return Graph::complete(n);
  detail::fail(ErrorCode::kInvalidArgument, "unknown graph.kind '", kind, "'");
}

Dist read_target(const Config& c, const std::string& key, std::size_t n) {
  const std::string t = c.text_or(key, "uniform");
  if (t == "uniform") return Dist::uniform(n);
  std::vector<double> w = c.numbers(key);
  QWLIFT_REQUIRE(w.size() == n, ErrorCode::kDimensionMismatch, key, " has ",
                 w.size(), " entries for ", n, " nodes");
  return Dist(std::move(w));
}

Runner plan_conductance(const Scenario& s, const RunOptions&) {
  const Graph g = read_graph(s);
  require_range(g.size() >= 2 && g.size() <= kMaxConductanceNodes,
                "conductance needs between 2 and 26 nodes");
  const Dist pbar = read_target(s.config, "conductance.target", g.size());
  return [g, pbar](Context& ctx) {
    const GraphConductance gc = graph_conductance(g, pbar);
    ctx.warnings.insert(ctx.warnings.end(), gc.warnings.begin(),
                        gc.warnings.end());
    ctx.results["nodes"] = g.size();
    ctx.results["phi"] = num(gc.phi);
    ctx.results["witness_cut"] = one_based(gc.witness_cut.cut.members());
    ctx.results["witness_chain_path"] = "witness_chain.csv";
    ctx.results["witness_phi"] = num(gc.witness_phi);
    ctx.results["cut_mass"] = num(gc.witness_cut.mass);
    ctx.results["cut_flow"] = num(gc.witness_cut.flow);
    ctx.results["mixing_lower_bound"] = num(1.0 / (4.0 * gc.phi));
    ctx.results["rounds"] = gc.rounds;
    ctx.results["cuts_used"] = gc.cuts_used;
    ctx.artifact("witness_chain.csv", matrix_csv(gc.witness));
    ctx.artifact("witness_chain.json",
                 matrix_sidecar(gc.witness, nullptr).dump(2) + "\n");
    if (ctx.opts.verify) {
      const std::vector<double> image = gc.witness.apply(pbar.weights());
      double resid = 0.0;
      for (std::size_t v = 0; v < image.size(); ++v)
        resid = std::max(resid, std::abs(image[v] - pbar[v]));
      ctx.results["verify"] = Json{{"invariance_residual", num(resid)}};
      ctx.check("witness keeps the target invariant", resid <= 1e-7);
      ctx.check("witness attains the optimum",
                gc.witness_phi >= gc.phi - 1e-7);
    }
  };
}

// -- lower-bound-check -------------------------------------------------------

Runner plan_lower_bound(const Scenario& s, const RunOptions& opts) {
  const Config& c = s.config;
  const ProcessSpec spec = read_process(c, c.text("process.kind"));
  require_range(spec.nodes() >= 2 && spec.nodes() <= kMaxConductanceNodes,
                "lower-bound-check needs between 2 and 26 nodes");
  const std::size_t horizon =
      opts.horizon ? *opts.horizon
                   : c.count_or("mixing.horizon", spec.default_horizon());
  return [spec, horizon](Context& ctx) {
    const BuiltProcess b = build_process(spec);
    ctx.warnings.insert(ctx.warnings.end(), b.warnings.begin(),
                        b.warnings.end());
    const LowerBoundReport r = mixing_lower_bound_check(b.proc, b.pbar, horizon);
    ctx.results["process"] = b.description;
    ctx.results["horizon"] = horizon;
    ctx.results["local"] = r.local;
    ctx.results["locality_traced"] = r.locality_traced;
    ctx.results["invariant"] = r.invariant;
    ctx.results["phi"] = num(r.phi);
    ctx.results["lower_bound"] = num(r.bound);
    ctx.results["mixing"] = mixing_json(r.mixing);
    ctx.results["conclusive"] = r.conclusive;
    ctx.results["holds"] = r.holds;
    if (!r.note.empty()) ctx.results["note"] = r.note;
    if (!r.applicable)
      ctx.warnings.push_back("bound not applicable: " + r.note);
    else if (!r.conclusive)
      ctx.warnings.push_back("bound inconclusive within the horizon");
    else
      ctx.check("tau(1/4) >= 1/(4 phi) - 1", r.holds);
    if (ctx.opts.verify) verify_process(ctx, b, horizon);
  };
}

// -- lattice-lemmas ----------------------------------------------------------

Runner plan_lattice(const Scenario& s, const RunOptions&) {
  const Config& c = s.config;
  const ProcessSpec spec = read_process(c, "torus-lmc");
  const TorusParams p = spec.torus;
  require_range(p.m % 2 == 1 || p.resolved_lazy(),
                "even torus.m needs torus.lazy = true");
  require_range(2 * p.d * spec.nodes() <= 4096,
                "lattice lemmas limited to 4096 lifted states");
  const std::size_t horizon =
      c.count_or("lemmas.horizon", contraction_proof_horizon(p.m, p.d));
  return [p, horizon](Context& ctx) {
    const LatticeLemmaReport r = lattice_lemma_checks(p, horizon);
    ctx.results["m"] = r.m;
    ctx.results["d"] = r.d;
    ctx.results["coin_toss_probability"] = num(r.coin_toss_probability);
    ctx.results["axis_min_probability"] = num(r.axis_min_probability);
    ctx.results["axis_threshold"] = num(r.axis_threshold);
    ctx.results["T"] = r.horizon;
    ctx.results["q"] = num(r.q);
    ctx.results["min_ratio"] = num(r.min_ratio);
    ctx.check("single coin toss probability >= 1/8",
              r.coin_toss_probability >= 0.125);
    ctx.check("start axis mixed after 2M steps", r.axis_mixed);
    ctx.check("p_T >= q pbar elementwise", r.contraction);
  };
}

// -- multiscale --------------------------------------------------------------

Runner plan_multiscale(const Scenario& s, const RunOptions&) {
  const Config& c = s.config;
  const std::size_t n = c.count("multiscale.n");
  const std::size_t t = c.count("multiscale.t");
  require_range(n >= 2 && n <= 4096, "multiscale.n must lie in [2, 4096]");
  require_range(t < n, "multiscale.t must be below multiscale.n");
  return [n, t](Context& ctx) {
    const auto series = multiscale_series(n, t);
    std::string csv = "t,qw_tv,lmc_tv\n";
    for (const MultiscaleReport& r : series)
      csv += std::to_string(r.t) + "," + format_number(r.qw_tv) + "," +
             format_number(r.lmc_tv) + "\n";
    ctx.artifact("multiscale.csv", csv);
    const MultiscaleReport& last = series.back();
    ctx.results["n"] = n;
    ctx.results["t"] = t;
    ctx.results["window"] = last.window;
    ctx.results["qw_tv"] = num(last.qw_tv);
    ctx.results["lmc_tv"] = num(last.lmc_tv);
    if (t > 0)
      ctx.check("quantum walk window TV below the lifted chain's",
                last.qw_tv < last.lmc_tv);
  };
}

Runner plan(const Scenario& s, const RunOptions& opts) {
  if (is_member(s.kind, {"cycle-qw", "cycle-lmc", "classical-walk", "torus-lmc"}))
    return plan_mixing(s, opts);
  if (s.kind == "bridge-build") return plan_bridge(s, opts);
  if (s.kind == "lift-build") return plan_lift(s, opts);
  if (s.kind == "conductance") return plan_conductance(s, opts);
  if (s.kind == "lower-bound-check") return plan_lower_bound(s, opts);
  if (s.kind == "lattice-lemmas") return plan_lattice(s, opts);
  if (s.kind == "multiscale") return plan_multiscale(s, opts);
  detail::fail(ErrorCode::kInvalidArgument, "unknown scenario kind '", s.kind,
               "'");
}

std::string timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ScenarioOutcome validation_failure(std::string message,
                                   const RunOptions& opts) {
  ScenarioOutcome out;
  out.exit_code = kExitValidation;
  out.diagnostics.push_back(std::move(message));
  out.out_dir = opts.out_dir;
  return out;
}

}  // namespace

ScenarioOutcome run_scenario(const Scenario& s, const RunOptions& opts) {
  Runner runner;
  try {
    runner = plan(s, opts);
    s.config.text_or("output.dir", "");
    const auto unused = s.config.unused();
    if (!unused.empty()) {
      std::string msg = "unknown keys for scenario '" + s.kind + "':";
      for (const auto& k : unused) msg += " " + k;
      return validation_failure(msg, opts);
    }
  } catch (const Error& e) {
    return validation_failure(std::string("invalid scenario: ") + e.what(),
                              opts);
  }

  ScenarioOutcome out;
  out.out_dir = !opts.out_dir.empty()
                    ? opts.out_dir
                    : std::filesystem::path(
                          s.config.text_or("output.dir", "qwlift-out"));
  if (out.out_dir.is_relative() && opts.out_dir.empty() && !s.base_dir.empty() &&
      s.config.has("output.dir"))
    out.out_dir = s.base_dir / out.out_dir;

  Context ctx(s, opts);
  try {
    runner(ctx);
  } catch (const Error& e) {
    out.exit_code = kExitValidation;
    out.diagnostics.push_back(std::string("scenario failed: ") + e.what());
    return out;
  }

  Json doc;
  doc["tool"] = "qwlift";
  doc["kind"] = s.kind;
  doc["status"] = ctx.failed ? "assertion-failed" : "ok";
  doc["generated_at"] = timestamp();
  doc["seed"] = opts.seed ? Json(*opts.seed) : Json(nullptr);
  Json params = Json::object();
  for (const auto& [k, v] : s.config.entries()) params[k] = v;
  if (opts.horizon) params["--horizon"] = *opts.horizon;
  doc["parameters"] = std::move(params);
  doc["results"] = std::move(ctx.results);
  doc["checks"] = std::move(ctx.checks);
  doc["warnings"] = ctx.warnings;
  Json names = Json::array();
  for (const Artifact& a : ctx.artifacts) names.push_back(a.name);
  doc["artifacts"] = std::move(names);

  out.results = std::move(doc);
  out.artifacts = std::move(ctx.artifacts);
  out.diagnostics = std::move(ctx.diagnostics);
  for (const auto& w : ctx.warnings) out.diagnostics.push_back("warning: " + w);
  out.exit_code = ctx.failed ? kExitAssertion : kExitOk;
  return out;
}

ScenarioOutcome run_scenario_text(std::string_view text, const RunOptions& opts,
                                  std::filesystem::path base_dir) {
  try {
    return run_scenario(parse_scenario(text, std::move(base_dir)), opts);
  } catch (const Error& e) {
    return validation_failure(std::string("invalid scenario: ") + e.what(),
                              opts);
  }
}

void emit_report(const ScenarioOutcome& outcome) {
  QWLIFT_REQUIRE(!outcome.results.is_null(), ErrorCode::kInvalidArgument,
                 "no results to emit");
  write_text(outcome.out_dir / "results.json", outcome.results.dump(2) + "\n");
  for (const Artifact& a : outcome.artifacts)
    write_text(outcome.out_dir / a.name, a.content);
}

Json strip_volatile(Json results) {
  if (results.is_object()) results.erase("generated_at");
  return results;
}

}  // namespace qwlift
