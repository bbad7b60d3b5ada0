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

#include "qwlift/conductance.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <sstream>

#include "qwlift/error.hpp"
#include "qwlift/simplex.hpp"

namespace qwlift {

namespace {

constexpr double kHalfMass = 0.5 + kEqualityTolerance;

void require_invariant(const StochMatrix& p, const Dist& pbar) {
  QWLIFT_REQUIRE(pbar.size() == p.size(), ErrorCode::kDimensionMismatch,
                 "stationary vector of size ", pbar.size(), " for chain of ",
                 p.size(), " states");
  const std::vector<double> image = p.apply(pbar.weights());
  double err = 0.0;
  for (std::size_t i = 0; i < image.size(); ++i)
    err += std::abs(image[i] - pbar[i]);
  QWLIFT_REQUIRE(err <= kSumTolerance, ErrorCode::kInvalidArgument,
                 "pbar is not invariant: ||P pbar - pbar||_1 = ", err);
}

struct ScoredCut {
  double phi;
  std::uint64_t mask;
  friend bool operator<(const ScoredCut& a, const ScoredCut& b) {
    return a.phi < b.phi || (a.phi == b.phi && a.mask < b.mask);
  }
};

// Gray-code walk over every X of the positive-mass nodes, maintaining
// Q(X) and pbar(X) incrementally. Keeps the `keep` smallest Phi_X.
class CutScanner {
 public:
  CutScanner(const StochMatrix& p, std::span<const double> pbar)
      : n_(p.size()), mass_(pbar.begin(), pbar.end()), out_(n_), in_(n_) {
    QWLIFT_REQUIRE(n_ <= kMaxConductanceNodes, ErrorCode::kTooLarge,
                   "exhaustive cut scan limited to ", kMaxConductanceNodes,
                   " states, got ", n_);
    const SparseMatrix& m = p.matrix();
    for (Eigen::Index j = 0; j < m.outerSize(); ++j)
      for (SparseMatrix::InnerIterator it(m, j); it; ++it) {
        const auto from = static_cast<std::size_t>(j);
        const auto to = static_cast<std::size_t>(it.row());
        if (from == to) continue;
        const double f = it.value() * mass_[from];
        if (f == 0.0) continue;
        out_[from].push_back({to, f});
        in_[to].push_back({from, f});
      }
    for (std::size_t v = 0; v < n_; ++v)
      if (mass_[v] > 0.0) active_.push_back(v);
      else zero_mass_.push_back(v);
  }

  const std::vector<std::size_t>& zero_mass() const { return zero_mass_; }

  std::vector<ScoredCut> scan(std::size_t keep) const {
    std::set<ScoredCut> best;
    std::vector<char> in_x(n_, 0);
    long double q = 0.0L;
    long double w = 0.0L;
    std::uint64_t mask = 0;
    const std::uint64_t count = std::uint64_t{1} << active_.size();
    for (std::uint64_t i = 1; i < count; ++i) {
      const std::size_t u = active_[static_cast<std::size_t>(std::countr_zero(i))];
      long double leave = 0.0L;  // sum over v' outside X of F(v', u)
      long double enter = 0.0L;  // sum over v inside X of F(u, v)
      for (const auto& [to, f] : out_[u])
        if (!in_x[to]) leave += f;
      for (const auto& [from, f] : in_[u])
        if (in_x[from]) enter += f;
      if (in_x[u]) {
        in_x[u] = 0;
        q += enter - leave;
        w -= mass_[u];
      } else {
        in_x[u] = 1;
        q += leave - enter;
        w += mass_[u];
      }
      mask ^= std::uint64_t{1} << u;
      if (w <= 0.0L || w > kHalfMass) continue;
      const double phi = static_cast<double>(q / w);
      if (best.size() < keep) {
        best.insert({phi, mask});
      } else if (phi < std::prev(best.end())->phi) {
        best.erase(std::prev(best.end()));
        best.insert({phi, mask});
      }
    }
    return {best.begin(), best.end()};
  }

 private:
  struct Arc {
    std::size_t node;
    double flow;
  };
  std::size_t n_;
  std::vector<double> mass_;
  std::vector<std::vector<Arc>> out_;
  std::vector<std::vector<Arc>> in_;
  std::vector<std::size_t> active_;
  std::vector<std::size_t> zero_mass_;
};

std::string zero_mass_warning(const std::vector<std::size_t>& nodes) {
  std::ostringstream os;
  os << "nodes with zero stationary mass kept outside every cut:";
  for (std::size_t v : nodes) os << ' ' << v;
  return os.str();
}

}  // namespace

double ergodic_flow(const StochMatrix& p, std::span<const double> pbar,
                    const NodeSet& x) {
  QWLIFT_REQUIRE(x.universe() == p.size() && pbar.size() == p.size(),
                 ErrorCode::kDimensionMismatch,
                 "cut or stationary vector does not match the chain");
  const SparseMatrix& m = p.matrix();
  double q = 0.0;
  for (Eigen::Index j = 0; j < m.outerSize(); ++j) {
    if (!x.contains(static_cast<NodeId>(j))) continue;
    for (SparseMatrix::InnerIterator it(m, j); it; ++it)
      if (!x.contains(static_cast<NodeId>(it.row())))
        q += it.value() * pbar[static_cast<std::size_t>(j)];
  }
  return q;
}

CutReport cut_report(const StochMatrix& p, const Dist& pbar,
                     const NodeSet& x) {
  require_invariant(p, pbar);
  CutReport r;
  r.cut = x;
  r.mass = mass(pbar.weights(), x);
  QWLIFT_REQUIRE(r.mass > 0.0 && r.mass <= kHalfMass,
                 ErrorCode::kInvalidArgument,
                 "cut mass must lie in (0, 1/2], got ", r.mass);
  r.flow = ergodic_flow(p, pbar.weights(), x);
  r.phi = r.flow / r.mass;
  return r;
}

double phi_cut(const StochMatrix& p, const Dist& pbar, const NodeSet& x) {
  return cut_report(p, pbar, x).phi;
}

ChainConductance phi_chain(const StochMatrix& p, const Dist& pbar) {
  require_invariant(p, pbar);
  const CutScanner scanner(p, pbar.weights());
  const auto best = scanner.scan(1);
  QWLIFT_REQUIRE(!best.empty(), ErrorCode::kInvalidArgument,
                 "no cut with 0 < pbar(X) <= 1/2");
  ChainConductance out;
  out.witness =
      cut_report(p, pbar, NodeSet::from_mask(p.size(), best.front().mask));
  out.phi = out.witness.phi;
  if (!scanner.zero_mass().empty())
    out.warnings.push_back(zero_mass_warning(scanner.zero_mass()));
  return out;
}

GraphConductance graph_conductance(const Graph& g, const Dist& pbar,
                                   const GraphConductanceOptions& opts) {
  const std::size_t n = g.size();
  QWLIFT_REQUIRE(pbar.size() == n, ErrorCode::kDimensionMismatch,
                 "stationary vector of size ", pbar.size(), " for graph of ",
                 n, " nodes");
  QWLIFT_REQUIRE(n >= 2, ErrorCode::kInvalidArgument,
                 "graph conductance is undefined without a qualifying cut");
  QWLIFT_REQUIRE(n <= kMaxConductanceNodes, ErrorCode::kTooLarge,
                 "graph conductance limited to ", kMaxConductanceNodes,
                 " nodes, got ", n);

  const std::vector<Edge> edges = g.edges();  // (from, to)
  const std::size_t m = edges.size();
  const std::size_t t_var = m;
  LinearProgram lp(m + 1);
  lp.objective[t_var] = 1.0;
  std::vector<std::vector<std::pair<std::size_t, double>>> colsum(n);
  std::vector<std::vector<std::pair<std::size_t, double>>> inflow(n);
  for (std::size_t k = 0; k < m; ++k) {
    const auto& [from, to] = edges[k];
    colsum[from].push_back({k, 1.0});
    if (pbar[from] != 0.0) inflow[to].push_back({k, pbar[from]});
  }
  for (NodeId v = 0; v < n; ++v)
    lp.add_row(colsum[v], Relation::kEqual, 1.0);
  // The last balance row is implied by the others and the column sums.
  for (NodeId v = 0; v + 1 < n; ++v)
    lp.add_row(inflow[v], Relation::kEqual, pbar[v]);
  lp.add_row({{t_var, 1.0}}, Relation::kLessEqual, 1.0);

  std::set<std::uint64_t> used;
  auto add_cut = [&](std::uint64_t mask) {
    if (!used.insert(mask).second) return;
    std::vector<std::pair<std::size_t, double>> row;
    double w = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const auto& [from, to] = edges[k];
      const bool f_in = (mask >> from) & 1U;
      const bool t_in = (mask >> to) & 1U;
      if (f_in && !t_in && pbar[from] != 0.0) row.push_back({k, pbar[from]});
    }
    for (NodeId v = 0; v < n; ++v)
      if ((mask >> v) & 1U) w += pbar[v];
    row.push_back({t_var, -w});
    lp.add_row(std::move(row), Relation::kGreaterEqual, 0.0);
  };

  GraphConductance out;
  std::vector<std::size_t> zero;
  for (NodeId v = 0; v < n; ++v) {
    if (pbar[v] <= 0.0) {
      zero.push_back(v);
      continue;
    }
    if (pbar[v] <= kHalfMass) add_cut(std::uint64_t{1} << v);
    if (1.0 - pbar[v] <= kHalfMass) {
      std::uint64_t c = 0;
      for (NodeId w = 0; w < n; ++w)
        if (w != v && pbar[w] > 0.0) c |= std::uint64_t{1} << w;
      if (c != 0) add_cut(c);
    }
  }
  if (!zero.empty()) out.warnings.push_back(zero_mass_warning(zero));

  for (out.rounds = 1; out.rounds <= opts.max_rounds; ++out.rounds) {
    const LpResult res = solve_lp(lp);
    out.lp_iterations += res.iterations;
    QWLIFT_REQUIRE(res.status == LpStatus::kOptimal, ErrorCode::kNotConverged,
                   "conductance LP ended with status ", to_string(res.status));
    std::vector<Eigen::Triplet<double>> entries;
    for (std::size_t k = 0; k < m; ++k)
      if (res.x[k] > 0.0)
        entries.emplace_back(static_cast<Eigen::Index>(edges[k].second),
                             static_cast<Eigen::Index>(edges[k].first),
                             res.x[k]);
    SparseMatrix pm(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    pm.setFromTriplets(entries.begin(), entries.end());
    StochMatrix witness(std::move(pm), g);
    const double t = res.x[t_var];

    const CutScanner scanner(witness, pbar.weights());
    const auto cuts = scanner.scan(opts.cuts_per_round);
    QWLIFT_REQUIRE(!cuts.empty(), ErrorCode::kInvalidArgument,
                   "no cut with 0 < pbar(X) <= 1/2");
    std::size_t added = 0;
    for (const ScoredCut& c : cuts) {
      if (c.phi >= t - opts.separation_tolerance) break;
      if (!used.count(c.mask)) {
        add_cut(c.mask);
        ++added;
      }
    }
    if (added == 0) {
      out.phi = t;
      out.witness_cut = cut_report(witness, pbar,
                                   NodeSet::from_mask(n, cuts.front().mask));
      out.witness_phi = out.witness_cut.phi;
      out.witness = std::move(witness);
      out.cuts_used = used.size();
      return out;
    }
  }
  detail::fail(ErrorCode::kNotConverged, "cutting planes did not converge in ",
               opts.max_rounds, " rounds");
}

LowerBoundReport mixing_lower_bound_check(const StochProcess& proc,
                                          const Dist& pbar,
                                          std::size_t horizon,
                                          std::optional<double> phi) {
  const std::size_t n = proc.num_nodes();
  LowerBoundReport r;
  r.invariant = check_invariance(proc, pbar, horizon);
  if (n <= kMaxLocalityTraceNodes) {
    r.locality_traced = true;
    r.local = true;
    for (NodeId v = 0; v < n && r.local; ++v) {
      const auto trace = proc.trajectory(Dist::delta(n, v), horizon);
      r.local = check_locality_trace(trace, proc.graph()).ok;
    }
  } else {
    r.local = true;
    r.note = "locality assumed from the validated channel structure; ";
  }
  r.applicable = r.local && r.invariant;
  r.phi = phi ? *phi : graph_conductance(proc.graph(), pbar).phi;
  r.bound = r.phi > 0.0 ? 1.0 / (4.0 * r.phi)
                        : std::numeric_limits<double>::infinity();
  r.mixing = mixing_time(proc, pbar, 0.25, horizon);
  if (!r.applicable) {
    r.note += "bound does not apply: process is not local and invariant";
    return r;
  }
  if (r.mixing.resolved()) {
    r.conclusive = true;
    r.holds = static_cast<double>(*r.mixing.tau) + 1.0 >=
              r.bound - kEqualityTolerance;
  } else {
    // tau exceeds the horizon, which settles the inequality when the bound
    // is within reach.
    r.conclusive = static_cast<double>(horizon) + 2.0 >= r.bound;
    r.holds = r.conclusive;
    r.note += "tau(1/4) unresolved within the horizon";
  }
  return r;
}

EscapeReport escape_bound_check(const StochMatrix& p, const Dist& pbar,
                                const NodeSet& x, std::size_t tmax) {
  QWLIFT_REQUIRE(is_irreducible(p), ErrorCode::kInvalidArgument,
                 "escape bound needs an irreducible chain");
  EscapeReport r;
  const CutReport cut = cut_report(p, pbar, x);
  r.phi_x = cut.phi;
  std::vector<double> restricted(p.size(), 0.0);
  for (NodeId v : x.members()) restricted[v] = pbar[v] / cut.mass;
  const NodeSet outside = x.complement();
  std::vector<double> z = restricted;
  for (std::size_t t = 0; t <= tmax; ++t) {
    if (t > 0) z = p.apply(z);
    const double esc = mass(z, outside);
    const double tv = tv_distance(z, restricted);
    const double bound = static_cast<double>(t) * r.phi_x;
    r.escape.push_back(esc);
    r.tv.push_back(tv);
    constexpr double kSlack = 1e-10;
    if (esc > tv + kSlack) r.escape_below_tv = false;
    if (tv > bound + kSlack) r.tv_below_bound = false;
    r.max_violation = std::max({r.max_violation, esc - tv, tv - bound});
  }
  return r;
}

}  // namespace qwlift
