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

#include "qwlift/quantum_walk.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include <Eigen/Eigenvalues>

#include "qwlift/error.hpp"

namespace qwlift {

namespace {

void check_square(const CMatrix& m, std::size_t dim, const char* what) {
  QWLIFT_REQUIRE(static_cast<std::size_t>(m.rows()) == dim &&
                     static_cast<std::size_t>(m.cols()) == dim,
                 ErrorCode::kDimensionMismatch, what, " is ", m.rows(), "x",
                 m.cols(), ", expected side ", dim);
}

// Cheap per-step checks: trace and nonnegative populations.
void check_populations(const CMatrix& rho) {
  const double tr = rho.trace().real();
  QWLIFT_REQUIRE(std::abs(tr - 1.0) <= kSumTolerance, ErrorCode::kInvariant,
                 "trace drifted to ", tr);
  for (Eigen::Index i = 0; i < rho.rows(); ++i)
    QWLIFT_REQUIRE(rho(i, i).real() >= -kHermitianTolerance,
                   ErrorCode::kInvariant, "negative population ",
                   rho(i, i).real(), " at index ", i);
}

void hermitize(CMatrix& rho) {
  const Eigen::Index n = rho.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    rho(i, i) = Complex(rho(i, i).real(), 0.0);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Complex avg = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
      rho(i, j) = avg;
      rho(j, i) = std::conj(avg);
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------

CoinAssignment::CoinAssignment(LiftedSpace space,
                               std::vector<std::size_t> coins)
    : space_(space), coins_(std::move(coins)) {
  QWLIFT_REQUIRE(coins_.size() == space_.nodes, ErrorCode::kDimensionMismatch,
                 "coin assignment has ", coins_.size(), " entries for ",
                 space_.nodes, " nodes");
  for (std::size_t c : coins_)
    QWLIFT_REQUIRE(c < space_.coins, ErrorCode::kInvalidArgument,
                   "coin value ", c, " outside |C|=", space_.coins);
}

CoinAssignment CoinAssignment::constant(LiftedSpace space, std::size_t coin) {
  return CoinAssignment(space, std::vector<std::size_t>(space.nodes, coin));
}

// ---------------------------------------------------------------------------

DensityOp::DensityOp(LiftedSpace space, CMatrix rho)
    : space_(space), rho_(std::move(rho)) {
  QWLIFT_REQUIRE(space_.coins >= 1 && space_.nodes >= 1,
                 ErrorCode::kInvalidArgument, "empty lifted space");
  check_square(rho_, space_.dim(), "density operator");
  const double asym = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  QWLIFT_REQUIRE(asym <= kHermitianTolerance, ErrorCode::kInvariant,
                 "density operator not Hermitian (residual ", asym, ")");
  const double tr = rho_.trace().real();
  QWLIFT_REQUIRE(std::abs(tr - 1.0) <= kSumTolerance, ErrorCode::kInvariant,
                 "density operator trace ", tr);
  const double lmin = min_eigenvalue();
  QWLIFT_REQUIRE(lmin >= -kHermitianTolerance, ErrorCode::kInvariant,
                 "density operator has eigenvalue ", lmin);
}

double DensityOp::min_eigenvalue() const {
  const CMatrix h = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// ---------------------------------------------------------------------------

KrausOp::KrausOp(Sparse m) : m_(std::move(m)) {
  QWLIFT_REQUIRE(m_.rows() == m_.cols(), ErrorCode::kDimensionMismatch,
                 "Kraus operator must be square, got ", m_.rows(), "x",
                 m_.cols());
  m_.prune(Complex(0.0, 0.0), 0.0);
  m_.makeCompressed();
  for (Eigen::Index r = 0; r < m_.outerSize(); ++r)
    if (Sparse::InnerIterator(m_, r)) nonzero_rows_.push_back(r);
}

KrausOp KrausOp::from_dense(const CMatrix& m) {
  QWLIFT_REQUIRE(m.rows() == m.cols(), ErrorCode::kDimensionMismatch,
                 "Kraus operator must be square");
  std::vector<Eigen::Triplet<Complex>> entries;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != Complex(0.0, 0.0)) entries.emplace_back(i, j, m(i, j));
  Sparse s(m.rows(), m.cols());
  s.setFromTriplets(entries.begin(), entries.end());
  return KrausOp(std::move(s));
}

void KrausOp::accumulate_conjugation(const CMatrix& rho, CMatrix& out) const {
  const Eigen::Index n = m_.cols();
  Eigen::RowVectorXcd a_row(n);
  for (Eigen::Index a : nonzero_rows_) {
    // a_row = (M rho)(a, :)
    a_row.setZero();
    for (Sparse::InnerIterator it(m_, a); it; ++it)
      a_row += it.value() * rho.row(it.col());
    for (Eigen::Index b : nonzero_rows_) {
      Complex s(0.0, 0.0);
      for (Sparse::InnerIterator it(m_, b); it; ++it)
        s += a_row(it.col()) * std::conj(it.value());
      out(a, b) += s;
    }
  }
}

void KrausOp::accumulate_hermitian_conjugation(const CMatrix& rho,
                                               CMatrix& out) const {
  // For Hermitian rho, (M rho)(a, :) is the conjugate of
  // y = sum_c conj(M(a, c)) rho(:, c), which walks contiguous columns.
  // Then (M rho M^dagger)(a, b) = conj(sum_d y(d) M(b, d)).
  const Eigen::Index n = m_.cols();
  Eigen::VectorXcd y(n);
  for (std::size_t ia = 0; ia < nonzero_rows_.size(); ++ia) {
    const Eigen::Index a = nonzero_rows_[ia];
    y.setZero();
    for (Sparse::InnerIterator it(m_, a); it; ++it)
      y += std::conj(it.value()) * rho.col(it.col());
    for (std::size_t ib = ia; ib < nonzero_rows_.size(); ++ib) {
      const Eigen::Index b = nonzero_rows_[ib];
      Complex s(0.0, 0.0);
      for (Sparse::InnerIterator it(m_, b); it; ++it)
        s += y(it.col()) * it.value();
      s = std::conj(s);
      out(a, b) += s;
      if (b != a) out(b, a) += std::conj(s);
    }
  }
}

// ---------------------------------------------------------------------------

KrausChannel::KrausChannel(LiftedSpace space, Graph graph,
                           std::vector<KrausOp> ops)
    : space_(space), graph_(std::move(graph)), ops_(std::move(ops)) {
  QWLIFT_REQUIRE(space_.coins >= 1 && space_.nodes >= 1,
                 ErrorCode::kInvalidArgument, "empty lifted space");
  QWLIFT_REQUIRE(graph_.size() == space_.nodes, ErrorCode::kDimensionMismatch,
                 "graph has ", graph_.size(), " nodes, lifted space ",
                 space_.nodes);
  QWLIFT_REQUIRE(!ops_.empty(), ErrorCode::kInvalidArgument,
                 "channel needs at least one Kraus operator");
  const std::size_t dim = space_.dim();
  for (const auto& op : ops_)
    QWLIFT_REQUIRE(op.dim() == dim, ErrorCode::kDimensionMismatch,
                   "Kraus operator side ", op.dim(), " != ", dim);

  // Locality: nonzero <c',v'|M|c,v> needs (v, v') in E.
  CMatrix completeness = CMatrix::Zero(dim, dim);
  for (std::size_t k = 0; k < ops_.size(); ++k) {
    const auto& m = ops_[k].sparse();
    for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
      for (KrausOp::Sparse::InnerIterator it(m, r); it; ++it) {
        const auto row = static_cast<std::size_t>(it.row());
        const auto col = static_cast<std::size_t>(it.col());
        if (!graph_.has_edge(space_.node_of(col), space_.node_of(row)))
          report_.locality_violations.push_back({k, row, col, it.value()});
        for (KrausOp::Sparse::InnerIterator jt(m, r); jt; ++jt)
          completeness(it.col(), jt.col()) +=
              std::conj(it.value()) * jt.value();
      }
    }
  }
  completeness -= CMatrix::Identity(dim, dim);
  report_.completeness_residual = completeness.cwiseAbs().maxCoeff();
  report_.local = report_.locality_violations.empty();
  report_.complete = report_.completeness_residual <= kCompletenessTolerance;
  report_.ok = report_.local && report_.complete;
}

void KrausChannel::apply_inplace(CMatrix& rho, CMatrix& scratch) const {
  QWLIFT_REQUIRE(report_.ok, ErrorCode::kInvariant,
                 "channel failed validation (local=", report_.local,
                 ", completeness residual ", report_.completeness_residual,
                 ")");
  check_square(rho, space_.dim(), "density operator");
  scratch.setZero(rho.rows(), rho.cols());
  if (unitary_) {
    unitary_->accumulate_hermitian_conjugation(rho, scratch);
    if (q_ > 0.0) {
      const Complex damp(1.0 - q_, 0.0);
      for (Eigen::Index j = 0; j < scratch.cols(); ++j)
        for (Eigen::Index i = 0; i < scratch.rows(); ++i)
          if (i != j) scratch(i, j) *= damp;
    }
  } else {
    for (const auto& op : ops_) op.accumulate_hermitian_conjugation(rho, scratch);
  }
  hermitize(scratch);
  rho.swap(scratch);
  check_populations(rho);
}

DensityOp KrausChannel::apply(const DensityOp& rho) const {
  QWLIFT_REQUIRE(rho.space() == space_, ErrorCode::kDimensionMismatch,
                 "density operator lives on a different lifted space");
  CMatrix out = rho.matrix();
  CMatrix scratch;
  apply_inplace(out, scratch);
  return DensityOp(DensityOp::Unchecked{}, space_, std::move(out));
}

ChannelReport validate_channel(const KrausChannel& ch) { return ch.report(); }

KrausChannel measured_unitary_channel(const KrausOp& unitary, double q,
                                      LiftedSpace space, const Graph& g) {
  QWLIFT_REQUIRE(q >= 0.0 && q <= 1.0, ErrorCode::kInvalidArgument,
                 "measurement probability q=", q, " outside [0,1]");
  QWLIFT_REQUIRE(unitary.dim() == space.dim(), ErrorCode::kDimensionMismatch,
                 "unitary side ", unitary.dim(), " != ", space.dim());
  const KrausOp::Sparse& u = unitary.sparse();
  {
    const CMatrix gram =
        CMatrix(u.adjoint() * u) - CMatrix::Identity(u.rows(), u.cols());
    const double residual = gram.cwiseAbs().maxCoeff();
    QWLIFT_REQUIRE(residual <= kCompletenessTolerance,
                   ErrorCode::kInvalidArgument, "U is not unitary (residual ",
                   residual, ")");
  }
  std::vector<KrausOp> ops;
  if (q < 1.0) ops.emplace_back(KrausOp::Sparse(std::sqrt(1.0 - q) * u));
  if (q > 0.0) {
    const double w = std::sqrt(q);
    for (Eigen::Index r = 0; r < u.outerSize(); ++r) {
      std::vector<Eigen::Triplet<Complex>> entries;
      for (KrausOp::Sparse::InnerIterator it(u, r); it; ++it)
        entries.emplace_back(r, it.col(), w * it.value());
      if (entries.empty()) continue;
      KrausOp::Sparse m(u.rows(), u.cols());
      m.setFromTriplets(entries.begin(), entries.end());
      ops.emplace_back(std::move(m));
    }
  }
  KrausChannel ch(space, g, std::move(ops));
  ch.unitary_ = unitary;
  ch.q_ = q;
  return ch;
}

KrausChannel measured_unitary_channel(const CMatrix& unitary, double q,
                                      LiftedSpace space, const Graph& g) {
  return measured_unitary_channel(KrausOp::from_dense(unitary), q, space, g);
}

DensityOp step(const KrausChannel& ch, const DensityOp& rho) {
  return ch.apply(rho);
}

DensityOp init_map(const Dist& p0, const CoinAssignment& coins) {
  const LiftedSpace& space = coins.space();
  QWLIFT_REQUIRE(p0.size() == space.nodes, ErrorCode::kDimensionMismatch,
                 "initial distribution over ", p0.size(), " nodes, expected ",
                 space.nodes);
  CMatrix rho = CMatrix::Zero(space.dim(), space.dim());
  for (NodeId v = 0; v < space.nodes; ++v) {
    const auto i = static_cast<Eigen::Index>(space.index(coins[v], v));
    rho(i, i) = p0[v];
  }
  return DensityOp(DensityOp::Unchecked{}, space, std::move(rho));
}

Dist node_marginal(const DensityOp& rho) {
  const LiftedSpace& space = rho.space();
  std::vector<double> p(space.nodes, 0.0);
  for (std::size_t i = 0; i < space.dim(); ++i)
    p[space.node_of(i)] +=
        rho.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i))
            .real();
  return to_dist(p);
}

// ---------------------------------------------------------------------------

ChannelSchedule measured_unitary_schedule(
    const KrausOp& unitary, std::function<double(std::size_t)> q_of_t,
    LiftedSpace space, const Graph& g) {
  struct Memo {
    KrausOp unitary;
    std::function<double(std::size_t)> q_of_t;
    LiftedSpace space;
    Graph graph;
    std::mutex mu;
    std::map<double, std::shared_ptr<const KrausChannel>> channels;
  };
  auto memo = std::make_shared<Memo>();
  memo->unitary = unitary;
  memo->q_of_t = std::move(q_of_t);
  memo->space = space;
  memo->graph = g;
  return [memo](std::size_t t) -> std::shared_ptr<const KrausChannel> {
    const double q = memo->q_of_t(t);
    std::lock_guard<std::mutex> lock(memo->mu);
    auto& slot = memo->channels[q];
    if (!slot)
      slot = std::make_shared<const KrausChannel>(measured_unitary_channel(
          memo->unitary, q, memo->space, memo->graph));
    return slot;
  };
}

namespace {

class ChannelCursor final : public ProcessCursor {
 public:
  ChannelCursor(ChannelSchedule schedule, const CoinAssignment& coins,
                const Dist& p0)
      : schedule_(std::move(schedule)),
        space_(coins.space()),
        rho_(init_map(p0, coins).matrix()),
        marginal_(p0.vec()) {}

  std::size_t time() const override { return t_; }
  const std::vector<double>& marginal() const override { return marginal_; }
  void advance() override {
    auto ch = schedule_(t_);
    QWLIFT_REQUIRE(ch && ch->space() == space_, ErrorCode::kDimensionMismatch,
                   "schedule returned a channel on a different space");
    ch->apply_inplace(rho_, scratch_);
    std::fill(marginal_.begin(), marginal_.end(), 0.0);
    for (std::size_t i = 0; i < space_.dim(); ++i)
      marginal_[space_.node_of(i)] +=
          rho_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i))
              .real();
    ++t_;
  }

 private:
  ChannelSchedule schedule_;
  LiftedSpace space_;
  CMatrix rho_;
  CMatrix scratch_;
  std::vector<double> marginal_;
  std::size_t t_ = 0;
};

}  // namespace

StochProcess induced_process(ChannelSchedule schedule, const Graph& g,
                             const CoinAssignment& coins) {
  QWLIFT_REQUIRE(g.size() == coins.space().nodes,
                 ErrorCode::kDimensionMismatch,
                 "coin assignment and graph disagree on node count");
  return StochProcess(
      ProcessKind::kQuantumWalk, g,
      [schedule = std::move(schedule),
       coins](const Dist& p0) -> std::unique_ptr<ProcessCursor> {
        return std::make_unique<ChannelCursor>(schedule, coins, p0);
      },
      "quantum walk");
}

StochProcess induced_process(KrausChannel ch, const CoinAssignment& coins) {
  QWLIFT_REQUIRE(ch.report().ok, ErrorCode::kInvariant,
                 "induced_process needs a validated channel");
  QWLIFT_REQUIRE(ch.space() == coins.space(), ErrorCode::kDimensionMismatch,
                 "coin assignment lives on a different lifted space");
  auto shared = std::make_shared<const KrausChannel>(std::move(ch));
  const Graph g = shared->graph();
  return induced_process(
      [shared](std::size_t) { return shared; }, g, coins);
}

}  // namespace qwlift
