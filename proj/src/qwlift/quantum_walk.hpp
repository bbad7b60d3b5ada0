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

#ifndef QWLIFT_QUANTUM_WALK_HPP_
#define QWLIFT_QUANTUM_WALK_HPP_

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "qwlift/graph.hpp"
#include "qwlift/process.hpp"

namespace qwlift {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kCompletenessTolerance = 1e-9;

// Joint coin x node index space, coin-major: i = c * nodes + v.
struct LiftedSpace {
  std::size_t coins = 1;
  std::size_t nodes = 1;

  std::size_t dim() const noexcept { return coins * nodes; }
  std::size_t index(std::size_t coin, NodeId v) const noexcept {
    return coin * nodes + v;
  }
  std::size_t coin_of(std::size_t i) const noexcept { return i / nodes; }
  NodeId node_of(std::size_t i) const noexcept { return i % nodes; }

  friend bool operator==(const LiftedSpace&, const LiftedSpace&) = default;
};

// One coin value per node: F maps delta_v to |c_v, v><c_v, v|.
class CoinAssignment {
 public:
  CoinAssignment(LiftedSpace space, std::vector<std::size_t> coins);
  static CoinAssignment constant(LiftedSpace space, std::size_t coin);

  const LiftedSpace& space() const noexcept { return space_; }
  std::size_t operator[](NodeId v) const { return coins_[v]; }
  const std::vector<std::size_t>& coins() const noexcept { return coins_; }

 private:
  LiftedSpace space_;
  std::vector<std::size_t> coins_;
};

class KrausChannel;

class DensityOp {
 public:
  // Validates Hermiticity, unit trace and positivity.
  DensityOp(LiftedSpace space, CMatrix rho);

  const LiftedSpace& space() const noexcept { return space_; }
  const CMatrix& matrix() const noexcept { return rho_; }

  // Smallest eigenvalue; O(dim^3).
  double min_eigenvalue() const;

 private:
  struct Unchecked {};
  DensityOp(Unchecked, LiftedSpace space, CMatrix rho)
      : space_(space), rho_(std::move(rho)) {}
  friend class KrausChannel;
  friend DensityOp init_map(const Dist&, const CoinAssignment&);
  friend DensityOp step(const KrausChannel&, const DensityOp&);

  LiftedSpace space_;
  CMatrix rho_;
};

// Sparse Kraus operator over the lifted space. Structural zeros are exact.
class KrausOp {
 public:
  using Sparse = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

  KrausOp() = default;
  explicit KrausOp(Sparse m);
  static KrausOp from_dense(const CMatrix& m);

  std::size_t dim() const noexcept {
    return static_cast<std::size_t>(m_.rows());
  }
  std::size_t nnz() const noexcept {
    return static_cast<std::size_t>(m_.nonZeros());
  }
  const Sparse& sparse() const noexcept { return m_; }
  CMatrix dense() const { return CMatrix(m_); }

  // out += M rho M^dagger.
  void accumulate_conjugation(const CMatrix& rho, CMatrix& out) const;
  // Same for Hermitian rho: computes one triangle and mirrors it.
  void accumulate_hermitian_conjugation(const CMatrix& rho,
                                        CMatrix& out) const;

 private:
  Sparse m_;
  std::vector<Eigen::Index> nonzero_rows_;
};

struct LocalityEntry {
  std::size_t op = 0;
  std::size_t row = 0;  // (c', v')
  std::size_t col = 0;  // (c, v)
  Complex value;
};

struct ChannelReport {
  bool ok = true;
  bool local = true;
  bool complete = true;
  std::vector<LocalityEntry> locality_violations;
  // max |(sum_k M_k^dagger M_k - I)_{ij}|
  double completeness_residual = 0.0;
};

// Local quantum channel rho -> sum_k M_k rho M_k^dagger over C x V.
class KrausChannel {
 public:
  KrausChannel(LiftedSpace space, Graph graph, std::vector<KrausOp> ops);

  const LiftedSpace& space() const noexcept { return space_; }
  const Graph& graph() const noexcept { return graph_; }
  const std::vector<KrausOp>& ops() const noexcept { return ops_; }
  const ChannelReport& report() const noexcept { return report_; }

  // Requires a valid channel. Re-hermitizes the output and checks trace and
  // diagonal; full positivity is DensityOp::min_eigenvalue's job.
  DensityOp apply(const DensityOp& rho) const;
  // Same on a raw Hermitian matrix, in place.
  void apply_inplace(CMatrix& rho, CMatrix& scratch) const;

 private:
  friend KrausChannel measured_unitary_channel(const KrausOp&, double,
                                               LiftedSpace, const Graph&);

  LiftedSpace space_;
  Graph graph_;
  std::vector<KrausOp> ops_;
  ChannelReport report_;
  // Set for measured unitary walks: the channel then equals U rho U^dagger
  // with every coherence damped by (1 - q), which is much cheaper.
  std::optional<KrausOp> unitary_;
  double q_ = 0.0;
};

ChannelReport validate_channel(const KrausChannel& ch);

// {sqrt(1-q) U} u {sqrt(q) |c,v><c,v| U}. Zero-weight operators are omitted.
KrausChannel measured_unitary_channel(const KrausOp& unitary, double q,
                                      LiftedSpace space, const Graph& g);
KrausChannel measured_unitary_channel(const CMatrix& unitary, double q,
                                      LiftedSpace space, const Graph& g);

DensityOp step(const KrausChannel& ch, const DensityOp& rho);

DensityOp init_map(const Dist& p0, const CoinAssignment& coins);

Dist node_marginal(const DensityOp& rho);

// Channel applied on the step t -> t+1.
using ChannelSchedule =
    std::function<std::shared_ptr<const KrausChannel>(std::size_t t)>;

// Measured walk with a time-dependent measurement probability q_t.
ChannelSchedule measured_unitary_schedule(
    const KrausOp& unitary, std::function<double(std::size_t)> q_of_t,
    LiftedSpace space, const Graph& g);

StochProcess induced_process(KrausChannel ch, const CoinAssignment& coins);
StochProcess induced_process(ChannelSchedule schedule, const Graph& g,
                             const CoinAssignment& coins);

}  // namespace qwlift

#endif  // QWLIFT_QUANTUM_WALK_HPP_
