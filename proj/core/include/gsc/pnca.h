// Copyright 2026 The gscnet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GSC_PNCA_H_
#define GSC_PNCA_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gsc/dense.h"
#include "gsc/feature_matrix.h"
#include "gsc/graph.h"

namespace gsc {

enum class Polarity { kPositive, kNegative };

// First offending entry when a classification comes out negative. For node
// activations row == col == the node whose coefficient failed.
struct ActivationWitness {
  std::size_t row = 0;
  std::size_t col = 0;
  friend bool operator==(const ActivationWitness&,
                         const ActivationWitness&) = default;
};

struct ActivationClass {
  Polarity polarity = Polarity::kNegative;
  std::optional<ActivationWitness> witness;
  // Empty when positive.
  std::string reason;
  // Diagnostic: every coefficient was zero (negative by the catch-all).
  bool all_zero = false;

  bool positive() const { return polarity == Polarity::kPositive; }
};

struct NeighborCoefficient {
  int node = 0;
  double coeff = 0.0;
};

// x*_t = self_coeff x_t + sum over listed neighbors of coeff x_s, where every
// listed node must lie 1..hops steps from `target`. Unlisted nodes inside the
// neighborhood contribute zero.
struct NodeActivationSpec {
  int target = 0;
  int hops = 1;
  double self_coeff = 0.0;
  std::vector<NeighborCoefficient> neighbors;
};

// Breadth-first hop distance from `source`; -1 beyond max_hops.
std::vector<int> HopDistances(const SparseGraph& g, int source, int max_hops);

// Spec covering every node within `hops` of `target` (BFS order), all set to
// `coeff`.
NodeActivationSpec FullNeighborhoodSpec(const SparseGraph& g, int target,
                                        int hops, double self_coeff,
                                        double coeff);

// Sums neighbors in their listed order, so relabeling nodes (and `spec` with
// them) reproduces the result bit for bit.
std::vector<double> NodeActivation(const FeatureMatrix& x, const SparseGraph& g,
                                   const NodeActivationSpec& spec);

// Positive iff every neighbor coefficient is >= 0, at least one is > 0, and
// self_coeff > 0. Everything else is negative.
ActivationClass ClassifyNodeActivation(const NodeActivationSpec& spec);

// Classifies a dense transformation against graph `g`, which must carry a
// self-loop on every node. With steps == 1 this is the literal support
// test: T_ij > 0 on edges and T_ij == 0 elsewhere. For steps > 1 the matrix
// is read as a steps-hop activation: strictly positive on edges,
// non-negative within `steps` hops and exactly zero beyond. Throws
// kSizeGuard above n = 2000.
ActivationClass ClassifyGraphActivation(const DenseMatrix& t,
                                        const SparseGraph& g, int steps = 1);

// Expands sum_j coeffs[j] (2I - L)^j densely via the sparse recurrence and
// classifies it against g plus self-loops with steps = max(1, degree).
// Throws kContractViolation for a negative coefficient.
ActivationClass CheckPositiveCombination(std::span<const double> coeffs,
                                         const SparseGraph& g);

// Largest graph the dense classification tools accept.
inline constexpr std::size_t kClassifyMaxNodes = 2000;

// Fraction of undirected non-loop edges joining different labels.
// Throws kDegenerateInput when there are no such edges.
double LabelSmoothness(const SparseGraph& g, std::span<const int> labels);

// x^T L x / x^T x. Throws kInvalidInput for the zero vector.
double RayleighQuotient(const SparseGraph& g, std::span<const double> x);

}  // namespace gsc

#endif  // GSC_PNCA_H_
