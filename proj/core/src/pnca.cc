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

#include "gsc/pnca.h"

#include <algorithm>
#include <deque>
#include <string>

#include "gsc/error.h"
#include "gsc/poly_basis.h"

namespace gsc {
namespace {

void CheckNode(const SparseGraph& g, int node) {
  if (node < 0 || static_cast<std::size_t>(node) >= g.num_nodes()) {
    throw Error(ErrorCode::kInvalidInput,
                "node " + std::to_string(node) + " out of range");
  }
}

ActivationClass Negative(std::size_t row, std::size_t col, std::string why) {
  ActivationClass out;
  out.polarity = Polarity::kNegative;
  out.witness = ActivationWitness{row, col};
  out.reason = std::move(why);
  return out;
}

}  // namespace

std::vector<int> HopDistances(const SparseGraph& g, int source, int max_hops) {
  CheckNode(g, source);
  std::vector<int> dist(g.num_nodes(), -1);
  dist[source] = 0;
  std::deque<int> queue{source};
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    if (dist[u] == max_hops) continue;
    for (int v : g.neighbors(u)) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

NodeActivationSpec FullNeighborhoodSpec(const SparseGraph& g, int target,
                                        int hops, double self_coeff,
                                        double coeff) {
  const std::vector<int> dist = HopDistances(g, target, hops);
  NodeActivationSpec spec{target, hops, self_coeff, {}};
  for (int k = 1; k <= hops; ++k) {
    for (std::size_t s = 0; s < dist.size(); ++s) {
      if (dist[s] == k) spec.neighbors.push_back({static_cast<int>(s), coeff});
    }
  }
  return spec;
}

std::vector<double> NodeActivation(const FeatureMatrix& x, const SparseGraph& g,
                                   const NodeActivationSpec& spec) {
  CheckNode(g, spec.target);
  if (x.rows() != g.num_nodes()) {
    throw Error(ErrorCode::kInvalidInput, "feature rows != node count");
  }
  if (spec.self_coeff < 0.0) {
    throw Error(ErrorCode::kInvalidInput, "self coefficient must be >= 0");
  }
  const std::vector<int> dist = HopDistances(g, spec.target, spec.hops);
  const auto self = x.row(spec.target);
  std::vector<double> out(x.cols());
  for (std::size_t c = 0; c < out.size(); ++c) {
    out[c] = spec.self_coeff * self[c];
  }
  for (const NeighborCoefficient& nc : spec.neighbors) {
    CheckNode(g, nc.node);
    if (nc.node == spec.target || dist[nc.node] < 1) {
      throw Error(ErrorCode::kInvalidInput,
                  "node " + std::to_string(nc.node) + " is not within " +
                      std::to_string(spec.hops) + " hops of " +
                      std::to_string(spec.target));
    }
    const auto xs = x.row(nc.node);
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += nc.coeff * xs[c];
  }
  return out;
}

ActivationClass ClassifyNodeActivation(const NodeActivationSpec& spec) {
  const auto t = static_cast<std::size_t>(spec.target);
  bool any_positive = false;
  bool all_zero = spec.self_coeff == 0.0;
  std::optional<ActivationClass> verdict;
  for (const NeighborCoefficient& nc : spec.neighbors) {
    if (nc.coeff != 0.0) all_zero = false;
    if (nc.coeff > 0.0) any_positive = true;
    if (nc.coeff < 0.0 && !verdict) {
      const auto s = static_cast<std::size_t>(nc.node);
      verdict = Negative(s, s, "negative neighbor coefficient");
    }
  }
  if (!verdict && !(spec.self_coeff > 0.0)) {
    verdict = Negative(t, t, "self coefficient is not positive");
  }
  if (!verdict && !any_positive) {
    verdict = Negative(t, t, "no positive neighbor coefficient");
  }
  if (!verdict) {
    ActivationClass out;
    out.polarity = Polarity::kPositive;
    return out;
  }
  verdict->all_zero = all_zero;
  return *verdict;
}

ActivationClass ClassifyGraphActivation(const DenseMatrix& t,
                                        const SparseGraph& g, int steps) {
  const std::size_t n = g.num_nodes();
  if (n > kClassifyMaxNodes) {
    throw Error(ErrorCode::kSizeGuard,
                "dense classification limited to n <= " +
                    std::to_string(kClassifyMaxNodes) +
                    "; use NodeActivation/ClassifyNodeActivation on sampled "
                    "nodes instead");
  }
  if (t.rows() != n || t.cols() != n) {
    throw Error(ErrorCode::kInvalidInput, "transformation must be n x n");
  }
  if (!g.HasAllSelfLoops()) {
    throw Error(ErrorCode::kInvalidInput,
                "graph activation is defined on a graph with self-loops; "
                "classify against g.WithSelfLoops()");
  }
  if (steps < 1) throw Error(ErrorCode::kInvalidInput, "steps must be >= 1");

  bool all_zero = true;
  for (double v : t.values()) {
    if (v != 0.0) {
      all_zero = false;
      break;
    }
  }
  std::optional<ActivationClass> verdict;
  for (std::size_t i = 0; i < n && !verdict; ++i) {
    const std::vector<int> dist =
        steps == 1 ? std::vector<int>() : HopDistances(g, static_cast<int>(i),
                                                       steps);
    const auto row = g.neighbors(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double v = t(i, j);
      const bool edge =
          std::binary_search(row.begin(), row.end(), static_cast<int>(j));
      const bool reachable = edge || (steps > 1 && dist[j] >= 0);
      if (edge && !(v > 0.0)) {
        verdict = Negative(i, j, "entry on an edge is not positive");
        break;
      }
      if (!edge && reachable && v < 0.0) {
        verdict = Negative(i, j, "negative entry within reach");
        break;
      }
      if (!reachable && v != 0.0) {
        verdict = Negative(i, j, "non-zero entry outside the edge support");
        break;
      }
    }
  }
  if (!verdict) {
    ActivationClass out;
    out.polarity = Polarity::kPositive;
    return out;
  }
  verdict->all_zero = all_zero;
  return *verdict;
}

ActivationClass CheckPositiveCombination(std::span<const double> coeffs,
                                         const SparseGraph& g) {
  if (coeffs.empty()) {
    throw Error(ErrorCode::kInvalidInput, "empty coefficient list");
  }
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (coeffs[j] < 0.0) {
      throw Error(ErrorCode::kContractViolation,
                  "coefficient " + std::to_string(j) +
                      " is negative; the non-negative sum hypothesis fails");
    }
  }
  if (g.num_nodes() > kClassifyMaxNodes) {
    throw Error(ErrorCode::kSizeGuard,
                "dense classification limited to n <= " +
                    std::to_string(kClassifyMaxNodes));
  }
  const int degree = static_cast<int>(coeffs.size()) - 1;
  // Column i of the expansion applied to I is the i-th column of the
  // polynomial; the operator is symmetric so rows and columns coincide.
  const BasisCache cache = BuildBasisCache(
      g, FeatureMatrix::Identity(g.num_nodes()), degree, 0);
  FilterSpec spec;
  spec.alpha.assign(coeffs.begin(), coeffs.end());
  const DenseMatrix expanded = GscCombine(cache, spec);
  return ClassifyGraphActivation(expanded, g.WithSelfLoops(),
                                 std::max(1, degree));
}

double LabelSmoothness(const SparseGraph& g, std::span<const int> labels) {
  if (labels.size() != g.num_nodes()) {
    throw Error(ErrorCode::kInvalidInput, "label count != node count");
  }
  std::size_t edges = 0;
  std::size_t crossing = 0;
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    for (int j : g.neighbors(i)) {
      if (static_cast<std::size_t>(j) <= i) continue;
      ++edges;
      if (labels[i] != labels[j]) ++crossing;
    }
  }
  if (edges == 0) {
    throw Error(ErrorCode::kDegenerateInput,
                "label smoothness needs at least one non-loop edge");
  }
  return static_cast<double>(crossing) / static_cast<double>(edges);
}

double RayleighQuotient(const SparseGraph& g, std::span<const double> x) {
  if (x.size() != g.num_nodes()) {
    throw Error(ErrorCode::kInvalidInput, "signal length != node count");
  }
  double norm2 = 0.0;
  for (double v : x) norm2 += v * v;
  if (norm2 == 0.0) {
    throw Error(ErrorCode::kInvalidInput, "Rayleigh quotient of zero vector");
  }
  const FeatureMatrix lx = ApplyLaplacian(g, FeatureMatrix::Column(x));
  double energy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) energy += x[i] * lx(i, 0);
  return energy / norm2;
}

}  // namespace gsc
