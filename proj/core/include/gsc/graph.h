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

#ifndef GSC_GRAPH_H_
#define GSC_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include "gsc/feature_matrix.h"

namespace gsc {

// Per-node membership flags (train/val/test selections, loss masks).
using NodeMask = std::vector<std::uint8_t>;

struct Edge {
  int u = 0;
  int v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Symmetric, unweighted adjacency in CSR form. Rows are sorted and free of
// duplicates; a self-loop occupies one slot in its row and counts once
// toward the degree. Instances are immutable after construction.
class SparseGraph {
 public:
  SparseGraph() = default;

  std::size_t num_nodes() const { return degrees_.size(); }
  // Stored adjacency entries (each undirected edge twice, loops once).
  std::size_t nnz() const { return col_idx_.size(); }
  // Undirected edges excluding self-loops, each counted once.
  std::size_t num_undirected_edges() const {
    return (col_idx_.size() - num_self_loops_) / 2;
  }
  std::size_t num_self_loops() const { return num_self_loops_; }
  std::size_t num_isolated() const { return num_isolated_; }

  std::span<const std::size_t> row_ptr() const { return row_ptr_; }
  std::span<const int> col_idx() const { return col_idx_; }
  std::span<const int> neighbors(std::size_t i) const {
    return {col_idx_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }
  const std::vector<double>& degrees() const { return degrees_; }
  double degree(std::size_t i) const { return degrees_[i]; }
  // D^{-1/2} with zero at isolated nodes.
  const std::vector<double>& inv_sqrt_degrees() const { return inv_sqrt_deg_; }

  bool HasEdge(int u, int v) const;
  bool HasSelfLoop(int i) const { return HasEdge(i, i); }
  bool HasAllSelfLoops() const { return num_self_loops_ == num_nodes(); }

  // Edges with u <= v, loops included, in row-major order.
  std::vector<Edge> UndirectedEdges() const;
  std::size_t CountComponents() const;
  // Copy with a self-loop on every node (the A-hat variant).
  SparseGraph WithSelfLoops() const;
  std::uint64_t Hash() const;

  friend SparseGraph BuildCsr(std::span<const Edge> edges, std::size_t n);

 private:
  std::vector<std::size_t> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> degrees_;
  std::vector<double> inv_sqrt_deg_;
  std::size_t num_self_loops_ = 0;
  std::size_t num_isolated_ = 0;
};

// Symmetrizes and deduplicates `edges`. Throws kInvalidInput for endpoints
// outside [0, n).
SparseGraph BuildCsr(std::span<const Edge> edges, std::size_t n);

enum class IsolatedNodePolicy {
  // Degree-0 rows of D^{-1/2} A D^{-1/2} are zero, so L acts as I there.
  kIdentity,
  // Degree-0 nodes raise kDegenerateInput.
  kReject,
};

// L X = X - D^{-1/2} A D^{-1/2} X, matrix-free.
FeatureMatrix ApplyLaplacian(
    const SparseGraph& g, const FeatureMatrix& x,
    IsolatedNodePolicy policy = IsolatedNodePolicy::kIdentity);
// (2I - L) X = X + D^{-1/2} A D^{-1/2} X, matrix-free.
FeatureMatrix ApplyShifted(
    const SparseGraph& g, const FeatureMatrix& x,
    IsolatedNodePolicy policy = IsolatedNodePolicy::kIdentity);
// D-hat^{-1/2} A-hat D-hat^{-1/2} X where A-hat = A + I (existing loops are
// not doubled).
FeatureMatrix ApplyGcnNorm(const SparseGraph& g, const FeatureMatrix& x);

// Output-parameter forms; `out` is resized as needed and must not alias `x`.
void ApplyLaplacianTo(const SparseGraph& g, const FeatureMatrix& x,
                      FeatureMatrix& out,
                      IsolatedNodePolicy policy = IsolatedNodePolicy::kIdentity);
void ApplyShiftedTo(const SparseGraph& g, const FeatureMatrix& x,
                    FeatureMatrix& out,
                    IsolatedNodePolicy policy = IsolatedNodePolicy::kIdentity);
void ApplyGcnNormTo(const SparseGraph& g, const FeatureMatrix& x,
                    FeatureMatrix& out);

struct PermutedGraph {
  SparseGraph graph;
  FeatureMatrix features;
};

// Node i moves to position perm[i]: output adjacency is P A P^T and output
// features are P X, with P[perm[i], i] = 1.
PermutedGraph PermuteGraph(const SparseGraph& g, const FeatureMatrix& x,
                           std::span<const int> perm);
std::vector<int> InversePermutation(std::span<const int> perm);
// Throws kInvalidInput unless perm is a bijection on [0, n).
void ValidatePermutation(std::span<const int> perm, std::size_t n);

// Edge-list text: one "u v" pair per line, 0-indexed, '#' starts a comment.
struct EdgeList {
  std::vector<Edge> edges;
  // Source line of each edge, 1-based.
  std::vector<std::size_t> lines;
  // 1 + largest endpoint seen, 0 when empty.
  std::size_t min_nodes = 0;
};
EdgeList ParseEdgeList(std::istream& in);
EdgeList ReadEdgeList(const std::filesystem::path& path);
// Writes each undirected edge (loops included) once.
void WriteEdgeList(const SparseGraph& g, std::ostream& out);

}  // namespace gsc

#endif  // GSC_GRAPH_H_
