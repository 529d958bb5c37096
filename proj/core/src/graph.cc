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

#include "gsc/graph.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>
#include <string_view>

#include "gsc/error.h"

namespace gsc {
namespace {

void CheckIsolated(const SparseGraph& g, IsolatedNodePolicy policy) {
  if (policy == IsolatedNodePolicy::kReject && g.num_isolated() > 0) {
    throw Error(ErrorCode::kDegenerateInput,
                std::to_string(g.num_isolated()) +
                    " isolated node(s); D^{-1/2} is undefined at degree 0");
  }
}

// out = x + sign * D^{-1/2} A D^{-1/2} x. Both Laplacian forms share this
// loop so their per-entry arithmetic differs only in the final sign.
void NormalizedShift(const SparseGraph& g, const FeatureMatrix& x,
                     FeatureMatrix& out, double sign) {
  const std::size_t n = g.num_nodes();
  const std::size_t d = x.cols();
  if (x.rows() != n) {
    throw Error(ErrorCode::kInvalidInput,
                "feature rows " + std::to_string(x.rows()) +
                    " != node count " + std::to_string(n));
  }
  if (out.rows() != n || out.cols() != d) out = FeatureMatrix(n, d);
  const auto& s = g.inv_sqrt_degrees();
  const auto row_ptr = g.row_ptr();
  const auto col_idx = g.col_idx();
  std::vector<double> acc(d);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t e = row_ptr[i]; e < row_ptr[i + 1]; ++e) {
      const int j = col_idx[e];
      const double w = s[j];
      const double* xj = x.row(j).data();
      for (std::size_t c = 0; c < d; ++c) acc[c] += w * xj[c];
    }
    const double si = sign * s[i];
    const double* xi = x.row(i).data();
    double* oi = out.row(i).data();
    for (std::size_t c = 0; c < d; ++c) oi[c] = xi[c] + si * acc[c];
  }
}

}  // namespace

SparseGraph BuildCsr(std::span<const Edge> edges, std::size_t n) {
  std::vector<std::vector<int>> rows(n);
  for (const Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || static_cast<std::size_t>(e.u) >= n ||
        static_cast<std::size_t>(e.v) >= n) {
      throw Error(ErrorCode::kInvalidInput,
                  "edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                      ") out of range for n = " + std::to_string(n));
    }
    rows[e.u].push_back(e.v);
    if (e.u != e.v) rows[e.v].push_back(e.u);
  }

  SparseGraph g;
  g.row_ptr_.assign(n + 1, 0);
  g.degrees_.assign(n, 0.0);
  g.inv_sqrt_deg_.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto& r = rows[i];
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    g.row_ptr_[i + 1] = g.row_ptr_[i] + r.size();
  }
  g.col_idx_.reserve(g.row_ptr_[n]);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = rows[i];
    g.col_idx_.insert(g.col_idx_.end(), r.begin(), r.end());
    g.degrees_[i] = static_cast<double>(r.size());
    if (r.empty()) {
      ++g.num_isolated_;
    } else {
      g.inv_sqrt_deg_[i] = 1.0 / std::sqrt(g.degrees_[i]);
    }
    if (std::binary_search(r.begin(), r.end(), static_cast<int>(i))) {
      ++g.num_self_loops_;
    }
  }
  return g;
}

bool SparseGraph::HasEdge(int u, int v) const {
  if (u < 0 || static_cast<std::size_t>(u) >= num_nodes()) return false;
  const auto row = neighbors(u);
  return std::binary_search(row.begin(), row.end(), v);
}

std::vector<Edge> SparseGraph::UndirectedEdges() const {
  std::vector<Edge> out;
  out.reserve(num_undirected_edges() + num_self_loops_);
  for (std::size_t i = 0; i < num_nodes(); ++i) {
    for (int j : neighbors(i)) {
      if (static_cast<std::size_t>(j) >= i) {
        out.push_back({static_cast<int>(i), j});
      }
    }
  }
  return out;
}

std::size_t SparseGraph::CountComponents() const {
  const std::size_t n = num_nodes();
  std::vector<char> seen(n, 0);
  std::vector<int> stack;
  std::size_t components = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++components;
    seen[s] = 1;
    stack.push_back(static_cast<int>(s));
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v : neighbors(u)) {
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
  }
  return components;
}

SparseGraph SparseGraph::WithSelfLoops() const {
  std::vector<Edge> edges = UndirectedEdges();
  for (std::size_t i = 0; i < num_nodes(); ++i) {
    edges.push_back({static_cast<int>(i), static_cast<int>(i)});
  }
  return BuildCsr(edges, num_nodes());
}

std::uint64_t SparseGraph::Hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xff;
      h *= 1099511628211ULL;
    }
  };
  mix(num_nodes());
  for (std::size_t p : row_ptr_) mix(p);
  for (int c : col_idx_) mix(static_cast<std::uint64_t>(c));
  return h;
}

void ApplyLaplacianTo(const SparseGraph& g, const FeatureMatrix& x,
                      FeatureMatrix& out, IsolatedNodePolicy policy) {
  CheckIsolated(g, policy);
  NormalizedShift(g, x, out, -1.0);
}

void ApplyShiftedTo(const SparseGraph& g, const FeatureMatrix& x,
                    FeatureMatrix& out, IsolatedNodePolicy policy) {
  CheckIsolated(g, policy);
  NormalizedShift(g, x, out, 1.0);
}

FeatureMatrix ApplyLaplacian(const SparseGraph& g, const FeatureMatrix& x,
                             IsolatedNodePolicy policy) {
  FeatureMatrix out;
  ApplyLaplacianTo(g, x, out, policy);
  return out;
}

FeatureMatrix ApplyShifted(const SparseGraph& g, const FeatureMatrix& x,
                           IsolatedNodePolicy policy) {
  FeatureMatrix out;
  ApplyShiftedTo(g, x, out, policy);
  return out;
}

void ApplyGcnNormTo(const SparseGraph& g, const FeatureMatrix& x,
                    FeatureMatrix& out) {
  const std::size_t n = g.num_nodes();
  const std::size_t d = x.cols();
  if (x.rows() != n) {
    throw Error(ErrorCode::kInvalidInput, "feature rows != node count");
  }
  if (out.rows() != n || out.cols() != d) out = FeatureMatrix(n, d);
  // Degrees of A-hat: add the loop unless one is already stored.
  std::vector<double> s(n);
  std::vector<char> looped(n);
  for (std::size_t i = 0; i < n; ++i) {
    looped[i] = g.HasSelfLoop(static_cast<int>(i));
    s[i] = 1.0 / std::sqrt(g.degree(i) + (looped[i] ? 0.0 : 1.0));
  }
  const auto row_ptr = g.row_ptr();
  const auto col_idx = g.col_idx();
  std::vector<double> acc(d);
  for (std::size_t i = 0; i < n; ++i) {
    const double* xi = x.row(i).data();
    for (std::size_t c = 0; c < d; ++c) {
      acc[c] = looped[i] ? 0.0 : s[i] * xi[c];
    }
    for (std::size_t e = row_ptr[i]; e < row_ptr[i + 1]; ++e) {
      const int j = col_idx[e];
      const double w = s[j];
      const double* xj = x.row(j).data();
      for (std::size_t c = 0; c < d; ++c) acc[c] += w * xj[c];
    }
    double* oi = out.row(i).data();
    for (std::size_t c = 0; c < d; ++c) oi[c] = s[i] * acc[c];
  }
}

FeatureMatrix ApplyGcnNorm(const SparseGraph& g, const FeatureMatrix& x) {
  FeatureMatrix out;
  ApplyGcnNormTo(g, x, out);
  return out;
}

void ValidatePermutation(std::span<const int> perm, std::size_t n) {
  if (perm.size() != n) {
    throw Error(ErrorCode::kInvalidInput,
                "permutation length " + std::to_string(perm.size()) +
                    " != " + std::to_string(n));
  }
  std::vector<char> hit(n, 0);
  for (int p : perm) {
    if (p < 0 || static_cast<std::size_t>(p) >= n || hit[p]) {
      throw Error(ErrorCode::kInvalidInput, "permutation is not a bijection");
    }
    hit[p] = 1;
  }
}

std::vector<int> InversePermutation(std::span<const int> perm) {
  ValidatePermutation(perm, perm.size());
  std::vector<int> inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    inv[perm[i]] = static_cast<int>(i);
  }
  return inv;
}

PermutedGraph PermuteGraph(const SparseGraph& g, const FeatureMatrix& x,
                           std::span<const int> perm) {
  const std::size_t n = g.num_nodes();
  ValidatePermutation(perm, n);
  if (x.rows() != n) {
    throw Error(ErrorCode::kInvalidInput, "feature rows != node count");
  }
  std::vector<Edge> edges = g.UndirectedEdges();
  for (Edge& e : edges) e = {perm[e.u], perm[e.v]};
  PermutedGraph out{BuildCsr(edges, n), FeatureMatrix(n, x.cols())};
  for (std::size_t i = 0; i < n; ++i) {
    const auto src = x.row(i);
    std::copy(src.begin(), src.end(), out.features.row(perm[i]).begin());
  }
  return out;
}

EdgeList ParseEdgeList(std::istream& in) {
  EdgeList out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    int ids[2];
    int count = 0;
    std::size_t pos = 0;
    while (true) {
      while (pos < view.size() &&
             (view[pos] == ' ' || view[pos] == '\t' || view[pos] == '\r' ||
              view[pos] == ',')) {
        ++pos;
      }
      if (pos >= view.size()) break;
      if (count == 2) {
        throw Error(ErrorCode::kDataFormat, "expected two node ids", line_no);
      }
      int value = 0;
      auto [ptr, ec] =
          std::from_chars(view.data() + pos, view.data() + view.size(), value);
      if (ec != std::errc() || value < 0) {
        throw Error(ErrorCode::kDataFormat,
                    "unparseable node id in '" + std::string(view) + "'",
                    line_no);
      }
      ids[count++] = value;
      pos = static_cast<std::size_t>(ptr - view.data());
    }
    if (count == 0) continue;
    if (count != 2) {
      throw Error(ErrorCode::kDataFormat, "expected two node ids", line_no);
    }
    out.edges.push_back({ids[0], ids[1]});
    out.lines.push_back(line_no);
    out.min_nodes = std::max<std::size_t>(
        out.min_nodes, static_cast<std::size_t>(std::max(ids[0], ids[1])) + 1);
  }
  return out;
}

EdgeList ReadEdgeList(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open edge list " + path.string());
  }
  return ParseEdgeList(in);
}

void WriteEdgeList(const SparseGraph& g, std::ostream& out) {
  for (const Edge& e : g.UndirectedEdges()) out << e.u << ' ' << e.v << '\n';
}

}  // namespace gsc
