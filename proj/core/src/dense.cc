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

#include "gsc/dense.h"

#include <cmath>
#include <string>

#include "gsc/error.h"

namespace gsc {
namespace {

void GuardSize(const SparseGraph& g, std::size_t limit) {
  if (g.num_nodes() > limit) {
    throw Error(ErrorCode::kSizeGuard,
                "dense oracle limited to n <= " + std::to_string(limit) +
                    ", got " + std::to_string(g.num_nodes()));
  }
}

DenseMatrix Normalize(const DenseMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<double> inv_sqrt(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double deg = 0.0;
    for (std::size_t j = 0; j < n; ++j) deg += a(i, j);
    if (deg > 0.0) inv_sqrt[i] = 1.0 / std::sqrt(deg);
  }
  DenseMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out(i, j) = inv_sqrt[i] * a(i, j) * inv_sqrt[j];
    }
  }
  return out;
}

}  // namespace

DenseMatrix Multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::kInvalidInput, "Multiply: inner dimension mismatch");
  }
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* oi = out.row(i).data();
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const double* bk = b.row(k).data();
      for (std::size_t j = 0; j < b.cols(); ++j) oi[j] += aik * bk[j];
    }
  }
  return out;
}

DenseMatrix Transpose(const DenseMatrix& a) {
  DenseMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  }
  return out;
}

DenseMatrix Add(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out = a;
  out.AddScaled(b, 1.0);
  return out;
}

DenseMatrix Scale(const DenseMatrix& a, double s) {
  DenseMatrix out = a;
  for (double& v : out.values()) v *= s;
  return out;
}

DenseMatrix DenseAdjacency(const SparseGraph& g) {
  GuardSize(g, 2000);
  const std::size_t n = g.num_nodes();
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int j : g.neighbors(i)) a(i, j) = 1.0;
  }
  return a;
}

DenseMatrix DenseNormalizedAdjacency(const SparseGraph& g) {
  GuardSize(g, kDenseOracleMaxNodes);
  return Normalize(DenseAdjacency(g));
}

DenseMatrix DenseLaplacian(const SparseGraph& g) {
  DenseMatrix l = Scale(DenseNormalizedAdjacency(g), -1.0);
  for (std::size_t i = 0; i < l.rows(); ++i) l(i, i) += 1.0;
  return l;
}

DenseMatrix DenseShifted(const SparseGraph& g) {
  DenseMatrix s = DenseNormalizedAdjacency(g);
  for (std::size_t i = 0; i < s.rows(); ++i) s(i, i) += 1.0;
  return s;
}

DenseMatrix DenseGcnNorm(const SparseGraph& g) {
  GuardSize(g, kDenseOracleMaxNodes);
  DenseMatrix a = DenseAdjacency(g);
  for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) = 1.0;
  return Normalize(a);
}

}  // namespace gsc
