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

#include "gsc/verify.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gsc/error.h"

namespace gsc {
namespace {

// Householder reduction of the symmetric matrix held in v (overwritten with
// the accumulated transform) to tridiagonal form: diagonal d, subdiagonal e.
void Tridiagonalize(DenseMatrix& v, std::vector<double>& d,
                    std::vector<double>& e) {
  const int n = static_cast<int>(v.rows());
  for (int j = 0; j < n; ++j) d[j] = v(n - 1, j);

  for (int i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (int k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (int j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (int k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (int j = 0; j < i; ++j) e[j] = 0.0;

      for (int j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        for (int k = j + 1; k <= i - 1; ++k) {
          g += v(k, j) * d[k];
          e[k] += v(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (int j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (int j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (int j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (int k = j; k <= i - 1; ++k) v(k, j) -= (f * e[k] + g * d[k]);
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  // Accumulate the transformations.
  for (int i = 0; i < n - 1; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (int k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
      for (int j = 0; j <= i; ++j) {
        double g = 0.0;
        for (int k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
        for (int k = 0; k <= i; ++k) v(k, j) -= g * d[k];
      }
    }
    for (int k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
  }
  for (int j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit QL iterations on the tridiagonal (d, e), rotating v alongside.
// Leaves eigenvalues in d sorted ascending.
void TridiagonalQl(DenseMatrix& v, std::vector<double>& d,
                   std::vector<double>& e) {
  const int n = static_cast<int>(v.rows());
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    int m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > 100) {
          throw Error(ErrorCode::kDegenerateInput,
                      "QL iteration failed to converge");
        }
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (int i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0;
        double c2 = c;
        double c3 = c;
        const double el1 = e[l + 1];
        double s = 0.0;
        double s2 = 0.0;
        for (int i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          for (int k = 0; k < n; ++k) {
            h = v(k, i + 1);
            v(k, i + 1) = s * v(k, i) + c * h;
            v(k, i) = c * v(k, i) - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }

  for (int i = 0; i < n - 1; ++i) {
    int k = i;
    double p = d[i];
    for (int j = i + 1; j < n; ++j) {
      if (d[j] < p) {
        k = j;
        p = d[j];
      }
    }
    if (k != i) {
      d[k] = d[i];
      d[i] = p;
      for (int j = 0; j < n; ++j) std::swap(v(j, i), v(j, k));
    }
  }
}

}  // namespace

EigenSystem SymmetricEigen(const DenseMatrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::kInvalidInput, "SymmetricEigen: matrix not square");
  }
  const std::size_t n = a.rows();
  EigenSystem out;
  if (n == 0) return out;
  out.eigenvectors = a;
  out.eigenvalues.assign(n, 0.0);
  std::vector<double> e(n, 0.0);
  Tridiagonalize(out.eigenvectors, out.eigenvalues, e);
  TridiagonalQl(out.eigenvectors, out.eigenvalues, e);
  return out;
}

EigenSystem DenseEigensystem(const SparseGraph& g) {
  if (g.num_nodes() > kDenseOracleMaxNodes) {
    throw Error(ErrorCode::kSizeGuard,
                "eigensystem oracle limited to n <= " +
                    std::to_string(kDenseOracleMaxNodes));
  }
  return SymmetricEigen(DenseLaplacian(g));
}

double ReconstructionResidual(const EigenSystem& eig, const DenseMatrix& a) {
  const std::size_t n = eig.eigenvalues.size();
  DenseMatrix scaled = eig.eigenvectors;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) scaled(i, j) *= eig.eigenvalues[j];
  }
  const DenseMatrix rebuilt = Multiply(scaled, Transpose(eig.eigenvectors));
  DenseMatrix diff = rebuilt;
  diff.AddScaled(a, -1.0);
  return FrobeniusNorm(diff);
}

double OrthogonalityResidual(const EigenSystem& eig) {
  DenseMatrix gram =
      Multiply(Transpose(eig.eigenvectors), eig.eigenvectors);
  for (std::size_t i = 0; i < gram.rows(); ++i) gram(i, i) -= 1.0;
  return FrobeniusNorm(gram);
}

FeatureMatrix SpectralFilterOracle(const EigenSystem& eig,
                                   const SpectralResponse& h,
                                   const FeatureMatrix& x) {
  const std::size_t n = eig.eigenvalues.size();
  if (x.rows() != n) {
    throw Error(ErrorCode::kInvalidInput, "signal length != eigensystem size");
  }
  const DenseMatrix& u = eig.eigenvectors;
  // y = U^T x, scaled by h(lambda), then mapped back with U.
  FeatureMatrix coeffs = Multiply(Transpose(u), x);
  for (std::size_t k = 0; k < n; ++k) {
    const double gain = h(eig.eigenvalues[k]);
    for (double& v : coeffs.row(k)) v *= gain;
  }
  return Multiply(u, coeffs);
}

std::vector<double> SpectralFilterOracle(const EigenSystem& eig,
                                         const SpectralResponse& h,
                                         std::span<const double> x) {
  return SpectralFilterOracle(eig, h, FeatureMatrix::Column(x)).ColumnValues(0);
}

DenseMatrix DenseMatrixPower(const SparseGraph& g, OperatorTag tag, int k) {
  if (g.num_nodes() > kDenseOracleMaxNodes) {
    throw Error(ErrorCode::kSizeGuard,
                "dense power oracle limited to n <= " +
                    std::to_string(kDenseOracleMaxNodes));
  }
  if (k < 0) throw Error(ErrorCode::kInvalidInput, "negative power");
  DenseMatrix base;
  switch (tag) {
    case OperatorTag::kShifted:
      base = DenseShifted(g);
      break;
    case OperatorTag::kLaplacian:
      base = DenseLaplacian(g);
      break;
    case OperatorTag::kGcnNorm:
      base = DenseGcnNorm(g);
      break;
  }
  DenseMatrix out = DenseMatrix::Identity(g.num_nodes());
  for (int i = 0; i < k; ++i) out = Multiply(base, out);
  return out;
}

std::vector<double> FiniteDifferenceGradient(const ScalarLoss& loss,
                                             std::span<const double> params,
                                             double eps) {
  std::vector<double> probe(params.begin(), params.end());
  std::vector<double> grad(params.size());
  for (std::size_t i = 0; i < probe.size(); ++i) {
    const double saved = probe[i];
    probe[i] = saved + eps;
    const double up = loss(probe);
    probe[i] = saved - eps;
    const double down = loss(probe);
    probe[i] = saved;
    grad[i] = (up - down) / (2.0 * eps);
  }
  return grad;
}

double RelativeGradientError(std::span<const double> analytic,
                             std::span<const double> numeric) {
  double diff = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    diff += (analytic[i] - numeric[i]) * (analytic[i] - numeric[i]);
    na += analytic[i] * analytic[i];
    nb += numeric[i] * numeric[i];
  }
  const double denom = std::sqrt(std::max(na, nb));
  if (denom == 0.0) return 0.0;
  return std::sqrt(diff) / denom;
}

}  // namespace gsc
