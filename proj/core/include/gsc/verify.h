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

#ifndef GSC_VERIFY_H_
#define GSC_VERIFY_H_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "gsc/dense.h"
#include "gsc/feature_matrix.h"
#include "gsc/graph.h"

namespace gsc {

// L = U diag(eigenvalues) U^T with eigenvalues ascending and the columns of
// U orthonormal.
struct EigenSystem {
  std::vector<double> eigenvalues;
  DenseMatrix eigenvectors;
};

// Householder tridiagonalization followed by implicit QL with shifts.
// `a` must be symmetric.
EigenSystem SymmetricEigen(const DenseMatrix& a);

// Eigensystem of the normalized Laplacian; n <= kDenseOracleMaxNodes.
EigenSystem DenseEigensystem(const SparseGraph& g);

// ||U diag(lambda) U^T - a||_F
double ReconstructionResidual(const EigenSystem& eig, const DenseMatrix& a);
// ||U^T U - I||_F
double OrthogonalityResidual(const EigenSystem& eig);

using SpectralResponse = std::function<double(double)>;

// U diag[h(lambda_1), ..., h(lambda_n)] U^T x, column by column.
FeatureMatrix SpectralFilterOracle(const EigenSystem& eig,
                                   const SpectralResponse& h,
                                   const FeatureMatrix& x);
std::vector<double> SpectralFilterOracle(const EigenSystem& eig,
                                         const SpectralResponse& h,
                                         std::span<const double> x);

enum class OperatorTag { kShifted, kLaplacian, kGcnNorm };

// Repeated dense multiplication of the tagged operator; k = 0 is I.
DenseMatrix DenseMatrixPower(const SparseGraph& g, OperatorTag tag, int k);

using ScalarLoss = std::function<double(std::span<const double>)>;

// Central differences (f(p + eps e_i) - f(p - eps e_i)) / (2 eps) for every
// coordinate i. `loss` must be deterministic.
std::vector<double> FiniteDifferenceGradient(const ScalarLoss& loss,
                                             std::span<const double> params,
                                             double eps = 1e-5);

// ||a - b|| / max(||a||, ||b||), zero when both vanish.
double RelativeGradientError(std::span<const double> analytic,
                             std::span<const double> numeric);

}  // namespace gsc

#endif  // GSC_VERIFY_H_
