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

#ifndef GSC_FEATURE_MATRIX_H_
#define GSC_FEATURE_MATRIX_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace gsc {

// Dense n x d block of doubles, row-major by node.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  static FeatureMatrix FromRows(
      std::initializer_list<std::initializer_list<double>> rows);
  // n x 1 matrix holding `values`.
  static FeatureMatrix Column(std::span<const double> values);
  static FeatureMatrix Identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  std::vector<double> ColumnValues(std::size_t c) const;

  bool AllFinite() const;
  void Fill(double v);

  // this += scale * other
  void AddScaled(const FeatureMatrix& other, double scale);

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Frobenius inner product.
double Dot(const FeatureMatrix& a, const FeatureMatrix& b);
double FrobeniusNorm(const FeatureMatrix& a);
double MaxAbsDiff(const FeatureMatrix& a, const FeatureMatrix& b);
// ||a - b||_F / max(||b||_F, tiny)
double RelativeFrobeniusError(const FeatureMatrix& a, const FeatureMatrix& b);

// FNV-1a over the shape and raw bytes; used for cache provenance.
std::uint64_t HashValues(const FeatureMatrix& m);

}  // namespace gsc

#endif  // GSC_FEATURE_MATRIX_H_
