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

#include "gsc/feature_matrix.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstring>
#include <limits>

#include "gsc/error.h"

namespace gsc {

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

FeatureMatrix FeatureMatrix::FromRows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n = rows.size();
  const std::size_t d = n == 0 ? 0 : rows.begin()->size();
  FeatureMatrix m(n, d);
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != d) {
      throw Error(ErrorCode::kInvalidInput, "ragged rows in FromRows");
    }
    std::copy(row.begin(), row.end(), m.row(r).begin());
    ++r;
  }
  return m;
}

FeatureMatrix FeatureMatrix::Column(std::span<const double> values) {
  FeatureMatrix m(values.size(), 1);
  std::copy(values.begin(), values.end(), m.data_.begin());
  return m;
}

FeatureMatrix FeatureMatrix::Identity(std::size_t n) {
  FeatureMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::vector<double> FeatureMatrix::ColumnValues(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

bool FeatureMatrix::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

void FeatureMatrix::Fill(double v) { std::fill(data_.begin(), data_.end(), v); }

void FeatureMatrix::AddScaled(const FeatureMatrix& other, double scale) {
  assert(rows_ == other.rows_ && cols_ == other.cols_);
  const double* src = other.data_.data();
  double* dst = data_.data();
  const std::size_t count = data_.size();
  for (std::size_t i = 0; i < count; ++i) dst[i] += scale * src[i];
}

double Dot(const FeatureMatrix& a, const FeatureMatrix& b) {
  assert(a.rows() == b.rows() && a.cols() == b.cols());
  const auto x = a.values();
  const auto y = b.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += x[i] * y[i];
  return sum;
}

double FrobeniusNorm(const FeatureMatrix& a) { return std::sqrt(Dot(a, a)); }

double MaxAbsDiff(const FeatureMatrix& a, const FeatureMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    return std::numeric_limits<double>::infinity();
  }
  double worst = 0.0;
  const auto x = a.values();
  const auto y = b.values();
  for (std::size_t i = 0; i < x.size(); ++i) {
    worst = std::max(worst, std::abs(x[i] - y[i]));
  }
  return worst;
}

double RelativeFrobeniusError(const FeatureMatrix& a, const FeatureMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    return std::numeric_limits<double>::infinity();
  }
  double diff = 0.0;
  const auto x = a.values();
  const auto y = b.values();
  for (std::size_t i = 0; i < x.size(); ++i) {
    diff += (x[i] - y[i]) * (x[i] - y[i]);
  }
  const double ref = std::max(FrobeniusNorm(b), 1e-300);
  return std::sqrt(diff) / ref;
}

std::uint64_t HashValues(const FeatureMatrix& m) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* p, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  };
  const std::uint64_t shape[2] = {m.rows(), m.cols()};
  mix(shape, sizeof(shape));
  mix(m.values().data(), m.values().size() * sizeof(double));
  return h;
}

}  // namespace gsc
