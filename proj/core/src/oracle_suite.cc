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

#include "gsc/oracle_suite.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "gsc/dense.h"
#include "gsc/error.h"
#include "gsc/experiment.h"
#include "gsc/graph.h"
#include "gsc/model.h"
#include "gsc/pnca.h"
#include "gsc/poly_basis.h"
#include "gsc/verify.h"

namespace gsc {
namespace {

int Uniform(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double UniformReal(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Erdos-Renyi graph; `connected` adds a random spanning tree first.
SparseGraph RandomGraph(Rng& rng, int n, double p, bool connected) {
  std::vector<Edge> edges;
  if (connected) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (int i = 1; i < n; ++i) {
      edges.push_back({order[i], order[Uniform(rng, 0, i - 1)]});
    }
  }
  std::bernoulli_distribution coin(p);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (coin(rng)) edges.push_back({u, v});
    }
  }
  return BuildCsr(edges, static_cast<std::size_t>(n));
}

FeatureMatrix RandomMatrix(Rng& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  FeatureMatrix m(rows, cols);
  for (double& v : m.values()) v = normal(rng);
  return m;
}

std::vector<double> RandomCoefficients(Rng& rng, int count) {
  std::vector<double> c(static_cast<std::size_t>(std::max(count, 0)));
  for (double& v : c) v = UniformReal(rng, -1.0, 1.0);
  return c;
}

OracleCheck Finish(std::string name, double worst, double tolerance,
                   int trials) {
  OracleCheck c;
  c.name = std::move(name);
  c.worst = worst;
  c.tolerance = tolerance;
  c.trials = trials;
  c.passed = worst <= tolerance;
  return c;
}

OracleCheck CheckKnownSpectra() {
  double worst = 0.0;
  const std::vector<Edge> k2 = {{0, 1}};
  const EigenSystem e2 = DenseEigensystem(BuildCsr(k2, 2));
  worst = std::max({worst, std::abs(e2.eigenvalues[0]),
                    std::abs(e2.eigenvalues[1] - 2.0)});
  const std::vector<Edge> k3 = {{0, 1}, {1, 2}, {0, 2}};
  const EigenSystem e3 = DenseEigensystem(BuildCsr(k3, 3));
  worst = std::max({worst, std::abs(e3.eigenvalues[0]),
                    std::abs(e3.eigenvalues[1] - 1.5),
                    std::abs(e3.eigenvalues[2] - 1.5)});
  return Finish("known_spectra", worst, 1e-12, 2);
}

OracleCheck CheckEigenResiduals(Rng& rng) {
  double worst = 0.0;
  const int trials = 10;
  for (int t = 0; t < trials; ++t) {
    const int n = Uniform(rng, 2, 50);
    const SparseGraph g = RandomGraph(rng, n, UniformReal(rng, 0.02, 0.5), false);
    const EigenSystem eig = DenseEigensystem(g);
    const double recon =
        ReconstructionResidual(eig, DenseLaplacian(g)) / (1e-8 * n);
    const double ortho = OrthogonalityResidual(eig) / 1e-10;
    worst = std::max({worst, recon, ortho});
    for (double lambda : eig.eigenvalues) {
      // Any eigenvalue outside [0, 2] by more than 1e-9 fails outright.
      if (lambda < -1e-9 || lambda > 2.0 + 1e-9) worst = std::max(worst, 2.0);
    }
  }
  // Residuals are reported relative to their tolerances.
  return Finish("eigensystem_residuals", worst, 1.0, trials);
}

OracleCheck CheckSpectralEquivalence(Rng& rng) {
  double worst = 0.0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    const int n = Uniform(rng, 2, 50);
    const SparseGraph g = RandomGraph(rng, n, UniformReal(rng, 0.05, 0.4), false);
    const int k1 = Uniform(rng, 0, 6);
    const int k2 = Uniform(rng, 0, 6);
    FilterSpec spec;
    spec.alpha = RandomCoefficients(rng, k1 + 1);
    spec.beta = RandomCoefficients(rng, k2 + 1);
    const FeatureMatrix x = RandomMatrix(rng, n, 3);
    const FeatureMatrix sparse = GscCombine(BuildBasisCache(g, x, k1, k2), spec);
    const auto h = [&spec](double lambda) {
      double v = 0.0;
      for (std::size_t i = 0; i < spec.alpha.size(); ++i) {
        v += spec.alpha[i] * std::pow(2.0 - lambda, static_cast<double>(i));
      }
      for (std::size_t j = 0; j < spec.beta.size(); ++j) {
        v += spec.beta[j] * std::pow(lambda, static_cast<double>(j));
      }
      return v;
    };
    const FeatureMatrix dense = SpectralFilterOracle(DenseEigensystem(g), h, x);
    worst = std::max(worst, RelativeFrobeniusError(sparse, dense));
  }
  return Finish("spectral_equivalence", worst, 1e-8, trials);
}

OracleCheck CheckRecurrenceVsPowers(Rng& rng) {
  double worst = 0.0;
  const int trials = 20;
  for (int t = 0; t < trials; ++t) {
    const int n = Uniform(rng, 2, 30);
    const SparseGraph g = RandomGraph(rng, n, UniformReal(rng, 0.05, 0.5), false);
    const int k = Uniform(rng, 0, 6);
    const FeatureMatrix x = RandomMatrix(rng, n, 2);
    const BasisCache cache = BuildBasisCache(g, x, k, k);
    const DenseMatrix p = DenseMatrixPower(g, OperatorTag::kShifted, k);
    const DenseMatrix q = DenseMatrixPower(g, OperatorTag::kLaplacian, k);
    worst = std::max({worst, MaxAbsDiff(cache.positive(k), Multiply(p, x)),
                      MaxAbsDiff(cache.negative(k), Multiply(q, x))});
  }
  return Finish("recurrence_vs_dense_powers", worst, 1e-8, trials);
}

OracleCheck CheckPositivity(Rng& rng) {
  int failures = 0;
  const int trials = 100;
  for (int t = 0; t < trials; ++t) {
    const int n = Uniform(rng, 2, 30);
    const SparseGraph g = RandomGraph(rng, n, UniformReal(rng, 0.0, 0.3), true);
    std::vector<double> alpha(static_cast<std::size_t>(Uniform(rng, 2, 6)));
    for (double& a : alpha) a = UniformReal(rng, 0.0, 1.0);
    alpha[0] = UniformReal(rng, 0.1, 1.0);
    alpha[1] = UniformReal(rng, 0.1, 1.0);
    if (!CheckPositiveCombination(alpha, g).positive()) ++failures;
  }
  return Finish("positive_combination", failures, 0.0, trials);
}

OracleCheck CheckRayleighMonotonicity(Rng& rng) {
  double worst = 0.0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    const int n = Uniform(rng, 2, 40);
    const SparseGraph g = RandomGraph(rng, n, UniformReal(rng, 0.05, 0.5), false);
    const FeatureMatrix x = RandomMatrix(rng, n, 1);
    const double r = RayleighQuotient(g, x.values());
    const FeatureMatrix sx = ApplyShifted(g, x);
    const FeatureMatrix lx = ApplyLaplacian(g, x);
    if (FrobeniusNorm(sx) > 0.0) {
      worst = std::max(worst, RayleighQuotient(g, sx.values()) - r);
    }
    if (FrobeniusNorm(lx) > 0.0) {
      worst = std::max(worst, r - RayleighQuotient(g, lx.values()));
    }
  }
  return Finish("rayleigh_monotonicity", worst, 1e-12, trials);
}

ModelParams RandomModel(Rng& rng, Architecture arch, std::size_t in_dim,
                        std::size_t out_dim) {
  ModelShape shape;
  shape.arch = arch;
  shape.in_dim = in_dim;
  shape.hidden_dim = 5;
  shape.out_dim = out_dim;
  shape.k1 = Uniform(rng, 0, 3);
  shape.k2 = Uniform(rng, 0, 3);
  shape.depth = Uniform(rng, 1, 4);
  ModelParams p = InitParams(shape, rng());
  for (ParamGroup group : {ParamGroup::kAlpha, ParamGroup::kBeta}) {
    for (double& v : GroupValues(p, group)) v = UniformReal(rng, -1.0, 1.0);
  }
  return p;
}

}  // namespace

double ReluMargin(const ModelParams& params, const SparseGraph& g,
                  const FeatureMatrix& x) {
  Rng unused(0);
  const ForwardResult fr =
      Forward(params, g, x, ForwardMode::kEval, TrainConfig(), unused);
  double margin = std::numeric_limits<double>::infinity();
  for (double z : fr.tape.pre_activation.values()) {
    margin = std::min(margin, std::abs(z));
  }
  return margin;
}

namespace {

OracleCheck CheckGradients(Rng& rng) {
  double worst = 0.0;
  const int trials = 20;
  TrainConfig config;
  config.dropout_conv = 0.0;
  config.dropout_linear = 0.0;
  for (int t = 0; t < trials; ++t) {
    const std::size_t n = 10;
    SparseGraph g;
    FeatureMatrix x;
    ModelParams params;
    do {
      g = RandomGraph(rng, n, 0.3, false);
      x = RandomMatrix(rng, n, 4);
      params = RandomModel(rng, Architecture::kGscNet, 4, 3);
    } while (ReluMargin(params, g, x) < kMinReluMargin);
    std::vector<int> labels(n);
    for (int& y : labels) y = Uniform(rng, 0, 2);
    const NodeMask mask(n, 1);
    Rng unused(0);
    const Gradients analytic =
        ComputeLossAndGrad(params, g, x, labels, mask, config, unused).grads;
    ModelParams probe = params;
    const ScalarLoss loss = [&](std::span<const double> flat) {
      UnflattenParams(flat, probe);
      Rng r(0);
      return ComputeLossAndGrad(probe, g, x, labels, mask, config, r).loss;
    };
    const std::vector<double> flat = FlattenParams(params);
    const std::vector<double> numeric = FiniteDifferenceGradient(loss, flat);
    std::size_t offset = 0;
    for (ParamGroup group : kAllParamGroups) {
      const auto a = GroupValues(analytic, group);
      const std::span<const double> b(numeric.data() + offset, a.size());
      worst = std::max(worst, RelativeGradientError(a, b));
      offset += a.size();
    }
  }
  return Finish("gradient_finite_difference", worst, 1e-4, trials);
}

OracleCheck CheckPermutationEquivariance(Rng& rng) {
  double worst = 0.0;
  const int trials = 100;
  const TrainConfig config;
  const std::array<Architecture, 4> archs = {
      Architecture::kGscNet, Architecture::kGcn, Architecture::kJkNet,
      Architecture::kBernNet};
  for (int t = 0; t < trials; ++t) {
    const int n = Uniform(rng, 2, 40);
    const SparseGraph g = RandomGraph(rng, n, UniformReal(rng, 0.05, 0.4), false);
    const FeatureMatrix x = RandomMatrix(rng, n, 3);
    const ModelParams params = RandomModel(rng, archs[t % archs.size()], 3, 3);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const PermutedGraph moved = PermuteGraph(g, x, perm);
    Rng unused(0);
    const FeatureMatrix a =
        Forward(params, g, x, ForwardMode::kEval, config, unused).logits;
    const FeatureMatrix b = Forward(params, moved.graph, moved.features,
                                    ForwardMode::kEval, config, unused)
                                .logits;
    for (int i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < a.cols(); ++c) {
        worst = std::max(worst, std::abs(a(i, c) - b(perm[i], c)));
      }
    }
  }
  return Finish("permutation_equivariance", worst, 1e-9, trials);
}

OracleCheck CheckBaselineFormulas(Rng& rng) {
  double worst = 0.0;
  const int trials = 30;
  for (int t = 0; t < trials; ++t) {
    const int n = Uniform(rng, 2, 20);
    const SparseGraph g = RandomGraph(rng, n, UniformReal(rng, 0.05, 0.5), false);
    const FeatureMatrix h = RandomMatrix(rng, n, 2);
    const Architecture arch =
        std::array{Architecture::kGcn, Architecture::kJkNet,
                   Architecture::kBernNet}[t % 3];
    const ModelParams p = RandomModel(rng, arch, 2, 2);
    const int k = p.shape.depth;
    FeatureMatrix expected(n, 2);
    if (arch == Architecture::kGcn) {
      expected = Multiply(DenseMatrixPower(g, OperatorTag::kGcnNorm, k), h);
    } else if (arch == Architecture::kJkNet) {
      for (int i = 1; i <= k; ++i) {
        expected.AddScaled(
            Multiply(DenseMatrixPower(g, OperatorTag::kGcnNorm, i), h),
            p.filter.alpha[i - 1]);
      }
    } else {
      for (int i = 0; i <= k; ++i) {
        const DenseMatrix term =
            Multiply(DenseMatrixPower(g, OperatorTag::kShifted, k - i),
                     DenseMatrixPower(g, OperatorTag::kLaplacian, i));
        double binom = 1.0;
        for (int j = 1; j <= i; ++j) binom = binom * (k - i + j) / j;
        expected.AddScaled(Multiply(term, h),
                           p.filter.alpha[i] * binom / std::pow(2.0, k));
      }
    }
    worst = std::max(worst, MaxAbsDiff(ApplyPropagation(p, g, h), expected));
  }
  return Finish("baseline_propagation_formulas", worst, 1e-9, trials);
}

}  // namespace

bool OracleReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const OracleCheck& c) { return c.passed; });
}

OracleReport RunOracleSuite(std::uint64_t seed) {
  OracleReport report;
  report.seed = seed;
  Rng rng(seed);
  report.checks.push_back(CheckKnownSpectra());
  report.checks.push_back(CheckEigenResiduals(rng));
  report.checks.push_back(CheckSpectralEquivalence(rng));
  report.checks.push_back(CheckRecurrenceVsPowers(rng));
  report.checks.push_back(CheckPositivity(rng));
  report.checks.push_back(CheckRayleighMonotonicity(rng));
  report.checks.push_back(CheckGradients(rng));
  report.checks.push_back(CheckPermutationEquivariance(rng));
  report.checks.push_back(CheckBaselineFormulas(rng));
  return report;
}

nlohmann::json OracleReportToJson(const OracleReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const OracleCheck& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"worst", c.worst},
                      {"tolerance", c.tolerance},
                      {"trials", c.trials}});
  }
  return {{"schema", kSchemaVersion},
          {"seed", report.seed},
          {"passed", report.passed()},
          {"checks", checks}};
}

}  // namespace gsc
