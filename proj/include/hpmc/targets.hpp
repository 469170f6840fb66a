// Copyright 2026 The HPMC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HPMC_TARGETS_HPP
#define HPMC_TARGETS_HPP

#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "hpmc/common.hpp"

namespace hpmc {

// An evaluable unnormalized log-density on R^dim.  Immutable after
// construction; safe for concurrent reads.  Known moments, when present,
// are the analytic values for the density as built.
struct TargetDensity {
  int dim = 0;
  std::function<double(const Vector&)> log_density;
  std::function<Vector(const Vector&)> grad_log_density;  // empty if absent
  std::optional<Vector> true_mean;
  std::optional<double> true_log_z;

  bool has_gradient() const { return static_cast<bool>(grad_log_density); }
};

// Evaluates log pi(x) (and optionally its gradient), charging the calling
// context's counters.  Throws on dimension mismatch or NaN input.
std::pair<double, std::optional<Vector>> evaluate(const TargetDensity& target,
                                                  const Vector& x,
                                                  bool want_grad,
                                                  EvalCounters& counters);

struct GaussianMixtureSpec {
  std::vector<double> weights;  // simplex
  std::vector<Vector> means;
  std::vector<Matrix> covariances;  // symmetric positive definite

  int dim() const { return means.empty() ? 0 : static_cast<int>(means.front().size()); }
  void validate() const;  // throws SpecError
};

struct BananaSpec {
  double b = 3.0;
  double sigma = 1.0;
  int dim = 2;

  void validate() const;  // throws SpecError
};

// Normalized mixture log-density, computed with log-sum-exp.  One-shot
// convenience; benchmark targets hold a prefactored evaluator instead.
double log_mixture_density(const GaussianMixtureSpec& spec, const Vector& x);

enum class BenchmarkTarget { toy5, bimodal20, banana };

// Builds one of the benchmark targets with analytic gradient and known
// moments attached.  The banana spec is only consulted for name == banana.
TargetDensity build_benchmark_target(BenchmarkTarget name,
                                     const BananaSpec& banana = BananaSpec{});

// Individual builders.
TargetDensity build_gaussian_mixture_target(GaussianMixtureSpec spec);
TargetDensity build_banana_target(const BananaSpec& spec);
GaussianMixtureSpec toy5_spec();
GaussianMixtureSpec bimodal20_spec();

// Unnormalized isotropic Gaussian exp(-|x - mean|^2 / (2 sigma^2)); its
// normalizing constant is (sigma sqrt(2 pi))^d, stored in true_log_z.
TargetDensity build_unnormalized_gaussian(Vector mean, double sigma);

// Same density scaled by exp(log_c): log-density shifts by exactly log_c,
// the gradient is untouched, true_log_z shifts with it.
TargetDensity scaled_density(TargetDensity base, double log_c);

}  // namespace hpmc

#endif  // HPMC_TARGETS_HPP
