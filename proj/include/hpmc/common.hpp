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

#ifndef HPMC_COMMON_HPP
#define HPMC_COMMON_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>

namespace hpmc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kLog2Pi = 1.8378770664093454836;  // log(2*pi)

// Invalid experiment/sampler configuration (CLI exit code 2).
struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File I/O failure (CLI exit code 3).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Caller broke an interface contract (dimension mismatch, NaN input, ...).
inline void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

// Evaluation counters owned by a sampler context.  Targets and proposals
// never own counters themselves; callers pass the counter they want bumped.
struct EvalCounters {
  long long target_density = 0;   // fresh log-density calls
  long long target_gradient = 0;  // fresh gradient calls
  long long proposal = 0;         // proposal pdf evals during sample weighting
  long long adaptation_proposal = 0;  // proposal pdf evals while weighting
                                      // preliminary locations
  long long kernel = 0;               // cooperation mixture kernel evals
  long long density_cache_hits = 0;   // cached log-density reuses that a
                                      // cache-free run would have paid for

  EvalCounters& operator+=(const EvalCounters& o) {
    target_density += o.target_density;
    target_gradient += o.target_gradient;
    proposal += o.proposal;
    adaptation_proposal += o.adaptation_proposal;
    kernel += o.kernel;
    density_cache_hits += o.density_cache_hits;
    return *this;
  }
};

// log(sum_i exp(v_i)), -inf for an empty or all-(-inf) set.
inline double log_sum_exp(std::span<const double> v) {
  double m = kNegInf;
  for (double x : v)
    if (x > m) m = x;
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace hpmc

#endif  // HPMC_COMMON_HPP
