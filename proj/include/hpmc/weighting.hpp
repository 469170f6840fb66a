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

#ifndef HPMC_WEIGHTING_HPP
#define HPMC_WEIGHTING_HPP

#include <span>
#include <vector>

#include "hpmc/proposals.hpp"
#include "hpmc/targets.hpp"

namespace hpmc {

struct WeightedSample {
  Vector x;
  double log_w = kNegInf;     // raw (unnormalized) log weight
  int proposal_index = 0;
  int iteration = 0;
  double cached_log_pi = kNegInf;
};

enum class WeightScheme { dm, standard };

// Raw importance weights for one iteration's draws.
//   dm:       log w = log pi(x) - log[(1/N) sum_j q_j(x)]
//   standard: log w = log pi(x) - log q_n(x)
// The mixture denominator keeps the 1/N factor so that the average raw
// weight estimates Z.  Target evals and proposal evals are charged to
// `counters` (a mixture evaluation costs N proposal evals).
std::vector<WeightedSample> compute_weights(const std::vector<PopulationDraw>& draws,
                                            const ProposalPopulation& pop,
                                            const TargetDensity& target,
                                            WeightScheme scheme,
                                            EvalCounters& counters);

enum class NormalizationScope { global, local };

struct NormalizedWeights {
  std::vector<double> prob;    // aligned with the input samples; sums to 1
                               // per normalization group
  int degenerate_groups = 0;   // groups that fell back to uniform weights
};

// scope == global normalizes over all samples; scope == local normalizes
// within each proposal's own samples (grouped by proposal_index).  A group
// whose weights are all zero falls back to uniform and is flagged.
NormalizedWeights normalize(std::span<const WeightedSample> samples,
                            NormalizationScope scope);

// Streaming accumulator for the self-normalized estimator sums
// sum w * f(x) (f = coordinate projections) and sum w across iterations.
// Internally rescaled by the largest log-weight seen, so absorbing weights
// with extreme magnitudes neither overflows nor underflows.
class EstimateAccumulator {
 public:
  explicit EstimateAccumulator(int dim)
      : scaled_sum_wf_(Vector::Zero(dim)) {}

  void absorb(double log_w, const Vector& x);
  void absorb(const WeightedSample& s) { absorb(s.log_w, s.x); }
  // Order-independent merge (up to floating-point reassociation).
  void merge(const EstimateAccumulator& other);

  long long count() const { return count_; }
  int dim() const { return static_cast<int>(scaled_sum_wf_.size()); }
  bool degenerate() const { return !(scaled_sum_w_ > 0.0); }

  double log_scale() const { return log_scale_; }
  double scaled_sum_w() const { return scaled_sum_w_; }
  const Vector& scaled_sum_wf() const { return scaled_sum_wf_; }

 private:
  double log_scale_ = kNegInf;
  double scaled_sum_w_ = 0.0;
  Vector scaled_sum_wf_;
  long long count_ = 0;
};

// SNIS mean: sum w f / sum w.  Zero vector if the accumulator is degenerate.
Vector snis_estimate(const EstimateAccumulator& acc);

// Z-hat = (1 / count) sum w; 0 when degenerate (the run is then flagged).
double z_estimate(const EstimateAccumulator& acc);
double log_z_estimate(const EstimateAccumulator& acc);  // -inf when degenerate

// UIS mean given the true normalizing constant: (1 / (count Z)) sum w f.
Vector uis_estimate(const EstimateAccumulator& acc, double log_z_true);

}  // namespace hpmc

#endif  // HPMC_WEIGHTING_HPP
