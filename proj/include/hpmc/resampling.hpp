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

#ifndef HPMC_RESAMPLING_HPP
#define HPMC_RESAMPLING_HPP

#include <random>
#include <span>
#include <vector>

#include "hpmc/weighting.hpp"

namespace hpmc {

// Weighted point-mass approximation of a distribution.
struct RandomMeasure {
  std::vector<Vector> atoms;
  std::vector<double> weights;  // normalized

  void validate() const;  // throws on malformed measures
};

// One multinomial draw from normalized probabilities: inverse CDF with a
// single uniform, atoms scanned in index order, ties toward the lower
// index.  Zero-weight atoms are never selected.
int categorical_draw(std::span<const double> probs, std::mt19937_64& rng);

// `count` i.i.d. multinomial draws over the measure's atoms.
std::vector<int> multinomial_draw(const RandomMeasure& measure, int count,
                                  std::mt19937_64& rng);

struct ResampledLocation {
  Vector x;
  double log_pi = kNegInf;  // carried from the source sample
  int source_index = 0;     // index into the input samples
};

struct LocalResampleResult {
  std::vector<ResampledLocation> locations;  // one per proposal, in order
  int degenerate_groups = 0;
};

// For each proposal independently, selects one of its own samples using
// locally normalized weights.  Output preserves proposal order and carries
// each sample's cached log pi; costs zero fresh target evaluations.
LocalResampleResult local_resample(std::span<const WeightedSample> samples,
                                   int n_proposals, std::mt19937_64& rng);

// `count` joint multinomial draws over all atoms, materialized as an
// unweighted location set.
std::vector<Vector> global_resample(const RandomMeasure& measure, int count,
                                    std::mt19937_64& rng);

}  // namespace hpmc

#endif  // HPMC_RESAMPLING_HPP
