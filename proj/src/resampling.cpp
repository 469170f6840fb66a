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

#include "hpmc/resampling.hpp"

#include <cmath>

namespace hpmc {

void RandomMeasure::validate() const {
  require(!atoms.empty(), "random measure: no atoms");
  require(atoms.size() == weights.size(), "random measure: atom/weight size mismatch");
  double sum = 0.0;
  for (double w : weights) {
    require(!std::isnan(w), "random measure: NaN weight");
    require(w >= 0.0 && std::isfinite(w), "random measure: invalid weight");
    sum += w;
  }
  require(std::abs(sum - 1.0) <= 1e-9, "random measure: weights not normalized");
  for (const Vector& a : atoms)
    require(a.size() == atoms.front().size(), "random measure: atom dimension mismatch");
}

int categorical_draw(std::span<const double> probs, std::mt19937_64& rng) {
  require(!probs.empty(), "categorical_draw: empty distribution");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double u = unif(rng);
  double cum = 0.0;
  int last_positive = -1;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) last_positive = static_cast<int>(i);
    cum += probs[i];
    if (u < cum) return static_cast<int>(i);
  }
  // u fell past the accumulated total (rounding); take the last atom with
  // positive mass so zero-weight atoms remain unselectable
  require(last_positive >= 0, "categorical_draw: all-zero distribution");
  return last_positive;
}

std::vector<int> multinomial_draw(const RandomMeasure& measure, int count,
                                  std::mt19937_64& rng) {
  require(count >= 1, "multinomial_draw: count must be >= 1");
  measure.validate();
  std::vector<int> out(count);
  for (int i = 0; i < count; ++i) out[i] = categorical_draw(measure.weights, rng);
  return out;
}

LocalResampleResult local_resample(std::span<const WeightedSample> samples,
                                   int n_proposals, std::mt19937_64& rng) {
  require(n_proposals >= 1, "local_resample: N must be >= 1");
  require(!samples.empty(), "local_resample: no samples");

  std::vector<std::vector<std::size_t>> groups(n_proposals);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    int n = samples[i].proposal_index;
    require(n >= 0 && n < n_proposals, "local_resample: proposal index out of range");
    groups[n].push_back(i);
  }

  LocalResampleResult result;
  result.locations.reserve(n_proposals);
  std::vector<double> probs;
  for (int n = 0; n < n_proposals; ++n) {
    const auto& idx = groups[n];
    require(!idx.empty(), "local_resample: empty proposal group");
    double m = kNegInf;
    for (std::size_t i : idx) m = std::max(m, samples[i].log_w);
    probs.assign(idx.size(), 1.0 / static_cast<double>(idx.size()));
    if (std::isfinite(m)) {
      double s = 0.0;
      for (std::size_t j = 0; j < idx.size(); ++j) {
        probs[j] = std::exp(samples[idx[j]].log_w - m);
        s += probs[j];
      }
      for (double& p : probs) p /= s;
    } else {
      result.degenerate_groups += 1;
    }
    int pick = categorical_draw(probs, rng);
    const WeightedSample& chosen = samples[idx[pick]];
    result.locations.push_back(
        {chosen.x, chosen.cached_log_pi, static_cast<int>(idx[pick])});
  }
  return result;
}

std::vector<Vector> global_resample(const RandomMeasure& measure, int count,
                                    std::mt19937_64& rng) {
  std::vector<int> picks = multinomial_draw(measure, count, rng);
  std::vector<Vector> out;
  out.reserve(picks.size());
  for (int i : picks) out.push_back(measure.atoms[i]);
  return out;
}

}  // namespace hpmc
