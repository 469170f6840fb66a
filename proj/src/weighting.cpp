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

#include "hpmc/weighting.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace hpmc {

std::vector<WeightedSample> compute_weights(const std::vector<PopulationDraw>& draws,
                                            const ProposalPopulation& pop,
                                            const TargetDensity& target,
                                            WeightScheme scheme,
                                            EvalCounters& counters) {
  require(!draws.empty(), "compute_weights: no draws");
  std::vector<WeightedSample> out;
  out.reserve(draws.size());

  for (const PopulationDraw& d : draws) {
    auto [log_pi, grad] = evaluate(target, d.x, false, counters);
    out.push_back({d.x, kNegInf, d.proposal_index, pop.iteration, log_pi});
  }

  if (scheme == WeightScheme::dm) {
    Matrix pts(draws.size(), pop.dim());
    for (std::size_t i = 0; i < draws.size(); ++i) pts.row(i) = draws[i].x.transpose();
    Vector log_mix = log_population_mixture_batch(pop, pts, counters.proposal);
    for (std::size_t i = 0; i < draws.size(); ++i)
      out[i].log_w = out[i].cached_log_pi - log_mix[i];
  } else {
    for (std::size_t i = 0; i < draws.size(); ++i) {
      double lq = log_proposal_pdf(pop.proposals[draws[i].proposal_index], draws[i].x,
                                   counters.proposal);
      out[i].log_w = out[i].cached_log_pi - lq;
    }
  }
  // pi(x) = 0 gives log_w = -inf (weight 0), never NaN: the Gaussian
  // denominator is finite everywhere.
  for (WeightedSample& s : out)
    if (std::isnan(s.log_w)) s.log_w = kNegInf;
  return out;
}

namespace {

void normalize_group(std::span<const WeightedSample> samples,
                     std::span<const std::size_t> idx, NormalizedWeights& result) {
  double m = kNegInf;
  for (std::size_t i : idx) m = std::max(m, samples[i].log_w);
  if (!std::isfinite(m)) {
    // all-zero group: uniform fallback, flagged for the caller
    double u = 1.0 / static_cast<double>(idx.size());
    for (std::size_t i : idx) result.prob[i] = u;
    result.degenerate_groups += 1;
    return;
  }
  double s = 0.0;
  for (std::size_t i : idx) s += std::exp(samples[i].log_w - m);
  for (std::size_t i : idx) result.prob[i] = std::exp(samples[i].log_w - m) / s;
}

}  // namespace

NormalizedWeights normalize(std::span<const WeightedSample> samples,
                            NormalizationScope scope) {
  require(!samples.empty(), "normalize: no samples");
  NormalizedWeights result;
  result.prob.assign(samples.size(), 0.0);

  if (scope == NormalizationScope::global) {
    std::vector<std::size_t> all(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) all[i] = i;
    normalize_group(samples, all, result);
    return result;
  }

  // local: group by source proposal, preserving first-seen group order
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < samples.size(); ++i)
    groups[samples[i].proposal_index].push_back(i);
  for (const auto& [n, idx] : groups) normalize_group(samples, idx, result);
  return result;
}

void EstimateAccumulator::absorb(double log_w, const Vector& x) {
  require(x.size() == scaled_sum_wf_.size(), "accumulator: dimension mismatch");
  require(!std::isnan(log_w), "accumulator: NaN log weight");
  count_ += 1;
  if (log_w == kNegInf) return;
  if (log_w > log_scale_) {
    double shrink = std::exp(log_scale_ - log_w);  // 0 when scale was -inf
    scaled_sum_w_ *= shrink;
    scaled_sum_wf_ *= shrink;
    log_scale_ = log_w;
  }
  double r = std::exp(log_w - log_scale_);
  scaled_sum_w_ += r;
  scaled_sum_wf_ += r * x;
}

void EstimateAccumulator::merge(const EstimateAccumulator& other) {
  require(other.dim() == dim(), "accumulator merge: dimension mismatch");
  count_ += other.count_;
  if (other.log_scale_ == kNegInf) return;
  if (other.log_scale_ > log_scale_) {
    double shrink = std::exp(log_scale_ - other.log_scale_);
    scaled_sum_w_ *= shrink;
    scaled_sum_wf_ *= shrink;
    log_scale_ = other.log_scale_;
  }
  double r = std::exp(other.log_scale_ - log_scale_);
  scaled_sum_w_ += r * other.scaled_sum_w_;
  scaled_sum_wf_ += r * other.scaled_sum_wf_;
}

Vector snis_estimate(const EstimateAccumulator& acc) {
  require(acc.count() > 0, "snis_estimate: empty accumulator");
  if (acc.degenerate()) return Vector::Zero(acc.dim());
  return acc.scaled_sum_wf() / acc.scaled_sum_w();
}

double log_z_estimate(const EstimateAccumulator& acc) {
  require(acc.count() > 0, "z_estimate: empty accumulator");
  if (acc.degenerate()) return kNegInf;
  return acc.log_scale() + std::log(acc.scaled_sum_w()) -
         std::log(static_cast<double>(acc.count()));
}

double z_estimate(const EstimateAccumulator& acc) {
  double lz = log_z_estimate(acc);
  return lz == kNegInf ? 0.0 : std::exp(lz);
}

Vector uis_estimate(const EstimateAccumulator& acc, double log_z_true) {
  require(acc.count() > 0, "uis_estimate: empty accumulator");
  if (acc.degenerate()) return Vector::Zero(acc.dim());
  double scale = std::exp(acc.log_scale() - log_z_true) /
                 static_cast<double>(acc.count());
  return scale * acc.scaled_sum_wf();
}

}  // namespace hpmc
