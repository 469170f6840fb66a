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

#include "hpmc/adaptation.hpp"

#include <algorithm>
#include <cmath>

namespace hpmc {

std::vector<PreliminaryLocation> preliminary_from_samples(
    std::span<const WeightedSample> samples, int n_proposals, std::mt19937_64& rng,
    int* degenerate_groups) {
  LocalResampleResult lr = local_resample(samples, n_proposals, rng);
  if (degenerate_groups) *degenerate_groups += lr.degenerate_groups;
  std::vector<PreliminaryLocation> out;
  out.reserve(lr.locations.size());
  for (ResampledLocation& loc : lr.locations)
    out.push_back({std::move(loc.x), loc.log_pi, LocationProvenance::from_samples});
  return out;
}

std::vector<PreliminaryLocation> preliminary_from_locations(
    std::span<ChainState> chains, const TargetDensity& target,
    const HmcParams& params, EvalCounters& counters,
    std::span<std::mt19937_64> chain_rngs, ChainMoveStats& stats) {
  require(chains.size() == chain_rngs.size(),
          "preliminary_from_locations: one rng stream per chain");
  std::vector<PreliminaryLocation> out;
  out.reserve(chains.size());
  for (std::size_t n = 0; n < chains.size(); ++n) {
    HmcStepResult step = hmc_step(chains[n], target, params, counters, chain_rngs[n]);
    if (step.accepted) stats.accepted += 1;
    if (step.diverged) stats.divergences += 1;
    chains[n] = std::move(step.state);
    out.push_back({chains[n].position, chains[n].log_pi, LocationProvenance::from_chain});
  }
  return out;
}

namespace {

void finish_preliminary_weights(PreliminaryLocationSet& set,
                                const Vector& log_denominator,
                                EvalCounters& counters) {
  const std::size_t c = set.locations.size();
  set.dm_log_weights.resize(c);
  for (std::size_t i = 0; i < c; ++i) {
    // the carried numerator was paid for by the sample weighting for P
    // locations; a cache-free implementation would evaluate pi again here
    if (set.locations[i].tag == LocationProvenance::from_samples)
      counters.density_cache_hits += 1;
    double lw = set.locations[i].log_pi - log_denominator[i];
    set.dm_log_weights[i] = std::isnan(lw) ? kNegInf : lw;
  }

  set.normalized_weights.assign(c, 1.0 / static_cast<double>(c));
  set.degenerate = false;
  double m = *std::max_element(set.dm_log_weights.begin(), set.dm_log_weights.end());
  if (!std::isfinite(m)) {
    set.degenerate = true;
    return;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < c; ++i) {
    set.normalized_weights[i] = std::exp(set.dm_log_weights[i] - m);
    s += set.normalized_weights[i];
  }
  for (double& w : set.normalized_weights) w /= s;
}

}  // namespace

void weight_preliminary(PreliminaryLocationSet& set,
                        std::span<const double> kernel_scales,
                        EvalCounters& counters) {
  const std::size_t c = set.locations.size();
  require(c >= 1, "weight_preliminary: empty candidate set");
  require(kernel_scales.size() == c, "weight_preliminary: one kernel scale per location");

  // leave-one-out kernel coverage: candidate i is weighed against the
  // equal-weight mixture of the kernels at the other |C|-1 locations, so a
  // candidate alone in its region draws the replication mass while members
  // of a cluster cover each other.  Bandwidths adapt to the candidate set:
  // each kernel is widened to its k-th neighbor distance when that exceeds
  // the given scale, which keeps the coverage contrasts informative in any
  // dimension instead of flagging every candidate as isolated.
  if (c == 1) {
    set.dm_log_weights.assign(1, set.locations[0].log_pi);
    if (set.locations[0].tag == LocationProvenance::from_samples)
      counters.density_cache_hits += 1;
    set.normalized_weights.assign(1, 1.0);
    set.degenerate = !std::isfinite(set.locations[0].log_pi);
    if (set.degenerate) set.dm_log_weights[0] = kNegInf;
    return;
  }

  const int dim = static_cast<int>(set.locations.front().x.size());
  Matrix pts(c, dim);
  for (std::size_t j = 0; j < c; ++j) pts.row(j) = set.locations[j].x.transpose();
  counters.adaptation_proposal += static_cast<long long>(c) * (c - 1);

  Vector pt_sq = pts.rowwise().squaredNorm();
  Matrix cross = pts * pts.transpose();
  Matrix r2(c, c);
  for (std::size_t i = 0; i < c; ++i)
    r2.row(i) = (pt_sq[i] - 2.0 * cross.row(i).transpose().array() + pt_sq.array())
                    .max(0.0)
                    .transpose();

  // k-th neighbor distance per kernel owner (self excluded)
  const std::size_t k_nn = std::clamp<std::size_t>(c / 20, 1, 25);
  Vector log_const(c), inv_2s2(c);
  std::vector<double> row(c);
  for (std::size_t j = 0; j < c; ++j) {
    for (std::size_t i = 0; i < c; ++i) row[i] = r2(j, i);
    std::nth_element(row.begin(), row.begin() + k_nn, row.end());
    double knn_dist = std::sqrt(row[k_nn]);  // row[0] is the self distance
    double scale = std::max(kernel_scales[j], knn_dist);
    log_const[j] = -0.5 * dim * kLog2Pi - dim * std::log(scale);
    inv_2s2[j] = 0.5 / (scale * scale);
  }

  Vector log_denom(c);
  for (std::size_t i = 0; i < c; ++i) {
    Eigen::ArrayXd lq = log_const.array() - inv_2s2.array() * r2.row(i).transpose().array();
    lq[i] = kNegInf;  // exclude the candidate's own kernel
    double best = lq.maxCoeff();  // finite: some other kernel always remains
    double s = 0.0;
    for (std::size_t j = 0; j < c; ++j)
      if (j != i) s += std::exp(lq[j] - best);
    log_denom[i] = best + std::log(s) - std::log(static_cast<double>(c - 1));
  }
  finish_preliminary_weights(set, log_denom, counters);
}

void weight_preliminary(PreliminaryLocationSet& set, const ProposalPopulation& pop,
                        EvalCounters& counters) {
  const std::size_t c = set.locations.size();
  require(c >= 1, "weight_preliminary: empty candidate set");

  Matrix pts(c, pop.dim());
  for (std::size_t i = 0; i < c; ++i) pts.row(i) = set.locations[i].x.transpose();
  Vector log_mix = log_population_mixture_batch(pop, pts, counters.adaptation_proposal);
  finish_preliminary_weights(set, log_mix, counters);
}

std::vector<Vector> cooperate_resample(const PreliminaryLocationSet& set, int count,
                                       std::mt19937_64& rng) {
  require(set.normalized_weights.size() == set.locations.size(),
          "cooperate_resample: weights not computed");
  RandomMeasure measure;
  measure.atoms.reserve(set.locations.size());
  for (const PreliminaryLocation& loc : set.locations) measure.atoms.push_back(loc.x);
  measure.weights = set.normalized_weights;
  return global_resample(measure, count, rng);
}

namespace {

double log_gaussian_kernel(const Vector& x, const Vector& center, double scale) {
  const int d = static_cast<int>(x.size());
  return -0.5 * d * kLog2Pi - d * std::log(scale) -
         0.5 * (x - center).squaredNorm() / (scale * scale);
}

// log psi(x) = log sum_i w_i phi_i(x); |C| kernel evaluations.
double log_mixture_model(const PreliminaryLocationSet& set,
                         std::span<const double> kernel_scales, const Vector& x,
                         EvalCounters& counters) {
  const std::size_t c = set.locations.size();
  counters.kernel += static_cast<long long>(c);
  double best = kNegInf;
  std::vector<double> terms(c, kNegInf);
  for (std::size_t i = 0; i < c; ++i) {
    if (set.normalized_weights[i] <= 0.0) continue;
    terms[i] = std::log(set.normalized_weights[i]) +
               log_gaussian_kernel(x, set.locations[i].x, kernel_scales[i]);
    best = std::max(best, terms[i]);
  }
  if (!std::isfinite(best)) return kNegInf;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - best);
  return best + std::log(s);
}

}  // namespace

CooperateMixtureResult cooperate_mixture(const PreliminaryLocationSet& set, int count,
                                         std::span<const double> kernel_scales,
                                         const TargetDensity& target,
                                         EvalCounters& counters, std::mt19937_64& rng,
                                         MixtureIncumbent incumbent) {
  const std::size_t c = set.locations.size();
  require(set.normalized_weights.size() == c, "cooperate_mixture: weights not computed");
  require(kernel_scales.size() == c, "cooperate_mixture: one kernel scale per location");
  require(count >= 1, "cooperate_mixture: count must be >= 1");
  for (double s : kernel_scales)
    require(s > 0.0, "cooperate_mixture: kernel scales must be positive");

  // incumbent slot j: the j-th chain-move location when the set has one,
  // otherwise the j-th listed location
  std::size_t q_offset = 0;
  if (incumbent == MixtureIncumbent::q_set) {
    std::size_t first_q = c;
    for (std::size_t i = 0; i < c; ++i)
      if (set.locations[i].tag == LocationProvenance::from_chain) {
        first_q = i;
        break;
      }
    q_offset = first_q < c ? first_q : 0;
  }
  require(q_offset + count <= c, "cooperate_mixture: not enough incumbents");

  const int d = static_cast<int>(set.locations.front().x.size());
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  CooperateMixtureResult result;
  result.locations.reserve(count);
  result.log_pi.reserve(count);

  for (int j = 0; j < count; ++j) {
    const PreliminaryLocation& inc = set.locations[q_offset + j];

    int comp = categorical_draw(set.normalized_weights, rng);
    Vector candidate(d);
    for (int i = 0; i < d; ++i)
      candidate[i] = set.locations[comp].x[i] + kernel_scales[comp] * normal(rng);
    double u = unif(rng);

    double log_psi_cand = log_mixture_model(set, kernel_scales, candidate, counters);
    double log_psi_inc = log_mixture_model(set, kernel_scales, inc.x, counters);
    counters.target_density += 1;
    double log_pi_cand = target.log_density(candidate);

    double log_num = log_pi_cand + log_psi_inc;
    double log_den = inc.log_pi + log_psi_cand;
    bool accept;
    if (log_num == kNegInf && log_den == kNegInf)
      accept = false;  // both sides dead; keep the incumbent
    else if (log_den == kNegInf)
      accept = true;  // pi(incumbent) = 0 and candidate is alive
    else
      accept = std::log(u) < log_num - log_den;

    if (accept) {
      result.locations.push_back(std::move(candidate));
      result.log_pi.push_back(log_pi_cand);
      result.accepted += 1;
    } else {
      result.locations.push_back(inc.x);
      result.log_pi.push_back(inc.log_pi);
    }
  }
  return result;
}

}  // namespace hpmc
