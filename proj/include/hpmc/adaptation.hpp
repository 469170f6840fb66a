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

#ifndef HPMC_ADAPTATION_HPP
#define HPMC_ADAPTATION_HPP

#include <random>
#include <span>
#include <vector>

#include "hpmc/hmc.hpp"
#include "hpmc/resampling.hpp"

namespace hpmc {

// Where a preliminary location came from: resampled weighted samples (the
// P set) or a chain move applied to a proposal location (the Q set).
enum class LocationProvenance { from_samples, from_chain };

struct PreliminaryLocation {
  Vector x;
  double log_pi = kNegInf;  // carried with the location; no re-evaluation
  LocationProvenance tag = LocationProvenance::from_samples;
};

// The candidate set C = P followed by Q, with its DM weights once
// weight_preliminary has run.
struct PreliminaryLocationSet {
  std::vector<PreliminaryLocation> locations;
  std::vector<double> dm_log_weights;
  std::vector<double> normalized_weights;
  bool degenerate = false;  // all-zero weights fell back to uniform
};

// Step 3(a)-i: one location per proposal by local resampling of the
// iteration's weighted samples.  Zero fresh target evaluations.
std::vector<PreliminaryLocation> preliminary_from_samples(
    std::span<const WeightedSample> samples, int n_proposals, std::mt19937_64& rng,
    int* degenerate_groups = nullptr);

struct ChainMoveStats {
  int accepted = 0;
  int divergences = 0;
};

// Step 3(a)-ii: advances each persistent chain by one HMC transition and
// returns the new positions as the Q set.  A diverged chain keeps its
// position and is flagged.
std::vector<PreliminaryLocation> preliminary_from_locations(
    std::span<ChainState> chains, const TargetDensity& target,
    const HmcParams& params, EvalCounters& counters,
    std::span<std::mt19937_64> chain_rngs, ChainMoveStats& stats);

// DM weight of each candidate location, normalized over all |C| locations.
// Numerators reuse the carried log pi; reuses of values produced by the
// sample weighting are counted as cache hits.  Denominator evaluations are
// charged to counters.adaptation_proposal.
//
// Preferred form: the denominator is the equal-weight mixture of Gaussian
// kernels centered at the candidate locations themselves,
//   w_i = pi(mu_i*) / [(1/|C|) sum_j q(mu_i*; mu_j*, s_j^2 I)],
// so a candidate weighs high exactly when the rest of the candidate set
// covers its region poorly.  This keeps the weights bounded and the
// resampled population balanced across distant modes.
void weight_preliminary(PreliminaryLocationSet& set,
                        std::span<const double> kernel_scales,
                        EvalCounters& counters);

// Alternative denominator: the iteration-t proposal mixture
//   w_i = pi(mu_i*) / [(1/N) sum_n q_n(mu_i*)].
// Unstable on far-apart modes (an uncovered candidate's weight grows like
// the inverse tail mass and resampling then collapses onto it), kept for
// comparison runs.
void weight_preliminary(PreliminaryLocationSet& set, const ProposalPopulation& pop,
                        EvalCounters& counters);

// Step 3(b), cooperation by resampling: N joint multinomial draws over C.
std::vector<Vector> cooperate_resample(const PreliminaryLocationSet& set, int count,
                                       std::mt19937_64& rng);

enum class MixtureIncumbent {
  q_set,    // slot j challenges the j-th chain-move location
  first_n,  // slot j challenges the j-th location of C in listed order
};

struct CooperateMixtureResult {
  std::vector<Vector> locations;
  std::vector<double> log_pi;  // target value at each returned location
  int accepted = 0;
};

// Step 3(b), cooperation by weighted mixture: candidates are drawn from
// psi(mu) = sum_i w_i phi_i(mu | mu_i*) with Gaussian kernels of the given
// per-component scales, and accepted against incumbents with the
// independence-Metropolis ratio min(1, pi(mu') psi(mu*) / (pi(mu*) psi(mu'))).
// Costs exactly `count` fresh target evaluations and 2 * count * |C| kernel
// evaluations.
CooperateMixtureResult cooperate_mixture(const PreliminaryLocationSet& set, int count,
                                         std::span<const double> kernel_scales,
                                         const TargetDensity& target,
                                         EvalCounters& counters, std::mt19937_64& rng,
                                         MixtureIncumbent incumbent = MixtureIncumbent::q_set);

}  // namespace hpmc

#endif  // HPMC_ADAPTATION_HPP
