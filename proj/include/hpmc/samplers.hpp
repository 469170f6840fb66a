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

#ifndef HPMC_SAMPLERS_HPP
#define HPMC_SAMPLERS_HPP

#include <string>
#include <vector>

#include "hpmc/adaptation.hpp"

namespace hpmc {

enum class Algorithm {
  hpmc_resample,
  hpmc_mixture,
  pmc_standard,
  dm_pmc,
  lr_pmc,
  gr_pmc,
  amis,
  pi_mais,
  hais,
};

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);  // throws SpecError

// Denominator used when DM-weighting the preliminary locations.
enum class PreliminaryWeighting {
  candidate_kernels,   // kernel mixture over the candidate set (stable)
  population_mixture,  // the iteration-t proposal mixture (comparison only)
};

struct SamplerConfig {
  Algorithm algorithm = Algorithm::hpmc_resample;
  int n_proposals = 100;         // N
  int samples_per_proposal = 5;  // K
  int n_iterations = 100;        // T
  double sigma = 1.0;            // proposal scale
  double init_box_low = -4.0;    // per-coordinate initialization box
  double init_box_high = 4.0;
  HmcParams hmc;                 // epsilon, L for HMC-based algorithms
  int hmc_burn_in = 0;           // extra chain transitions before iteration 1
  double mh_scale = 5.0;         // lambda, pi_mais upper layer
  std::uint64_t seed = 0;
  MixtureIncumbent mixture_incumbent = MixtureIncumbent::q_set;
  PreliminaryWeighting preliminary_weighting = PreliminaryWeighting::candidate_kernels;

  // Ablation switches for the hpmc family (hais equals hpmc_resample with
  // both adaptation extras off).
  bool skip_sample_preliminaries = false;  // drop Step 3(a)-i
  bool skip_cooperation = false;           // drop Step 3(b)

  bool archive_samples = false;  // keep per-iteration weighted samples

  void validate(int target_dim) const;  // throws SpecError
};

struct IterationRecord {
  double log_z_so_far = kNegInf;
  Vector snis_so_far;
  int degenerate_weight_groups = 0;
  int hmc_accepted = 0;
  int hmc_divergences = 0;
  int mh_accepted = 0;
  int coop_accepted = 0;
};

struct RunDiagnostics {
  long long degenerate_weight_events = 0;
  long long hmc_steps = 0;
  long long hmc_accepts = 0;
  long long hmc_divergences = 0;
  long long mh_steps = 0;
  long long mh_accepts = 0;
  long long coop_steps = 0;
  long long coop_accepts = 0;
  long long adaptation_failures = 0;  // iterations that kept the previous
                                      // population after an error
};

struct RunOutput {
  std::vector<Vector> initial_locations;
  // location_history[t] holds the population produced by iteration t+1's
  // adaptation (the locations iteration t+2 samples from); length T.
  std::vector<std::vector<Vector>> location_history;
  Vector snis_mean;
  double z_hat = 0.0;
  double log_z_hat = kNegInf;
  // Z-hat under the weight convention without the 1/N mixture factor in
  // the DM denominator (differs by a factor of N); reported side by side
  // because published numbers do not pin the convention.
  double log_z_hat_no_mixture_factor = kNegInf;
  EvalCounters counters;
  RunDiagnostics diagnostics;
  std::vector<IterationRecord> per_iteration;
  std::vector<std::vector<WeightedSample>> archived_samples;
};

// Full algorithm runs.  Module errors inside an iteration become run-level
// diagnostics; a run never aborts after it has started iterating.
RunOutput run_sampler(const SamplerConfig& config, const TargetDensity& target);
RunOutput run_hpmc(const SamplerConfig& config, const TargetDensity& target);
RunOutput run_pmc_variant(const SamplerConfig& config, const TargetDensity& target);
RunOutput run_amis(const SamplerConfig& config, const TargetDensity& target);
RunOutput run_layered(const SamplerConfig& config, const TargetDensity& target);

// Per-iteration target-evaluation cost of each algorithm in the published
// complexity accounting, and the iteration count T that spends a total
// budget of E target evaluations.
long long per_iteration_target_cost(Algorithm a, int n_proposals,
                                    int samples_per_proposal);
long long budget_iterations(Algorithm a, int n_proposals, int samples_per_proposal,
                            long long total_target_evals);  // throws SpecError

// Closed-form counter expectations for a run of the given config.
struct CounterFormulas {
  long long table2_target = 0;    // published target-eval formula
  long long policy_target = 0;    // fresh calls under this implementation's
                                  // within-iteration caching policy
  long long expected_cache_hits = 0;  // cached reuses a cache-free run pays for
  long long expected_proposal = 0;    // published proposal-eval formula
};
CounterFormulas counter_formulas(const SamplerConfig& config);

}  // namespace hpmc

#endif  // HPMC_SAMPLERS_HPP
