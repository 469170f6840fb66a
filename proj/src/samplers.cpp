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

#include "hpmc/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hpmc/rng.hpp"

namespace hpmc {

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::hpmc_resample: return "hpmc_resample";
    case Algorithm::hpmc_mixture: return "hpmc_mixture";
    case Algorithm::pmc_standard: return "pmc_standard";
    case Algorithm::dm_pmc: return "dm_pmc";
    case Algorithm::lr_pmc: return "lr_pmc";
    case Algorithm::gr_pmc: return "gr_pmc";
    case Algorithm::amis: return "amis";
    case Algorithm::pi_mais: return "pi_mais";
    case Algorithm::hais: return "hais";
  }
  throw SpecError("unknown algorithm id");
}

Algorithm algorithm_from_name(const std::string& name) {
  static const std::map<std::string, Algorithm> table = {
      {"hpmc_resample", Algorithm::hpmc_resample},
      {"hpmc_mixture", Algorithm::hpmc_mixture},
      {"pmc_standard", Algorithm::pmc_standard},
      {"dm_pmc", Algorithm::dm_pmc},
      {"lr_pmc", Algorithm::lr_pmc},
      {"gr_pmc", Algorithm::gr_pmc},
      {"amis", Algorithm::amis},
      {"pi_mais", Algorithm::pi_mais},
      {"hais", Algorithm::hais},
  };
  auto it = table.find(name);
  if (it == table.end()) throw SpecError("unknown algorithm: " + name);
  return it->second;
}

namespace {

bool uses_hmc(Algorithm a) {
  return a == Algorithm::hpmc_resample || a == Algorithm::hpmc_mixture ||
         a == Algorithm::hais;
}

bool uses_mh(Algorithm a) { return a == Algorithm::pi_mais; }

bool uses_dm_weights(Algorithm a) { return a != Algorithm::pmc_standard; }

}  // namespace

void SamplerConfig::validate(int target_dim) const {
  if (target_dim < 1) throw SpecError("sampler config: target dimension must be >= 1");
  if (n_proposals < 1) throw SpecError("sampler config: N must be >= 1");
  if (samples_per_proposal < 1) throw SpecError("sampler config: K must be >= 1");
  if (n_iterations < 1) throw SpecError("sampler config: T must be >= 1");
  if (!(sigma > 0.0)) throw SpecError("sampler config: sigma must be positive");
  if (!(init_box_low <= init_box_high))
    throw SpecError("sampler config: initialization box is empty");
  if (hmc_burn_in < 0) throw SpecError("sampler config: hmc_burn_in must be >= 0");
  if (algorithm == Algorithm::pmc_standard && samples_per_proposal != 1)
    throw SpecError("sampler config: pmc_standard runs with K = 1");
  if (algorithm == Algorithm::amis && n_proposals != 1)
    throw SpecError("sampler config: amis runs with a single proposal (N = 1)");
  if (uses_hmc(algorithm)) hmc.validate();
  if (uses_mh(algorithm) && !(mh_scale > 0.0))
    throw SpecError("sampler config: mh_scale must be positive");
}

long long per_iteration_target_cost(Algorithm a, int n, int k) {
  const long long N = n, K = k;
  switch (a) {
    case Algorithm::pmc_standard: return N;
    case Algorithm::dm_pmc:
    case Algorithm::lr_pmc:
    case Algorithm::gr_pmc: return K * N;
    case Algorithm::amis: return K;
    case Algorithm::pi_mais:
    case Algorithm::hais: return K * N + N;
    case Algorithm::hpmc_resample: return K * N + 2 * N;
    case Algorithm::hpmc_mixture: return K * N + 3 * N;
  }
  throw SpecError("unknown algorithm id");
}

long long budget_iterations(Algorithm a, int n, int k, long long total_target_evals) {
  long long cost = per_iteration_target_cost(a, n, k);
  if (total_target_evals < cost)
    throw SpecError("budget_iterations: budget below one iteration's cost");
  return total_target_evals / cost;
}

CounterFormulas counter_formulas(const SamplerConfig& cfg) {
  const long long N = cfg.n_proposals, K = cfg.samples_per_proposal,
                  T = cfg.n_iterations;
  CounterFormulas f;
  f.table2_target = per_iteration_target_cost(cfg.algorithm, cfg.n_proposals,
                                              cfg.samples_per_proposal) * T;
  switch (cfg.algorithm) {
    case Algorithm::pmc_standard:
      f.policy_target = N * T;
      f.expected_proposal = N * T;
      break;
    case Algorithm::dm_pmc:
    case Algorithm::lr_pmc:
    case Algorithm::gr_pmc:
      f.policy_target = K * N * T;
      f.expected_proposal = K * N * N * T;
      break;
    case Algorithm::amis:
      f.policy_target = K * T;
      f.expected_proposal = K * T * T;
      break;
    case Algorithm::pi_mais:
    case Algorithm::hais:
      // one chain transition per proposal per iteration, plus the one-off
      // evaluation at the chain starting points
      f.policy_target = (K * N + N) * T + N;
      f.expected_proposal = K * N * N * T;
      break;
    case Algorithm::hpmc_resample:
      f.policy_target = (K * N + N) * T + N;
      f.expected_cache_hits = N * T;  // P locations reuse Step-2 values
      f.expected_proposal = K * N * N * T;
      break;
    case Algorithm::hpmc_mixture:
      f.policy_target = (K * N + 2 * N) * T + N;
      f.expected_cache_hits = N * T;
      f.expected_proposal = K * N * N * T;
      break;
  }
  if (uses_hmc(cfg.algorithm))
    f.policy_target += static_cast<long long>(cfg.hmc_burn_in) * N;
  if (cfg.skip_sample_preliminaries) f.expected_cache_hits = 0;
  if (cfg.skip_cooperation) {
    f.expected_cache_hits = 0;
    if (cfg.algorithm == Algorithm::hpmc_resample)
      f.policy_target = (K * N + N) * T + N;
    if (cfg.algorithm == Algorithm::hpmc_mixture)
      f.policy_target = (K * N + N) * T + N;
  }
  return f;
}

namespace {

ChainState make_mh_state(const TargetDensity& target, const Vector& position,
                         EvalCounters& counters) {
  auto [log_pi, grad] = evaluate(target, position, false, counters);
  return {position, log_pi, Vector()};
}

// Symmetric random-walk Metropolis transition (pi_mais upper layer).
void rw_mh_step(ChainState& chain, const TargetDensity& target, double scale,
                EvalCounters& counters, std::mt19937_64& rng, RunDiagnostics& diag) {
  const int d = target.dim;
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector candidate(d);
  for (int i = 0; i < d; ++i) candidate[i] = chain.position[i] + scale * normal(rng);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double u = unif(rng);

  counters.target_density += 1;
  double log_pi_cand = target.log_density(candidate);
  diag.mh_steps += 1;
  if (std::log(u) < log_pi_cand - chain.log_pi) {
    chain.position = std::move(candidate);
    chain.log_pi = log_pi_cand;
    diag.mh_accepts += 1;
  }
}

std::vector<Vector> population_locations(const ProposalPopulation& pop) {
  std::vector<Vector> out;
  out.reserve(pop.proposals.size());
  for (const GaussianProposal& p : pop.proposals) out.push_back(p.location);
  return out;
}

void set_locations(ProposalPopulation& pop, std::vector<Vector> locations) {
  for (std::size_t n = 0; n < locations.size(); ++n)
    pop.proposals[n].location = std::move(locations[n]);
}

RunOutput run_core(const SamplerConfig& cfg, const TargetDensity& target) {
  cfg.validate(target.dim);
  const int N = cfg.n_proposals;
  const int K = cfg.samples_per_proposal;
  const int dim = target.dim;
  const WeightScheme scheme =
      uses_dm_weights(cfg.algorithm) ? WeightScheme::dm : WeightScheme::standard;
  const bool chain_hmc = uses_hmc(cfg.algorithm);
  const bool chain_mh = uses_mh(cfg.algorithm);
  const bool hpmc_family = cfg.algorithm == Algorithm::hpmc_resample ||
                           cfg.algorithm == Algorithm::hpmc_mixture;
  const bool cooperate = hpmc_family && !cfg.skip_cooperation;
  const bool build_p = cooperate && !cfg.skip_sample_preliminaries;

  RunOutput out;
  out.snis_mean = Vector::Zero(dim);

  auto init_rng = substream(cfg.seed, StreamTag::population_init);
  ProposalPopulation pop = init_population(N, dim, cfg.init_box_low,
                                           cfg.init_box_high, cfg.sigma, init_rng);
  out.initial_locations = population_locations(pop);

  std::vector<ChainState> chains;
  if (chain_hmc || chain_mh) {
    chains.reserve(N);
    for (int n = 0; n < N; ++n)
      chains.push_back(chain_hmc
                           ? make_chain_state(target, pop.proposals[n].location,
                                              out.counters)
                           : make_mh_state(target, pop.proposals[n].location,
                                           out.counters));
    for (int b = 0; b < cfg.hmc_burn_in && chain_hmc; ++b) {
      for (int n = 0; n < N; ++n) {
        auto rng = substream(cfg.seed, StreamTag::chain_burn_in, b, n);
        HmcStepResult step = hmc_step(chains[n], target, cfg.hmc, out.counters, rng);
        chains[n] = std::move(step.state);
      }
    }
    // chains continue from the burn-in positions; proposals do too
    if (cfg.hmc_burn_in > 0) {
      std::vector<Vector> warm;
      warm.reserve(N);
      for (const ChainState& c : chains) warm.push_back(c.position);
      set_locations(pop, std::move(warm));
      out.initial_locations = population_locations(pop);
    }
  }

  EstimateAccumulator acc(dim);
  out.location_history.reserve(cfg.n_iterations);
  out.per_iteration.reserve(cfg.n_iterations);

  for (int t = 1; t <= cfg.n_iterations; ++t) {
    pop.iteration = t;
    IterationRecord record;

    // Step 1: sampling
    auto sampling_rng = substream(cfg.seed, StreamTag::sampling, t);
    std::vector<PopulationDraw> draws = sample_population(pop, K, sampling_rng);

    // Step 2: weighting
    std::vector<WeightedSample> samples =
        compute_weights(draws, pop, target, scheme, out.counters);
    NormalizedWeights global_norm = normalize(samples, NormalizationScope::global);
    record.degenerate_weight_groups += global_norm.degenerate_groups;

    for (const WeightedSample& s : samples) acc.absorb(s);
    record.log_z_so_far = log_z_estimate(acc);
    record.snis_so_far = snis_estimate(acc);
    if (cfg.archive_samples) out.archived_samples.push_back(samples);

    // Step 3: adaptation
    try {
      switch (cfg.algorithm) {
        case Algorithm::hpmc_resample:
        case Algorithm::hpmc_mixture:
        case Algorithm::hais: {
          PreliminaryLocationSet cand;
          if (build_p) {
            auto lr_rng = substream(cfg.seed, StreamTag::local_resample, t);
            int degenerate = 0;
            auto p_set = preliminary_from_samples(samples, N, lr_rng, &degenerate);
            record.degenerate_weight_groups += degenerate;
            cand.locations = std::move(p_set);
          }
          std::vector<std::mt19937_64> chain_rngs;
          chain_rngs.reserve(N);
          for (int n = 0; n < N; ++n)
            chain_rngs.push_back(substream(cfg.seed, StreamTag::chain_move, t, n));
          ChainMoveStats stats;
          auto q_set = preliminary_from_locations(chains, target, cfg.hmc,
                                                  out.counters, chain_rngs, stats);
          out.diagnostics.hmc_steps += N;
          out.diagnostics.hmc_accepts += stats.accepted;
          out.diagnostics.hmc_divergences += stats.divergences;
          record.hmc_accepted = stats.accepted;
          record.hmc_divergences = stats.divergences;

          if (!cooperate) {
            std::vector<Vector> next;
            next.reserve(N);
            for (const PreliminaryLocation& q : q_set) next.push_back(q.x);
            set_locations(pop, std::move(next));
            break;
          }

          cand.locations.insert(cand.locations.end(),
                                std::make_move_iterator(q_set.begin()),
                                std::make_move_iterator(q_set.end()));
          std::vector<double> scales(cand.locations.size());
          for (std::size_t i = 0; i < scales.size(); ++i)
            scales[i] = pop.proposals[i % N].scale;
          if (cfg.preliminary_weighting == PreliminaryWeighting::candidate_kernels)
            weight_preliminary(cand, scales, out.counters);
          else
            weight_preliminary(cand, pop, out.counters);
          if (cand.degenerate) record.degenerate_weight_groups += 1;

          auto coop_rng = substream(cfg.seed, StreamTag::cooperation, t);
          if (cfg.algorithm == Algorithm::hpmc_resample) {
            set_locations(pop, cooperate_resample(cand, N, coop_rng));
          } else {
            CooperateMixtureResult res =
                cooperate_mixture(cand, N, scales, target, out.counters, coop_rng,
                                  cfg.mixture_incumbent);
            out.diagnostics.coop_steps += N;
            out.diagnostics.coop_accepts += res.accepted;
            record.coop_accepted = res.accepted;
            set_locations(pop, std::move(res.locations));
          }
          break;
        }
        case Algorithm::pi_mais: {
          long long accepts_before = out.diagnostics.mh_accepts;
          for (int n = 0; n < N; ++n) {
            auto rng = substream(cfg.seed, StreamTag::chain_move, t, n);
            rw_mh_step(chains[n], target, cfg.mh_scale, out.counters, rng,
                       out.diagnostics);
          }
          record.mh_accepted =
              static_cast<int>(out.diagnostics.mh_accepts - accepts_before);
          std::vector<Vector> next;
          next.reserve(N);
          for (const ChainState& c : chains) next.push_back(c.position);
          set_locations(pop, std::move(next));
          break;
        }
        case Algorithm::pmc_standard:
        case Algorithm::dm_pmc:
        case Algorithm::gr_pmc: {
          RandomMeasure measure;
          measure.atoms.reserve(samples.size());
          for (const WeightedSample& s : samples) measure.atoms.push_back(s.x);
          measure.weights = global_norm.prob;
          auto rng = substream(cfg.seed, StreamTag::adapt_resample, t);
          set_locations(pop, global_resample(measure, N, rng));
          break;
        }
        case Algorithm::lr_pmc: {
          auto rng = substream(cfg.seed, StreamTag::local_resample, t);
          LocalResampleResult lr = local_resample(samples, N, rng);
          record.degenerate_weight_groups += lr.degenerate_groups;
          std::vector<Vector> next;
          next.reserve(N);
          for (ResampledLocation& loc : lr.locations) next.push_back(std::move(loc.x));
          set_locations(pop, std::move(next));
          break;
        }
        case Algorithm::amis:
          throw SpecError("run_core: amis has a dedicated runner");
      }
    } catch (const std::exception&) {
      // keep the previous population and move on; the run must survive
      out.diagnostics.adaptation_failures += 1;
    }

    out.diagnostics.degenerate_weight_events += record.degenerate_weight_groups;
    out.location_history.push_back(population_locations(pop));
    out.per_iteration.push_back(std::move(record));
  }

  out.snis_mean = snis_estimate(acc);
  out.z_hat = z_estimate(acc);
  out.log_z_hat = log_z_estimate(acc);
  out.log_z_hat_no_mixture_factor =
      scheme == WeightScheme::dm && out.log_z_hat != kNegInf
          ? out.log_z_hat - std::log(static_cast<double>(N))
          : out.log_z_hat;
  return out;
}

RunOutput run_amis_impl(const SamplerConfig& cfg, const TargetDensity& target) {
  cfg.validate(target.dim);
  const int K = cfg.samples_per_proposal;
  const int dim = target.dim;
  const int T = cfg.n_iterations;

  RunOutput out;
  auto init_rng = substream(cfg.seed, StreamTag::population_init);
  ProposalPopulation pop = init_population(1, dim, cfg.init_box_low,
                                           cfg.init_box_high, cfg.sigma, init_rng);
  out.initial_locations = population_locations(pop);

  struct ProposalSnapshot {
    Vector location;
    double scale;
  };
  std::vector<ProposalSnapshot> history;
  history.reserve(T);

  std::vector<Vector> xs;              // all samples, in draw order
  std::vector<double> log_pi;          // cached target values
  std::vector<double> log_denom_sum;   // log sum over past proposals of q_tau(x)
  xs.reserve(static_cast<std::size_t>(K) * T);

  auto log_add = [](double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
  };

  for (int t = 1; t <= T; ++t) {
    pop.iteration = t;
    history.push_back({pop.proposals[0].location, pop.proposals[0].scale});

    auto sampling_rng = substream(cfg.seed, StreamTag::sampling, t);
    std::vector<PopulationDraw> draws = sample_population(pop, K, sampling_rng);

    std::size_t first_new = xs.size();
    for (PopulationDraw& d : draws) {
      auto [lp, grad] = evaluate(target, d.x, false, out.counters);
      xs.push_back(std::move(d.x));
      log_pi.push_back(lp);
      log_denom_sum.push_back(kNegInf);
    }

    // temporal deterministic mixture, updated incrementally: new samples
    // meet all past proposals, old samples meet the new proposal only
    for (std::size_t i = first_new; i < xs.size(); ++i) {
      double s = kNegInf;
      for (const ProposalSnapshot& q : history) {
        GaussianProposal gp{q.location, q.scale};
        s = log_add(s, log_proposal_pdf(gp, xs[i], out.counters.proposal));
      }
      log_denom_sum[i] = s;
    }
    GaussianProposal current{history.back().location, history.back().scale};
    for (std::size_t i = 0; i < first_new; ++i)
      log_denom_sum[i] = log_add(
          log_denom_sum[i], log_proposal_pdf(current, xs[i], out.counters.proposal));

    // weights under the iteration-t temporal mixture
    EstimateAccumulator acc(dim);
    std::vector<double> log_w(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double log_denom = log_denom_sum[i] - std::log(static_cast<double>(t));
      log_w[i] = log_pi[i] - log_denom;
      if (std::isnan(log_w[i])) log_w[i] = kNegInf;
      acc.absorb(log_w[i], xs[i]);
    }

    IterationRecord record;
    record.log_z_so_far = log_z_estimate(acc);
    record.snis_so_far = snis_estimate(acc);

    // moment matching on all weighted samples so far
    if (!acc.degenerate()) {
      Vector mean = snis_estimate(acc);
      double m = *std::max_element(log_w.begin(), log_w.end());
      double wsum = 0.0, var = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        double r = std::exp(log_w[i] - m);
        wsum += r;
        var += r * (xs[i] - mean).squaredNorm();
      }
      var /= wsum * static_cast<double>(dim);
      if (std::isfinite(var) && var > 1e-16) {
        pop.proposals[0].location = mean;
        pop.proposals[0].scale = std::sqrt(var);
      } else {
        record.degenerate_weight_groups += 1;
      }
    } else {
      record.degenerate_weight_groups += 1;
    }
    out.diagnostics.degenerate_weight_events += record.degenerate_weight_groups;
    out.location_history.push_back(population_locations(pop));
    out.per_iteration.push_back(std::move(record));

    if (t == T) {
      out.snis_mean = snis_estimate(acc);
      out.z_hat = z_estimate(acc);
      out.log_z_hat = log_z_estimate(acc);
      out.log_z_hat_no_mixture_factor = out.log_z_hat;
      if (cfg.archive_samples) {
        std::vector<WeightedSample> archive;
        archive.reserve(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i)
          archive.push_back({xs[i], log_w[i], 0, static_cast<int>(i) / K + 1,
                             log_pi[i]});
        out.archived_samples.push_back(std::move(archive));
      }
    }
  }
  return out;
}

}  // namespace

RunOutput run_hpmc(const SamplerConfig& config, const TargetDensity& target) {
  require(config.algorithm == Algorithm::hpmc_resample ||
              config.algorithm == Algorithm::hpmc_mixture,
          "run_hpmc: algorithm must be hpmc_resample or hpmc_mixture");
  return run_core(config, target);
}

RunOutput run_pmc_variant(const SamplerConfig& config, const TargetDensity& target) {
  require(config.algorithm == Algorithm::pmc_standard ||
              config.algorithm == Algorithm::dm_pmc ||
              config.algorithm == Algorithm::lr_pmc ||
              config.algorithm == Algorithm::gr_pmc,
          "run_pmc_variant: algorithm must be a pmc variant");
  return run_core(config, target);
}

RunOutput run_amis(const SamplerConfig& config, const TargetDensity& target) {
  require(config.algorithm == Algorithm::amis, "run_amis: algorithm must be amis");
  return run_amis_impl(config, target);
}

RunOutput run_layered(const SamplerConfig& config, const TargetDensity& target) {
  require(config.algorithm == Algorithm::pi_mais || config.algorithm == Algorithm::hais,
          "run_layered: algorithm must be pi_mais or hais");
  return run_core(config, target);
}

RunOutput run_sampler(const SamplerConfig& config, const TargetDensity& target) {
  if (config.algorithm == Algorithm::amis) return run_amis_impl(config, target);
  return run_core(config, target);
}

}  // namespace hpmc
