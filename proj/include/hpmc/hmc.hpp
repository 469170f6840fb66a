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

#ifndef HPMC_HMC_HPP
#define HPMC_HMC_HPP

#include <functional>
#include <random>

#include "hpmc/targets.hpp"

namespace hpmc {

// Fixed-step Hamiltonian Monte Carlo with unit mass matrix, momentum fully
// resampled each transition, and a standard Metropolis correction.  No
// step-size adaptation, no jitter.
struct HmcParams {
  double step_size = 0.1;  // leapfrog step epsilon
  int n_leapfrog = 50;     // leapfrog steps L

  void validate() const {
    if (!(step_size > 0.0)) throw SpecError("hmc: step_size must be positive");
    if (n_leapfrog < 1) throw SpecError("hmc: n_leapfrog must be >= 1");
  }
};

// Persistent per-proposal chain state; caches the target value and gradient
// at the current position so consecutive transitions share them.
struct ChainState {
  Vector position;
  double log_pi = kNegInf;
  Vector grad;
};

ChainState make_chain_state(const TargetDensity& target, const Vector& position,
                            EvalCounters& counters);

struct LeapfrogResult {
  Vector q;
  Vector p;
  Vector grad_q;        // gradient at the final position (valid unless diverged)
  bool diverged = false;
};

// L steps of half-kick / drift / half-kick with unit mass.  Consumes L+1
// gradient evaluations of `grad_log_pi`, or L when `cached_grad` supplies
// the gradient at q.
LeapfrogResult leapfrog(const Vector& q, const Vector& p, const HmcParams& params,
                        const std::function<Vector(const Vector&)>& grad_log_pi,
                        const Vector* cached_grad = nullptr);

struct HmcStepResult {
  ChainState state;
  bool accepted = false;
  bool diverged = false;
};

// One HMC transition: p ~ N(0, I), leapfrog, accept with probability
// min(1, exp(H(q,p) - H(q',p'))) where H = -log pi(q) + |p|^2 / 2.
// Exactly one fresh density evaluation (at the proposed point) and L
// gradient evaluations are charged per call; a rejection returns the input
// state unchanged.
HmcStepResult hmc_step(const ChainState& state, const TargetDensity& target,
                       const HmcParams& params, EvalCounters& counters,
                       std::mt19937_64& rng);

}  // namespace hpmc

#endif  // HPMC_HMC_HPP
