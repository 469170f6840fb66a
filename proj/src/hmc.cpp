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

#include "hpmc/hmc.hpp"

#include <cmath>

namespace hpmc {

namespace {

bool finite(const Vector& v) { return v.allFinite(); }

}  // namespace

ChainState make_chain_state(const TargetDensity& target, const Vector& position,
                            EvalCounters& counters) {
  auto [log_pi, grad] = evaluate(target, position, true, counters);
  return {position, log_pi, std::move(*grad)};
}

LeapfrogResult leapfrog(const Vector& q0, const Vector& p0, const HmcParams& params,
                        const std::function<Vector(const Vector&)>& grad_log_pi,
                        const Vector* cached_grad) {
  params.validate();
  require(finite(q0) && finite(p0), "leapfrog: non-finite phase point");
  const double eps = params.step_size;

  LeapfrogResult out;
  Vector q = q0;
  // grad U = -grad log pi
  Vector g = cached_grad ? *cached_grad : grad_log_pi(q);
  if (!finite(g)) return {q0, p0, g, true};
  Vector p = p0 + 0.5 * eps * g;

  for (int l = 0; l < params.n_leapfrog; ++l) {
    q += eps * p;
    if (!finite(q)) return {q0, p0, g, true};
    g = grad_log_pi(q);
    if (!finite(g)) return {q0, p0, g, true};
    // full kick between steps, half kick after the last
    p += (l + 1 < params.n_leapfrog ? eps : 0.5 * eps) * g;
    if (!finite(p)) return {q0, p0, g, true};
  }
  out.q = std::move(q);
  out.p = std::move(p);
  out.grad_q = std::move(g);
  return out;
}

HmcStepResult hmc_step(const ChainState& state, const TargetDensity& target,
                       const HmcParams& params, EvalCounters& counters,
                       std::mt19937_64& rng) {
  params.validate();
  require(state.position.size() == target.dim, "hmc_step: dimension mismatch");

  const int d = target.dim;
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector p(d);
  for (int i = 0; i < d; ++i) p[i] = normal(rng);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double u = unif(rng);  // always consumed: fixed rng cost per call

  auto counted_grad = [&](const Vector& q) {
    counters.target_gradient += 1;
    return target.grad_log_density(q);
  };
  LeapfrogResult traj = leapfrog(state.position, p, params, counted_grad,
                                 &state.grad);
  // the cached-first-gradient scheme costs exactly L fresh gradients
  if (traj.diverged) return {state, false, true};

  counters.target_density += 1;
  double log_pi_prop = target.log_density(traj.q);
  double h0 = -state.log_pi + 0.5 * p.squaredNorm();
  double h1 = -log_pi_prop + 0.5 * traj.p.squaredNorm();
  if (std::isnan(h1) || h1 == -std::numeric_limits<double>::infinity())
    return {state, false, true};

  // accept iff log u < h0 - h1 (min(1, .) implicit in the comparison)
  bool accept = std::log(u) < h0 - h1;
  if (!accept) return {state, false, false};
  return {{std::move(traj.q), log_pi_prop, std::move(traj.grad_q)}, true, false};
}

}  // namespace hpmc
