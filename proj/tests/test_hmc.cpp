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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hpmc/hmc.hpp"
#include "test_util.hpp"

using namespace hpmc;
using hpmc::testing::batch_means_stderr;

namespace {

TargetDensity flat_target(int dim) {
  TargetDensity t;
  t.dim = dim;
  t.log_density = [](const Vector&) { return 0.0; };
  t.grad_log_density = [dim](const Vector&) { return Vector(Vector::Zero(dim)); };
  return t;
}

TargetDensity gaussian_1d(double mean, double sigma) {
  return build_unnormalized_gaussian(Vector::Constant(1, mean), sigma);
}

double hamiltonian(const TargetDensity& t, const Vector& q, const Vector& p) {
  return -t.log_density(q) + 0.5 * p.squaredNorm();
}

}  // namespace

TEST_CASE("free particle drifts by epsilon * L * p") {
  TargetDensity flat = flat_target(3);
  Vector q{{1.0, -2.0, 0.5}};
  Vector p{{0.3, 0.7, -0.2}};
  HmcParams params{0.25, 40};
  int grads = 0;
  auto grad = [&](const Vector& x) {
    grads += 1;
    return flat.grad_log_density(x);
  };
  LeapfrogResult r = leapfrog(q, p, params, grad);
  CHECK((r.q - (q + 0.25 * 40 * p)).norm() < 1e-12);
  CHECK((r.p - p).norm() == 0.0);
  CHECK(grads == 41);  // L + 1 without a cached first gradient
}

TEST_CASE("leapfrog honors a cached first gradient") {
  TargetDensity g = gaussian_1d(0.0, 1.0);
  Vector q{{0.7}}, p{{-0.4}};
  HmcParams params{0.1, 10};
  Vector g0 = g.grad_log_density(q);
  int grads = 0;
  auto grad = [&](const Vector& x) {
    grads += 1;
    return g.grad_log_density(x);
  };
  leapfrog(q, p, params, grad, &g0);
  CHECK(grads == 10);  // exactly L
}

TEST_CASE("leapfrog is time-reversible") {
  TargetDensity banana = build_banana_target({3.0, 1.0, 2});
  Vector q{{0.4, -1.2}}, p{{0.9, 0.3}};
  HmcParams params{0.05, 30};
  auto grad = [&](const Vector& x) { return banana.grad_log_density(x); };
  LeapfrogResult fwd = leapfrog(q, p, params, grad);
  LeapfrogResult back = leapfrog(fwd.q, Vector(-fwd.p), params, grad);
  CHECK((back.q - q).norm() < 1e-10);
  CHECK((back.p + p).norm() < 1e-10);
}

TEST_CASE("energy error scales as epsilon squared") {
  TargetDensity g = gaussian_1d(0.0, 1.0);
  auto grad = [&](const Vector& x) { return g.grad_log_density(x); };
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal(0.0, 1.0);

  // fixed trajectory length so halving epsilon isolates the ~eps^2 error
  auto mean_abs_dh = [&](double eps, int n_steps) {
    HmcParams params{eps, n_steps};
    double total = 0.0;
    std::mt19937_64 local(7);
    std::normal_distribution<double> n2(0.0, 1.0);
    const int trials = 200;
    for (int i = 0; i < trials; ++i) {
      Vector q{{n2(local)}}, p{{n2(local)}};
      LeapfrogResult r = leapfrog(q, p, params, grad);
      total += std::abs(hamiltonian(g, r.q, r.p) - hamiltonian(g, q, p));
    }
    return total / trials;
  };
  double coarse = mean_abs_dh(0.05, 50);
  double fine = mean_abs_dh(0.025, 100);
  double ratio = coarse / fine;
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.5);
}

TEST_CASE("leapfrog preserves phase-space volume") {
  // non-quadratic 1-D potential so the transition map is nonlinear
  TargetDensity t;
  t.dim = 1;
  t.log_density = [](const Vector& x) {
    return -0.25 * std::pow(x[0], 4) - 0.5 * x[0] * x[0];
  };
  t.grad_log_density = [](const Vector& x) {
    return Vector{{-std::pow(x[0], 3) - x[0]}};
  };
  auto grad = [&](const Vector& x) { return t.grad_log_density(x); };
  HmcParams params{0.1, 1};

  auto step = [&](double q, double p) {
    LeapfrogResult r = leapfrog(Vector{{q}}, Vector{{p}}, params, grad);
    return std::pair<double, double>(r.q[0], r.p[0]);
  };
  const double q0 = 0.6, p0 = -0.3, h = 1e-6;
  auto [qp, pp] = step(q0 + h, p0);
  auto [qm, pm] = step(q0 - h, p0);
  auto [qp2, pp2] = step(q0, p0 + h);
  auto [qm2, pm2] = step(q0, p0 - h);
  double dq_dq = (qp - qm) / (2 * h), dp_dq = (pp - pm) / (2 * h);
  double dq_dp = (qp2 - qm2) / (2 * h), dp_dp = (pp2 - pm2) / (2 * h);
  double det = dq_dq * dp_dp - dq_dp * dp_dq;
  CHECK(std::abs(det - 1.0) < 1e-6);
}

TEST_CASE("flat target always accepts") {
  TargetDensity flat = flat_target(2);
  EvalCounters c;
  ChainState state = make_chain_state(flat, Vector::Zero(2), c);
  std::mt19937_64 rng(2);
  HmcParams params{0.3, 5};
  for (int i = 0; i < 50; ++i) {
    HmcStepResult r = hmc_step(state, flat, params, c, rng);
    CHECK(r.accepted);
    state = r.state;
  }
}

TEST_CASE("near-exact integration keeps the acceptance rate above 0.95") {
  TargetDensity g = gaussian_1d(0.0, 1.0);
  EvalCounters c;
  ChainState state = make_chain_state(g, Vector{{0.2}}, c);
  std::mt19937_64 rng(3);
  HmcParams params{0.1, 50};
  int accepted = 0;
  const int steps = 10000;
  for (int i = 0; i < steps; ++i) {
    HmcStepResult r = hmc_step(state, g, params, c, rng);
    state = r.state;
    accepted += r.accepted ? 1 : 0;
  }
  CHECK(static_cast<double>(accepted) / steps > 0.95);
  // one fresh density eval per step plus the initial state's
  CHECK(c.target_density == steps + 1);
  CHECK(c.target_gradient == static_cast<long long>(steps) * 50 + 1);
}

TEST_CASE("long-run chain mean matches the target mean") {
  TargetDensity g = gaussian_1d(3.0, 1.0);
  EvalCounters c;
  ChainState state = make_chain_state(g, Vector{{0.0}}, c);
  std::mt19937_64 rng(4);
  HmcParams params{0.15, 20};
  const int steps = 100000;
  std::vector<double> chain;
  chain.reserve(steps);
  for (int i = 0; i < steps; ++i) {
    state = hmc_step(state, g, params, c, rng).state;
    chain.push_back(state.position[0]);
  }
  double mean = hpmc::testing::mean_of(chain);
  double se = batch_means_stderr(chain);
  CHECK(std::abs(mean - 3.0) < 3.0 * se);
}

TEST_CASE("empirical detailed balance on a coarse grid") {
  TargetDensity g = gaussian_1d(0.0, 1.0);
  EvalCounters c;
  ChainState state = make_chain_state(g, Vector{{0.0}}, c);
  std::mt19937_64 rng(5);
  HmcParams params{0.5, 3};
  const int steps = 200000;
  auto bin_of = [](double x) {
    if (x < -0.5) return 0;
    if (x < 0.5) return 1;
    return 2;
  };
  Matrix flows = Matrix::Zero(3, 3);
  int prev = bin_of(state.position[0]);
  for (int i = 0; i < steps; ++i) {
    state = hmc_step(state, g, params, c, rng).state;
    int cur = bin_of(state.position[0]);
    flows(prev, cur) += 1.0;
    prev = cur;
  }
  // stationarity + reversibility make opposite flows equal in expectation
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) {
      double f_ab = flows(a, b), f_ba = flows(b, a);
      double se = std::sqrt(f_ab + f_ba);
      CHECK(std::abs(f_ab - f_ba) < 4.0 * se);
    }
}

TEST_CASE("rejected transitions leave the state bit-identical") {
  // a huge step size on a narrow gaussian forces rejections
  TargetDensity g = gaussian_1d(0.0, 0.05);
  EvalCounters c;
  ChainState state = make_chain_state(g, Vector{{0.02}}, c);
  std::mt19937_64 rng(6);
  HmcParams params{2.5, 30};
  int rejected = 0;
  for (int i = 0; i < 200; ++i) {
    HmcStepResult r = hmc_step(state, g, params, c, rng);
    if (!r.accepted) {
      rejected += 1;
      CHECK(r.state.position[0] == state.position[0]);
      CHECK(r.state.log_pi == state.log_pi);
      CHECK(r.state.grad[0] == state.grad[0]);
    }
    state = r.state;
  }
  CHECK(rejected > 0);
}

TEST_CASE("non-finite gradients surface as divergences") {
  TargetDensity t;
  t.dim = 1;
  t.log_density = [](const Vector& x) { return -x[0] * x[0]; };
  t.grad_log_density = [](const Vector& x) {
    return Vector{{x[0] > 1.0 ? std::numeric_limits<double>::quiet_NaN() : -2.0 * x[0]}};
  };
  EvalCounters c;
  ChainState state{Vector{{0.9}}, -0.81, Vector{{-1.8}}};
  std::mt19937_64 rng(7);
  HmcParams params{1.0, 10};
  bool saw_divergence = false;
  for (int i = 0; i < 50; ++i) {
    HmcStepResult r = hmc_step(state, t, params, c, rng);
    if (r.diverged) {
      saw_divergence = true;
      CHECK_FALSE(r.accepted);
      CHECK(r.state.position[0] == state.position[0]);
    }
  }
  CHECK(saw_divergence);
}
