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

#include "hpmc/targets.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace hpmc {

std::pair<double, std::optional<Vector>> evaluate(const TargetDensity& target,
                                                  const Vector& x,
                                                  bool want_grad,
                                                  EvalCounters& counters) {
  require(x.size() == target.dim, "evaluate: point dimension mismatch");
  require(!x.hasNaN(), "evaluate: NaN in input point");
  counters.target_density += 1;
  double log_pi = target.log_density(x);
  std::optional<Vector> grad;
  if (want_grad) {
    require(target.has_gradient(), "evaluate: target has no gradient");
    counters.target_gradient += 1;
    grad = target.grad_log_density(x);
  }
  return {log_pi, std::move(grad)};
}

void GaussianMixtureSpec::validate() const {
  if (weights.empty() || weights.size() != means.size() ||
      weights.size() != covariances.size())
    throw SpecError("mixture spec: weights/means/covariances size mismatch");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw SpecError("mixture spec: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw SpecError("mixture spec: weights do not sum to 1");
  const int d = dim();
  for (std::size_t i = 0; i < means.size(); ++i) {
    if (means[i].size() != d) throw SpecError("mixture spec: mean dimension mismatch");
    if (covariances[i].rows() != d || covariances[i].cols() != d)
      throw SpecError("mixture spec: covariance dimension mismatch");
    Eigen::LLT<Matrix> llt(covariances[i]);
    if (llt.info() != Eigen::Success)
      throw SpecError("mixture spec: covariance not positive definite");
  }
}

void BananaSpec::validate() const {
  if (!(sigma > 0.0)) throw SpecError("banana spec: sigma must be positive");
  if (dim < 2) throw SpecError("banana spec: dim must be >= 2");
  if (!std::isfinite(b)) throw SpecError("banana spec: b must be finite");
}

namespace {

// Per-component scratch that avoids the heap for realistic mixture sizes.
class SmallBuffer {
 public:
  explicit SmallBuffer(std::size_t n)
      : data_(n <= kInline ? stack_ : (heap_.resize(n), heap_.data())) {}
  double& operator[](std::size_t i) { return data_[i]; }

 private:
  static constexpr std::size_t kInline = 16;
  double stack_[kInline];
  std::vector<double> heap_;
  double* data_;
};

// Prefactored mixture evaluator shared by the lambdas of a built target.
class MixtureDensity {
 public:
  explicit MixtureDensity(GaussianMixtureSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    const int d = spec_.dim();
    const std::size_t m = spec_.weights.size();
    log_norm_.resize(m);
    llt_.reserve(m);
    iso_prec_.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      llt_.emplace_back(spec_.covariances[i]);
      const auto& L = llt_[i].matrixL();
      double log_det = 0.0;
      for (int j = 0; j < d; ++j) log_det += std::log(L(j, j));
      log_norm_[i] = std::log(spec_.weights[i]) - 0.5 * d * kLog2Pi - log_det;
      // isotropic fast path: Sigma = c*I
      const Matrix& cov = spec_.covariances[i];
      double c = cov(0, 0);
      bool iso = true;
      for (int r = 0; r < d && iso; ++r)
        for (int s = 0; s < d && iso; ++s)
          if (cov(r, s) != (r == s ? c : 0.0)) iso = false;
      if (iso) iso_prec_[i] = 1.0 / c;
    }
  }

  int dim() const { return spec_.dim(); }
  const GaussianMixtureSpec& spec() const { return spec_; }

  // evaluation is stateless: targets are read concurrently by replicate
  // workers
  double log_density(const Vector& x) const {
    const std::size_t m = spec_.weights.size();
    SmallBuffer buf(m);
    double best = kNegInf;
    for (std::size_t i = 0; i < m; ++i) {
      buf[i] = log_norm_[i] - 0.5 * quad_form(i, x);
      if (buf[i] > best) best = buf[i];
    }
    if (!std::isfinite(best)) return kNegInf;
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += std::exp(buf[i] - best);
    return best + std::log(s);
  }

  Vector grad_log_density(const Vector& x) const {
    const std::size_t m = spec_.weights.size();
    SmallBuffer buf(m);
    double best = kNegInf;
    for (std::size_t i = 0; i < m; ++i) {
      buf[i] = log_norm_[i] - 0.5 * quad_form(i, x);
      if (buf[i] > best) best = buf[i];
    }
    Vector g = Vector::Zero(x.size());
    if (!std::isfinite(best)) return g;
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) total += std::exp(buf[i] - best);
    for (std::size_t i = 0; i < m; ++i) {
      double resp = std::exp(buf[i] - best) / total;
      if (resp == 0.0) continue;
      Vector diff = x - spec_.means[i];
      Vector prec_diff = iso_prec_[i] > 0.0 ? Vector(iso_prec_[i] * diff)
                                            : Vector(llt_[i].solve(diff));
      g.noalias() -= resp * prec_diff;
    }
    return g;
  }

 private:
  double quad_form(std::size_t i, const Vector& x) const {
    Vector diff = x - spec_.means[i];
    if (iso_prec_[i] > 0.0) return iso_prec_[i] * diff.squaredNorm();
    return diff.dot(llt_[i].solve(diff));
  }

  GaussianMixtureSpec spec_;
  std::vector<double> log_norm_;
  std::vector<Eigen::LLT<Matrix>> llt_;
  std::vector<double> iso_prec_;
};

}  // namespace

double log_mixture_density(const GaussianMixtureSpec& spec, const Vector& x) {
  require(x.size() == spec.dim(), "log_mixture_density: dimension mismatch");
  require(!x.hasNaN(), "log_mixture_density: NaN in input point");
  return MixtureDensity(spec).log_density(x);
}

TargetDensity build_gaussian_mixture_target(GaussianMixtureSpec spec) {
  auto mix = std::make_shared<MixtureDensity>(std::move(spec));
  TargetDensity t;
  t.dim = mix->dim();
  t.log_density = [mix](const Vector& x) { return mix->log_density(x); };
  t.grad_log_density = [mix](const Vector& x) { return mix->grad_log_density(x); };
  Vector mean = Vector::Zero(t.dim);
  for (std::size_t i = 0; i < mix->spec().weights.size(); ++i)
    mean += mix->spec().weights[i] * mix->spec().means[i];
  t.true_mean = mean;
  t.true_log_z = 0.0;  // mixture is normalized
  return t;
}

TargetDensity build_banana_target(const BananaSpec& spec) {
  spec.validate();
  const double b = spec.b;
  const double inv_s2 = 1.0 / (spec.sigma * spec.sigma);
  const double s2 = spec.sigma * spec.sigma;
  const int d = spec.dim;
  TargetDensity t;
  t.dim = d;
  t.log_density = [b, inv_s2, s2, d](const Vector& x) {
    double u = x[1] + b * (x[0] * x[0] - s2);
    double q = x[0] * x[0] + u * u;
    for (int i = 2; i < d; ++i) q += x[i] * x[i];
    return -0.5 * inv_s2 * q;
  };
  t.grad_log_density = [b, inv_s2, s2, d](const Vector& x) {
    Vector g(d);
    double u = x[1] + b * (x[0] * x[0] - s2);
    g[0] = -inv_s2 * (x[0] + 2.0 * b * x[0] * u);
    g[1] = -inv_s2 * u;
    for (int i = 2; i < d; ++i) g[i] = -inv_s2 * x[i];
    return g;
  };
  t.true_mean = Vector::Zero(d);
  // Each coordinate integrates to sigma*sqrt(2 pi) after conditioning.
  t.true_log_z = d * (std::log(spec.sigma) + 0.5 * kLog2Pi);
  return t;
}

GaussianMixtureSpec toy5_spec() {
  GaussianMixtureSpec s;
  s.weights.assign(5, 0.2);
  auto mean = [](double a, double b) { return Vector{{a, b}}; };
  s.means = {mean(-10, -10), mean(0, 16), mean(13, 8), mean(-9, 7), mean(14, -14)};
  auto cov = [](double a, double b, double c, double d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
  };
  s.covariances = {cov(2, 0.6, 0.6, 1), cov(2, -0.4, -0.4, 2), cov(2, 0.8, 0.8, 2),
                   cov(3, 0, 0, 0.5), cov(2, -0.1, -0.1, 2)};
  return s;
}

GaussianMixtureSpec bimodal20_spec() {
  constexpr int d = 20;
  GaussianMixtureSpec s;
  s.weights.assign(2, 0.5);
  s.means = {Vector::Constant(d, 8.0), Vector::Constant(d, -8.0)};
  s.covariances = {Matrix::Identity(d, d) * 5.0, Matrix::Identity(d, d) * 5.0};
  return s;
}

TargetDensity build_benchmark_target(BenchmarkTarget name, const BananaSpec& banana) {
  switch (name) {
    case BenchmarkTarget::toy5:
      return build_gaussian_mixture_target(toy5_spec());
    case BenchmarkTarget::bimodal20:
      return build_gaussian_mixture_target(bimodal20_spec());
    case BenchmarkTarget::banana:
      return build_banana_target(banana);
  }
  throw SpecError("build_benchmark_target: unknown target");
}

TargetDensity build_unnormalized_gaussian(Vector mean, double sigma) {
  if (!(sigma > 0.0)) throw SpecError("gaussian target: sigma must be positive");
  const int d = static_cast<int>(mean.size());
  const double inv_s2 = 1.0 / (sigma * sigma);
  TargetDensity t;
  t.dim = d;
  t.log_density = [mean, inv_s2](const Vector& x) {
    return -0.5 * inv_s2 * (x - mean).squaredNorm();
  };
  t.grad_log_density = [mean, inv_s2](const Vector& x) {
    return Vector(-inv_s2 * (x - mean));
  };
  t.true_mean = mean;
  t.true_log_z = d * (std::log(sigma) + 0.5 * kLog2Pi);
  return t;
}

TargetDensity scaled_density(TargetDensity base, double log_c) {
  TargetDensity t = base;
  auto inner = base.log_density;
  t.log_density = [inner, log_c](const Vector& x) { return inner(x) + log_c; };
  if (t.true_log_z) t.true_log_z = *t.true_log_z + log_c;
  return t;
}

}  // namespace hpmc
