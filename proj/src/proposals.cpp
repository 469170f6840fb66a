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

#include "hpmc/proposals.hpp"

#include <cmath>

namespace hpmc {

ProposalPopulation init_population(int n, int dim, double box_low, double box_high,
                                   double sigma, std::mt19937_64& rng) {
  if (n < 1) throw SpecError("init_population: N must be >= 1");
  if (dim < 1) throw SpecError("init_population: dim must be >= 1");
  if (!(box_low <= box_high)) throw SpecError("init_population: box_low > box_high");
  if (!(sigma > 0.0)) throw SpecError("init_population: sigma must be positive");

  std::uniform_real_distribution<double> unif(box_low, box_high);
  ProposalPopulation pop;
  pop.iteration = 1;
  pop.proposals.reserve(n);
  for (int i = 0; i < n; ++i) {
    Vector loc(dim);
    for (int d = 0; d < dim; ++d)
      loc[d] = (box_low == box_high) ? box_low : unif(rng);
    pop.proposals.push_back({std::move(loc), sigma});
  }
  return pop;
}

std::vector<PopulationDraw> sample_population(const ProposalPopulation& pop,
                                              int samples_per_proposal,
                                              std::mt19937_64& rng) {
  require(samples_per_proposal >= 1, "sample_population: K must be >= 1");
  require(pop.size() >= 1, "sample_population: empty population");
  const int dim = pop.dim();
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<PopulationDraw> draws;
  draws.reserve(static_cast<std::size_t>(pop.size()) * samples_per_proposal);
  for (int n = 0; n < pop.size(); ++n) {
    const GaussianProposal& p = pop.proposals[n];
    for (int k = 0; k < samples_per_proposal; ++k) {
      Vector x(dim);
      for (int d = 0; d < dim; ++d) x[d] = p.location[d] + p.scale * normal(rng);
      draws.push_back({n, std::move(x)});
    }
  }
  return draws;
}

double log_proposal_pdf(const GaussianProposal& p, const Vector& x,
                        long long& proposal_eval_counter) {
  require(x.size() == p.location.size(), "log_proposal_pdf: dimension mismatch");
  proposal_eval_counter += 1;
  const int d = static_cast<int>(x.size());
  double r2 = (x - p.location).squaredNorm();
  return -0.5 * d * kLog2Pi - d * std::log(p.scale) - 0.5 * r2 / (p.scale * p.scale);
}

double log_population_mixture(const ProposalPopulation& pop, const Vector& x,
                              long long& proposal_eval_counter) {
  require(pop.size() >= 1, "log_population_mixture: empty population");
  require(x.size() == pop.dim(), "log_population_mixture: dimension mismatch");
  proposal_eval_counter += pop.size();
  const int d = pop.dim();
  double best = kNegInf;
  std::vector<double> lq(pop.size());
  for (int n = 0; n < pop.size(); ++n) {
    const GaussianProposal& p = pop.proposals[n];
    double r2 = (x - p.location).squaredNorm();
    lq[n] = -0.5 * d * kLog2Pi - d * std::log(p.scale) - 0.5 * r2 / (p.scale * p.scale);
    if (lq[n] > best) best = lq[n];
  }
  if (!std::isfinite(best)) return kNegInf;
  double s = 0.0;
  for (double v : lq) s += std::exp(v - best);
  return best + std::log(s) - std::log(static_cast<double>(pop.size()));
}

Vector log_population_mixture_batch(const ProposalPopulation& pop,
                                    const Matrix& points,
                                    long long& proposal_eval_counter) {
  require(pop.size() >= 1, "log_population_mixture_batch: empty population");
  require(points.cols() == pop.dim(), "log_population_mixture_batch: dimension mismatch");
  const int n_points = static_cast<int>(points.rows());
  const int n_props = pop.size();
  const int d = pop.dim();
  proposal_eval_counter += static_cast<long long>(n_points) * n_props;

  Matrix locs(n_props, d);
  Vector log_const(n_props), inv_2s2(n_props), loc_sq(n_props);
  for (int n = 0; n < n_props; ++n) {
    const GaussianProposal& p = pop.proposals[n];
    locs.row(n) = p.location.transpose();
    log_const[n] = -0.5 * d * kLog2Pi - d * std::log(p.scale);
    inv_2s2[n] = 0.5 / (p.scale * p.scale);
    loc_sq[n] = p.location.squaredNorm();
  }

  // |x - mu|^2 = |x|^2 - 2 x.mu + |mu|^2, with the cross term as one GEMM.
  Vector pt_sq = points.rowwise().squaredNorm();
  Matrix cross = points * locs.transpose();  // n_points x n_props
  Vector out(n_points);
  for (int i = 0; i < n_points; ++i) {
    Eigen::ArrayXd r2 =
        (pt_sq[i] - 2.0 * cross.row(i).transpose().array() + loc_sq.array()).max(0.0);
    Eigen::ArrayXd lq = log_const.array() - inv_2s2.array() * r2;
    double best = lq.maxCoeff();
    if (!std::isfinite(best)) {
      out[i] = kNegInf;
      continue;
    }
    out[i] = best + std::log((lq - best).exp().sum()) - std::log(static_cast<double>(n_props));
  }
  return out;
}

}  // namespace hpmc
