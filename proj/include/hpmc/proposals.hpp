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

#ifndef HPMC_PROPOSALS_HPP
#define HPMC_PROPOSALS_HPP

#include <random>
#include <vector>

#include "hpmc/common.hpp"

namespace hpmc {

// Isotropic Gaussian proposal q(x; mu, sigma^2 I).  The scale field is a
// single standard deviation; full covariances are out of scope.
struct GaussianProposal {
  Vector location;
  double scale = 1.0;
};

// The population of N proposals live at a given iteration.  Treated as an
// immutable snapshot; adaptation builds the next population.
struct ProposalPopulation {
  std::vector<GaussianProposal> proposals;
  int iteration = 1;

  int size() const { return static_cast<int>(proposals.size()); }
  int dim() const {
    return proposals.empty() ? 0 : static_cast<int>(proposals.front().location.size());
  }
};

// N locations drawn i.i.d. uniformly per coordinate from [box_low, box_high].
ProposalPopulation init_population(int n, int dim, double box_low, double box_high,
                                   double sigma, std::mt19937_64& rng);

struct PopulationDraw {
  int proposal_index = 0;
  Vector x;
};

// Exactly n*k draws in proposal-major order: draw (n,k) ~ N(mu_n, sigma_n^2 I).
std::vector<PopulationDraw> sample_population(const ProposalPopulation& pop,
                                              int samples_per_proposal,
                                              std::mt19937_64& rng);

// Normalized Gaussian log-pdf of a single proposal.  Bumps the given
// proposal-evaluation counter by 1.
double log_proposal_pdf(const GaussianProposal& p, const Vector& x,
                        long long& proposal_eval_counter);

// log[(1/N) sum_j q_j(x)] via log-sum-exp; bumps the counter by N.
double log_population_mixture(const ProposalPopulation& pop, const Vector& x,
                              long long& proposal_eval_counter);

// Mixture log-density for every row of `points` (one point per row).
// Equivalent to calling log_population_mixture per row, but vectorized.
Vector log_population_mixture_batch(const ProposalPopulation& pop,
                                    const Matrix& points,
                                    long long& proposal_eval_counter);

}  // namespace hpmc

#endif  // HPMC_PROPOSALS_HPP
