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

#ifndef HPMC_BENCH_HPP
#define HPMC_BENCH_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hpmc/samplers.hpp"

namespace hpmc::bench {

// Plain-text target block: a name plus numeric parameters.
struct TargetSpec {
  std::string name = "toy5";  // toy5 | bimodal20 | banana
  BananaSpec banana;          // consulted for name == banana

  TargetDensity build() const;                      // throws SpecError
  std::optional<GaussianMixtureSpec> mixture() const;  // for mode metrics
};

// One algorithm configuration under test.  The iteration count in `config`
// is derived from the experiment budget at run time.
struct VariantSpec {
  std::string label;
  SamplerConfig config;
  double epsilon_or_lambda = 0.0;  // reporting column
};

enum class OutputFormat { csv, json };

struct ExperimentSpec {
  TargetSpec target;
  std::vector<VariantSpec> variants;
  int replicates = 50;
  long long budget = 200000;  // total target evaluations per variant
  std::vector<std::string> metrics = {"mse_mean", "mse_z"};
  std::uint64_t seed_base = 1;
  std::string out_path = "results.csv";
  OutputFormat format = OutputFormat::csv;

  void validate() const;  // throws SpecError
};

// Flat key = value text with one [variant ...] section per configuration.
// Unknown keys are rejected.  See the README for the key reference.
ExperimentSpec parse_experiment_file(const std::string& path);
ExperimentSpec parse_experiment_text(const std::string& text);

struct MseResult {
  double mse = 0.0;
  double stderr_value = 0.0;  // sd of per-replicate squared errors / sqrt(R)
};

// Mean over replicates of the squared error; vector truths average the
// squared error over coordinates first.
MseResult compute_mse(const std::vector<Vector>& estimates, const Vector& truth);
MseResult compute_mse(const std::vector<double>& estimates, double truth);

struct ResultRow {
  std::string algorithm;
  int n_proposals = 0;
  int samples_per_proposal = 0;
  double sigma = 0.0;
  double epsilon_or_lambda = 0.0;
  std::string metric;
  double value = 0.0;
  double stderr_value = 0.0;
  int replicates = 0;
  long long target_evals = 0;    // per replicate
  long long proposal_evals = 0;  // per replicate
  std::uint64_t seed_base = 0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

// Per-dimension series for external plotting.
struct SeriesRow {
  std::string algorithm;
  int dim = 0;
  int n_proposals = 0;
  std::string metric;
  double value = 0.0;
  double stderr_value = 0.0;
  int replicates = 0;
};

// Everything the metric aggregation needs from one replicate.
struct ReplicateSummary {
  Vector snis_mean;
  double z_hat = 0.0;
  int discovered_modes = 0;  // at the mode-discovery snapshot, -1 if n/a
  bool all_modes = false;
  EvalCounters counters;
  RunDiagnostics diagnostics;
};

struct VariantResult {
  VariantSpec variant;        // with the derived iteration count filled in
  std::vector<ReplicateSummary> replicates;
};

// Runs R seeded replicates of every variant (replicate r of every variant
// uses the same derived seed) and aggregates the requested metrics.  When
// the spec names an output path the rows are also written there.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, int threads = 0);

// Same, but also hands back the per-replicate summaries.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, int threads,
                                      std::vector<VariantResult>& details);

// Counter audit of completed runs against the published complexity
// accounting and this implementation's caching policy.
struct VariantAudit {
  std::string label;
  std::string algorithm;
  int n_proposals = 0;
  int samples_per_proposal = 0;
  long long iterations = 0;
  long long measured_target = 0;
  long long measured_gradient = 0;
  long long measured_proposal = 0;
  long long measured_adaptation_proposal = 0;
  long long measured_cache_hits = 0;
  CounterFormulas expected;
  bool proposal_ok = false;       // measured == published proposal formula
  bool policy_target_ok = false;  // measured == caching-policy formula
  long long table2_residual = 0;  // measured + cache hits - published formula
  double log_z_hat = kNegInf;
  double log_z_hat_no_mixture_factor = kNegInf;
};

VariantAudit audit_counters(const SamplerConfig& config, const RunOutput& output,
                            const std::string& label);
std::vector<VariantAudit> verify_counters(const std::vector<SamplerConfig>& configs,
                                          const std::vector<RunOutput>& outputs,
                                          const std::vector<std::string>& labels);
void print_audit(std::ostream& os, const std::vector<VariantAudit>& audits);

// Writes rows in the fixed column order (algorithm, N, K, sigma,
// epsilon_or_lambda, metric, value, stderr, replicates, target_evals,
// proposal_evals, seed_base); optionally writes a per-dimension series file
// next to it ("<out>_series.csv").  Rejects empty row lists.
void emit_results(const std::vector<ResultRow>& rows, const std::string& path,
                  OutputFormat format,
                  const std::vector<SeriesRow>& plot_series = {});
std::vector<ResultRow> read_results(const std::string& path, OutputFormat format);

// Number of mixture components with a location inside the given
// Mahalanobis radius.
int count_discovered_modes(const std::vector<Vector>& locations,
                           const GaussianMixtureSpec& spec, double radius = 3.0);

// Thread-count resolution: explicit value, else HPMC_THREADS, else hardware.
int resolve_threads(int requested);

}  // namespace hpmc::bench

#endif  // HPMC_BENCH_HPP
