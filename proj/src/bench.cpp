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

#include "hpmc/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hpmc/rng.hpp"

namespace hpmc::bench {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw SpecError("bad numeric value for '" + key + "': " + value);
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw SpecError("bad integer value for '" + key + "': " + value);
  }
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 17);
  if (ec != std::errc()) throw IoError("number formatting failed");
  return std::string(buf, ptr);
}

double parse_strict_double(const std::string& field) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw IoError("malformed numeric field: " + field);
  return v;
}

}  // namespace

TargetDensity TargetSpec::build() const {
  if (name == "toy5") return build_benchmark_target(BenchmarkTarget::toy5);
  if (name == "bimodal20") return build_benchmark_target(BenchmarkTarget::bimodal20);
  if (name == "banana") return build_benchmark_target(BenchmarkTarget::banana, banana);
  throw SpecError("unknown target: " + name);
}

std::optional<GaussianMixtureSpec> TargetSpec::mixture() const {
  if (name == "toy5") return toy5_spec();
  if (name == "bimodal20") return bimodal20_spec();
  return std::nullopt;
}

void ExperimentSpec::validate() const {
  if (variants.empty()) throw SpecError("experiment: no variants configured");
  if (replicates < 1) throw SpecError("experiment: replicates must be >= 1");
  if (budget < 1) throw SpecError("experiment: budget must be >= 1");
  if (metrics.empty()) throw SpecError("experiment: empty metric set");
  for (const std::string& m : metrics)
    if (m != "mse_mean" && m != "mse_z" && m != "mode_discovery")
      throw SpecError("experiment: unknown metric '" + m + "'");
  if (std::find(metrics.begin(), metrics.end(), "mode_discovery") != metrics.end() &&
      !target.mixture())
    throw SpecError("experiment: mode_discovery needs a mixture target");
  target.build();  // validates target parameters
}

namespace {

// Variant-section keys.  `epsilon` carries the published scale units; by
// default it is interpreted as the total leapfrog trajectory length, so the
// integrator step is epsilon / L (see README).
void apply_variant_key(VariantSpec& v, bool& epsilon_is_step, double& epsilon,
                       const std::string& key, const std::string& value) {
  SamplerConfig& c = v.config;
  if (key == "algorithm") c.algorithm = algorithm_from_name(value);
  else if (key == "N") c.n_proposals = static_cast<int>(parse_int(key, value));
  else if (key == "K") c.samples_per_proposal = static_cast<int>(parse_int(key, value));
  else if (key == "sigma") c.sigma = parse_double(key, value);
  else if (key == "epsilon") epsilon = parse_double(key, value);
  else if (key == "L") c.hmc.n_leapfrog = static_cast<int>(parse_int(key, value));
  else if (key == "epsilon_units") {
    if (value == "step") epsilon_is_step = true;
    else if (value == "trajectory") epsilon_is_step = false;
    else throw SpecError("epsilon_units must be 'step' or 'trajectory'");
  } else if (key == "lambda") c.mh_scale = parse_double(key, value);
  else if (key == "box_low") c.init_box_low = parse_double(key, value);
  else if (key == "box_high") c.init_box_high = parse_double(key, value);
  else if (key == "hmc_burn_in") c.hmc_burn_in = static_cast<int>(parse_int(key, value));
  else if (key == "incumbent") {
    if (value == "q_set") c.mixture_incumbent = MixtureIncumbent::q_set;
    else if (value == "first_n") c.mixture_incumbent = MixtureIncumbent::first_n;
    else throw SpecError("incumbent must be 'q_set' or 'first_n'");
  } else throw SpecError("unknown variant key: " + key);
}

void finish_variant(VariantSpec& v, bool epsilon_is_step, double epsilon) {
  SamplerConfig& c = v.config;
  switch (c.algorithm) {
    case Algorithm::hpmc_resample:
    case Algorithm::hpmc_mixture:
    case Algorithm::hais:
      if (epsilon > 0.0)
        c.hmc.step_size = epsilon_is_step ? epsilon
                                          : epsilon / static_cast<double>(c.hmc.n_leapfrog);
      v.epsilon_or_lambda = epsilon > 0.0 ? epsilon : c.hmc.step_size;
      break;
    case Algorithm::pi_mais:
      v.epsilon_or_lambda = c.mh_scale;
      break;
    default:
      v.epsilon_or_lambda = 0.0;
      break;
  }
}

}  // namespace

ExperimentSpec parse_experiment_text(const std::string& text) {
  ExperimentSpec spec;
  spec.metrics.clear();

  std::istringstream in(text);
  std::string line;
  bool in_variant = false;
  VariantSpec current;
  bool eps_is_step = false;
  double eps = 0.0;

  auto close_variant = [&]() {
    if (!in_variant) return;
    finish_variant(current, eps_is_step, eps);
    spec.variants.push_back(current);
    in_variant = false;
  };

  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw SpecError("malformed section header: " + line);
      std::string header = trim(line.substr(1, line.size() - 2));
      if (header.rfind("variant", 0) != 0)
        throw SpecError("unknown section: " + header);
      close_variant();
      current = VariantSpec{};
      current.label = trim(header.substr(7));
      if (current.label.empty()) current.label = "variant";
      eps_is_step = false;
      eps = 0.0;
      in_variant = true;
      continue;
    }

    auto eq = line.find('=');
    if (eq == std::string::npos) throw SpecError("expected 'key = value': " + line);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw SpecError("expected 'key = value': " + line);

    if (in_variant) {
      apply_variant_key(current, eps_is_step, eps, key, value);
      continue;
    }
    if (key == "target") spec.target.name = value;
    else if (key == "banana_b") spec.target.banana.b = parse_double(key, value);
    else if (key == "banana_sigma") spec.target.banana.sigma = parse_double(key, value);
    else if (key == "banana_dim") spec.target.banana.dim = static_cast<int>(parse_int(key, value));
    else if (key == "replicates") spec.replicates = static_cast<int>(parse_int(key, value));
    else if (key == "budget") spec.budget = parse_int(key, value);
    else if (key == "seed") spec.seed_base = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "out") spec.out_path = value;
    else if (key == "format") {
      if (value == "csv") spec.format = OutputFormat::csv;
      else if (value == "json") spec.format = OutputFormat::json;
      else throw SpecError("format must be 'csv' or 'json'");
    } else if (key == "metrics") {
      std::istringstream ms(value);
      std::string item;
      while (std::getline(ms, item, ',')) {
        item = trim(item);
        if (!item.empty()) spec.metrics.push_back(item);
      }
    } else throw SpecError("unknown experiment key: " + key);
  }
  close_variant();
  if (spec.metrics.empty()) spec.metrics = {"mse_mean", "mse_z"};
  spec.validate();
  return spec;
}

ExperimentSpec parse_experiment_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open experiment spec: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_text(buffer.str());
}

MseResult compute_mse(const std::vector<Vector>& estimates, const Vector& truth) {
  require(!estimates.empty(), "compute_mse: no estimates");
  std::vector<double> sq;
  sq.reserve(estimates.size());
  for (const Vector& e : estimates) {
    require(e.size() == truth.size(), "compute_mse: dimension mismatch");
    sq.push_back((e - truth).squaredNorm() / static_cast<double>(truth.size()));
  }
  double mean = 0.0;
  for (double v : sq) mean += v;
  mean /= static_cast<double>(sq.size());
  double var = 0.0;
  for (double v : sq) var += (v - mean) * (v - mean);
  MseResult r;
  r.mse = mean;
  if (sq.size() > 1)
    r.stderr_value = std::sqrt(var / static_cast<double>(sq.size() - 1)) /
                     std::sqrt(static_cast<double>(sq.size()));
  return r;
}

MseResult compute_mse(const std::vector<double>& estimates, double truth) {
  std::vector<Vector> wrapped;
  wrapped.reserve(estimates.size());
  for (double e : estimates) wrapped.push_back(Vector::Constant(1, e));
  return compute_mse(wrapped, Vector::Constant(1, truth));
}

int count_discovered_modes(const std::vector<Vector>& locations,
                           const GaussianMixtureSpec& spec, double radius) {
  int found = 0;
  const double r2 = radius * radius;
  for (std::size_t i = 0; i < spec.means.size(); ++i) {
    Eigen::LLT<Matrix> llt(spec.covariances[i]);
    for (const Vector& loc : locations) {
      Vector diff = loc - spec.means[i];
      if (diff.dot(llt.solve(diff)) <= r2) {
        found += 1;
        break;
      }
    }
  }
  return found;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("HPMC_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

// snapshot index for the mode-discovery metric: the population after the
// third adaptation (or the last one for very short runs)
std::size_t mode_snapshot_index(std::size_t history_len) {
  return std::min<std::size_t>(3, history_len) - 1;
}

ReplicateSummary summarize(const RunOutput& out,
                           const std::optional<GaussianMixtureSpec>& mixture,
                           bool want_modes) {
  ReplicateSummary s;
  s.snis_mean = out.snis_mean;
  s.z_hat = out.z_hat;
  s.counters = out.counters;
  s.diagnostics = out.diagnostics;
  s.discovered_modes = -1;
  if (want_modes && mixture && !out.location_history.empty()) {
    std::size_t idx = mode_snapshot_index(out.location_history.size());
    s.discovered_modes = count_discovered_modes(out.location_history[idx], *mixture);
    s.all_modes =
        s.discovered_modes == static_cast<int>(mixture->means.size());
  }
  return s;
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, int threads,
                                      std::vector<VariantResult>& details) {
  spec.validate();
  const TargetDensity target = spec.target.build();
  const auto mixture = spec.target.mixture();
  const bool want_modes =
      std::find(spec.metrics.begin(), spec.metrics.end(), "mode_discovery") !=
      spec.metrics.end();

  // fail on an unwritable output path before any run starts
  if (!spec.out_path.empty()) {
    std::ofstream probe(spec.out_path, std::ios::app);
    if (!probe) throw IoError("cannot write output path: " + spec.out_path);
  }

  details.clear();
  details.resize(spec.variants.size());
  for (std::size_t v = 0; v < spec.variants.size(); ++v) {
    details[v].variant = spec.variants[v];
    SamplerConfig& cfg = details[v].variant.config;
    cfg.n_iterations = static_cast<int>(budget_iterations(
        cfg.algorithm, cfg.n_proposals, cfg.samples_per_proposal, spec.budget));
    details[v].replicates.resize(spec.replicates);
  }

  struct Job {
    std::size_t variant;
    int replicate;
  };
  std::vector<Job> jobs;
  for (std::size_t v = 0; v < spec.variants.size(); ++v)
    for (int r = 0; r < spec.replicates; ++r) jobs.push_back({v, r});

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    while (true) {
      std::size_t j = next.fetch_add(1);
      if (j >= jobs.size() || failed.load()) break;
      const Job job = jobs[j];
      try {
        SamplerConfig cfg = details[job.variant].variant.config;
        cfg.seed = replicate_seed(spec.seed_base, static_cast<std::uint64_t>(job.replicate));
        RunOutput out = run_sampler(cfg, target);
        details[job.variant].replicates[job.replicate] =
            summarize(out, mixture, want_modes);
      } catch (const std::exception& e) {
        std::scoped_lock lock(error_mutex);
        if (!failed.exchange(true)) first_error = e.what();
      }
    }
  };

  int n_threads = std::min<int>(resolve_threads(threads), static_cast<int>(jobs.size()));
  std::vector<std::thread> pool;
  for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();
  if (failed.load()) throw SpecError("experiment run failed: " + first_error);

  std::vector<ResultRow> rows;
  const double true_z = target.true_log_z ? std::exp(*target.true_log_z) : 1.0;
  for (const VariantResult& vr : details) {
    ResultRow base;
    base.algorithm = algorithm_name(vr.variant.config.algorithm);
    base.n_proposals = vr.variant.config.n_proposals;
    base.samples_per_proposal = vr.variant.config.samples_per_proposal;
    base.sigma = vr.variant.config.sigma;
    base.epsilon_or_lambda = vr.variant.epsilon_or_lambda;
    base.replicates = spec.replicates;
    base.target_evals = vr.replicates.front().counters.target_density;
    base.proposal_evals = vr.replicates.front().counters.proposal;
    base.seed_base = spec.seed_base;

    for (const std::string& metric : spec.metrics) {
      ResultRow row = base;
      row.metric = metric;
      if (metric == "mse_mean") {
        if (!target.true_mean) throw SpecError("mse_mean: target has no known mean");
        std::vector<Vector> est;
        est.reserve(vr.replicates.size());
        for (const ReplicateSummary& s : vr.replicates) est.push_back(s.snis_mean);
        MseResult m = compute_mse(est, *target.true_mean);
        row.value = m.mse;
        row.stderr_value = m.stderr_value;
      } else if (metric == "mse_z") {
        if (!target.true_log_z) throw SpecError("mse_z: target has no known Z");
        std::vector<double> est;
        est.reserve(vr.replicates.size());
        for (const ReplicateSummary& s : vr.replicates) est.push_back(s.z_hat);
        MseResult m = compute_mse(est, true_z);
        row.value = m.mse;
        row.stderr_value = m.stderr_value;
      } else {  // mode_discovery: fraction of replicates that found all modes
        double frac = 0.0;
        for (const ReplicateSummary& s : vr.replicates) frac += s.all_modes ? 1.0 : 0.0;
        frac /= static_cast<double>(vr.replicates.size());
        row.value = frac;
        row.stderr_value = std::sqrt(frac * (1.0 - frac) /
                                     static_cast<double>(vr.replicates.size()));
      }
      rows.push_back(std::move(row));
    }
  }

  if (!spec.out_path.empty()) emit_results(rows, spec.out_path, spec.format);
  return rows;
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, int threads) {
  std::vector<VariantResult> details;
  return run_experiment(spec, threads, details);
}

VariantAudit audit_counters(const SamplerConfig& config, const RunOutput& output,
                            const std::string& label) {
  VariantAudit a;
  a.label = label;
  a.algorithm = algorithm_name(config.algorithm);
  a.n_proposals = config.n_proposals;
  a.samples_per_proposal = config.samples_per_proposal;
  a.iterations = config.n_iterations;
  a.measured_target = output.counters.target_density;
  a.measured_gradient = output.counters.target_gradient;
  a.measured_proposal = output.counters.proposal;
  a.measured_adaptation_proposal = output.counters.adaptation_proposal;
  a.measured_cache_hits = output.counters.density_cache_hits;
  a.expected = counter_formulas(config);
  a.proposal_ok = a.measured_proposal == a.expected.expected_proposal;
  a.policy_target_ok = a.measured_target == a.expected.policy_target;
  a.table2_residual =
      a.measured_target + a.measured_cache_hits - a.expected.table2_target;
  a.log_z_hat = output.log_z_hat;
  a.log_z_hat_no_mixture_factor = output.log_z_hat_no_mixture_factor;
  return a;
}

std::vector<VariantAudit> verify_counters(const std::vector<SamplerConfig>& configs,
                                          const std::vector<RunOutput>& outputs,
                                          const std::vector<std::string>& labels) {
  require(configs.size() == outputs.size() && configs.size() == labels.size(),
          "verify_counters: size mismatch");
  std::vector<VariantAudit> audits;
  audits.reserve(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i)
    audits.push_back(audit_counters(configs[i], outputs[i], labels[i]));
  return audits;
}

void print_audit(std::ostream& os, const std::vector<VariantAudit>& audits) {
  for (const VariantAudit& a : audits) {
    os << a.label << " (" << a.algorithm << ", N=" << a.n_proposals
       << ", K=" << a.samples_per_proposal << ", T=" << a.iterations << ")\n";
    os << "  proposal evals: measured " << a.measured_proposal << ", published "
       << a.expected.expected_proposal << (a.proposal_ok ? "  [ok]" : "  [MISMATCH]")
       << "\n";
    os << "  target evals:   measured " << a.measured_target << ", policy "
       << a.expected.policy_target
       << (a.policy_target_ok ? "  [ok]" : "  [MISMATCH]") << "\n";
    os << "  published target formula " << a.expected.table2_target
       << ", cache hits " << a.measured_cache_hits << ", residual "
       << a.table2_residual;
    if (a.table2_residual != 0)
      os << "  [residual = one-off chain initialization]";
    os << "\n";
    if (a.measured_adaptation_proposal > 0)
      os << "  adaptation proposal evals (not in published units): "
         << a.measured_adaptation_proposal << "\n";
    os << "  log Z-hat " << a.log_z_hat << " (without 1/N mixture factor: "
       << a.log_z_hat_no_mixture_factor << ")\n";
  }
}

namespace {

const char* kCsvHeader =
    "algorithm,N,K,sigma,epsilon_or_lambda,metric,value,stderr,replicates,"
    "target_evals,proposal_evals,seed_base";

std::string row_to_csv(const ResultRow& r) {
  std::ostringstream os;
  os << r.algorithm << ',' << r.n_proposals << ',' << r.samples_per_proposal << ','
     << format_double(r.sigma) << ',' << format_double(r.epsilon_or_lambda) << ','
     << r.metric << ',' << format_double(r.value) << ','
     << format_double(r.stderr_value) << ',' << r.replicates << ','
     << r.target_evals << ',' << r.proposal_evals << ',' << r.seed_base;
  return os.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

void write_file_atomically(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp);
    out << content;
    if (!out) {
      out.close();
      std::remove(tmp.c_str());
      throw IoError("write failed: " + tmp);
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw IoError("cannot move results into place: " + path);
  }
}

nlohmann::json row_to_json(const ResultRow& r) {
  return nlohmann::json{{"algorithm", r.algorithm},
                        {"N", r.n_proposals},
                        {"K", r.samples_per_proposal},
                        {"sigma", r.sigma},
                        {"epsilon_or_lambda", r.epsilon_or_lambda},
                        {"metric", r.metric},
                        {"value", r.value},
                        {"stderr", r.stderr_value},
                        {"replicates", r.replicates},
                        {"target_evals", r.target_evals},
                        {"proposal_evals", r.proposal_evals},
                        {"seed_base", r.seed_base}};
}

std::string series_path_for(const std::string& out_path) {
  std::filesystem::path p(out_path);
  std::filesystem::path series = p.parent_path() / (p.stem().string() + "_series.csv");
  return series.string();
}

}  // namespace

void emit_results(const std::vector<ResultRow>& rows, const std::string& path,
                  OutputFormat format, const std::vector<SeriesRow>& plot_series) {
  if (rows.empty()) throw SpecError("emit_results: no rows to write");

  std::string content;
  if (format == OutputFormat::csv) {
    std::ostringstream os;
    os << kCsvHeader << '\n';
    for (const ResultRow& r : rows) os << row_to_csv(r) << '\n';
    content = os.str();
  } else {
    nlohmann::json arr = nlohmann::json::array();
    for (const ResultRow& r : rows) arr.push_back(row_to_json(r));
    content = arr.dump(2);
    content.push_back('\n');
  }
  write_file_atomically(path, content);

  if (!plot_series.empty()) {
    std::ostringstream os;
    os << "algorithm,dim,N,metric,value,stderr,replicates\n";
    for (const SeriesRow& s : plot_series)
      os << s.algorithm << ',' << s.dim << ',' << s.n_proposals << ',' << s.metric
         << ',' << format_double(s.value) << ',' << format_double(s.stderr_value)
         << ',' << s.replicates << '\n';
    write_file_atomically(series_path_for(path), os.str());
  }
}

std::vector<ResultRow> read_results(const std::string& path, OutputFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open results file: " + path);

  std::vector<ResultRow> rows;
  if (format == OutputFormat::csv) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != kCsvHeader)
      throw IoError("results file has an unexpected header");
    while (std::getline(in, line)) {
      if (trim(line).empty()) continue;
      auto f = split_csv_line(line);
      if (f.size() != 12) throw IoError("results row has wrong field count");
      ResultRow r;
      r.algorithm = f[0];
      r.n_proposals = static_cast<int>(parse_strict_double(f[1]));
      r.samples_per_proposal = static_cast<int>(parse_strict_double(f[2]));
      r.sigma = parse_strict_double(f[3]);
      r.epsilon_or_lambda = parse_strict_double(f[4]);
      r.metric = f[5];
      r.value = parse_strict_double(f[6]);
      r.stderr_value = parse_strict_double(f[7]);
      r.replicates = static_cast<int>(parse_strict_double(f[8]));
      r.target_evals = static_cast<long long>(parse_strict_double(f[9]));
      r.proposal_evals = static_cast<long long>(parse_strict_double(f[10]));
      r.seed_base = static_cast<std::uint64_t>(parse_strict_double(f[11]));
      rows.push_back(std::move(r));
    }
  } else {
    nlohmann::json arr = nlohmann::json::parse(in, nullptr, false);
    if (arr.is_discarded() || !arr.is_array())
      throw IoError("results file is not a JSON array");
    for (const auto& j : arr) {
      ResultRow r;
      r.algorithm = j.at("algorithm").get<std::string>();
      r.n_proposals = j.at("N").get<int>();
      r.samples_per_proposal = j.at("K").get<int>();
      r.sigma = j.at("sigma").get<double>();
      r.epsilon_or_lambda = j.at("epsilon_or_lambda").get<double>();
      r.metric = j.at("metric").get<std::string>();
      r.value = j.at("value").get<double>();
      r.stderr_value = j.at("stderr").get<double>();
      r.replicates = j.at("replicates").get<int>();
      r.target_evals = j.at("target_evals").get<long long>();
      r.proposal_evals = j.at("proposal_evals").get<long long>();
      r.seed_base = j.at("seed_base").get<std::uint64_t>();
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

}  // namespace hpmc::bench
