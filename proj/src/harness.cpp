// Copyright 2026 The DPFL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpfl/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "dpfl/rng.hpp"
#include "dpfl/text.hpp"

namespace dpfl {
namespace harness {
namespace {

// Stream tags for per-seed derivations.
constexpr std::uint64_t kSplitSeedTag = 0x686172732d73706cULL;
constexpr std::uint64_t kRunSeedTag = 0x686172732d72756eULL;

constexpr const char* kFrontierHeader =
    "signature,arch,q,eta,sigma,clip_c,n_rounds,local_steps,epsilon,delta,"
    "mean_accuracy,std_accuracy,n_seeds";

struct AccuracyStats {
  double mean = 0.0;
  double std_dev = 0.0;
};

federated::FlConfig to_fl_config(const HyperParams& hp, int input_dim,
                                 std::uint64_t master_seed) {
  federated::FlConfig cfg;
  cfg.n_rounds = hp.n_rounds;
  cfg.local_steps = hp.local_steps;
  cfg.dp.q = hp.q;
  cfg.dp.eta = hp.eta;
  cfg.dp.sigma = hp.sigma;
  cfg.dp.clip_c = hp.clip_c;
  cfg.arch.kind = hp.arch_kind;
  cfg.arch.input_dim = input_dim;
  cfg.arch.hidden_dim = hp.hidden_dim;
  cfg.master_seed = master_seed;
  return cfg;
}

// Trains n_seeds times and scores validation accuracy; the budget is computed
// separately so grid_search can convert once per delta without retraining.
AccuracyStats run_accuracy_stats(const HyperParams& hp,
                                 const data::ExpressionMatrix& dataset,
                                 std::int64_t n_seeds, std::uint64_t base_seed,
                                 double delta,
                                 const accountant::AlphaGrid& grid) {
  hp.validate();
  if (n_seeds < 1) {
    throw std::invalid_argument("n_seeds must be >= 1");
  }
  dataset.validate();
  std::vector<double> accuracies;
  accuracies.reserve(static_cast<std::size_t>(n_seeds));
  for (std::int64_t i = 0; i < n_seeds; ++i) {
    data::SplitSpec split;
    split.fractions = {{"client1", 0.4}, {"client2", 0.4}, {"validation", 0.2}};
    split.seed = RngStream::derive_stream(
        {kSplitSeedTag, base_seed, static_cast<std::uint64_t>(i)});
    std::vector<data::ExpressionMatrix> parts =
        data::stratified_split(dataset, split);
    const std::vector<models::LabeledSample> client1 =
        data::to_samples(data::impute_zeros(parts[0]));
    const std::vector<models::LabeledSample> client2 =
        data::to_samples(data::impute_zeros(parts[1]));
    const std::vector<models::LabeledSample> validation =
        data::to_samples(data::impute_zeros(parts[2]));

    const federated::FlConfig cfg = to_fl_config(
        hp, static_cast<int>(dataset.n_genes()),
        RngStream::derive_stream(
            {kRunSeedTag, base_seed, static_cast<std::uint64_t>(i)}));
    const federated::FlRunResult result =
        federated::run_cyclic_fl(cfg, client1, client2, delta, grid);
    accuracies.push_back(
        models::accuracy(models::evaluate(result.final_params, validation)));
  }
  AccuracyStats stats;
  for (double a : accuracies) stats.mean += a;
  stats.mean /= static_cast<double>(accuracies.size());
  double ss = 0.0;
  for (double a : accuracies) ss += (a - stats.mean) * (a - stats.mean);
  stats.std_dev = std::sqrt(ss / static_cast<double>(accuracies.size()));
  return stats;
}

accountant::DpPoint budget_for(const HyperParams& hp, double delta,
                               const accountant::AlphaGrid& grid) {
  federated::FlConfig cfg;
  cfg.n_rounds = hp.n_rounds;
  cfg.local_steps = hp.local_steps;
  cfg.dp.q = hp.q;
  cfg.dp.sigma = hp.sigma;
  return federated::per_client_budget(cfg, delta, grid);
}

// Total order over records: delta, then epsilon, then every remaining column
// in CSV order, so sorted output is unique and reruns are byte-identical.
bool record_less(const FrontierRecord& a, const FrontierRecord& b) {
  const auto key = [](const FrontierRecord& r) {
    return std::make_tuple(r.delta, r.epsilon, r.hp.signature,
                           arch_to_string(r.hp), r.hp.q, r.hp.eta, r.hp.sigma,
                           r.hp.clip_c, r.hp.n_rounds, r.hp.local_steps,
                           r.mean_accuracy, r.std_accuracy, r.n_seeds);
  };
  return key(a) < key(b);
}

[[noreturn]] void fail_line(const std::string& path, std::size_t line,
                            const std::string& what) {
  std::ostringstream msg;
  msg << path << ":" << line << ": " << what;
  throw std::runtime_error(msg.str());
}

}  // namespace

void HyperParams::validate() const {
  if (signature.empty()) {
    throw std::invalid_argument("signature name must not be empty");
  }
  if (!(q > 0.0 && q <= 1.0)) {
    throw std::invalid_argument("q must lie in (0, 1]");
  }
  if (!(eta > 0.0)) {
    throw std::invalid_argument("eta must be positive");
  }
  if (!(sigma >= 0.0)) {
    throw std::invalid_argument("sigma must be >= 0");
  }
  if (!(clip_c > 0.0)) {
    throw std::invalid_argument("clip_c must be positive");
  }
  if (n_rounds < 1 || local_steps < 1) {
    throw std::invalid_argument("n_rounds and local_steps must be >= 1");
  }
  if (arch_kind == models::ModelKind::kShallowMlp && hidden_dim < 1) {
    throw std::invalid_argument("hidden_dim must be >= 1 for the MLP");
  }
}

void BudgetTarget::validate() const {
  if (!(epsilon_t > 0.0)) {
    throw std::invalid_argument("target epsilon must be positive");
  }
  if (!(delta_t > 0.0 && delta_t < 1.0)) {
    throw std::invalid_argument("target delta must lie in (0, 1)");
  }
}

std::string arch_to_string(const HyperParams& hp) {
  if (hp.arch_kind == models::ModelKind::kShallowMlp) {
    return "shallow_mlp_h" + std::to_string(hp.hidden_dim);
  }
  return "logistic_regression";
}

void arch_from_string(const std::string& s, HyperParams* hp) {
  if (s == "logistic_regression") {
    hp->arch_kind = models::ModelKind::kLogisticRegression;
    return;
  }
  if (s == "shallow_mlp") {
    hp->arch_kind = models::ModelKind::kShallowMlp;
    return;  // keeps the default hidden_dim
  }
  const std::string prefix = "shallow_mlp_h";
  if (s.rfind(prefix, 0) == 0) {
    std::int64_t hidden = 0;
    if (text::parse_int64(s.substr(prefix.size()), &hidden) && hidden >= 1) {
      hp->arch_kind = models::ModelKind::kShallowMlp;
      hp->hidden_dim = static_cast<int>(hidden);
      return;
    }
  }
  throw std::invalid_argument("unknown architecture: " + s);
}

FrontierRecord repeat_runs(const HyperParams& hp,
                           const data::ExpressionMatrix& dataset,
                           std::int64_t n_seeds, std::uint64_t base_seed,
                           double delta, const accountant::AlphaGrid& grid) {
  const AccuracyStats stats =
      run_accuracy_stats(hp, dataset, n_seeds, base_seed, delta, grid);
  const accountant::DpPoint budget = budget_for(hp, delta, grid);
  FrontierRecord record;
  record.hp = hp;
  record.epsilon = budget.epsilon;
  record.delta = budget.delta;
  record.mean_accuracy = stats.mean;
  record.std_accuracy = stats.std_dev;
  record.n_seeds = n_seeds;
  return record;
}

std::vector<FrontierRecord> grid_search(
    const std::vector<HyperParams>& points,
    const data::ExpressionMatrix& dataset, std::int64_t n_seeds,
    std::uint64_t base_seed, const std::vector<double>& deltas,
    const std::string& out_path, const accountant::AlphaGrid& grid,
    int n_threads) {
  if (points.empty()) {
    throw std::invalid_argument("grid_search requires a non-empty grid");
  }
  if (deltas.empty()) {
    throw std::invalid_argument("grid_search requires at least one delta");
  }
  for (double d : deltas) {
    if (!(d > 0.0 && d < 1.0)) {
      throw std::invalid_argument("every delta must lie in (0, 1)");
    }
  }

  // Train each point once; budgets are per (point, delta).
  std::vector<AccuracyStats> stats(points.size());
  std::vector<std::string> failures(points.size());
  std::atomic<std::size_t> next{0};
  const std::size_t workers = std::min(
      points.size(),
      static_cast<std::size_t>(
          n_threads > 0 ? n_threads
                        : std::max(1u, std::thread::hardware_concurrency())));
  const auto work = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= points.size()) return;
      try {
        stats[i] = run_accuracy_stats(points[i], dataset, n_seeds, base_seed,
                                      deltas.front(), grid);
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();

  std::ostringstream failure_report;
  std::size_t n_failures = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!failures[i].empty()) {
      ++n_failures;
      failure_report << "grid point " << i << " (" << points[i].signature << ","
                     << arch_to_string(points[i]) << ",q=" << points[i].q
                     << ",sigma=" << points[i].sigma << "): " << failures[i]
                     << "\n";
    }
  }
  if (n_failures > 0) {
    std::ostringstream msg;
    msg << n_failures << " of " << points.size()
        << " grid points failed:\n" << failure_report.str();
    throw std::runtime_error(msg.str());
  }

  std::vector<FrontierRecord> records;
  records.reserve(points.size() * deltas.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (double delta : deltas) {
      const accountant::DpPoint budget = budget_for(points[i], delta, grid);
      FrontierRecord record;
      record.hp = points[i];
      record.epsilon = budget.epsilon;
      record.delta = budget.delta;
      record.mean_accuracy = stats[i].mean;
      record.std_accuracy = stats[i].std_dev;
      record.n_seeds = n_seeds;
      records.push_back(std::move(record));
    }
  }
  std::stable_sort(records.begin(), records.end(), record_less);
  write_frontier_csv(records, out_path);
  return records;
}

void write_frontier_csv(const std::vector<FrontierRecord>& records,
                        const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  out << kFrontierHeader << "\n";
  for (const FrontierRecord& r : records) {
    out << r.hp.signature << ',' << arch_to_string(r.hp) << ','
        << text::format_double(r.hp.q) << ',' << text::format_double(r.hp.eta)
        << ',' << text::format_double(r.hp.sigma) << ','
        << text::format_double(r.hp.clip_c) << ',' << r.hp.n_rounds << ','
        << r.hp.local_steps << ',' << text::format_double(r.epsilon) << ','
        << text::format_double(r.delta) << ','
        << text::format_double(r.mean_accuracy) << ','
        << text::format_double(r.std_accuracy) << ',' << r.n_seeds << '\n';
  }
  if (!out) {
    throw std::runtime_error("short write: " + path);
  }
}

std::vector<FrontierRecord> load_frontier_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open for reading: " + path);
  }
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw std::runtime_error(path + ": empty file");
  }
  ++line_no;
  if (std::string(text::trim(line)) != kFrontierHeader) {
    fail_line(path, line_no, "unexpected frontier CSV header");
  }
  std::vector<FrontierRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const std::vector<std::string_view> f = text::split(line, ',');
    if (f.size() != 13) {
      std::ostringstream what;
      what << "row has " << f.size() << " fields, expected 13";
      fail_line(path, line_no, what.str());
    }
    FrontierRecord r;
    r.hp.signature = std::string(text::trim(f[0]));
    try {
      arch_from_string(std::string(text::trim(f[1])), &r.hp);
    } catch (const std::invalid_argument& e) {
      fail_line(path, line_no, e.what());
    }
    const auto need_double = [&](std::string_view cell, const char* col,
                                 double* out_value) {
      if (!text::parse_double(text::trim(cell), out_value)) {
        fail_line(path, line_no,
                  std::string("non-numeric ") + col + " value '" +
                      std::string(text::trim(cell)) + "'");
      }
    };
    const auto need_int = [&](std::string_view cell, const char* col,
                              std::int64_t* out_value) {
      if (!text::parse_int64(text::trim(cell), out_value)) {
        fail_line(path, line_no,
                  std::string("non-integer ") + col + " value '" +
                      std::string(text::trim(cell)) + "'");
      }
    };
    need_double(f[2], "q", &r.hp.q);
    need_double(f[3], "eta", &r.hp.eta);
    need_double(f[4], "sigma", &r.hp.sigma);
    need_double(f[5], "clip_c", &r.hp.clip_c);
    need_int(f[6], "n_rounds", &r.hp.n_rounds);
    need_int(f[7], "local_steps", &r.hp.local_steps);
    need_double(f[8], "epsilon", &r.epsilon);
    need_double(f[9], "delta", &r.delta);
    need_double(f[10], "mean_accuracy", &r.mean_accuracy);
    need_double(f[11], "std_accuracy", &r.std_accuracy);
    need_int(f[12], "n_seeds", &r.n_seeds);
    records.push_back(std::move(r));
  }
  return records;
}

FrontierRecord select_params(const std::vector<FrontierRecord>& records,
                             const BudgetTarget& target) {
  target.validate();
  if (records.empty()) {
    throw std::invalid_argument("select_params requires at least one record");
  }
  const FrontierRecord* best = nullptr;
  for (const FrontierRecord& r : records) {
    if (!(r.delta <= target.delta_t && r.epsilon <= target.epsilon_t)) {
      continue;
    }
    if (best == nullptr) {
      best = &r;
      continue;
    }
    // Lexicographic maximum on (delta, epsilon); strict comparisons keep the
    // first occurrence among full ties after the accuracy tie-break.
    if (r.delta > best->delta ||
        (r.delta == best->delta && r.epsilon > best->epsilon) ||
        (r.delta == best->delta && r.epsilon == best->epsilon &&
         r.mean_accuracy > best->mean_accuracy)) {
      best = &r;
    }
  }
  if (best == nullptr) {
    std::ostringstream msg;
    msg << "no configuration in the frontier satisfies (epsilon <= "
        << target.epsilon_t << ", delta <= " << target.delta_t << ")";
    throw std::runtime_error(msg.str());
  }
  return *best;
}

BudgetRunResult run_from_budget(const BudgetTarget& target,
                                const std::string& frontier_csv_path,
                                const data::ExpressionMatrix& dataset,
                                std::int64_t n_seeds, std::uint64_t base_seed,
                                const accountant::AlphaGrid& grid) {
  const std::vector<FrontierRecord> records =
      load_frontier_csv(frontier_csv_path);
  BudgetRunResult result;
  result.selected = select_params(records, target);

  result.realized = budget_for(result.selected.hp, result.selected.delta, grid);
  if (result.realized.epsilon != result.selected.epsilon) {
    std::ostringstream msg;
    msg << "frontier row is stale: stored epsilon " << result.selected.epsilon
        << " but the accountant now gives " << result.realized.epsilon;
    throw std::runtime_error(msg.str());
  }
  if (!(result.realized.epsilon <= target.epsilon_t &&
        result.realized.delta <= target.delta_t)) {
    std::ostringstream msg;
    msg << "selected configuration exceeds the target budget: realized ("
        << result.realized.epsilon << ", " << result.realized.delta
        << ") vs target (" << target.epsilon_t << ", " << target.delta_t
        << ")";
    throw std::runtime_error(msg.str());
  }

  const AccuracyStats stats = run_accuracy_stats(
      result.selected.hp, dataset, n_seeds, base_seed, result.selected.delta,
      grid);
  result.mean_accuracy = stats.mean;
  result.std_accuracy = stats.std_dev;
  return result;
}

void emit_plot_data(const std::vector<FrontierRecord>& records,
                    const std::vector<double>& deltas,
                    const std::string& out_path) {
  std::ofstream out(out_path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + out_path);
  }
  std::set<double> epsilon_grid;
  std::set<std::string> signatures;
  for (const FrontierRecord& r : records) {
    if (std::isfinite(r.epsilon)) epsilon_grid.insert(r.epsilon);
    signatures.insert(r.hp.signature);
  }
  out << "delta,epsilon,signature,mean_accuracy\n";
  for (double delta : deltas) {
    for (const std::string& signature : signatures) {
      for (double epsilon : epsilon_grid) {
        double best = -1.0;
        for (const FrontierRecord& r : records) {
          if (r.hp.signature == signature && r.delta <= delta &&
              r.epsilon <= epsilon && r.mean_accuracy > best) {
            best = r.mean_accuracy;
          }
        }
        if (best < 0.0) continue;  // nothing feasible at this budget
        out << text::format_double(delta) << ','
            << text::format_double(epsilon) << ',' << signature << ','
            << text::format_double(best) << '\n';
      }
    }
  }
  if (!out) {
    throw std::runtime_error("short write: " + out_path);
  }
}

std::vector<HyperParams> parse_grid_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open for reading: " + path);
  }
  std::map<std::string, std::vector<std::string>> lists;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string_view body = text::trim(line);
    if (body.empty()) continue;
    const std::size_t eq = body.find('=');
    if (eq == std::string_view::npos) {
      fail_line(path, line_no, "expected 'key = value[, value...]'");
    }
    const std::string key(text::trim(body.substr(0, eq)));
    if (lists.count(key) > 0) {
      fail_line(path, line_no, "duplicate key '" + key + "'");
    }
    std::vector<std::string> values;
    for (std::string_view v : text::split(body.substr(eq + 1), ',')) {
      const std::string_view entry = text::trim(v);
      if (entry.empty()) {
        fail_line(path, line_no, "empty value in list for '" + key + "'");
      }
      values.emplace_back(entry);
    }
    lists.emplace(key, std::move(values));
  }

  static const char* kKeys[] = {"signature", "arch",     "q",
                                "eta",       "sigma",    "clip_c",
                                "n_rounds",  "local_steps"};
  for (const char* key : kKeys) {
    if (lists.count(key) == 0) {
      throw std::runtime_error(path + ": missing required key '" +
                               std::string(key) + "'");
    }
  }
  for (const auto& [key, values] : lists) {
    if (std::find_if(std::begin(kKeys), std::end(kKeys), [&](const char* k) {
          return key == k;
        }) == std::end(kKeys)) {
      throw std::runtime_error(path + ": unknown key '" + key + "'");
    }
  }

  const auto parse_doubles = [&](const std::string& key) {
    std::vector<double> out;
    for (const std::string& v : lists.at(key)) {
      double value = 0.0;
      if (!text::parse_double(v, &value)) {
        throw std::runtime_error(path + ": non-numeric value '" + v +
                                 "' for key '" + key + "'");
      }
      out.push_back(value);
    }
    return out;
  };
  const auto parse_ints = [&](const std::string& key) {
    std::vector<std::int64_t> out;
    for (const std::string& v : lists.at(key)) {
      std::int64_t value = 0;
      if (!text::parse_int64(v, &value)) {
        throw std::runtime_error(path + ": non-integer value '" + v +
                                 "' for key '" + key + "'");
      }
      out.push_back(value);
    }
    return out;
  };

  const std::vector<std::string>& signatures = lists.at("signature");
  const std::vector<std::string>& archs = lists.at("arch");
  const std::vector<double> qs = parse_doubles("q");
  const std::vector<double> etas = parse_doubles("eta");
  const std::vector<double> sigmas = parse_doubles("sigma");
  const std::vector<double> clips = parse_doubles("clip_c");
  const std::vector<std::int64_t> rounds = parse_ints("n_rounds");
  const std::vector<std::int64_t> steps = parse_ints("local_steps");

  std::vector<HyperParams> points;
  for (const std::string& signature : signatures) {
    for (const std::string& arch : archs) {
      for (double q : qs) {
        for (double eta : etas) {
          for (double sigma : sigmas) {
            for (double clip : clips) {
              for (std::int64_t n_rounds : rounds) {
                for (std::int64_t local_steps : steps) {
                  HyperParams hp;
                  hp.signature = signature;
                  arch_from_string(arch, &hp);
                  hp.q = q;
                  hp.eta = eta;
                  hp.sigma = sigma;
                  hp.clip_c = clip;
                  hp.n_rounds = n_rounds;
                  hp.local_steps = local_steps;
                  hp.validate();
                  points.push_back(std::move(hp));
                }
              }
            }
          }
        }
      }
    }
  }
  return points;
}

}  // namespace harness
}  // namespace dpfl
