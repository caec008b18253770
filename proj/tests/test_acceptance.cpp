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
//
// Acceptance suite: every release-blocking property of the toolkit, one
// criterion per line of output. Each criterion is verified against an
// independent oracle (numerical quadrature, closed forms, finite
// differences, or brute-force replication) rather than against the code
// under test.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "dpfl/accountant.hpp"
#include "dpfl/data.hpp"
#include "dpfl/dp_sgd.hpp"
#include "dpfl/federated.hpp"
#include "dpfl/harness.hpp"
#include "dpfl/models.hpp"
#include "dpfl/rng.hpp"
#include "support/quadrature_oracle.hpp"

namespace {

using dpfl::RngStream;
using dpfl::accountant::AlphaGrid;
using dpfl::accountant::SgmParams;
using dpfl::models::LabeledSample;
using dpfl::models::ModelParams;

double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(4);
  out << v;
  return out.str();
}

class TempWorkspace {
 public:
  TempWorkspace() {
    dir_ = std::filesystem::temp_directory_path() /
           ("dpfl-acceptance-" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir_);
  }
  ~TempWorkspace() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }
  std::string file(const std::string& name) const {
    return (dir_ / name).string();
  }

 private:
  std::filesystem::path dir_;
};

// ---------------------------------------------------------------------------
// 1. The analytic accountant matches high-resolution numerical quadrature of
//    the defining integral across the full (q, sigma, alpha) working range,
//    and the quadrature confirms the moment ordering A >= B.
bool criterion_accountant_vs_oracle(std::string* detail) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> qs = {0.01, 0.1, 0.5};
  const std::vector<double> sigmas = {0.5, 1.0, 2.0, 4.0};
  const std::vector<double> alphas = {1.5, 2.0, 3.0, 8.0, 32.0};
  double max_rel = 0.0;
  int ordering_failures = 0;
  for (double q : qs) {
    for (double sigma : sigmas) {
      for (double alpha : alphas) {
        const SgmParams params{q, sigma};
        double log_a;
        if (alpha == std::floor(alpha)) {
          log_a = dpfl::accountant::log_a_alpha_integer(
              params, static_cast<std::int64_t>(alpha));
        } else {
          log_a = dpfl::accountant::log_a_alpha_fractional(params, alpha);
        }
        const dpfl::oracle::OracleResult o =
            dpfl::oracle::oracle_a_alpha(params, alpha);
        max_rel = std::max(max_rel, rel_diff(log_a, o.log_a));
        if (o.log_a < o.log_b - 1e-10) ++ordering_failures;
      }
    }
  }
  const double elapsed = seconds_since(start);
  *detail = "max rel diff " + fmt(max_rel) + " over 60 points, A>=B holds, " +
            fmt(elapsed) + "s";
  return max_rel < 1e-6 && ordering_failures == 0 && elapsed < 60.0;
}

// ---------------------------------------------------------------------------
// 2. Full sampling (q = 1) collapses to the pure Gaussian mechanism:
//    epsilon(alpha) = alpha / (2 sigma^2).
bool criterion_gaussian_limit(std::string* detail) {
  double max_rel = 0.0;
  for (double sigma : {0.5, 1.0, 2.0, 4.0}) {
    for (int alpha = 2; alpha <= 64; ++alpha) {
      const double eps =
          dpfl::accountant::sgm_rdp_step({1.0, sigma}, alpha).epsilon;
      max_rel = std::max(max_rel,
                         rel_diff(eps, alpha / (2.0 * sigma * sigma)));
    }
  }
  *detail = "max rel diff " + fmt(max_rel) + " over 252 (sigma, alpha) pairs";
  return max_rel < 1e-9;
}

// ---------------------------------------------------------------------------
// 3. The fractional-order series evaluated at integer orders agrees with the
//    closed-form binomial expansion.
bool criterion_integer_vs_fractional(std::string* detail) {
  double max_rel = 0.0;
  for (double q : {0.01, 0.1, 0.5}) {
    for (double sigma : {0.5, 1.0, 2.0, 4.0}) {
      for (std::int64_t alpha : {2, 3, 4, 5, 8, 16, 32, 64}) {
        const SgmParams params{q, sigma};
        const double series = dpfl::accountant::log_a_alpha_fractional(
            params, static_cast<double>(alpha));
        const double closed =
            dpfl::accountant::log_a_alpha_integer(params, alpha);
        max_rel = std::max(max_rel, rel_diff(series, closed));
      }
    }
  }
  *detail = "max rel diff " + fmt(max_rel) + " over 96 grid points";
  return max_rel < 1e-9;
}

// ---------------------------------------------------------------------------
// 4. The per-client budget of the cyclic protocol depends only on the
//    product n_rounds * local_steps — every factorization of the same total
//    yields the identical budget, bit for bit.
bool criterion_budget_factorization(std::string* detail) {
  const AlphaGrid grid = AlphaGrid::default_grid();
  RngStream rng(4, 0);
  int checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::int64_t n_rounds =
        1 + static_cast<std::int64_t>(rng.uniform() * 500);
    const std::int64_t local_steps =
        1 + static_cast<std::int64_t>(rng.uniform() * 50);
    dpfl::federated::FlConfig cfg;
    cfg.n_rounds = n_rounds;
    cfg.local_steps = local_steps;
    cfg.dp.q = 0.03;
    cfg.dp.sigma = 1.3;
    const dpfl::accountant::DpPoint via_protocol =
        dpfl::federated::per_client_budget(cfg, 1e-5, grid);
    const dpfl::accountant::DpPoint flat =
        dpfl::accountant::best_dp_budget({0.03, 1.3},
                                         n_rounds * local_steps, 1e-5, grid)
            .point;
    if (via_protocol.epsilon != flat.epsilon ||
        via_protocol.delta != flat.delta) {
      *detail = "mismatch at n_rounds=" + std::to_string(n_rounds) +
                " local_steps=" + std::to_string(local_steps);
      return false;
    }
    ++checked;
  }
  *detail = std::to_string(checked) +
            " random (n_rounds, local_steps) factorizations, exact equality";
  return true;
}

// ---------------------------------------------------------------------------
// 5. With sigma = 0, q = 1, and a clip bound far above every gradient, the
//    federated protocol degenerates to plain alternating full-batch gradient
//    descent.
bool criterion_noise_free_equals_gd(std::string* detail) {
  const std::vector<LabeledSample> client1 = {
      {{1.0, 0.6}, 1}, {{0.9, -0.2}, 1}, {{-1.1, -0.7}, 0}, {{-0.5, 0.3}, 0}};
  const std::vector<LabeledSample> client2 = {
      {{0.7, 0.8}, 1}, {{-0.9, -0.4}, 0}, {{-0.3, -1.0}, 0}};

  dpfl::federated::FlConfig cfg;
  cfg.n_rounds = 5;
  cfg.local_steps = 2;  // 20 SGD steps in total across both clients
  cfg.dp = {1.0, 0.3, 0.0, 1e9};
  cfg.arch.kind = dpfl::models::ModelKind::kLogisticRegression;
  cfg.arch.input_dim = 2;
  cfg.master_seed = 99;

  const dpfl::federated::FlRunResult result = dpfl::federated::run_cyclic_fl(
      cfg, client1, client2, 1e-5, AlphaGrid::default_grid());

  ModelParams theta = dpfl::models::init_params(cfg.arch, cfg.master_seed);
  for (std::int64_t round = 0; round < cfg.n_rounds; ++round) {
    for (const std::vector<LabeledSample>* data : {&client1, &client2}) {
      for (std::int64_t step = 0; step < cfg.local_steps; ++step) {
        std::vector<double> sum(theta.theta.size(), 0.0);
        for (const LabeledSample& sample : *data) {
          const std::vector<double> g =
              dpfl::models::per_sample_gradient(theta, sample);
          for (std::size_t i = 0; i < g.size(); ++i) sum[i] += g[i];
        }
        for (std::size_t i = 0; i < sum.size(); ++i) {
          theta.theta[i] -=
              cfg.dp.eta * sum[i] / static_cast<double>(data->size());
        }
      }
    }
  }
  double max_diff = 0.0;
  for (std::size_t i = 0; i < theta.theta.size(); ++i) {
    max_diff = std::max(
        max_diff, std::abs(result.final_params.theta[i] - theta.theta[i]));
  }
  *detail = "max per-coordinate diff " + fmt(max_diff) + " after 20 steps";
  return max_diff < 1e-10;
}

// ---------------------------------------------------------------------------
// 6. Clipping: the output norm never exceeds the bound, in-bound vectors
//    pass through unchanged, and out-of-bound vectors keep their direction.
bool criterion_clipping(std::string* detail) {
  RngStream rng(6, 0);
  int violations = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t dim = 1 + static_cast<std::size_t>(rng.uniform() * 50);
    std::vector<double> g(dim);
    for (double& x : g) x = 4.0 * rng.normal();
    const double clip_c =
        trial % 3 == 0 ? 0.1 : (trial % 3 == 1 ? 1.0 : 10.0);
    const std::vector<double> clipped =
        dpfl::dp_sgd::clip_gradient(g, clip_c);
    double norm_sq = 0.0, before_sq = 0.0;
    for (double x : clipped) norm_sq += x * x;
    for (double x : g) before_sq += x * x;
    const double norm = std::sqrt(norm_sq);
    const double before = std::sqrt(before_sq);
    if (norm > clip_c * (1.0 + 1e-12)) ++violations;
    if (before <= clip_c) {
      if (clipped != g) ++violations;
    } else {
      const double scale = clip_c / before;
      for (std::size_t i = 0; i < dim; ++i) {
        if (std::abs(clipped[i] - g[i] * scale) >
            1e-12 * std::max(1.0, std::abs(g[i]))) {
          ++violations;
          break;
        }
      }
    }
  }
  *detail = std::to_string(violations) + " violations in 10000 trials";
  return violations == 0;
}

// ---------------------------------------------------------------------------
// 7. Analytic per-sample gradients match central finite differences for both
//    architectures.
bool criterion_gradient_check(std::string* detail) {
  RngStream rng(7, 0);
  const double h = 1e-6;
  double max_abs = 0.0;
  for (int arch = 0; arch < 2; ++arch) {
    dpfl::models::ArchitectureSpec spec;
    if (arch == 0) {
      spec.kind = dpfl::models::ModelKind::kLogisticRegression;
      spec.input_dim = 5;
    } else {
      spec.kind = dpfl::models::ModelKind::kShallowMlp;
      spec.input_dim = 4;
      spec.hidden_dim = 3;
    }
    for (int trial = 0; trial < 100; ++trial) {
      ModelParams params = dpfl::models::init_params(
          spec, static_cast<std::uint64_t>(7000 + trial));
      for (double& t : params.theta) t += 0.3 * rng.normal();
      LabeledSample sample;
      for (int i = 0; i < spec.input_dim; ++i) {
        sample.features.push_back(rng.normal());
      }
      sample.label = rng.uniform() < 0.5 ? 0 : 1;
      const std::vector<double> g =
          dpfl::models::per_sample_gradient(params, sample);
      for (std::size_t i = 0; i < g.size(); ++i) {
        ModelParams plus = params;
        ModelParams minus = params;
        plus.theta[i] += h;
        minus.theta[i] -= h;
        const double fd = (dpfl::models::bce_loss(plus, sample) -
                           dpfl::models::bce_loss(minus, sample)) /
                          (2.0 * h);
        max_abs = std::max(max_abs, std::abs(g[i] - fd));
      }
    }
  }
  *detail = "max |analytic - finite difference| " + fmt(max_abs) +
            " over 200 cases";
  return max_abs < 1e-5;
}

// ---------------------------------------------------------------------------
// 8. Reproducibility: rerunning the protocol gives bit-identical results,
//    and the grid search writes byte-identical files regardless of thread
//    count.
bool criterion_reproducibility(std::string* detail) {
  const std::vector<LabeledSample> client1 = {
      {{1.0, 0.6}, 1}, {{0.9, -0.2}, 1}, {{-1.1, -0.7}, 0}, {{-0.5, 0.3}, 0}};
  const std::vector<LabeledSample> client2 = {
      {{0.7, 0.8}, 1}, {{-0.9, -0.4}, 0}, {{-0.3, -1.0}, 0}};
  dpfl::federated::FlConfig cfg;
  cfg.n_rounds = 4;
  cfg.local_steps = 3;
  cfg.dp = {0.7, 0.2, 1.1, 1.0};
  cfg.arch.kind = dpfl::models::ModelKind::kLogisticRegression;
  cfg.arch.input_dim = 2;
  cfg.master_seed = 321;
  const AlphaGrid grid = AlphaGrid::default_grid();
  const dpfl::federated::FlRunResult a =
      dpfl::federated::run_cyclic_fl(cfg, client1, client2, 1e-5, grid);
  const dpfl::federated::FlRunResult b =
      dpfl::federated::run_cyclic_fl(cfg, client1, client2, 1e-5, grid);
  const bool run_identical =
      a.final_params.theta == b.final_params.theta &&
      a.per_client_budget.epsilon == b.per_client_budget.epsilon &&
      a.transcript == b.transcript;

  TempWorkspace tmp;
  const dpfl::data::ExpressionMatrix dataset = dpfl::data::synthesize_dataset(
      60, 60, 5, dpfl::data::synthetic_signal_signature(3), 3.0, 0.0, 81);
  std::vector<dpfl::harness::HyperParams> points;
  for (double sigma : {1.0, 2.0, 4.0}) {
    dpfl::harness::HyperParams hp;
    hp.signature = "synthetic_signal";
    hp.q = 0.5;
    hp.eta = 0.3;
    hp.sigma = sigma;
    hp.clip_c = 1.0;
    hp.n_rounds = 2;
    hp.local_steps = 2;
    points.push_back(hp);
  }
  const std::string f1 = tmp.file("f1.csv");
  const std::string f2 = tmp.file("f2.csv");
  dpfl::harness::grid_search(points, dataset, 2, 5, {1e-5, 1e-4}, f1, grid, 1);
  dpfl::harness::grid_search(points, dataset, 2, 5, {1e-5, 1e-4}, f2, grid, 4);
  const auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
  };
  const std::string bytes1 = slurp(f1);
  const bool files_identical = !bytes1.empty() && bytes1 == slurp(f2);

  *detail = std::string("federated rerun ") +
            (run_identical ? "bit-identical" : "DIFFERS") +
            "; frontier files (1 vs 4 threads) " +
            (files_identical ? "byte-identical" : "DIFFER");
  return run_identical && files_identical;
}

// ---------------------------------------------------------------------------
// 9. Headline benchmark: on the 61-normal / 529-tumor synthetic dataset with
//    69 signal genes among 100, noise-free federated training reaches ~99%,
//    private full-batch training at a single-digit budget clearly beats the
//    majority class (529/590 ~ 0.897, bar = +2 points), and a ~10x budget
//    does at least as well. The dataset is restricted to the signature before
//    training, mirroring the load -> select -> train pipeline; effect size
//    2.0 is what tunes the noise-free run to ~99%. Per-sample clipping
//    (clip_c = 1) is kept even in the noise-free run: with 69 features and
//    only ~49 normal training samples, unclipped gradient descent lets the
//    few hard minority samples tilt the separating direction into their own
//    noise, capping accuracy near 98.5%.
bool criterion_benchmark_utility(std::string* detail) {
  const auto start = std::chrono::steady_clock::now();
  const AlphaGrid grid = AlphaGrid::default_grid();
  const dpfl::data::ExpressionMatrix dataset = dpfl::data::select_features(
      dpfl::data::synthesize_dataset(
          61, 529, 100, dpfl::data::synthetic_signal_signature(69), 2.0, 0.0,
          2026),
      dpfl::data::synthetic_signal_signature(69));

  dpfl::harness::HyperParams noise_free;
  noise_free.signature = "synthetic_signal";
  noise_free.q = 1.0;
  noise_free.eta = 1.0;
  noise_free.sigma = 0.0;
  noise_free.clip_c = 1.0;
  noise_free.n_rounds = 1000;
  noise_free.local_steps = 1;

  dpfl::harness::HyperParams tight = noise_free;
  tight.eta = 0.5;
  tight.sigma = 16.0;
  tight.n_rounds = 10;

  dpfl::harness::HyperParams loose = tight;
  loose.sigma = 4.0;
  loose.n_rounds = 40;

  const dpfl::harness::FrontierRecord base =
      dpfl::harness::repeat_runs(noise_free, dataset, 10, 1, 1e-5, grid);
  const dpfl::harness::FrontierRecord at_tight =
      dpfl::harness::repeat_runs(tight, dataset, 10, 1, 1e-5, grid);
  const dpfl::harness::FrontierRecord at_loose =
      dpfl::harness::repeat_runs(loose, dataset, 10, 1, 1e-5, grid);
  const double elapsed = seconds_since(start);

  std::ostringstream d;
  d << "noise-free " << fmt(base.mean_accuracy) << "; eps="
    << fmt(at_tight.epsilon) << " -> " << fmt(at_tight.mean_accuracy)
    << "; eps=" << fmt(at_loose.epsilon) << " -> "
    << fmt(at_loose.mean_accuracy) << " (" << fmt(elapsed) << "s)";
  *detail = d.str();

  return base.mean_accuracy >= 0.98 &&
         at_tight.epsilon <= 1.0 && at_tight.epsilon >= 0.8 &&
         at_tight.mean_accuracy >= 0.917 &&
         at_loose.epsilon <= 10.0 && at_loose.epsilon >= 8.0 &&
         at_loose.mean_accuracy >= at_tight.mean_accuracy - 0.005 &&
         elapsed < 600.0;
}

// ---------------------------------------------------------------------------
// 10. Plot data reports best-achievable accuracy, so values never decrease
//     along the epsilon axis within one (delta, signature) series.
bool criterion_plot_monotonicity(std::string* detail) {
  TempWorkspace tmp;
  const AlphaGrid grid = AlphaGrid::default_grid();
  const dpfl::data::ExpressionMatrix dataset = dpfl::data::synthesize_dataset(
      60, 60, 5, dpfl::data::synthetic_signal_signature(3), 3.0, 0.0, 44);
  std::vector<dpfl::harness::HyperParams> points;
  for (double q : {0.25, 0.5}) {
    for (double sigma : {0.8, 1.5, 3.0}) {
      dpfl::harness::HyperParams hp;
      hp.signature = "synthetic_signal";
      hp.q = q;
      hp.eta = 0.3;
      hp.sigma = sigma;
      hp.clip_c = 1.0;
      hp.n_rounds = 3;
      hp.local_steps = 2;
      points.push_back(hp);
    }
  }
  const std::string frontier = tmp.file("frontier.csv");
  const std::vector<dpfl::harness::FrontierRecord> records =
      dpfl::harness::grid_search(points, dataset, 2, 13, {1e-5, 1e-4},
                                 frontier, grid, 0);
  const std::string plot = tmp.file("plot.csv");
  dpfl::harness::emit_plot_data(records, {1e-5, 1e-4, 1e-3}, plot);

  std::ifstream in(plot);
  std::string line;
  if (!std::getline(in, line) ||
      line != "delta,epsilon,signature,mean_accuracy") {
    *detail = "bad plot header";
    return false;
  }
  std::size_t rows = 0;
  std::string prev_key;
  double prev_eps = 0.0, prev_acc = 0.0;
  while (std::getline(in, line)) {
    ++rows;
    std::istringstream cells(line);
    std::string delta_s, eps_s, sig, acc_s;
    if (!std::getline(cells, delta_s, ',') ||
        !std::getline(cells, eps_s, ',') || !std::getline(cells, sig, ',') ||
        !std::getline(cells, acc_s)) {
      *detail = "bad plot row: " + line;
      return false;
    }
    const double eps = std::stod(eps_s);
    const double acc = std::stod(acc_s);
    const std::string key = delta_s + "|" + sig;
    if (key == prev_key) {
      if (eps <= prev_eps || acc < prev_acc) {
        *detail = "series not monotone at " + line;
        return false;
      }
    }
    prev_key = key;
    prev_eps = eps;
    prev_acc = acc;
  }
  *detail = std::to_string(rows) + " plot rows, all series non-decreasing";
  return rows > 0;
}

// ---------------------------------------------------------------------------
// 11. Budget-driven selection never spends more than the target: over random
//     targets against a live frontier, every successful selection realizes a
//     budget inside the box, and failures happen only when nothing fits.
bool criterion_budget_selection_safety(std::string* detail) {
  TempWorkspace tmp;
  const AlphaGrid grid = AlphaGrid::default_grid();
  const dpfl::data::ExpressionMatrix dataset = dpfl::data::synthesize_dataset(
      20, 20, 3, dpfl::data::synthetic_signal_signature(2), 3.0, 0.0, 17);

  // A frontier of real accountant budgets; accuracies are irrelevant to the
  // safety property, so they are filled with a placeholder pattern.
  std::vector<dpfl::harness::FrontierRecord> records;
  for (double q : {0.005, 0.01, 0.02, 0.05, 0.1}) {
    for (double sigma : {0.5, 1.0, 2.0, 4.0, 8.0}) {
      for (std::int64_t total : {10, 50, 100, 200}) {
        dpfl::harness::HyperParams hp;
        hp.signature = "synthetic_signal";
        hp.q = q;
        hp.eta = 0.2;
        hp.sigma = sigma;
        hp.clip_c = 1.0;
        hp.n_rounds = total;
        hp.local_steps = 1;
        dpfl::federated::FlConfig cfg;
        cfg.n_rounds = hp.n_rounds;
        cfg.local_steps = hp.local_steps;
        cfg.dp.q = hp.q;
        cfg.dp.sigma = hp.sigma;
        for (double delta : {1e-5, 1e-4}) {
          dpfl::harness::FrontierRecord r;
          r.hp = hp;
          const dpfl::accountant::DpPoint budget =
              dpfl::federated::per_client_budget(cfg, delta, grid);
          r.epsilon = budget.epsilon;
          r.delta = budget.delta;
          r.mean_accuracy = 0.5;
          r.n_seeds = 1;
          records.push_back(r);
        }
      }
    }
  }
  const std::string frontier = tmp.file("frontier.csv");
  dpfl::harness::write_frontier_csv(records, frontier);

  RngStream rng(11, 0);
  const double deltas[] = {1e-6, 1e-5, 1e-4, 1e-3};
  int successes = 0, refusals = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const double eps_t =
        0.05 * std::pow(1000.0, rng.uniform());  // log-uniform [0.05, 50]
    const double delta_t =
        deltas[static_cast<std::size_t>(rng.uniform() * 4.0)];
    const dpfl::harness::BudgetTarget target{eps_t, delta_t};
    bool feasible = false;
    for (const auto& r : records) {
      if (r.delta <= delta_t && r.epsilon <= eps_t) feasible = true;
    }
    try {
      const dpfl::harness::BudgetRunResult result =
          dpfl::harness::run_from_budget(target, frontier, dataset, 1, 3,
                                         grid);
      if (!feasible) {
        *detail = "selection succeeded on an infeasible target";
        return false;
      }
      if (!(result.realized.epsilon <= eps_t &&
            result.realized.delta <= delta_t)) {
        *detail = "realized budget (" + fmt(result.realized.epsilon) + ", " +
                  fmt(result.realized.delta) + ") exceeds target (" +
                  fmt(eps_t) + ", " + fmt(delta_t) + ")";
        return false;
      }
      ++successes;
    } catch (const std::runtime_error& e) {
      const std::string what = e.what();
      if (feasible ||
          what.find("no configuration in the frontier") == std::string::npos) {
        *detail = "unexpected failure: " + what;
        return false;
      }
      ++refusals;
    }
  }
  *detail = std::to_string(successes) + " selections within budget, " +
            std::to_string(refusals) + " correct refusals, 50 targets";
  return successes > 0 && refusals > 0;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    bool (*run)(std::string*);
  };
  const Criterion criteria[] = {
      {"accountant-vs-quadrature-oracle", criterion_accountant_vs_oracle},
      {"gaussian-limit-closed-form", criterion_gaussian_limit},
      {"integer-vs-fractional-orders", criterion_integer_vs_fractional},
      {"budget-factorization-invariance", criterion_budget_factorization},
      {"noise-free-federated-equals-gd", criterion_noise_free_equals_gd},
      {"gradient-clipping-bound", criterion_clipping},
      {"gradients-vs-finite-differences", criterion_gradient_check},
      {"bitwise-reproducibility", criterion_reproducibility},
      {"synthetic-benchmark-utility", criterion_benchmark_utility},
      {"plot-data-monotonicity", criterion_plot_monotonicity},
      {"budget-selection-safety", criterion_budget_selection_safety},
  };

  int failures = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    std::string explanation;
    bool ok = false;
    try {
      ok = c.run(&explanation);
    } catch (const std::exception& e) {
      explanation = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %02d %s — %s\n", ok ? "PASS" : "FAIL", index, c.name,
                explanation.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  std::printf("acceptance: %d/11 criteria passed\n", 11 - failures);
  return failures == 0 ? 0 : 1;
}
