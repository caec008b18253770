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

// Command-line front end: accountant queries, single federated training
// runs, synthetic data generation, grid search, budget-based selection, and
// plot-data emission.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dpfl/accountant.hpp"
#include "dpfl/data.hpp"
#include "dpfl/federated.hpp"
#include "dpfl/harness.hpp"
#include "dpfl/models.hpp"
#include "dpfl/text.hpp"

namespace {

using dpfl::accountant::AlphaGrid;

std::vector<double> parse_double_list(const std::string& csv,
                                      const std::string& what) {
  std::vector<double> values;
  for (std::string_view field : dpfl::text::split(csv, ',')) {
    double value = 0.0;
    if (!dpfl::text::parse_double(dpfl::text::trim(field), &value)) {
      throw CLI::ValidationError(what, "not a comma-separated number list: " +
                                           csv);
    }
    values.push_back(value);
  }
  return values;
}

AlphaGrid grid_from_option(const std::string& alpha_grid_csv) {
  if (alpha_grid_csv.empty()) return AlphaGrid::default_grid();
  return AlphaGrid(parse_double_list(alpha_grid_csv, "--alpha-grid"));
}

int cmd_accountant(double q, double sigma, std::int64_t steps, double delta,
                   const std::string& alpha_grid_csv) {
  const AlphaGrid grid = grid_from_option(alpha_grid_csv);
  const dpfl::accountant::SgmParams params{q, sigma};
  const auto rows =
      dpfl::accountant::budget_table(params, steps, delta, grid);
  const auto best = dpfl::accountant::best_dp_budget(params, steps, delta, grid);
  std::cout << "# epsilon=" << dpfl::text::format_double(best.point.epsilon)
            << " delta=" << dpfl::text::format_double(delta)
            << " alpha=" << dpfl::text::format_double(best.alpha) << "\n";
  std::cout << "alpha,rdp_epsilon,dp_epsilon\n";
  for (const auto& row : rows) {
    if (!row.ok) {
      std::cerr << "alpha " << row.alpha << " skipped: " << row.error << "\n";
      continue;
    }
    std::cout << dpfl::text::format_double(row.alpha) << ','
              << dpfl::text::format_double(row.rdp_epsilon) << ','
              << dpfl::text::format_double(row.dp_epsilon) << "\n";
  }
  return 0;
}

dpfl::data::ExpressionMatrix prepare(const dpfl::data::ExpressionMatrix& m,
                                     const dpfl::data::GeneSignature* sig) {
  return dpfl::data::impute_zeros(
      sig != nullptr ? dpfl::data::select_features(m, *sig) : m);
}

int cmd_train(const std::string& clients_csv, const std::string& signature_path,
              const std::string& arch, double q, double eta, double sigma,
              double clip, std::int64_t rounds, std::int64_t local_steps,
              std::uint64_t seed, double delta, const std::string& test_path,
              const std::string& alpha_grid_csv) {
  const std::vector<std::string_view> client_paths =
      dpfl::text::split(clients_csv, ',');
  if (client_paths.size() != 2) {
    throw CLI::ValidationError("--clients",
                               "expected exactly two comma-separated files");
  }
  dpfl::data::GeneSignature sig;
  const bool have_sig = !signature_path.empty();
  if (have_sig) {
    sig = dpfl::data::load_signature(signature_path, "signature");
  }
  const auto m1 = dpfl::data::load_matrix(std::string(client_paths[0]));
  const auto m2 = dpfl::data::load_matrix(std::string(client_paths[1]));
  const auto mt = dpfl::data::load_matrix(test_path);
  const auto p1 = prepare(m1, have_sig ? &sig : nullptr);
  const auto p2 = prepare(m2, have_sig ? &sig : nullptr);
  const auto pt = prepare(mt, have_sig ? &sig : nullptr);
  if (p1.gene_names != p2.gene_names || p1.gene_names != pt.gene_names) {
    throw std::runtime_error(
        "client and test matrices disagree on gene columns; supply a shared "
        "--signature or align the files");
  }

  dpfl::harness::HyperParams hp;  // reuse the arch string convention
  dpfl::harness::arch_from_string(arch, &hp);
  dpfl::federated::FlConfig cfg;
  cfg.n_rounds = rounds;
  cfg.local_steps = local_steps;
  cfg.dp.q = q;
  cfg.dp.eta = eta;
  cfg.dp.sigma = sigma;
  cfg.dp.clip_c = clip;
  cfg.arch.kind = hp.arch_kind;
  cfg.arch.input_dim = static_cast<int>(p1.n_genes());
  cfg.arch.hidden_dim = hp.hidden_dim;
  cfg.master_seed = seed;

  const AlphaGrid grid = grid_from_option(alpha_grid_csv);
  const auto result = dpfl::federated::run_cyclic_fl(
      cfg, dpfl::data::to_samples(p1), dpfl::data::to_samples(p2), delta, grid);
  const double acc = dpfl::models::accuracy(
      dpfl::models::evaluate(result.final_params, dpfl::data::to_samples(pt)));
  std::cout << "accuracy,epsilon,delta\n"
            << dpfl::text::format_double(acc) << ','
            << dpfl::text::format_double(result.per_client_budget.epsilon)
            << ','
            << dpfl::text::format_double(result.per_client_budget.delta)
            << "\n";
  return 0;
}

int cmd_synth(const std::string& out, std::int64_t n_normal,
              std::int64_t n_tumor, std::int64_t n_genes,
              std::int64_t signal_genes, const std::string& signature_path,
              double effect_size, double missing_rate, std::uint64_t seed,
              const std::string& signature_out) {
  dpfl::data::GeneSignature sig;
  if (!signature_path.empty()) {
    sig = dpfl::data::load_signature(signature_path, "signature");
  } else {
    sig = dpfl::data::synthetic_signal_signature(
        static_cast<std::size_t>(signal_genes));
  }
  const auto m = dpfl::data::synthesize_dataset(
      static_cast<std::size_t>(n_normal), static_cast<std::size_t>(n_tumor),
      static_cast<std::size_t>(n_genes), sig, effect_size, missing_rate, seed);
  dpfl::data::write_matrix(m, out);
  if (!signature_out.empty()) {
    std::ofstream sig_file(signature_out, std::ios::trunc);
    if (!sig_file) {
      throw std::runtime_error("cannot open for writing: " + signature_out);
    }
    sig_file << "# signal genes of " << out << "\n";
    for (const std::string& gene : sig.genes) sig_file << gene << "\n";
  }
  std::cout << "wrote " << m.n_samples() << " samples x " << m.n_genes()
            << " genes to " << out << "\n";
  return 0;
}

int cmd_grid(const std::string& grid_file, const std::string& dataset_path,
             std::int64_t seeds, std::uint64_t base_seed,
             const std::string& deltas_csv, const std::string& out,
             int threads, const std::string& alpha_grid_csv) {
  const auto points = dpfl::harness::parse_grid_config(grid_file);
  const auto dataset = dpfl::data::load_matrix(dataset_path);
  const auto deltas = parse_double_list(deltas_csv, "--deltas");
  const auto records = dpfl::harness::grid_search(
      points, dataset, seeds, base_seed, deltas, out,
      grid_from_option(alpha_grid_csv), threads);
  std::cout << "wrote " << records.size() << " frontier rows ("
            << points.size() << " grid points x " << deltas.size()
            << " deltas) to " << out << "\n";
  return 0;
}

int cmd_select(const std::string& frontier, double eps, double delta) {
  const auto records = dpfl::harness::load_frontier_csv(frontier);
  const auto chosen =
      dpfl::harness::select_params(records, dpfl::harness::BudgetTarget{eps, delta});
  dpfl::harness::write_frontier_csv({chosen}, "/dev/stdout");
  return 0;
}

int cmd_plot_data(const std::string& frontier, const std::string& deltas_csv,
                  const std::string& out) {
  const auto records = dpfl::harness::load_frontier_csv(frontier);
  dpfl::harness::emit_plot_data(records, parse_double_list(deltas_csv, "--deltas"),
                                out);
  std::cout << "wrote plot data to " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Differentially private federated training toolkit: SGM accounting, "
      "DP-SGD, a two-client cyclic FL simulator, and experiment harness"};
  app.require_subcommand(1);

  // accountant
  double q = 0.01, sigma = 1.0, delta = 1e-5;
  std::int64_t steps = 1;
  std::string alpha_grid_csv;
  auto* acc = app.add_subcommand("accountant",
                                 "Best (epsilon, delta) for SGM steps");
  acc->add_option("--q", q, "Poisson sampling rate")->required();
  acc->add_option("--sigma", sigma, "noise multiplier")->required();
  acc->add_option("--steps", steps, "number of composed steps")->required();
  acc->add_option("--delta", delta, "DP failure probability")->required();
  acc->add_option("--alpha-grid", alpha_grid_csv,
                  "comma-separated Renyi orders (default: built-in grid)");

  // train
  std::string clients_csv, signature_path, test_path;
  std::string arch = "logistic_regression";
  double eta = 0.1, clip = 1.0;
  std::int64_t rounds = 1, local_steps = 1;
  std::uint64_t seed = 1;
  auto* train = app.add_subcommand("train", "One federated training run");
  train->add_option("--clients", clients_csv, "two matrix files, comma-separated")
      ->required();
  train->add_option("--signature", signature_path,
                    "gene signature file for feature selection");
  train->add_option("--arch", arch,
                    "logistic_regression | shallow_mlp | shallow_mlp_h<k>");
  train->add_option("--q", q, "Poisson sampling rate")->required();
  train->add_option("--eta", eta, "learning rate")->required();
  train->add_option("--sigma", sigma, "noise multiplier")->required();
  train->add_option("--clip", clip, "gradient norm bound C")->required();
  train->add_option("--rounds", rounds, "federated rounds N")->required();
  train->add_option("--local-steps", local_steps, "local steps per round E")
      ->required();
  train->add_option("--seed", seed, "master seed")->required();
  train->add_option("--delta", delta, "DP failure probability")->required();
  train->add_option("--test", test_path, "held-out evaluation matrix")
      ->required();
  train->add_option("--alpha-grid", alpha_grid_csv,
                    "comma-separated Renyi orders");

  // synth
  std::string out_path, signature_out;
  std::int64_t n_normal = 61, n_tumor = 529, n_genes = 100, signal_genes = 69;
  double effect_size = 1.0, missing_rate = 0.0;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth->add_option("--out", out_path, "output matrix file")->required();
  synth->add_option("--n-normal", n_normal, "normal sample count");
  synth->add_option("--n-tumor", n_tumor, "tumor sample count");
  synth->add_option("--n-genes", n_genes, "gene count");
  synth->add_option("--signal-genes", signal_genes,
                    "number of informative genes (gene_1..gene_k)");
  synth->add_option("--signature", signature_path,
                    "signature file naming the informative genes instead");
  synth->add_option("--effect-size", effect_size,
                    "class mean shift on informative genes");
  synth->add_option("--missing-rate", missing_rate,
                    "probability a cell is marked missing");
  synth->add_option("--seed", seed, "generator seed");
  synth->add_option("--signature-out", signature_out,
                    "also write the informative-gene signature here");

  // grid
  std::string grid_file, dataset_path, deltas_csv = "1e-5,1e-4,1e-3";
  std::int64_t n_seeds = 50;
  std::uint64_t base_seed = 1;
  int threads = 0;
  auto* grid = app.add_subcommand("grid", "Grid search to a frontier CSV");
  grid->add_option("--grid-file", grid_file, "grid config file")->required();
  grid->add_option("--dataset", dataset_path, "dataset matrix file")->required();
  grid->add_option("--seeds", n_seeds, "seeds per grid point (default 50)");
  grid->add_option("--base-seed", base_seed, "base seed");
  grid->add_option("--deltas", deltas_csv, "comma-separated delta grid");
  grid->add_option("--out", out_path, "output frontier CSV")->required();
  grid->add_option("--threads", threads, "worker threads (0 = all cores)");
  grid->add_option("--alpha-grid", alpha_grid_csv,
                   "comma-separated Renyi orders");

  // select
  std::string frontier_path;
  double target_eps = 1.0, target_delta = 1e-5;
  auto* select = app.add_subcommand(
      "select", "Pick the frontier row for a target budget");
  select->add_option("--frontier", frontier_path, "frontier CSV")->required();
  select->add_option("--eps", target_eps, "target epsilon")->required();
  select->add_option("--delta", target_delta, "target delta")->required();

  // plot-data
  auto* plot = app.add_subcommand("plot-data",
                                  "Accuracy-vs-budget curves from a frontier");
  plot->add_option("--frontier", frontier_path, "frontier CSV")->required();
  plot->add_option("--deltas", deltas_csv, "comma-separated delta panels");
  plot->add_option("--out", out_path, "output CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (acc->parsed()) {
      return cmd_accountant(q, sigma, steps, delta, alpha_grid_csv);
    }
    if (train->parsed()) {
      return cmd_train(clients_csv, signature_path, arch, q, eta, sigma, clip,
                       rounds, local_steps, seed, delta, test_path,
                       alpha_grid_csv);
    }
    if (synth->parsed()) {
      return cmd_synth(out_path, n_normal, n_tumor, n_genes, signal_genes,
                       signature_path, effect_size, missing_rate, seed,
                       signature_out);
    }
    if (grid->parsed()) {
      return cmd_grid(grid_file, dataset_path, n_seeds, base_seed, deltas_csv,
                      out_path, threads, alpha_grid_csv);
    }
    if (select->parsed()) {
      return cmd_select(frontier_path, target_eps, target_delta);
    }
    if (plot->parsed()) {
      return cmd_plot_data(frontier_path, deltas_csv, out_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
