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

#ifndef DPFL_HARNESS_HPP_
#define DPFL_HARNESS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "dpfl/accountant.hpp"
#include "dpfl/data.hpp"
#include "dpfl/federated.hpp"
#include "dpfl/models.hpp"

namespace dpfl {
namespace harness {

// One grid point. The architecture's input dimension is not part of the
// point — it is taken from the dataset at run time — so a point is exactly
// what one frontier CSV row stores.
struct HyperParams {
  std::string signature;
  models::ModelKind arch_kind = models::ModelKind::kLogisticRegression;
  int hidden_dim = 16;  // MLP only
  double q = 0.01;
  double eta = 0.1;
  double sigma = 1.0;
  double clip_c = 1.0;
  std::int64_t n_rounds = 1;
  std::int64_t local_steps = 1;

  void validate() const;  // throws std::invalid_argument

  friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

// CSV arch cell: "logistic_regression" or "shallow_mlp_h<hidden_dim>".
std::string arch_to_string(const HyperParams& hp);
void arch_from_string(const std::string& s, HyperParams* hp);

struct FrontierRecord {
  HyperParams hp;
  double epsilon = 0.0;  // per-client budget at `delta`; +inf when sigma = 0
  double delta = 1e-5;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;  // population standard deviation over seeds
  std::int64_t n_seeds = 1;

  friend bool operator==(const FrontierRecord&, const FrontierRecord&) = default;
};

struct BudgetTarget {
  double epsilon_t = 1.0;
  double delta_t = 1e-5;

  void validate() const;  // throws std::invalid_argument
};

// Evaluates one grid point: for each of n_seeds seeds, stratified-split the
// dataset 40/40/20 into client 1 / client 2 / validation, zero-impute each
// part, run the cyclic FL protocol, and score validation accuracy. Returns
// mean and population standard deviation over seeds plus the per-client
// (epsilon, delta) — identical across seeds, since accounting is
// data-independent. Seed i uses split and run streams derived from
// (base_seed, i).
FrontierRecord repeat_runs(const HyperParams& hp,
                           const data::ExpressionMatrix& dataset,
                           std::int64_t n_seeds, std::uint64_t base_seed,
                           double delta, const accountant::AlphaGrid& grid);

// Evaluates every grid point (in parallel across points; each point's
// training is evaluated once and its budget converted once per delta in
// `deltas`), writes all records to out_path sorted by (delta, epsilon, then
// the remaining columns) ascending, and returns them in that order. The
// output is byte-identical across reruns and thread counts.
std::vector<FrontierRecord> grid_search(
    const std::vector<HyperParams>& points,
    const data::ExpressionMatrix& dataset, std::int64_t n_seeds,
    std::uint64_t base_seed, const std::vector<double>& deltas,
    const std::string& out_path, const accountant::AlphaGrid& grid,
    int n_threads = 0);  // 0 = hardware concurrency

// Exact column order:
// signature,arch,q,eta,sigma,clip_c,n_rounds,local_steps,epsilon,delta,
// mean_accuracy,std_accuracy,n_seeds
void write_frontier_csv(const std::vector<FrontierRecord>& records,
                        const std::string& path);
std::vector<FrontierRecord> load_frontier_csv(const std::string& path);

// Among records satisfying delta <= delta_t AND epsilon <= epsilon_t
// (coordinatewise — a record inside the box satisfies the target), returns
// the lexicographic maximum on (delta, epsilon); ties broken by higher
// mean_accuracy, then first occurrence. Throws std::runtime_error when no
// record is feasible.
FrontierRecord select_params(const std::vector<FrontierRecord>& records,
                             const BudgetTarget& target);

struct BudgetRunResult {
  FrontierRecord selected;          // the frontier row that was chosen
  accountant::DpPoint realized;     // budget recomputed from the row's params
  double mean_accuracy = 0.0;       // re-run accuracy at n_seeds seeds
  double std_accuracy = 0.0;
};

// Budget-to-parameters entry point: loads the frontier, selects the row for
// the target, recomputes its budget from (q, sigma, N*E, delta) and verifies
// both that it matches the stored row and that it does not exceed the target
// coordinatewise (failure signals a stale or inconsistent frontier), then
// re-runs training with the selected hyperparameters.
BudgetRunResult run_from_budget(const BudgetTarget& target,
                                const std::string& frontier_csv_path,
                                const data::ExpressionMatrix& dataset,
                                std::int64_t n_seeds, std::uint64_t base_seed,
                                const accountant::AlphaGrid& grid);

// For each delta in `deltas`, each signature, and each epsilon in the
// ascending grid of distinct finite record epsilons: the best mean accuracy
// among records with record.delta <= delta and record.epsilon <= epsilon
// (budget (epsilon, delta) then also satisfies the row's guarantee). Pairs
// with no feasible record are omitted. Columns:
// delta,epsilon,signature,mean_accuracy
void emit_plot_data(const std::vector<FrontierRecord>& records,
                    const std::vector<double>& deltas,
                    const std::string& out_path);

// Flat key = value-list grid file: keys signature, arch, q, eta, sigma,
// clip_c, n_rounds, local_steps (all required, each a comma-separated list);
// # starts a comment. The grid is the Cartesian product, expanded with the
// rightmost key in the order above varying fastest.
std::vector<HyperParams> parse_grid_config(const std::string& path);

}  // namespace harness
}  // namespace dpfl

#endif  // DPFL_HARNESS_HPP_
