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

#ifndef DPFL_FEDERATED_HPP_
#define DPFL_FEDERATED_HPP_

#include <cstdint>
#include <vector>

#include "dpfl/accountant.hpp"
#include "dpfl/dp_sgd.hpp"
#include "dpfl/models.hpp"

namespace dpfl {
namespace federated {

struct FlConfig {
  std::int64_t n_rounds = 1;     // N: federated rounds
  std::int64_t local_steps = 1;  // E: batch updates per round per client
  dp_sgd::DpSgdConfig dp;
  models::ArchitectureSpec arch;
  std::uint64_t master_seed = 0;

  void validate() const;  // throws std::invalid_argument
};

struct TranscriptEntry {
  std::int64_t round = 0;  // 1-based
  int client = 0;          // 1 or 2
  std::int64_t steps = 0;  // local steps applied in this turn

  friend bool operator==(const TranscriptEntry&,
                         const TranscriptEntry&) = default;
};

struct FlRunResult {
  models::ModelParams final_params;
  accountant::DpPoint per_client_budget;
  // One entry per client turn, 2 * n_rounds total, alternating client 1
  // then client 2 within each round.
  std::vector<TranscriptEntry> transcript;
};

// The (epsilon, delta) budget either client spends over the whole protocol:
// its own n_rounds * local_steps SGM steps; the other client's steps are
// post-processing of released parameters and cost nothing. Accepts the
// accountant's q domain [0, 1] (q = 0 is meaningful for accounting even
// though training requires q > 0). sigma = 0 yields epsilon = infinity:
// noise-free training has no DP guarantee.
accountant::DpPoint per_client_budget(const FlConfig& cfg, double delta,
                                      const accountant::AlphaGrid& grid);

// Runs the two-client cyclic protocol in process: client 1 initializes the
// parameters from master_seed, then for each round client 1 performs
// local_steps DP-SGD steps on its data followed by client 2 on its data,
// a single parameter vector passing between them. Noise streams are keyed by
// (master_seed, client, round, step), so the result is a pure function of
// (cfg, client1, client2). Throws on empty datasets or feature-dimension
// mismatch with cfg.arch.
FlRunResult run_cyclic_fl(const FlConfig& cfg,
                          const std::vector<models::LabeledSample>& client1,
                          const std::vector<models::LabeledSample>& client2,
                          double delta, const accountant::AlphaGrid& grid);

}  // namespace federated
}  // namespace dpfl

#endif  // DPFL_FEDERATED_HPP_
