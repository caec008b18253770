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

#include "dpfl/federated.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

#include "dpfl/rng.hpp"

namespace dpfl {
namespace federated {
namespace {

// Stream tag for per-(client, round, step) noise streams.
constexpr std::uint64_t kStepStreamTag = 0x666c2d737465702dULL;

void check_dataset(const std::vector<models::LabeledSample>& data, int client,
                   const models::ArchitectureSpec& arch) {
  if (data.empty()) {
    std::ostringstream msg;
    msg << "client " << client << " has an empty dataset";
    throw std::invalid_argument(msg.str());
  }
  for (const models::LabeledSample& s : data) {
    if (s.features.size() != static_cast<std::size_t>(arch.input_dim)) {
      std::ostringstream msg;
      msg << "client " << client << " sample has " << s.features.size()
          << " features but the architecture expects " << arch.input_dim;
      throw std::invalid_argument(msg.str());
    }
  }
}

}  // namespace

void FlConfig::validate() const {
  if (n_rounds < 1) {
    throw std::invalid_argument("n_rounds must be >= 1");
  }
  if (local_steps < 1) {
    throw std::invalid_argument("local_steps must be >= 1");
  }
  arch.validate();
}

accountant::DpPoint per_client_budget(const FlConfig& cfg, double delta,
                                      const accountant::AlphaGrid& grid) {
  if (cfg.n_rounds < 1 || cfg.local_steps < 1) {
    throw std::invalid_argument("n_rounds and local_steps must be >= 1");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  if (cfg.dp.sigma == 0.0) {
    // Noise-free training carries no DP guarantee at all.
    return accountant::DpPoint{std::numeric_limits<double>::infinity(), delta};
  }
  const accountant::SgmParams params{cfg.dp.q, cfg.dp.sigma};
  const std::int64_t total_steps = cfg.n_rounds * cfg.local_steps;
  return accountant::best_dp_budget(params, total_steps, delta, grid).point;
}

FlRunResult run_cyclic_fl(const FlConfig& cfg,
                          const std::vector<models::LabeledSample>& client1,
                          const std::vector<models::LabeledSample>& client2,
                          double delta, const accountant::AlphaGrid& grid) {
  cfg.validate();
  cfg.dp.validate();
  check_dataset(client1, 1, cfg.arch);
  check_dataset(client2, 2, cfg.arch);

  FlRunResult result;
  result.per_client_budget = per_client_budget(cfg, delta, grid);
  result.transcript.reserve(2 * static_cast<std::size_t>(cfg.n_rounds));

  models::ModelParams theta = models::init_params(cfg.arch, cfg.master_seed);
  for (std::int64_t round = 1; round <= cfg.n_rounds; ++round) {
    for (int client = 1; client <= 2; ++client) {
      const std::vector<models::LabeledSample>& data =
          client == 1 ? client1 : client2;
      for (std::int64_t step = 1; step <= cfg.local_steps; ++step) {
        RngStream rng(cfg.master_seed,
                      RngStream::derive_stream(
                          {kStepStreamTag, static_cast<std::uint64_t>(client),
                           static_cast<std::uint64_t>(round),
                           static_cast<std::uint64_t>(step)}));
        theta = dp_sgd::dp_sgd_step(theta, data, cfg.dp, rng);
      }
      result.transcript.push_back(
          TranscriptEntry{round, client, cfg.local_steps});
    }
  }
  result.final_params = std::move(theta);
  return result;
}

}  // namespace federated
}  // namespace dpfl
