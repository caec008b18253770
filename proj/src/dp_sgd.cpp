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

#include "dpfl/dp_sgd.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace dpfl {
namespace dp_sgd {
namespace {

double l2_norm(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

}  // namespace

void DpSgdConfig::validate() const {
  if (!(q > 0.0 && q <= 1.0)) {
    throw std::invalid_argument("sampling rate q must lie in (0, 1]");
  }
  if (!(eta > 0.0)) {
    throw std::invalid_argument("learning rate eta must be positive");
  }
  if (!(sigma >= 0.0)) {
    throw std::invalid_argument("noise scale sigma must be >= 0");
  }
  if (!(clip_c > 0.0)) {
    throw std::invalid_argument("gradient norm bound clip_c must be positive");
  }
}

std::vector<std::size_t> poisson_sample(std::size_t n, double q,
                                        RngStream& rng) {
  if (n < 1) {
    throw std::invalid_argument("poisson_sample requires n >= 1");
  }
  std::vector<std::size_t> indices;
  for (std::size_t i = 0; i < n; ++i) {
    // uniform() < 1 always holds, so q = 1 takes everything; q = 0 nothing.
    if (rng.uniform() < q) indices.push_back(i);
  }
  return indices;
}

std::vector<double> clip_gradient(const std::vector<double>& g, double clip_c) {
  if (!(clip_c > 0.0)) {
    throw std::invalid_argument("clip_c must be positive");
  }
  const double norm = l2_norm(g);
  if (norm <= clip_c) return g;
  std::vector<double> clipped(g.size());
  const double scale = clip_c / norm;
  for (std::size_t i = 0; i < g.size(); ++i) clipped[i] = g[i] * scale;
  return clipped;
}

models::ModelParams dp_sgd_step(const models::ModelParams& params,
                                const std::vector<models::LabeledSample>& data,
                                const DpSgdConfig& cfg, RngStream& rng) {
  cfg.validate();
  params.validate();
  if (data.empty()) {
    throw std::invalid_argument("dp_sgd_step requires a non-empty dataset");
  }

  const std::vector<std::size_t> batch =
      poisson_sample(data.size(), cfg.q, rng);
  if (batch.empty()) {
    return params;  // the step still counts toward accounting at the caller
  }

  const std::size_t dim = params.theta.size();
  std::vector<double> sum(dim, 0.0);
  for (std::size_t idx : batch) {
    std::vector<double> g = models::per_sample_gradient(params, data[idx]);
    for (double v : g) {
      if (!std::isfinite(v)) {
        throw std::runtime_error("non-finite per-sample gradient");
      }
    }
    g = clip_gradient(g, cfg.clip_c);
    assert(l2_norm(g) <= cfg.clip_c * (1.0 + 1e-12));
    for (std::size_t d = 0; d < dim; ++d) sum[d] += g[d];
  }

  const double noise_scale = cfg.sigma * cfg.clip_c;
  for (std::size_t d = 0; d < dim; ++d) {
    sum[d] += noise_scale * rng.normal();
  }

  models::ModelParams next = params;
  const double step_scale = cfg.eta / static_cast<double>(batch.size());
  for (std::size_t d = 0; d < dim; ++d) {
    next.theta[d] -= step_scale * sum[d];
  }
  return next;
}

}  // namespace dp_sgd
}  // namespace dpfl
