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

#ifndef DPFL_DP_SGD_HPP_
#define DPFL_DP_SGD_HPP_

#include <cstddef>
#include <vector>

#include "dpfl/models.hpp"
#include "dpfl/rng.hpp"

namespace dpfl {
namespace dp_sgd {

struct DpSgdConfig {
  double q = 0.01;     // Poisson sampling rate, 0 < q <= 1
  double eta = 0.1;    // learning rate, > 0
  double sigma = 1.0;  // noise scale, >= 0 (0 only for non-private testing)
  double clip_c = 1.0; // per-sample gradient L2 bound, > 0

  void validate() const;  // throws std::invalid_argument
};

// Each index in [0, n) is included independently with probability q, in
// ascending order. Consumes exactly n uniforms. The result may be empty.
std::vector<std::size_t> poisson_sample(std::size_t n, double q,
                                        RngStream& rng);

// g / max(1, ||g||_2 / clip_c): norm capped at clip_c, direction preserved,
// vectors already within the bound pass through unchanged.
std::vector<double> clip_gradient(const std::vector<double>& g, double clip_c);

// One DP-SGD step: Poisson-sample a batch, clip each per-sample gradient to
// clip_c, sum, add N(0, sigma^2 clip_c^2) noise per coordinate, divide by the
// realized batch size, and descend with eta. Draw order is fixed: n uniforms
// for the batch, then (for a non-empty batch) one normal per parameter
// coordinate. An empty batch returns the parameters unchanged — callers must
// still count the step toward privacy accounting, because the sampling event
// happened. Throws on dimension mismatch or a non-finite gradient.
models::ModelParams dp_sgd_step(const models::ModelParams& params,
                                const std::vector<models::LabeledSample>& data,
                                const DpSgdConfig& cfg, RngStream& rng);

}  // namespace dp_sgd
}  // namespace dpfl

#endif  // DPFL_DP_SGD_HPP_
