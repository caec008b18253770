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

#ifndef DPFL_MODELS_HPP_
#define DPFL_MODELS_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace dpfl {
namespace models {

enum class ModelKind {
  kLogisticRegression,
  kShallowMlp,
};

// Parses "logistic_regression" / "shallow_mlp"; throws std::invalid_argument
// on anything else.
ModelKind model_kind_from_string(const std::string& name);
std::string to_string(ModelKind kind);

struct ArchitectureSpec {
  ModelKind kind = ModelKind::kLogisticRegression;
  int input_dim = 1;
  int hidden_dim = 16;  // used by the MLP only

  void validate() const;  // throws std::invalid_argument

  // Flat parameter count: logistic d+1; MLP d*h + h + h + 1.
  std::size_t param_count() const;
};

// Flat parameter vector plus the shape that interprets it. Layout:
//   logistic_regression: [w (input_dim), b (1)]
//   shallow_mlp:         [W1 (hidden_dim x input_dim, row-major by hidden
//                         unit), b1 (hidden_dim), w2 (hidden_dim), b2 (1)]
// Treated as an immutable value: operations return new instances.
struct ModelParams {
  std::vector<double> theta;
  ArchitectureSpec spec;

  void validate() const;  // length matches spec, all entries finite
};

struct LabeledSample {
  std::vector<double> features;
  int label = 0;  // 0 = normal, 1 = tumor
};

struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t tn = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;

  std::int64_t total() const { return tp + tn + fp + fn; }
};

// Weights uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] per layer, biases
// zero; a pure function of (spec, seed). Draw order: layer-1 weights in
// theta order, then layer-2 weights (MLP).
ModelParams init_params(const ArchitectureSpec& spec, std::uint64_t seed);

// P(label = 1 | features): sigmoid of the model logit, clamped to the open
// interval (0, 1) so downstream logs are always finite. Throws
// std::invalid_argument on dimension mismatch.
double predict_proba(const ModelParams& params,
                     const std::vector<double>& features);

// Binary cross-entropy of one sample: -y ln p - (1-y) ln(1-p).
double bce_loss(const ModelParams& params, const LabeledSample& sample);

// Gradient of bce_loss with respect to theta, same length as theta.
std::vector<double> per_sample_gradient(const ModelParams& params,
                                        const LabeledSample& sample);

// Confusion counts at decision threshold 0.5 (p >= 0.5 predicts 1).
ConfusionCounts evaluate(const ModelParams& params,
                         const std::vector<LabeledSample>& samples);

// (tp + tn) / total; throws std::invalid_argument when total is zero.
double accuracy(const ConfusionCounts& counts);

// Binary serialization for handoff/debugging. Little-endian layout:
//   bytes 0-7   magic "DPFLMOD1"
//   bytes 8-11  uint32 kind (0 = logistic_regression, 1 = shallow_mlp)
//   bytes 12-15 uint32 input_dim
//   bytes 16-19 uint32 hidden_dim (0 for logistic_regression)
//   bytes 20-27 uint64 parameter count
//   then        parameter count IEEE-754 binary64 values
void save_params(const ModelParams& params, const std::string& path);
ModelParams load_params(const std::string& path);

}  // namespace models
}  // namespace dpfl

#endif  // DPFL_MODELS_HPP_
