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

#include "dpfl/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dpfl/rng.hpp"

namespace dpfl {
namespace models {
namespace {

constexpr char kMagic[8] = {'D', 'P', 'F', 'L', 'M', 'O', 'D', '1'};

// Stream tag for parameter initialization draws.
constexpr std::uint64_t kInitStreamTag = 0x6d6f64656c2d696eULL;

// Largest double strictly below 1.
const double kProbHi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
const double kProbLo = std::numeric_limits<double>::min();

double stable_sigmoid(double t) {
  double p;
  if (t >= 0.0) {
    p = 1.0 / (1.0 + std::exp(-t));
  } else {
    const double e = std::exp(t);
    p = e / (1.0 + e);
  }
  return std::clamp(p, kProbLo, kProbHi);
}

void check_dims(const ModelParams& params, const std::vector<double>& x) {
  if (x.size() != static_cast<std::size_t>(params.spec.input_dim)) {
    std::ostringstream msg;
    msg << "feature vector has length " << x.size() << " but the model expects "
        << params.spec.input_dim;
    throw std::invalid_argument(msg.str());
  }
}

// Model logit; for the MLP also exposes the hidden pre-activations needed by
// the backward pass.
double forward_logit(const ModelParams& params, const std::vector<double>& x,
                     std::vector<double>* hidden_pre) {
  const ArchitectureSpec& spec = params.spec;
  const std::vector<double>& th = params.theta;
  const std::size_t d = static_cast<std::size_t>(spec.input_dim);
  if (spec.kind == ModelKind::kLogisticRegression) {
    double t = th[d];  // bias
    for (std::size_t i = 0; i < d; ++i) t += th[i] * x[i];
    return t;
  }
  const std::size_t h = static_cast<std::size_t>(spec.hidden_dim);
  const std::size_t w2_off = h * d + h;
  const std::size_t b2_off = w2_off + h;
  if (hidden_pre != nullptr) hidden_pre->resize(h);
  double t = th[b2_off];
  for (std::size_t j = 0; j < h; ++j) {
    double z = th[h * d + j];  // b1[j]
    const double* row = th.data() + j * d;
    for (std::size_t i = 0; i < d; ++i) z += row[i] * x[i];
    if (hidden_pre != nullptr) (*hidden_pre)[j] = z;
    t += th[w2_off + j] * std::max(0.0, z);
  }
  return t;
}

template <typename T>
void write_le(std::ofstream& out, T value) {
  // The toolchains this builds on are little-endian; memcpy preserves that.
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.write(buf, sizeof(T));
}

template <typename T>
T read_le(std::ifstream& in) {
  char buf[sizeof(T)];
  in.read(buf, sizeof(T));
  T value;
  std::memcpy(&value, buf, sizeof(T));
  return value;
}

}  // namespace

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "logistic_regression") return ModelKind::kLogisticRegression;
  if (name == "shallow_mlp") return ModelKind::kShallowMlp;
  throw std::invalid_argument("unknown model kind: " + name);
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLogisticRegression:
      return "logistic_regression";
    case ModelKind::kShallowMlp:
      return "shallow_mlp";
  }
  throw std::invalid_argument("unknown model kind enum value");
}

void ArchitectureSpec::validate() const {
  if (kind != ModelKind::kLogisticRegression && kind != ModelKind::kShallowMlp) {
    throw std::invalid_argument("unknown model kind enum value");
  }
  if (input_dim < 1) {
    throw std::invalid_argument("input_dim must be >= 1");
  }
  if (kind == ModelKind::kShallowMlp && hidden_dim < 1) {
    throw std::invalid_argument("hidden_dim must be >= 1 for the MLP");
  }
}

std::size_t ArchitectureSpec::param_count() const {
  const std::size_t d = static_cast<std::size_t>(input_dim);
  if (kind == ModelKind::kLogisticRegression) return d + 1;
  const std::size_t h = static_cast<std::size_t>(hidden_dim);
  return h * d + h + h + 1;
}

void ModelParams::validate() const {
  spec.validate();
  if (theta.size() != spec.param_count()) {
    throw std::invalid_argument("theta length does not match the architecture");
  }
  for (double v : theta) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("theta contains a non-finite entry");
    }
  }
}

ModelParams init_params(const ArchitectureSpec& spec, std::uint64_t seed) {
  spec.validate();
  RngStream rng(seed, RngStream::derive_stream({kInitStreamTag}));
  ModelParams params;
  params.spec = spec;
  params.theta.assign(spec.param_count(), 0.0);
  const std::size_t d = static_cast<std::size_t>(spec.input_dim);
  const auto draw = [&rng](double bound) {
    return bound * (2.0 * rng.uniform() - 1.0);
  };
  if (spec.kind == ModelKind::kLogisticRegression) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t i = 0; i < d; ++i) params.theta[i] = draw(bound);
    // bias stays 0
    return params;
  }
  const std::size_t h = static_cast<std::size_t>(spec.hidden_dim);
  const double bound1 = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t i = 0; i < h * d; ++i) params.theta[i] = draw(bound1);
  // b1 stays 0
  const double bound2 = 1.0 / std::sqrt(static_cast<double>(h));
  const std::size_t w2_off = h * d + h;
  for (std::size_t j = 0; j < h; ++j) params.theta[w2_off + j] = draw(bound2);
  // b2 stays 0
  return params;
}

double predict_proba(const ModelParams& params,
                     const std::vector<double>& features) {
  check_dims(params, features);
  return stable_sigmoid(forward_logit(params, features, nullptr));
}

double bce_loss(const ModelParams& params, const LabeledSample& sample) {
  const double p = predict_proba(params, sample.features);
  return sample.label == 1 ? -std::log(p) : -std::log1p(-p);
}

std::vector<double> per_sample_gradient(const ModelParams& params,
                                        const LabeledSample& sample) {
  check_dims(params, sample.features);
  const ArchitectureSpec& spec = params.spec;
  const std::vector<double>& x = sample.features;
  const std::size_t d = static_cast<std::size_t>(spec.input_dim);
  std::vector<double> grad(params.theta.size(), 0.0);

  if (spec.kind == ModelKind::kLogisticRegression) {
    const double p = stable_sigmoid(forward_logit(params, x, nullptr));
    const double dt = p - static_cast<double>(sample.label);
    for (std::size_t i = 0; i < d; ++i) grad[i] = dt * x[i];
    grad[d] = dt;
    return grad;
  }

  std::vector<double> z1;
  const double t = forward_logit(params, x, &z1);
  const double p = stable_sigmoid(t);
  const double dt = p - static_cast<double>(sample.label);
  const std::size_t h = static_cast<std::size_t>(spec.hidden_dim);
  const std::size_t w2_off = h * d + h;
  for (std::size_t j = 0; j < h; ++j) {
    grad[w2_off + j] = dt * std::max(0.0, z1[j]);  // dL/dw2
    if (z1[j] > 0.0) {
      const double dz = dt * params.theta[w2_off + j];
      for (std::size_t i = 0; i < d; ++i) grad[j * d + i] = dz * x[i];
      grad[h * d + j] = dz;  // dL/db1
    }
  }
  grad[w2_off + h] = dt;  // dL/db2
  return grad;
}

ConfusionCounts evaluate(const ModelParams& params,
                         const std::vector<LabeledSample>& samples) {
  ConfusionCounts counts;
  for (const LabeledSample& s : samples) {
    const int predicted = predict_proba(params, s.features) >= 0.5 ? 1 : 0;
    if (s.label == 1) {
      (predicted == 1 ? counts.tp : counts.fn) += 1;
    } else {
      (predicted == 0 ? counts.tn : counts.fp) += 1;
    }
  }
  return counts;
}

double accuracy(const ConfusionCounts& counts) {
  const std::int64_t total = counts.total();
  if (total <= 0) {
    throw std::invalid_argument("accuracy of an empty evaluation set");
  }
  return static_cast<double>(counts.tp + counts.tn) /
         static_cast<double>(total);
}

void save_params(const ModelParams& params, const std::string& path) {
  params.validate();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  out.write(kMagic, sizeof(kMagic));
  write_le<std::uint32_t>(out,
                          params.spec.kind == ModelKind::kShallowMlp ? 1 : 0);
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(params.spec.input_dim));
  write_le<std::uint32_t>(
      out, params.spec.kind == ModelKind::kShallowMlp
               ? static_cast<std::uint32_t>(params.spec.hidden_dim)
               : 0u);
  write_le<std::uint64_t>(out, params.theta.size());
  for (double v : params.theta) write_le<double>(out, v);
  if (!out) {
    throw std::runtime_error("short write: " + path);
  }
}

ModelParams load_params(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open for reading: " + path);
  }
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("not a model parameter file: " + path);
  }
  const std::uint32_t kind = read_le<std::uint32_t>(in);
  const std::uint32_t input_dim = read_le<std::uint32_t>(in);
  const std::uint32_t hidden_dim = read_le<std::uint32_t>(in);
  const std::uint64_t count = read_le<std::uint64_t>(in);
  if (!in || kind > 1) {
    throw std::runtime_error("corrupt model parameter header: " + path);
  }
  ModelParams params;
  params.spec.kind =
      kind == 1 ? ModelKind::kShallowMlp : ModelKind::kLogisticRegression;
  params.spec.input_dim = static_cast<int>(input_dim);
  params.spec.hidden_dim =
      kind == 1 ? static_cast<int>(hidden_dim) : params.spec.hidden_dim;
  params.theta.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    params.theta[i] = read_le<double>(in);
  }
  if (!in) {
    throw std::runtime_error("truncated model parameter file: " + path);
  }
  params.validate();
  return params;
}

}  // namespace models
}  // namespace dpfl
