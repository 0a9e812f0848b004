// Copyright 2026 The Dhumbal Bench Authors
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

#ifndef DHUMBAL_NEURALNET_H_
#define DHUMBAL_NEURALNET_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dhumbal/rng.h"

namespace dhumbal {

enum class Activation : std::uint8_t { kReLU, kLinear, kSoftmax };
std::string_view to_string(Activation a);
std::optional<Activation> parse_activation(std::string_view name);

// Values kept from a forward pass for backpropagation.
struct ForwardCache {
  std::vector<std::vector<double>> inputs;  // input of each layer
  std::vector<std::vector<double>> pre;     // pre-activation of each layer
  std::vector<double> output;
};

// Fully connected network with all parameters in one flat vector. Layer l
// stores its [out x in] weights row-major, followed by its bias.
class DenseNet {
 public:
  DenseNet() = default;
  // dims has one more entry than activations. All parameters start at zero.
  // Throws ShapeError on bad dimensions or a non-final softmax.
  DenseNet(std::vector<int> dims, std::vector<Activation> activations);
  // Weights uniform in +-sqrt(6 / (fan_in + fan_out)), biases zero.
  static DenseNet glorot(std::vector<int> dims, std::vector<Activation> activations, Rng& rng);

  int num_layers() const { return static_cast<int>(activations_.size()); }
  int input_size() const { return dims_.front(); }
  int output_size() const { return dims_.back(); }
  const std::vector<int>& dims() const { return dims_; }
  const std::vector<Activation>& activations() const { return activations_; }
  std::size_t num_params() const { return params_.size(); }
  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }
  std::size_t weight_offset(int layer) const { return offsets_.at(layer); }
  std::size_t bias_offset(int layer) const {
    return offsets_.at(layer) + static_cast<std::size_t>(dims_[layer]) * dims_[layer + 1];
  }

  // `mask` (output-sized) removes entries from a final softmax: their logits
  // count as -inf and their probability is exactly 0. At least one entry
  // must stay. Throws ShapeError on size mismatches.
  std::vector<double> forward(std::span<const double> input,
                              std::span<const bool> mask = {}) const;
  std::vector<double> forward(std::span<const double> input, ForwardCache& cache,
                              std::span<const bool> mask = {}) const;

  // Adds d(loss)/d(params) to `grad` given d(loss)/d(output).
  void backward(const ForwardCache& cache, std::span<const double> grad_output,
                std::span<double> grad) const;
  // Same, starting from d(loss)/d(final pre-activation).
  void backward_from_pre(const ForwardCache& cache, std::span<const double> grad_pre,
                         std::span<double> grad) const;

  friend bool operator==(const DenseNet&, const DenseNet&) = default;

 private:
  std::vector<int> dims_;
  std::vector<Activation> activations_;
  std::vector<std::size_t> offsets_;
  std::vector<double> params_;
};

// Softmax with max subtraction. Masked-out entries get probability 0.
std::vector<double> softmax(std::span<const double> logits, std::span<const bool> mask = {});

struct AdamConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class Adam {
 public:
  Adam() = default;
  Adam(std::size_t num_params, AdamConfig config = {});

  // Bias-corrected update of `params` in place.
  void step(std::span<double> params, std::span<const double> grads);

  const AdamConfig& config() const { return config_; }
  long steps() const { return t_; }
  const std::vector<double>& first_moment() const { return m_; }
  const std::vector<double>& second_moment() const { return v_; }
  void restore(long steps, std::vector<double> m, std::vector<double> v);

 private:
  AdamConfig config_;
  long t_ = 0;
  std::vector<double> m_;
  std::vector<double> v_;
};

// Checkpoint document: format_version, layer_dims, activations, weights
// (per layer, row-major), biases, optional optimizer state.
std::string to_json(const DenseNet& net, const Adam* optimizer = nullptr);
// Throws ParseError, with the location for syntax errors.
DenseNet net_from_json(const std::string& text, Adam* optimizer = nullptr);
void save_weights(const DenseNet& net, const std::string& path, const Adam* optimizer = nullptr);
DenseNet load_weights(const std::string& path, Adam* optimizer = nullptr);

}  // namespace dhumbal

#endif  // DHUMBAL_NEURALNET_H_
