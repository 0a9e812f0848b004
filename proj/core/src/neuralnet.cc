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

#include "dhumbal/neuralnet.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "dhumbal/errors.h"
#include "json.hpp"

namespace dhumbal {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::kReLU: return "relu";
    case Activation::kLinear: return "linear";
    case Activation::kSoftmax: return "softmax";
  }
  return "?";
}

std::optional<Activation> parse_activation(std::string_view name) {
  for (auto a : {Activation::kReLU, Activation::kLinear, Activation::kSoftmax}) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

DenseNet::DenseNet(std::vector<int> dims, std::vector<Activation> activations)
    : dims_(std::move(dims)), activations_(std::move(activations)) {
  if (dims_.size() < 2 || dims_.size() != activations_.size() + 1) {
    throw ShapeError("need one activation per layer and at least one layer");
  }
  for (int d : dims_) {
    if (d < 1) throw ShapeError("layer sizes must be positive");
  }
  for (std::size_t l = 0; l + 1 < activations_.size(); ++l) {
    if (activations_[l] == Activation::kSoftmax) throw ShapeError("softmax only on the last layer");
  }
  std::size_t total = 0;
  for (int l = 0; l < num_layers(); ++l) {
    offsets_.push_back(total);
    total += static_cast<std::size_t>(dims_[l] + 1) * dims_[l + 1];
  }
  params_.assign(total, 0.0);
}

DenseNet DenseNet::glorot(std::vector<int> dims, std::vector<Activation> activations, Rng& rng) {
  DenseNet net(std::move(dims), std::move(activations));
  for (int l = 0; l < net.num_layers(); ++l) {
    const int in = net.dims_[l];
    const int out = net.dims_[l + 1];
    const double limit = std::sqrt(6.0 / (in + out));
    double* w = net.params_.data() + net.weight_offset(l);
    for (int i = 0; i < in * out; ++i) w[i] = rng.uniform(-limit, limit);
  }
  return net;
}

std::vector<double> softmax(std::span<const double> logits, std::span<const bool> mask) {
  if (!mask.empty() && mask.size() != logits.size()) throw ShapeError("mask size mismatch");
  auto on = [&](std::size_t i) { return mask.empty() || mask[i]; };
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (on(i)) mx = std::max(mx, logits[i]);
  }
  if (std::isinf(mx)) throw ShapeError("softmax mask removes every entry");
  std::vector<double> p(logits.size(), 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (on(i)) {
      p[i] = std::exp(logits[i] - mx);
      sum += p[i];
    }
  }
  for (double& x : p) x /= sum;
  return p;
}

std::vector<double> DenseNet::forward(std::span<const double> input,
                                      std::span<const bool> mask) const {
  ForwardCache cache;
  return forward(input, cache, mask);
}

std::vector<double> DenseNet::forward(std::span<const double> input, ForwardCache& cache,
                                      std::span<const bool> mask) const {
  if (dims_.empty()) throw ShapeError("network has no layers");
  if (static_cast<int>(input.size()) != input_size()) {
    throw ShapeError("input has " + std::to_string(input.size()) + " entries, expected " +
                     std::to_string(input_size()));
  }
  if (!mask.empty() && static_cast<int>(mask.size()) != output_size()) {
    throw ShapeError("output mask size mismatch");
  }
  cache.inputs.resize(num_layers());
  cache.pre.resize(num_layers());
  std::vector<double> x(input.begin(), input.end());
  for (int l = 0; l < num_layers(); ++l) {
    const int in = dims_[l];
    const int out = dims_[l + 1];
    const double* w = params_.data() + weight_offset(l);
    const double* b = params_.data() + bias_offset(l);
    std::vector<double> z(out);
    for (int o = 0; o < out; ++o) {
      const double* row = w + static_cast<std::size_t>(o) * in;
      // Four partial sums let the compiler keep several multiplies in flight.
      double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
      int i = 0;
      for (; i + 4 <= in; i += 4) {
        s0 += row[i] * x[i];
        s1 += row[i + 1] * x[i + 1];
        s2 += row[i + 2] * x[i + 2];
        s3 += row[i + 3] * x[i + 3];
      }
      for (; i < in; ++i) s0 += row[i] * x[i];
      z[o] = b[o] + ((s0 + s1) + (s2 + s3));
    }
    cache.inputs[l] = std::move(x);
    std::vector<double> a;
    switch (activations_[l]) {
      case Activation::kReLU:
        a = z;
        for (double& v : a) v = std::max(v, 0.0);
        break;
      case Activation::kLinear: a = z; break;
      case Activation::kSoftmax: a = softmax(z, mask); break;
    }
    cache.pre[l] = std::move(z);
    x = std::move(a);
  }
  cache.output = x;
  return x;
}

void DenseNet::backward(const ForwardCache& cache, std::span<const double> grad_output,
                        std::span<double> grad) const {
  if (static_cast<int>(grad_output.size()) != output_size()) {
    throw ShapeError("output gradient size mismatch");
  }
  const int last = num_layers() - 1;
  std::vector<double> g(grad_output.begin(), grad_output.end());
  switch (activations_[last]) {
    case Activation::kReLU:
      for (std::size_t o = 0; o < g.size(); ++o) {
        if (cache.pre[last][o] <= 0) g[o] = 0;
      }
      break;
    case Activation::kLinear: break;
    case Activation::kSoftmax: {
      const auto& p = cache.output;
      double dot = 0;
      for (std::size_t o = 0; o < g.size(); ++o) dot += p[o] * g[o];
      for (std::size_t o = 0; o < g.size(); ++o) g[o] = p[o] * (g[o] - dot);
      break;
    }
  }
  backward_from_pre(cache, g, grad);
}

void DenseNet::backward_from_pre(const ForwardCache& cache, std::span<const double> grad_pre,
                                 std::span<double> grad) const {
  if (grad.size() != params_.size()) throw ShapeError("gradient buffer size mismatch");
  if (static_cast<int>(grad_pre.size()) != output_size() ||
      static_cast<int>(cache.pre.size()) != num_layers()) {
    throw ShapeError("cache does not belong to this network");
  }
  std::vector<double> g(grad_pre.begin(), grad_pre.end());
  for (int l = num_layers() - 1; l >= 0; --l) {
    const int in = dims_[l];
    const int out = dims_[l + 1];
    const double* w = params_.data() + weight_offset(l);
    double* gw = grad.data() + weight_offset(l);
    double* gb = grad.data() + bias_offset(l);
    const auto& x = cache.inputs[l];
    std::vector<double> gx(l > 0 ? in : 0, 0.0);
    for (int o = 0; o < out; ++o) {
      const double go = g[o];
      if (go == 0.0) continue;
      gb[o] += go;
      double* grow = gw + static_cast<std::size_t>(o) * in;
      const double* row = w + static_cast<std::size_t>(o) * in;
      for (int i = 0; i < in; ++i) grow[i] += go * x[i];
      if (l > 0) {
        for (int i = 0; i < in; ++i) gx[i] += go * row[i];
      }
    }
    if (l == 0) break;
    // Hidden layers are never softmax.
    if (activations_[l - 1] == Activation::kReLU) {
      for (int i = 0; i < in; ++i) {
        if (cache.pre[l - 1][i] <= 0) gx[i] = 0;
      }
    }
    g = std::move(gx);
  }
}

Adam::Adam(std::size_t num_params, AdamConfig config)
    : config_(config), m_(num_params, 0.0), v_(num_params, 0.0) {}

void Adam::step(std::span<double> params, std::span<const double> grads) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw ShapeError("optimizer state does not match the parameters");
  }
  ++t_;
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = config_.beta1 * m_[i] + (1 - config_.beta1) * grads[i];
    v_[i] = config_.beta2 * v_[i] + (1 - config_.beta2) * grads[i] * grads[i];
    const double mh = m_[i] / c1;
    const double vh = v_[i] / c2;
    params[i] -= config_.learning_rate * mh / (std::sqrt(vh) + config_.epsilon);
  }
}

void Adam::restore(long steps, std::vector<double> m, std::vector<double> v) {
  if (m.size() != m_.size() || v.size() != v_.size()) throw ShapeError("optimizer state size mismatch");
  t_ = steps;
  m_ = std::move(m);
  v_ = std::move(v);
}

namespace {

constexpr int kFormatVersion = 1;

}  // namespace

std::string to_json(const DenseNet& net, const Adam* optimizer) {
  nlohmann::json j;
  j["format_version"] = kFormatVersion;
  j["layer_dims"] = net.dims();
  std::vector<std::string> acts;
  for (auto a : net.activations()) acts.emplace_back(to_string(a));
  j["activations"] = acts;
  j["weights"] = nlohmann::json::array();
  j["biases"] = nlohmann::json::array();
  const auto p = net.params();
  for (int l = 0; l < net.num_layers(); ++l) {
    const auto w0 = p.begin() + static_cast<std::ptrdiff_t>(net.weight_offset(l));
    const auto b0 = p.begin() + static_cast<std::ptrdiff_t>(net.bias_offset(l));
    j["weights"].push_back(std::vector<double>(w0, b0));
    j["biases"].push_back(std::vector<double>(b0, b0 + net.dims()[l + 1]));
  }
  if (optimizer) {
    j["optimizer"] = {{"kind", "adam"},
                      {"learning_rate", optimizer->config().learning_rate},
                      {"beta1", optimizer->config().beta1},
                      {"beta2", optimizer->config().beta2},
                      {"epsilon", optimizer->config().epsilon},
                      {"step", optimizer->steps()},
                      {"m", optimizer->first_moment()},
                      {"v", optimizer->second_moment()}};
  }
  return j.dump();
}

DenseNet net_from_json(const std::string& text, Adam* optimizer) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("checkpoint is not valid JSON at byte " + std::to_string(e.byte) + ": " +
                     e.what());
  }
  try {
    if (j.at("format_version").get<int>() != kFormatVersion) {
      throw ParseError("unsupported checkpoint format_version");
    }
    std::vector<Activation> acts;
    for (const auto& a : j.at("activations")) {
      const auto parsed = parse_activation(a.get<std::string>());
      if (!parsed) throw ParseError("unknown activation '" + a.get<std::string>() + "'");
      acts.push_back(*parsed);
    }
    DenseNet net(j.at("layer_dims").get<std::vector<int>>(), acts);
    const auto& ws = j.at("weights");
    const auto& bs = j.at("biases");
    if (static_cast<int>(ws.size()) != net.num_layers() ||
        static_cast<int>(bs.size()) != net.num_layers()) {
      throw ParseError("checkpoint has the wrong number of weight or bias arrays");
    }
    auto p = net.params();
    for (int l = 0; l < net.num_layers(); ++l) {
      const auto w = ws[l].get<std::vector<double>>();
      const auto b = bs[l].get<std::vector<double>>();
      const std::size_t wn = net.bias_offset(l) - net.weight_offset(l);
      if (w.size() != wn || static_cast<int>(b.size()) != net.dims()[l + 1]) {
        throw ParseError("layer " + std::to_string(l) + " has arrays of the wrong size");
      }
      std::copy(w.begin(), w.end(), p.begin() + static_cast<std::ptrdiff_t>(net.weight_offset(l)));
      std::copy(b.begin(), b.end(), p.begin() + static_cast<std::ptrdiff_t>(net.bias_offset(l)));
    }
    for (double x : p) {
      if (!std::isfinite(x)) throw ParseError("checkpoint holds a non-finite parameter");
    }
    if (optimizer) {
      if (j.contains("optimizer")) {
        const auto& o = j.at("optimizer");
        AdamConfig cfg{o.at("learning_rate").get<double>(), o.at("beta1").get<double>(),
                       o.at("beta2").get<double>(), o.at("epsilon").get<double>()};
        *optimizer = Adam(net.num_params(), cfg);
        optimizer->restore(o.at("step").get<long>(), o.at("m").get<std::vector<double>>(),
                           o.at("v").get<std::vector<double>>());
      } else {
        *optimizer = Adam(net.num_params(), optimizer->config());
      }
    }
    return net;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed checkpoint: ") + e.what());
  } catch (const ShapeError& e) {
    throw ParseError(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_weights(const DenseNet& net, const std::string& path, const Adam* optimizer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write checkpoint " + path);
  out << to_json(net, optimizer) << '\n';
  if (!out) throw ConfigError("failed writing checkpoint " + path);
}

DenseNet load_weights(const std::string& path, Adam* optimizer) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open checkpoint " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return net_from_json(ss.str(), optimizer);
}

}  // namespace dhumbal
