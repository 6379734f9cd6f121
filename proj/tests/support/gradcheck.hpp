/*
 * Copyright (c) 2026, The soilml Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Finite-difference check of the MLP gradient. The loss is rebuilt from the
// train-mode forward pass, so backpropagation is never consulted.
#pragma once

#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "soilml/models/mlp.hpp"

namespace gradcheck {

inline double loss(const soilml::MlpModel& m, const soilml::Matrix& x,
                   const std::vector<double>& y) {
  const auto p = soilml::mlp_forward(m, x, soilml::MlpMode::Train);
  double se = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) se += (p[i] - y[i]) * (p[i] - y[i]);
  double l2 = 0.0;
  const auto& lay = m.layout;
  for (const auto& h : lay.hidden) {
    for (std::size_t i = 0; i < lay.width * h.fan_in; ++i) l2 += m.params[h.weight + i] * m.params[h.weight + i];
  }
  for (std::size_t i = 0; i < lay.width; ++i) l2 += m.params[lay.out_weight + i] * m.params[lay.out_weight + i];
  return se / static_cast<double>(y.size()) + m.config.l2_lambda * l2;
}

struct Result {
  std::size_t checked = 0;
  std::size_t failed = 0;
  double worst_abs = 0.0;
  std::string first_failure;
};

// Width-4, 2-hidden-layer network with random (not freshly initialised)
// batch-norm scale/shift so those gradients are exercised away from 1/0.
inline Result run(std::uint64_t seed, double rel_tol = 1e-4, double abs_tol = 1e-7) {
  std::mt19937_64 g(seed);
  soilml::MlpConfig cfg;
  cfg.hidden_layers = 2;
  cfg.hidden_width = 4;
  cfg.l2_lambda = 1e-3;
  auto m = soilml::mlp_init(cfg, 3, seed);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (const auto& h : m.layout.hidden) {
    for (std::size_t i = 0; i < cfg.hidden_width; ++i) {
      m.params[h.gamma + i] = 1.0 + u(g);
      m.params[h.beta + i] = u(g);
      m.params[h.bias + i] = u(g);
    }
  }
  m.params[m.layout.out_bias] = u(g);
  const auto x = fixture::random_matrix(g, 10, 3);
  const auto y = fixture::random_vector(g, 10);

  const auto analytic = soilml::mlp_grad(m, x, y);
  Result r;
  const double h = 1e-5;
  for (std::size_t i = 0; i < m.params.size(); ++i) {
    auto plus = m, minus = m;
    plus.params[i] += h;
    minus.params[i] -= h;
    const double fd = (loss(plus, x, y) - loss(minus, x, y)) / (2 * h);
    const double an = analytic.grad[i];
    const double err = std::abs(fd - an);
    ++r.checked;
    r.worst_abs = std::max(r.worst_abs, err);
    if (err > abs_tol && err > rel_tol * std::max(std::abs(fd), std::abs(an))) {
      if (r.failed++ == 0) {
        r.first_failure = "param " + std::to_string(i) + " fd=" + std::to_string(fd) +
                          " analytic=" + std::to_string(an);
      }
    }
  }
  return r;
}

}  // namespace gradcheck
