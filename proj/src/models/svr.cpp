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

#include "soilml/models/svr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <string>

namespace soilml {

namespace {

constexpr double kTau = 1e-12;

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

/// LRU cache of kernel rows K(i, .) over the training points.
class KernelCache {
 public:
  KernelCache(const Matrix& x, double gamma, std::size_t budget_bytes)
      : x_(x), gamma_(gamma), slots_(x.rows()) {
    const std::size_t row_bytes = std::max<std::size_t>(1, x.rows() * sizeof(double));
    capacity_ = std::max<std::size_t>(2, budget_bytes / row_bytes);
  }

  const std::vector<double>& row(std::size_t i) {
    auto& slot = slots_[i];
    if (slot.cached) {
      lru_.splice(lru_.end(), lru_, slot.pos);
      return slot.values;
    }
    if (lru_.size() >= capacity_) {
      auto& victim = slots_[lru_.front()];
      victim.cached = false;
      std::vector<double>().swap(victim.values);
      lru_.pop_front();
    }
    slot.values.resize(x_.rows());
    const auto xi = x_.row(i);
    for (std::size_t t = 0; t < x_.rows(); ++t) {
      slot.values[t] = std::exp(-gamma_ * sq_dist(xi, x_.row(t)));
    }
    slot.cached = true;
    slot.pos = lru_.insert(lru_.end(), i);
    return slot.values;
  }

 private:
  struct Slot {
    bool cached = false;
    std::list<std::size_t>::iterator pos;
    std::vector<double> values;
  };
  const Matrix& x_;
  double gamma_;
  std::vector<Slot> slots_;
  std::list<std::size_t> lru_;
  std::size_t capacity_ = 2;
};

}  // namespace

double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma) {
  if (x.size() != y.size()) fail(ErrorCode::DimensionMismatch, "kernel argument widths differ");
  return std::exp(-gamma * sq_dist(x, y));
}

double SvrModel::predict_one(std::span<const double> x) const {
  double f = 0.0;
  for (std::size_t i = 0; i < coef.size(); ++i) {
    f += coef[i] * std::exp(-gamma * sq_dist(support_vectors.row(i), x));
  }
  return f + bias;
}

SvrSolution svr_solve(const Matrix& x, std::span<const double> y, const SvrConfig& cfg) {
  if (x.rows() != y.size()) fail(ErrorCode::LengthMismatch, "feature rows and targets differ");
  if (!(cfg.c_penalty > 0.0) || !(cfg.gamma > 0.0) || !(cfg.epsilon_tube >= 0.0)) {
    fail(ErrorCode::BadConfig, "SVR requires C > 0, gamma > 0, epsilon >= 0");
  }
  const std::size_t l = x.rows();
  const std::size_t l2 = 2 * l;
  const double c = cfg.c_penalty;

  // Variables t < l are alpha_t (sign +1), t >= l are alpha*_{t-l} (sign -1).
  std::vector<double> alpha(l2, 0.0);
  std::vector<double> grad(l2);
  std::vector<double> p(l2);
  std::vector<signed char> sign(l2);
  for (std::size_t i = 0; i < l; ++i) {
    p[i] = cfg.epsilon_tube - y[i];
    p[i + l] = cfg.epsilon_tube + y[i];
    sign[i] = 1;
    sign[i + l] = -1;
  }
  grad = p;

  KernelCache cache(x, cfg.gamma, cfg.cache_mb * 1024 * 1024);
  auto q = [&](std::size_t a, const std::vector<double>& krow, std::size_t t) {
    return static_cast<double>(sign[a] * sign[t]) * krow[t % l];
  };

  const std::size_t max_iter = cfg.max_passes * std::max<std::size_t>(l, 100);
  SvrSolution sol;
  double gap = std::numeric_limits<double>::infinity();
  std::size_t iter = 0;

  while (true) {
    // Working set: i maximally violating, j by second-order gain.
    double gmax = -std::numeric_limits<double>::infinity();
    std::ptrdiff_t gi = -1;
    for (std::size_t t = 0; t < l2; ++t) {
      if (sign[t] == 1) {
        if (alpha[t] < c && -grad[t] >= gmax) {
          gmax = -grad[t];
          gi = static_cast<std::ptrdiff_t>(t);
        }
      } else if (alpha[t] > 0.0 && grad[t] >= gmax) {
        gmax = grad[t];
        gi = static_cast<std::ptrdiff_t>(t);
      }
    }
    double gmax2 = -std::numeric_limits<double>::infinity();
    std::ptrdiff_t gj = -1;
    if (gi >= 0) {
      const auto i = static_cast<std::size_t>(gi);
      const auto& ki = cache.row(i % l);
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < l2; ++t) {
        double grad_diff;
        double quad;
        if (sign[t] == 1) {
          if (!(alpha[t] > 0.0)) continue;
          gmax2 = std::max(gmax2, grad[t]);
          grad_diff = gmax + grad[t];
          quad = 2.0 - 2.0 * ki[t % l];
        } else {
          if (!(alpha[t] < c)) continue;
          gmax2 = std::max(gmax2, -grad[t]);
          grad_diff = gmax - grad[t];
          quad = 2.0 - 2.0 * ki[t % l];
        }
        if (grad_diff > 0.0) {
          const double obj = -(grad_diff * grad_diff) / (quad > 0.0 ? quad : kTau);
          if (obj <= best) {
            best = obj;
            gj = static_cast<std::ptrdiff_t>(t);
          }
        }
      }
    }
    gap = gmax + gmax2;
    if (gi < 0 || gj < 0 || gap < cfg.kkt_tol) {
      sol.converged = true;
      break;
    }
    if (iter >= max_iter) break;
    ++iter;

    const auto i = static_cast<std::size_t>(gi);
    const auto j = static_cast<std::size_t>(gj);
    const auto& ki = cache.row(i % l);
    const double kij = ki[j % l];
    const double old_ai = alpha[i];
    const double old_aj = alpha[j];

    if (sign[i] != sign[j]) {
      // Q_ii + Q_jj + 2 Q_ij with Q_ij = -K_ij.
      double quad = 2.0 - 2.0 * kij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else if (alpha[j] > c) {
        alpha[j] = c;
        alpha[i] = c + diff;
      }
    } else {
      double quad = 2.0 - 2.0 * kij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > c) {
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }

    const double dai = alpha[i] - old_ai;
    const double daj = alpha[j] - old_aj;
    const auto& kj = cache.row(j % l);
    const auto& ki2 = cache.row(i % l);
    for (std::size_t t = 0; t < l2; ++t) {
      grad[t] += q(i, ki2, t) * dai + q(j, kj, t) * daj;
    }
  }

  // Bias from free variables, or the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < l2; ++t) {
    const double yg = sign[t] * grad[t];
    if (alpha[t] >= c) {
      if (sign[t] == -1) {
        ub = std::min(ub, yg);
      } else {
        lb = std::max(lb, yg);
      }
    } else if (alpha[t] <= 0.0) {
      if (sign[t] == 1) {
        ub = std::min(ub, yg);
      } else {
        lb = std::max(lb, yg);
      }
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : 0.5 * (ub + lb);

  double obj = 0.0;
  for (std::size_t t = 0; t < l2; ++t) obj += alpha[t] * (grad[t] + p[t]);
  sol.objective = 0.5 * obj;

  sol.alpha.assign(alpha.begin(), alpha.begin() + static_cast<std::ptrdiff_t>(l));
  sol.alpha_star.assign(alpha.begin() + static_cast<std::ptrdiff_t>(l), alpha.end());
  // At the optimum at most one of each pair is non-zero; remove any residual
  // overlap without changing the coefficient difference.
  for (std::size_t i = 0; i < l; ++i) {
    const double common = std::min(sol.alpha[i], sol.alpha_star[i]);
    if (common > 0.0) {
      sol.alpha[i] -= common;
      sol.alpha_star[i] -= common;
      sol.objective -= 2.0 * cfg.epsilon_tube * common;
    }
  }
  sol.max_violation = std::max(0.0, gap);
  sol.iterations = iter;

  std::vector<std::size_t> sv;
  for (std::size_t i = 0; i < l; ++i) {
    if (sol.alpha[i] - sol.alpha_star[i] != 0.0) sv.push_back(i);
  }
  sol.model.support_vectors = x.select_rows(sv);
  sol.model.coef.reserve(sv.size());
  for (auto i : sv) sol.model.coef.push_back(sol.alpha[i] - sol.alpha_star[i]);
  sol.model.bias = -rho;
  sol.model.gamma = cfg.gamma;
  return sol;
}

SvrNotConverged::SvrNotConverged(SvrSolution best)
    : Error(ErrorCode::NotConverged,
            "SVR solver stopped after " + std::to_string(best.iterations) +
                " iterations with KKT violation " + std::to_string(best.max_violation)),
      best_(std::move(best)) {}

SvrSolution svr_fit(const Matrix& x, std::span<const double> y, const SvrConfig& cfg,
                    bool allow_partial) {
  if (x.rows() < 2) fail(ErrorCode::TooFewRows, "SVR needs at least 2 rows");
  auto sol = svr_solve(x, y, cfg);
  if (!sol.converged && !allow_partial) throw SvrNotConverged(std::move(sol));
  return sol;
}

std::vector<double> svr_predict(const SvrModel& m, const Matrix& x) {
  if (x.rows() > 0 && m.support_vectors.rows() > 0 && x.cols() != m.support_vectors.cols()) {
    fail(ErrorCode::DimensionMismatch, "prediction width differs from training width");
  }
  std::vector<double> out(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) out[r] = m.predict_one(x.row(r));
  return out;
}

}  // namespace soilml
