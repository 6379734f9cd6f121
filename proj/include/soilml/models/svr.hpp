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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "soilml/error.hpp"
#include "soilml/matrix.hpp"

namespace soilml {

struct SvrConfig {
  double c_penalty = 1.0;
  double epsilon_tube = 0.01;  // in target (VWC) units
  double gamma = 0.5;          // 1 / (2 sigma^2)
  std::size_t max_passes = 100;
  double kkt_tol = 1e-3;
  std::size_t cache_mb = 256;  // kernel row cache budget

  bool operator==(const SvrConfig&) const = default;
};

/// exp(-gamma * ||x - y||^2). Throws DimensionMismatch.
double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma);

/// Kernel expansion f(x) = sum_i coef_i K(sv_i, x) + bias.
struct SvrModel {
  Matrix support_vectors;
  std::vector<double> coef;  // alpha_i - alpha*_i for each support vector
  double bias = 0.0;
  double gamma = 0.5;

  double predict_one(std::span<const double> x) const;
  bool operator==(const SvrModel&) const = default;
};

/// Full solver output: duals for every training point plus diagnostics.
struct SvrSolution {
  SvrModel model;
  std::vector<double> alpha;       // upper-tube duals
  std::vector<double> alpha_star;  // lower-tube duals
  double objective = 0.0;          // dual objective in minimisation form
  double max_violation = 0.0;      // final m(alpha) - M(alpha) gap
  std::size_t iterations = 0;
  bool converged = false;
};

/// Epsilon-SVR dual solved by SMO with second-order working-set selection.
///
/// Minimises 1/2 (a - a*)' K (a - a*) + eps * sum(a + a*) - y'(a - a*)
/// subject to 0 <= a, a* <= C and sum(a - a*) = 0. Stops when the maximal
/// KKT violation drops below kkt_tol or after max_passes * n pair updates.
/// Never throws on non-convergence; inspect `converged`.
SvrSolution svr_solve(const Matrix& x, std::span<const double> y, const SvrConfig& cfg);

/// Raised by svr_fit when the solver hits its iteration cap.
class SvrNotConverged : public Error {
 public:
  explicit SvrNotConverged(SvrSolution best);
  const SvrSolution& best() const noexcept { return best_; }
  double violation() const noexcept { return best_.max_violation; }

 private:
  SvrSolution best_;
};

/// svr_solve that throws SvrNotConverged (carrying the best-so-far model)
/// unless `allow_partial` is set. Throws TooFewRows for fewer than 2 rows.
SvrSolution svr_fit(const Matrix& x, std::span<const double> y, const SvrConfig& cfg,
                    bool allow_partial = false);

std::vector<double> svr_predict(const SvrModel& m, const Matrix& x);

}  // namespace soilml
