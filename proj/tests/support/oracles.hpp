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

// Independent reference implementations used by the unit and acceptance
// tests. Nothing here calls into the library's numerical code.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/float128.hpp>

namespace oracle {

// IEEE binary128: 113-bit significand, about 34 decimal digits.
using Big = boost::multiprecision::float128;

struct Metrics {
  double rmse = 0.0;
  double mae = 0.0;
  std::optional<double> r;
};

// Two-pass statistics in quad precision.
inline Metrics metrics(std::span<const double> a, std::span<const double> p) {
  const auto n = static_cast<long>(a.size());
  Big se = 0, ae = 0, ma = 0, mp = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Big d = Big(a[i]) - Big(p[i]);
    se += d * d;
    ae += abs(d);
    ma += Big(a[i]);
    mp += Big(p[i]);
  }
  ma /= n;
  mp /= n;
  Big sab = 0, saa = 0, spp = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Big da = Big(a[i]) - ma;
    const Big dp = Big(p[i]) - mp;
    sab += da * dp;
    saa += da * da;
    spp += dp * dp;
  }
  Metrics m;
  m.rmse = static_cast<double>(sqrt(se / n));
  m.mae = static_cast<double>(ae / n);
  if (saa > 0 && spp > 0) m.r = static_cast<double>(sab / sqrt(saa * spp));
  return m;
}

inline double topp(double eps) {
  return -5.3e-2 + 2.92e-2 * eps - 5.5e-4 * eps * eps + 4.3e-6 * eps * eps * eps;
}

inline double rbf(std::span<const double> a, std::span<const double> b, double gamma) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return std::exp(-gamma * d);
}

// Dense Gaussian elimination with partial pivoting. Returns false when singular.
inline bool solve(std::vector<std::vector<double>> a, std::vector<double> b,
                  std::vector<double>& x) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    if (std::abs(a[piv][c]) < 1e-14) return false;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  x.assign(n, 0.0);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= a[r][k] * x[k];
    x[r] = s / a[r][r];
  }
  return true;
}

struct SvrOptimum {
  std::vector<double> beta;  // alpha - alpha*
  double objective = std::numeric_limits<double>::infinity();
  double bias = 0.0;
};

// Epsilon-SVR dual by exhaustive active-set enumeration. Each beta_i is at
// -C, free negative, 0, free positive or +C; every pattern's equality
// constrained stationary point is solved directly and the best feasible one
// kept. Exact for strictly convex instances; only usable for a handful of points.
inline SvrOptimum svr_brute_force(const std::vector<std::vector<double>>& x,
                                  const std::vector<double>& y, double c, double eps,
                                  double gamma) {
  const std::size_t n = y.size();
  std::vector<std::vector<double>> k(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) k[i][j] = rbf(x[i], x[j], gamma);
  }
  auto objective = [&](const std::vector<double>& b) {
    double q = 0.0, lin = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) q += b[i] * k[i][j] * b[j];
      lin += eps * std::abs(b[i]) - y[i] * b[i];
    }
    return 0.5 * q + lin;
  };

  SvrOptimum best;
  std::size_t patterns = 1;
  for (std::size_t i = 0; i < n; ++i) patterns *= 5;
  std::vector<int> state(n);
  std::vector<double> beta(n), sol;
  for (std::size_t code = 0; code < patterns; ++code) {
    std::size_t rest = code;
    std::vector<std::size_t> free;
    double fixed_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      state[i] = static_cast<int>(rest % 5) - 2;  // -2,-1,0,1,2
      rest /= 5;
      beta[i] = state[i] == -2 ? -c : state[i] == 2 ? c : 0.0;
      if (state[i] == -1 || state[i] == 1) free.push_back(i);
      fixed_sum += beta[i];
    }
    if (free.empty()) {
      if (std::abs(fixed_sum) > 1e-12) continue;
    } else {
      // Stationarity on the free set plus the equality constraint.
      const std::size_t m = free.size();
      std::vector<std::vector<double>> a(m + 1, std::vector<double>(m + 1, 0.0));
      std::vector<double> rhs(m + 1, 0.0);
      for (std::size_t r = 0; r < m; ++r) {
        const std::size_t i = free[r];
        for (std::size_t s = 0; s < m; ++s) a[r][s] = k[i][free[s]];
        a[r][m] = 1.0;
        double kb = 0.0;
        for (std::size_t j = 0; j < n; ++j) kb += k[i][j] * beta[j];
        rhs[r] = y[i] - kb - eps * state[i];
        a[m][r] = 1.0;
      }
      rhs[m] = -fixed_sum;
      if (!solve(a, rhs, sol)) continue;
      bool ok = true;
      for (std::size_t r = 0; r < m && ok; ++r) {
        const double v = sol[r];
        ok = state[free[r]] > 0 ? (v >= 0.0 && v <= c) : (v <= 0.0 && v >= -c);
        beta[free[r]] = v;
      }
      if (!ok) continue;
    }
    const double obj = objective(beta);
    if (obj < best.objective) {
      best.objective = obj;
      best.beta = beta;
    }
  }

  // Bias: average over free variables, else midpoint of the KKT interval.
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  std::size_t n_free = 0;
  const double tiny = 1e-9 * c;
  for (std::size_t i = 0; i < n; ++i) {
    double kb = 0.0;
    for (std::size_t j = 0; j < n; ++j) kb += k[i][j] * best.beta[j];
    const double up = y[i] - eps - kb;  // b at which the upper tube touches point i
    const double dn = y[i] + eps - kb;
    const double b = best.beta[i];
    if (b > tiny && b < c - tiny) {
      free_sum += up;
      ++n_free;
    } else if (b < -tiny && b > -c + tiny) {
      free_sum += dn;
      ++n_free;
    } else if (b >= c - tiny) {
      hi = std::min(hi, up);
    } else if (b <= -c + tiny) {
      lo = std::max(lo, dn);
    } else {
      lo = std::max(lo, up);
      hi = std::min(hi, dn);
    }
  }
  best.bias = n_free > 0 ? free_sum / static_cast<double>(n_free) : 0.5 * (lo + hi);
  return best;
}

inline double svr_predict(const std::vector<std::vector<double>>& x, const SvrOptimum& o,
                          std::span<const double> q, double gamma) {
  double f = o.bias;
  for (std::size_t i = 0; i < x.size(); ++i) f += o.beta[i] * rbf(x[i], q, gamma);
  return f;
}

struct OracleNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
  std::size_t n = 0;
  std::size_t depth = 0;
};

// Best-first regression tree whose splits come from exhaustive enumeration of
// every (feature, threshold) pair with SSE recomputed from scratch per side.
inline std::vector<OracleNode> tree_brute_force(const std::vector<std::vector<double>>& x,
                                                const std::vector<double>& y,
                                                std::size_t max_depth, std::size_t max_leaves,
                                                std::size_t min_leaf) {
  struct Cand {
    bool ok = false;
    int f = -1;
    double thr = 0.0;
    double gain = 0.0;
  };
  auto sse = [&](const std::vector<std::size_t>& rows) {
    if (rows.empty()) return 0.0;
    double m = 0.0;
    for (auto r : rows) m += y[r];
    m /= static_cast<double>(rows.size());
    double s = 0.0;
    for (auto r : rows) s += (y[r] - m) * (y[r] - m);
    return s;
  };
  const std::size_t d = x.empty() ? 0 : x[0].size();
  auto best_split = [&](const std::vector<std::size_t>& rows, std::size_t depth) {
    Cand best;
    if (depth >= max_depth) return best;
    const double parent = sse(rows);
    for (std::size_t f = 0; f < d; ++f) {
      std::vector<double> vals;
      for (auto r : rows) vals.push_back(x[r][f]);
      std::sort(vals.begin(), vals.end());
      vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
      for (std::size_t t = 0; t + 1 < vals.size(); ++t) {
        double thr = 0.5 * (vals[t] + vals[t + 1]);
        if (!(thr < vals[t + 1])) thr = vals[t];
        std::vector<std::size_t> l, r;
        for (auto row : rows) (x[row][f] <= thr ? l : r).push_back(row);
        if (l.size() < min_leaf || r.size() < min_leaf) continue;
        const double gain = parent - sse(l) - sse(r);
        if (gain > 1e-12 * (1.0 + parent) && gain > best.gain * (1.0 + 1e-9)) {
          best = {true, static_cast<int>(f), thr, gain};
        }
      }
    }
    return best;
  };

  std::vector<OracleNode> nodes;
  std::vector<std::vector<std::size_t>> members;
  std::vector<Cand> cands;
  auto add = [&](std::vector<std::size_t> rows, std::size_t depth) {
    OracleNode nd;
    double s = 0.0;
    for (auto r : rows) s += y[r];
    nd.value = s / static_cast<double>(rows.size());
    nd.n = rows.size();
    nd.depth = depth;
    cands.push_back(best_split(rows, depth));
    nodes.push_back(nd);
    members.push_back(std::move(rows));
  };
  std::vector<std::size_t> all(y.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  add(all, 0);
  std::size_t leaves = 1;
  while (leaves < max_leaves) {
    int pick = -1;
    double g = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].feature < 0 && cands[i].ok && cands[i].gain > g * (1.0 + 1e-9)) {
        g = cands[i].gain;
        pick = static_cast<int>(i);
      }
    }
    if (pick < 0) break;
    const auto p = static_cast<std::size_t>(pick);
    const Cand c = cands[p];
    cands[p].ok = false;
    std::vector<std::size_t> l, r;
    for (auto row : members[p]) (x[row][static_cast<std::size_t>(c.f)] <= c.thr ? l : r).push_back(row);
    nodes[p].feature = c.f;
    nodes[p].threshold = c.thr;
    const auto depth = nodes[p].depth + 1;
    nodes[p].left = static_cast<int>(nodes.size());
    add(std::move(l), depth);
    nodes[p].right = static_cast<int>(nodes.size());
    add(std::move(r), depth);
    ++leaves;
  }
  return nodes;
}

}  // namespace oracle
