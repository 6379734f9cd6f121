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

#include "soilml/models/tree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "soilml/error.hpp"

namespace soilml {

namespace {

struct Split {
  bool valid = false;
  std::int32_t feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

// Gains within this relative margin are ties, so exact ties in real arithmetic
// resolve by feature, threshold and leaf order rather than by rounding.
constexpr double kTie = 1e-12;

bool beats(double gain, double best) { return gain > best * (1.0 + kTie); }

double mean_of(std::span<const std::size_t> rows, std::span<const double> y) {
  double s = 0.0;
  for (auto r : rows) s += y[r];
  return s / static_cast<double>(rows.size());
}

Split best_split(const Matrix& x, std::span<const double> y, std::span<const std::size_t> rows,
                 std::size_t min_leaf) {
  Split best;
  const std::size_t n = rows.size();
  if (n < 2 * std::max<std::size_t>(min_leaf, 1)) return best;
  const double first = y[rows[0]];
  if (std::all_of(rows.begin(), rows.end(), [&](std::size_t r) { return y[r] == first; })) {
    return best;
  }

  double total = 0.0;
  for (auto r : rows) total += y[r];
  const double mean = total / static_cast<double>(n);
  double sse = 0.0;
  for (auto r : rows) sse += (y[r] - mean) * (y[r] - mean);
  // Anything smaller is rounding noise on a split with equal child means.
  const double floor_gain = kTie * sse;

  std::vector<std::pair<double, double>> col(n);
  const auto nd = static_cast<double>(n);
  for (std::size_t f = 0; f < x.cols(); ++f) {
    for (std::size_t i = 0; i < n; ++i) col[i] = {x(rows[i], f), y[rows[i]]};
    std::stable_sort(col.begin(), col.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    double left = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      left += col[k].second;
      if (!(col[k].first < col[k + 1].first)) continue;
      const std::size_t n_left = k + 1;
      const std::size_t n_right = n - n_left;
      if (n_left < min_leaf || n_right < min_leaf) continue;
      const double nl = static_cast<double>(n_left);
      const double nr = static_cast<double>(n_right);
      const double diff = left / nl - (total - left) / nr;
      // Weighted SSE reduction, written in the form that is exactly zero
      // when the child means agree.
      const double gain = nl * nr / nd * diff * diff;
      if (gain > floor_gain && beats(gain, best.gain)) {
        double thr = 0.5 * (col[k].first + col[k + 1].first);
        if (!(thr < col[k + 1].first)) thr = col[k].first;
        best = Split{true, static_cast<std::int32_t>(f), thr, gain};
      }
    }
  }
  return best;
}

}  // namespace

double RegressionTree::predict_one(std::span<const double> x) const {
  return nodes_[leaf_of(x)].value;
}

std::size_t RegressionTree::leaf_of(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const auto& nd = nodes_[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(nd.feature)] <= nd.threshold
                                     ? nd.left
                                     : nd.right);
  }
  return i;
}

std::vector<double> RegressionTree::predict(const Matrix& x) const {
  std::vector<double> out(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) out[r] = predict_one(x.row(r));
  return out;
}

std::size_t RegressionTree::leaf_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

std::size_t RegressionTree::depth() const noexcept {
  std::size_t d = 0;
  for (const auto& n : nodes_) d = std::max<std::size_t>(d, n.depth);
  return d;
}

RegressionTree tree_fit(const Matrix& x, std::span<const double> y, const TreeConfig& cfg,
                        std::span<const std::size_t> rows) {
  if (x.rows() != y.size()) fail(ErrorCode::LengthMismatch, "feature rows and targets differ");
  if (cfg.max_depth < 1 || cfg.max_leaf_nodes < 2) {
    fail(ErrorCode::BadConfig, "tree needs max_depth >= 1 and max_leaf_nodes >= 2");
  }
  std::vector<std::size_t> all;
  if (rows.empty()) {
    all.resize(x.rows());
    std::iota(all.begin(), all.end(), std::size_t{0});
    rows = all;
  }
  if (rows.empty()) fail(ErrorCode::TooFewRows, "tree needs at least one row");

  std::vector<TreeNode> nodes;
  std::vector<std::vector<std::size_t>> members;  // rows per node, original order
  std::vector<Split> pending;                     // best split per open leaf

  auto add_node = [&](std::vector<std::size_t> node_rows, std::uint32_t depth) {
    TreeNode nd;
    nd.value = mean_of(node_rows, y);
    nd.n_samples = static_cast<std::uint32_t>(node_rows.size());
    nd.depth = depth;
    Split s;
    if (depth < cfg.max_depth) s = best_split(x, y, node_rows, cfg.min_samples_leaf);
    nodes.push_back(nd);
    members.push_back(std::move(node_rows));
    pending.push_back(s);
  };

  add_node(std::vector<std::size_t>(rows.begin(), rows.end()), 0);
  std::size_t leaves = 1;
  while (leaves < cfg.max_leaf_nodes) {
    std::ptrdiff_t pick = -1;
    double best_gain = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].is_leaf() && pending[i].valid && beats(pending[i].gain, best_gain)) {
        best_gain = pending[i].gain;
        pick = static_cast<std::ptrdiff_t>(i);
      }
    }
    if (pick < 0) break;
    const auto p = static_cast<std::size_t>(pick);
    const Split s = pending[p];
    std::vector<std::size_t> left, right;
    for (auto r : members[p]) {
      (x(r, static_cast<std::size_t>(s.feature)) <= s.threshold ? left : right).push_back(r);
    }
    members[p].clear();
    members[p].shrink_to_fit();
    pending[p].valid = false;
    const auto depth = nodes[p].depth + 1;
    nodes[p].feature = s.feature;
    nodes[p].threshold = s.threshold;
    nodes[p].left = static_cast<std::int32_t>(nodes.size());
    add_node(std::move(left), depth);
    nodes[p].right = static_cast<std::int32_t>(nodes.size());
    add_node(std::move(right), depth);
    ++leaves;
  }
  return RegressionTree(std::move(nodes));
}

}  // namespace soilml
