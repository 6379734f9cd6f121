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
#include <cstdint>
#include <span>
#include <vector>

#include "soilml/matrix.hpp"

namespace soilml {

struct TreeConfig {
  std::size_t max_depth = 7;
  std::size_t max_leaf_nodes = 30;
  std::size_t min_samples_leaf = 1;
};

/// Flat CART node. Internal nodes route x[feature] <= threshold to `left`.
struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double value = 0.0;  // mean target of the node's training rows
  std::uint32_t n_samples = 0;
  std::uint32_t depth = 0;

  bool is_leaf() const noexcept { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

class RegressionTree {
 public:
  RegressionTree() = default;
  explicit RegressionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  double predict_one(std::span<const double> x) const;
  std::vector<double> predict(const Matrix& x) const;
  /// Index of the leaf that `x` falls into.
  std::size_t leaf_of(std::span<const double> x) const;

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  std::size_t leaf_count() const noexcept;
  /// Depth of the deepest leaf (root = 0).
  std::size_t depth() const noexcept;

  bool operator==(const RegressionTree&) const = default;

 private:
  std::vector<TreeNode> nodes_;
};

/// Best-first CART regression tree.
///
/// `rows` lists the training row indices (repeats allowed, e.g. a bootstrap
/// sample); an empty span means every row once, in order. The open leaf with
/// the largest weighted-SSE reduction is split next until `max_leaf_nodes`
/// leaves exist or no leaf can be split. Candidate thresholds are midpoints of
/// consecutive distinct sorted values; ties go to the lowest feature index,
/// then the lowest threshold, and among leaves to the earliest-created one.
RegressionTree tree_fit(const Matrix& x, std::span<const double> y, const TreeConfig& cfg,
                        std::span<const std::size_t> rows = {});

}  // namespace soilml
