#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "accelsel/matrix.hpp"

namespace accelsel {

struct GbdtParams {
  int rounds = 200;
  int max_depth = 4;
  double learning_rate = 0.1;
  int min_samples_leaf = 2;

  void validate() const;

  friend bool operator==(const GbdtParams&, const GbdtParams&) = default;
};

// Internal nodes send x[feature] <= threshold to `left`. Leaves carry the
// already shrunk update in `value`.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;

  bool is_leaf() const { return feature < 0; }

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(std::span<const double> x) const;

  friend bool operator==(const RegressionTree&, const RegressionTree&) = default;
};

struct GbdtModel {
  double base = 0.0;
  std::vector<RegressionTree> trees;
  // Training MSE before the first round, then after each round.
  std::vector<double> loss_curve;

  double predict(std::span<const double> x) const;

  friend bool operator==(const GbdtModel&, const GbdtModel&) = default;
};

// Squared-error gradient boosting. Each round fits a depth-limited tree to the
// residuals by exact greedy search: features in index order, thresholds at
// midpoints of consecutive distinct values, first strictly best split wins
// (so ties go to the lowest feature, then the lowest threshold).
GbdtModel fit_gbdt(const DenseMatrix& inputs, std::span<const double> targets, const GbdtParams& params);

}  // namespace accelsel
