#include "accelsel/gbdt.hpp"

#include <algorithm>
#include <numeric>

#include "accelsel/errors.hpp"

namespace accelsel {

void GbdtParams::validate() const {
  if (rounds < 1) throw ConfigError("gbdt.rounds must be >= 1");
  if (max_depth < 1) throw ConfigError("gbdt.max_depth must be >= 1");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) throw ConfigError("gbdt.learning_rate must lie in (0, 1]");
  if (min_samples_leaf < 1) throw ConfigError("gbdt.min_samples_leaf must be >= 1");
}

double RegressionTree::predict(std::span<const double> x) const {
  int at = 0;
  while (!nodes[at].is_leaf()) {
    const auto& n = nodes[at];
    at = x[n.feature] <= n.threshold ? n.left : n.right;
  }
  return nodes[at].value;
}

double GbdtModel::predict(std::span<const double> x) const {
  double out = base;
  for (const auto& t : trees) out += t.predict(x);
  return out;
}

namespace {

struct NodeStats {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;
};

struct SplitScan {
  double left_sum = 0.0;
  std::size_t left_count = 0;
  double last = 0.0;
  bool has_last = false;
};

struct BestSplit {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
};

double midpoint(double lo, double hi) {
  const double mid = lo + (hi - lo) / 2.0;
  return mid < hi ? mid : lo;
}

double mean_squared(std::span<const double> residuals) {
  double s = 0.0;
  for (double r : residuals) s += r * r;
  return s / static_cast<double>(residuals.size());
}

class TreeBuilder {
 public:
  TreeBuilder(const DenseMatrix& inputs, const std::vector<std::vector<std::uint32_t>>& sorted,
              const GbdtParams& params)
      : inputs_(inputs), sorted_(sorted), params_(params), node_of_(inputs.rows()) {}

  // Grows one tree on `residuals` level by level, then writes each row's
  // shrunk leaf value into `update`.
  RegressionTree build(std::span<const double> residuals, std::span<double> update) {
    RegressionTree tree;
    tree.nodes.assign(1, TreeNode{});
    depth_.assign(1, 0);
    std::fill(node_of_.begin(), node_of_.end(), 0);
    const std::size_t min_leaf = static_cast<std::size_t>(params_.min_samples_leaf);

    for (int depth = 0; depth < params_.max_depth; ++depth) {
      const std::vector<NodeStats> stats = gather(tree, residuals);
      std::vector<char> active(tree.nodes.size(), 0);
      bool any = false;
      for (std::size_t n = 0; n < tree.nodes.size(); ++n) {
        if (tree.nodes[n].is_leaf() && depth_[n] == depth && stats[n].count >= 2 * min_leaf) {
          active[n] = 1;
          any = true;
        }
      }
      if (!any) break;

      std::vector<BestSplit> best(tree.nodes.size());
      std::vector<SplitScan> scan(tree.nodes.size());
      for (std::size_t f = 0; f < inputs_.cols(); ++f) {
        std::fill(scan.begin(), scan.end(), SplitScan{});
        for (std::uint32_t row : sorted_[f]) {
          const int node = node_of_[row];
          if (!active[node]) continue;
          SplitScan& s = scan[node];
          const double x = inputs_(row, f);
          if (s.has_last && x != s.last) {
            const NodeStats& total = stats[node];
            const std::size_t right_count = total.count - s.left_count;
            if (s.left_count >= min_leaf && right_count >= min_leaf) {
              const double right_sum = total.sum - s.left_sum;
              const double gain = s.left_sum * s.left_sum / static_cast<double>(s.left_count) +
                                  right_sum * right_sum / static_cast<double>(right_count) -
                                  total.sum * total.sum / static_cast<double>(total.count);
              if (gain > best[node].gain) {
                best[node] = {gain, static_cast<int>(f), midpoint(s.last, x)};
              }
            }
          }
          s.left_sum += residuals[row];
          ++s.left_count;
          s.last = x;
          s.has_last = true;
        }
      }

      bool split_any = false;
      const std::size_t existing = tree.nodes.size();
      for (std::size_t n = 0; n < existing; ++n) {
        // Gains below this are rounding noise of the sum-of-squares identity.
        if (!active[n] || best[n].feature < 0 || !(best[n].gain > 1e-12 * stats[n].sum_sq)) continue;
        const int left = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back(TreeNode{});
        tree.nodes.push_back(TreeNode{});
        TreeNode& parent = tree.nodes[n];
        parent.feature = best[n].feature;
        parent.threshold = best[n].threshold;
        parent.left = left;
        parent.right = left + 1;
        depth_.push_back(depth + 1);
        depth_.push_back(depth + 1);
        split_any = true;
      }
      if (!split_any) break;
      for (std::size_t row = 0; row < node_of_.size(); ++row) {
        const TreeNode& n = tree.nodes[node_of_[row]];
        if (!n.is_leaf()) node_of_[row] = inputs_(row, n.feature) <= n.threshold ? n.left : n.right;
      }
    }

    const std::vector<NodeStats> stats = gather(tree, residuals);
    for (std::size_t n = 0; n < tree.nodes.size(); ++n) {
      if (tree.nodes[n].is_leaf() && stats[n].count > 0) {
        tree.nodes[n].value = params_.learning_rate * (stats[n].sum / static_cast<double>(stats[n].count));
      }
    }
    for (std::size_t row = 0; row < node_of_.size(); ++row) update[row] = tree.nodes[node_of_[row]].value;
    return tree;
  }

 private:
  std::vector<NodeStats> gather(const RegressionTree& tree, std::span<const double> residuals) const {
    std::vector<NodeStats> stats(tree.nodes.size());
    for (std::size_t row = 0; row < node_of_.size(); ++row) {
      NodeStats& s = stats[node_of_[row]];
      s.sum += residuals[row];
      s.sum_sq += residuals[row] * residuals[row];
      ++s.count;
    }
    return stats;
  }

  const DenseMatrix& inputs_;
  const std::vector<std::vector<std::uint32_t>>& sorted_;
  const GbdtParams& params_;
  std::vector<int> node_of_;
  std::vector<int> depth_;  // per node
};

}  // namespace

GbdtModel fit_gbdt(const DenseMatrix& inputs, std::span<const double> targets, const GbdtParams& params) {
  params.validate();
  const std::size_t n = inputs.rows();
  if (n != targets.size()) throw ValidationError("gbdt: input and target row counts differ");
  if (n < 2) throw InsufficientData("gbdt needs at least 2 rows, got " + std::to_string(n));

  // Presort once per feature; ties keep row order.
  std::vector<std::vector<std::uint32_t>> sorted(inputs.cols());
  for (std::size_t f = 0; f < inputs.cols(); ++f) {
    auto& order = sorted[f];
    order.resize(n);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return inputs(a, f) < inputs(b, f); });
  }

  GbdtModel model;
  model.base = std::accumulate(targets.begin(), targets.end(), 0.0) / static_cast<double>(n);
  std::vector<double> prediction(n, model.base);
  std::vector<double> residuals(n);
  std::vector<double> update(n);
  for (std::size_t i = 0; i < n; ++i) residuals[i] = targets[i] - prediction[i];
  model.loss_curve.push_back(mean_squared(residuals));

  TreeBuilder builder(inputs, sorted, params);
  model.trees.reserve(static_cast<std::size_t>(params.rounds));
  for (int round = 0; round < params.rounds; ++round) {
    model.trees.push_back(builder.build(residuals, update));
    for (std::size_t i = 0; i < n; ++i) {
      prediction[i] += update[i];
      residuals[i] = targets[i] - prediction[i];
    }
    model.loss_curve.push_back(mean_squared(residuals));
  }
  return model;
}

}  // namespace accelsel
