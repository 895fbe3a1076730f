// Copyright 2026, the dboost authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// see the LICENSE file for details.
#include "dboost/trees.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace dboost {
namespace {

// Splits must beat the parent loss by this relative margin; ties and
// float-noise improvements produce leaves instead of arbitrary cuts.
constexpr double kSplitMarginScale = 1e-12;

void check_tree_args(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                     int max_depth, int split_grid) {
  if (X.rows() != Y.rows()) {
    throw std::invalid_argument("trees: X and targets row counts differ");
  }
  if (X.rows() < 1) {
    throw std::invalid_argument("trees: need at least one sample");
  }
  if (max_depth < 0 || max_depth > 2) {
    throw std::invalid_argument("trees: max_depth must be 0, 1, or 2");
  }
  if (split_grid < 1) {
    throw std::invalid_argument("trees: split_grid must be positive");
  }
}

// State shared by one tree fit. `ctx` is null for squared-error trees.
struct Fit {
  const Eigen::MatrixXd& X;
  const Eigen::MatrixXd& Y;
  int max_depth;
  int split_grid;
  std::vector<int> features;  // Candidate feature ids, ascending.
  DecisionContext* ctx = nullptr;
  std::vector<double> oracle_obj;  // Per-row oracle objectives (kSpo only).
  std::vector<TreeNode> nodes;
  // Warm starts chained across candidate evaluations of the whole fit.
  Eigen::VectorXd warm_parent, warm_left, warm_right;

  bool is_spo() const { return ctx != nullptr; }
};

struct Stats {
  Eigen::VectorXd sum;
  double sumsq = 0.0;
  double osum = 0.0;
  int n = 0;
};

// Loss of placing all samples with the given stats into one leaf.
// Squared-error: sum_i ||y_i - mean||^2. Decision loss: the summed
// downstream objective n/2 z^T P z + sum^T z - osum at z solved for the
// mean cost (the oracle term is constant within a node but kept so scores
// are regrets).
double leaf_loss(Fit& fit, const Stats& s, Eigen::VectorXd* warm) {
  const Eigen::VectorXd mean = s.sum / static_cast<double>(s.n);
  if (!fit.is_spo()) {
    return s.sumsq - s.sum.squaredNorm() / static_cast<double>(s.n);
  }
  const Eigen::VectorXd z = fit.ctx->solve(mean, warm).z;
  const Eigen::MatrixXd& P = fit.ctx->problem().P;
  return static_cast<double>(s.n) * 0.5 * z.dot(P * z) + s.sum.dot(z) -
         s.osum;
}

Eigen::VectorXd subset_mean(const Fit& fit, const std::vector<int>& rows) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(fit.Y.cols());
  for (int r : rows) sum += fit.Y.row(r).transpose();
  return sum / static_cast<double>(rows.size());
}

int emit_leaf(Fit& fit, const std::vector<int>& rows) {
  TreeNode node;
  node.value = subset_mean(fit, rows);
  fit.nodes.push_back(std::move(node));
  return static_cast<int>(fit.nodes.size()) - 1;
}

struct BestSplit {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double score = std::numeric_limits<double>::infinity();
};

int fit_node(Fit& fit, const std::vector<int>& rows, int depth) {
  const int n = static_cast<int>(rows.size());
  if (depth >= fit.max_depth || n < 2) return emit_leaf(fit, rows);

  Stats total;
  total.n = n;
  total.sum = Eigen::VectorXd::Zero(fit.Y.cols());
  for (int r : rows) {
    total.sum += fit.Y.row(r).transpose();
    total.sumsq += fit.Y.row(r).squaredNorm();
    if (fit.is_spo()) total.osum += fit.oracle_obj[static_cast<size_t>(r)];
  }
  const double parent_loss = leaf_loss(fit, total, &fit.warm_parent);
  // Seed the child chains from the parent's solution.
  if (fit.is_spo()) {
    fit.warm_left = fit.warm_parent;
    fit.warm_right = fit.warm_parent;
  }

  BestSplit best;
  std::vector<int> order(rows.size());
  Eigen::MatrixXd prefix_sum(n, fit.Y.cols());
  std::vector<double> prefix_sumsq(static_cast<size_t>(n));
  std::vector<double> prefix_osum(static_cast<size_t>(n));
  std::vector<double> vals(static_cast<size_t>(n));

  for (int f : fit.features) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return fit.X(rows[static_cast<size_t>(a)], f) <
             fit.X(rows[static_cast<size_t>(b)], f);
    });
    Eigen::VectorXd running = Eigen::VectorXd::Zero(fit.Y.cols());
    double running_sq = 0.0, running_o = 0.0;
    for (int i = 0; i < n; ++i) {
      const int r = rows[static_cast<size_t>(order[static_cast<size_t>(i)])];
      running += fit.Y.row(r).transpose();
      running_sq += fit.Y.row(r).squaredNorm();
      if (fit.is_spo()) running_o += fit.oracle_obj[static_cast<size_t>(r)];
      prefix_sum.row(i) = running.transpose();
      prefix_sumsq[static_cast<size_t>(i)] = running_sq;
      prefix_osum[static_cast<size_t>(i)] = running_o;
      vals[static_cast<size_t>(i)] = fit.X(r, f);
    }

    double prev_threshold = std::numeric_limits<double>::quiet_NaN();
    for (int g = 1; g <= fit.split_grid; ++g) {
      const double p =
          static_cast<double>(g) / static_cast<double>(fit.split_grid + 1);
      const int idx = static_cast<int>(p * static_cast<double>(n - 1));
      const double t = vals[static_cast<size_t>(idx)];
      if (t == prev_threshold) continue;  // Dedupe repeated quantiles.
      prev_threshold = t;
      if (t >= vals[static_cast<size_t>(n - 1)]) continue;  // Right empty.
      const int k = static_cast<int>(
          std::upper_bound(vals.begin(), vals.end(), t) - vals.begin());

      Stats left, right;
      left.n = k;
      left.sum = prefix_sum.row(k - 1).transpose();
      left.sumsq = prefix_sumsq[static_cast<size_t>(k - 1)];
      left.osum = prefix_osum[static_cast<size_t>(k - 1)];
      right.n = n - k;
      right.sum = total.sum - left.sum;
      right.sumsq = total.sumsq - left.sumsq;
      right.osum = total.osum - left.osum;

      const double score = leaf_loss(fit, left, &fit.warm_left) +
                           leaf_loss(fit, right, &fit.warm_right);
      if (score < best.score) {
        best.found = true;
        best.feature = f;
        best.threshold = t;
        best.score = score;
      }
    }
  }

  const double margin = kSplitMarginScale * std::max(1.0, std::abs(parent_loss));
  if (!best.found || best.score >= parent_loss - margin) {
    return emit_leaf(fit, rows);
  }

  std::vector<int> left_rows, right_rows;
  left_rows.reserve(rows.size());
  right_rows.reserve(rows.size());
  for (int r : rows) {
    (fit.X(r, best.feature) <= best.threshold ? left_rows : right_rows)
        .push_back(r);
  }

  TreeNode node;
  node.feature = best.feature;
  node.threshold = best.threshold;
  fit.nodes.push_back(std::move(node));
  const int self = static_cast<int>(fit.nodes.size()) - 1;
  const int left_index = fit_node(fit, left_rows, depth + 1);
  const int right_index = fit_node(fit, right_rows, depth + 1);
  fit.nodes[static_cast<size_t>(self)].left = left_index;
  fit.nodes[static_cast<size_t>(self)].right = right_index;
  return self;
}

RegressionTree fit_tree_impl(const Eigen::MatrixXd& X,
                             const Eigen::MatrixXd& Y, int max_depth,
                             int split_grid, DecisionContext* ctx,
                             std::vector<int> features,
                             const std::vector<int>& rows) {
  Fit fit{X, Y, max_depth, split_grid, std::move(features), ctx};
  if (fit.is_spo()) {
    if (Y.cols() != ctx->dz()) {
      throw std::invalid_argument(
          "trees: cost columns must match the decision dimension");
    }
    Eigen::MatrixXd subset(static_cast<Eigen::Index>(rows.size()), Y.cols());
    for (size_t i = 0; i < rows.size(); ++i) subset.row(static_cast<Eigen::Index>(i)) = Y.row(rows[i]);
    ctx->prime_oracle(subset);
    fit.oracle_obj.resize(static_cast<size_t>(Y.rows()), 0.0);
    for (int r : rows) {
      fit.oracle_obj[static_cast<size_t>(r)] =
          ctx->oracle_objective(Y.row(r).transpose());
    }
  }
  fit_node(fit, rows, 0);
  // fit_node appends the root first, so nodes_[0] is already the root.
  return RegressionTree(std::move(fit.nodes));
}

std::vector<int> all_indices(int n) {
  std::vector<int> idx(static_cast<size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

// Draws k distinct values from [0, n) by partial Fisher-Yates, returned
// sorted ascending.
std::vector<int> sample_without_replacement(int n, int k,
                                            std::mt19937_64& rng) {
  std::vector<int> idx = all_indices(n);
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(pick(rng))]);
  }
  idx.resize(static_cast<size_t>(k));
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

RegressionTree::RegressionTree(std::vector<TreeNode> nodes)
    : nodes_(std::move(nodes)) {
  if (nodes_.empty()) {
    throw std::invalid_argument("RegressionTree: empty node list");
  }
}

Eigen::VectorXd RegressionTree::predict(const Eigen::VectorXd& x) const {
  if (nodes_.empty()) {
    throw std::logic_error("RegressionTree: predict on empty tree");
  }
  int at = 0;
  while (!nodes_[static_cast<size_t>(at)].is_leaf()) {
    const TreeNode& node = nodes_[static_cast<size_t>(at)];
    at = x[node.feature] <= node.threshold ? node.left : node.right;
  }
  return nodes_[static_cast<size_t>(at)].value;
}

Eigen::MatrixXd RegressionTree::predict_rows(const Eigen::MatrixXd& X) const {
  Eigen::MatrixXd out(X.rows(), output_dim());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    out.row(i) = predict(X.row(i).transpose()).transpose();
  }
  return out;
}

int RegressionTree::depth() const {
  // Depth of the subtree rooted at each node, computed iteratively.
  std::vector<std::pair<int, int>> stack{{0, 0}};
  int depth = 0;
  while (!stack.empty()) {
    auto [at, d] = stack.back();
    stack.pop_back();
    depth = std::max(depth, d);
    const TreeNode& node = nodes_[static_cast<size_t>(at)];
    if (!node.is_leaf()) {
      stack.push_back({node.left, d + 1});
      stack.push_back({node.right, d + 1});
    }
  }
  return depth;
}

int RegressionTree::n_leaves() const {
  int count = 0;
  for (const TreeNode& node : nodes_) count += node.is_leaf() ? 1 : 0;
  return count;
}

int RegressionTree::output_dim() const {
  for (const TreeNode& node : nodes_) {
    if (node.is_leaf()) return static_cast<int>(node.value.size());
  }
  return 0;
}

RegressionTree fit_mse_tree(const Eigen::MatrixXd& X,
                            const Eigen::MatrixXd& targets, int max_depth,
                            int split_grid) {
  check_tree_args(X, targets, max_depth, split_grid);
  return fit_tree_impl(X, targets, max_depth, split_grid, nullptr,
                       all_indices(static_cast<int>(X.cols())),
                       all_indices(static_cast<int>(X.rows())));
}

RegressionTree fit_spot_tree(const Eigen::MatrixXd& X,
                             const Eigen::MatrixXd& costs, int max_depth,
                             DecisionContext& ctx, int split_grid) {
  check_tree_args(X, costs, max_depth, split_grid);
  return fit_tree_impl(X, costs, max_depth, split_grid, &ctx,
                       all_indices(static_cast<int>(X.cols())),
                       all_indices(static_cast<int>(X.rows())));
}

Forest::Forest(std::vector<RegressionTree> trees) : trees_(std::move(trees)) {
  if (trees_.empty()) {
    throw std::invalid_argument("Forest: empty tree list");
  }
}

Eigen::VectorXd Forest::predict(const Eigen::VectorXd& x) const {
  Eigen::VectorXd acc = trees_.front().predict(x);
  for (size_t i = 1; i < trees_.size(); ++i) acc += trees_[i].predict(x);
  return acc / static_cast<double>(trees_.size());
}

Eigen::MatrixXd Forest::predict_rows(const Eigen::MatrixXd& X) const {
  Eigen::MatrixXd acc = trees_.front().predict_rows(X);
  for (size_t i = 1; i < trees_.size(); ++i) acc += trees_[i].predict_rows(X);
  return acc / static_cast<double>(trees_.size());
}

Forest fit_forest(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                  int max_depth, int n_trees, const SubsampleRates& rates,
                  TreeObjective objective, std::mt19937_64& rng,
                  DecisionContext* ctx, int split_grid) {
  check_tree_args(X, Y, max_depth, split_grid);
  if (n_trees < 1 || n_trees > 100) {
    throw std::invalid_argument("fit_forest: n_trees must be in [1, 100]");
  }
  if (rates.samples <= 0.0 || rates.samples > 1.0 || rates.features <= 0.0 ||
      rates.features > 1.0) {
    throw std::invalid_argument("fit_forest: subsample rates must be in (0, 1]");
  }
  if (objective == TreeObjective::kSpo && ctx == nullptr) {
    throw std::invalid_argument(
        "fit_forest: decision-loss forests need a DecisionContext");
  }

  const int m = static_cast<int>(X.rows());
  const int d = static_cast<int>(X.cols());
  const int k_rows = static_cast<int>(
      std::ceil(rates.samples * static_cast<double>(m)));
  const int k_feats = static_cast<int>(
      std::ceil(rates.features * static_cast<double>(d)));

  std::vector<RegressionTree> trees;
  trees.reserve(static_cast<size_t>(n_trees));
  for (int t = 0; t < n_trees; ++t) {
    // Features are drawn before rows for every member.
    std::vector<int> feats = sample_without_replacement(d, k_feats, rng);
    std::vector<int> rows = sample_without_replacement(m, k_rows, rng);
    trees.push_back(fit_tree_impl(
        X, Y, max_depth, split_grid,
        objective == TreeObjective::kSpo ? ctx : nullptr, std::move(feats),
        rows));
  }
  return Forest(std::move(trees));
}

}  // namespace dboost
