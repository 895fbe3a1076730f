// Copyright 2026, the dboost authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// see the LICENSE file for details.
#ifndef DBOOST_TREES_HPP_
#define DBOOST_TREES_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

#include "dboost/spo.hpp"

namespace dboost {

// One node of a binary regression tree stored in a flat vector. Internal
// nodes route a sample left when x[feature] <= threshold; leaves carry the
// vector-valued prediction.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf.
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  Eigen::VectorXd value;  // Leaf prediction (empty on internal nodes).

  bool is_leaf() const { return feature < 0; }
};

// Vector-output regression tree of bounded depth.
class RegressionTree {
 public:
  RegressionTree() = default;
  explicit RegressionTree(std::vector<TreeNode> nodes);

  const std::vector<TreeNode>& nodes() const { return nodes_; }

  // Prediction for a single feature vector.
  Eigen::VectorXd predict(const Eigen::VectorXd& x) const;

  // Row-wise prediction: X is m x d_x, the result is m x d_out.
  Eigen::MatrixXd predict_rows(const Eigen::MatrixXd& X) const;

  int depth() const;
  int n_leaves() const;
  int output_dim() const;

 private:
  std::vector<TreeNode> nodes_;  // nodes_[0] is the root when non-empty.
};

// Loss used to score candidate splits.
enum class TreeObjective { kMse, kSpo };

// Fits a CART-style regression tree minimizing the summed squared error of
// leaf means against `targets` (m x d_out). `max_depth` must be 0, 1, or 2;
// depth 0 yields a single leaf holding the column means. Candidate
// thresholds at each node are `split_grid` empirical quantiles of each
// feature over the samples reaching that node.
RegressionTree fit_mse_tree(const Eigen::MatrixXd& X,
                            const Eigen::MatrixXd& targets, int max_depth,
                            int split_grid = 10);

// Fits a decision-loss tree: splits are scored by the total downstream
// objective sum_i [q(z(v_L or R)) + c_i^T z(v)] - sum_i oracle_i, where v is
// the candidate leaf mean and z(v) solves the embedded program once per
// candidate leaf. `costs` is m x d_z. Leaf values remain cost means; only
// the split selection differs from fit_mse_tree.
RegressionTree fit_spot_tree(const Eigen::MatrixXd& X,
                             const Eigen::MatrixXd& costs, int max_depth,
                             DecisionContext& ctx, int split_grid = 10);

// Row/feature subsampling rates for forests; both are drawn without
// replacement, rounded up.
struct SubsampleRates {
  double samples = 0.5;
  double features = 0.5;
};

// Bagged ensemble of trees; predictions are the average over members.
class Forest {
 public:
  Forest() = default;
  explicit Forest(std::vector<RegressionTree> trees);

  const std::vector<RegressionTree>& trees() const { return trees_; }
  Eigen::VectorXd predict(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd predict_rows(const Eigen::MatrixXd& X) const;

 private:
  std::vector<RegressionTree> trees_;
};

// Fits `n_trees` trees on independent row/feature subsamples (features are
// drawn before rows for each member). `ctx` is required when objective is
// kSpo. Throws std::invalid_argument on malformed arguments.
Forest fit_forest(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                  int max_depth, int n_trees, const SubsampleRates& rates,
                  TreeObjective objective, std::mt19937_64& rng,
                  DecisionContext* ctx = nullptr, int split_grid = 10);

}  // namespace dboost

#endif  // DBOOST_TREES_HPP_
