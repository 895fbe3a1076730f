// Copyright 2026, the dboost authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// see the LICENSE file for details.
#ifndef DBOOST_BOOSTING_HPP_
#define DBOOST_BOOSTING_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dboost/spo.hpp"
#include "dboost/trees.hpp"

namespace dboost {

// Why fitting stopped. Tokens (for CSV and JSON): "max_stages",
// "beta_below_threshold", "small_loss_change".
enum class StopReason { kMaxStages, kBetaBelowThreshold, kSmallLossChange };

const char* to_token(StopReason reason);
StopReason stop_reason_from_token(const std::string& token);

// Step-size search: evaluate the objective on an even grid over
// [0, beta_max], then refine around the incumbent by golden-section until the
// bracket shrinks below refine_rel_tol times the grid spacing or the
// evaluation budget runs out. Ties keep the smallest beta.
struct LineSearchSettings {
  double beta_max = 10.0;
  int grid_points = 32;
  double refine_rel_tol = 0.01;
  int max_refine_iters = 48;
};

struct BoostConfig {
  int max_stages = 100;
  int max_depth = 1;
  int split_grid = 10;
  double eps_beta = 1e-4;   // Stop (discarding the stage) when beta falls below.
  double eps_loss = 1e-2;   // Stop when |loss change| / previous loss falls below.
  LineSearchSettings line_search;
  std::uint64_t seed = 0;   // Drives the base-prediction perturbation draws.
  int f0_restarts = 8;      // Random candidates tried for the base prediction.
};

// Additive model c_hat(x) = f0 + sum_k beta_k * tree_k(x).
struct Ensemble {
  struct Stage {
    RegressionTree tree;
    double beta = 0.0;
  };

  Eigen::VectorXd f0;
  std::vector<Stage> stages;
  std::vector<double> loss_trace;  // loss_trace[0] is the loss at f0 alone.
  StopReason stop_reason = StopReason::kMaxStages;
  double last_beta = 0.0;        // Step size of the last evaluated stage.
  double last_rel_change = 0.0;  // |loss change|/previous of the last kept stage.

  int n_stages() const { return static_cast<int>(stages.size()); }
};

Eigen::VectorXd predict_ensemble(const Ensemble& ens, const Eigen::VectorXd& x);
Eigen::MatrixXd predict_ensemble(const Ensemble& ens, const Eigen::MatrixXd& X);

// Decision-loss gradient boosting: stages are squared-error trees fit to the
// negated decision-loss gradients, with step sizes from line search on the
// summed decision loss. The oracle cache of ctx is primed with all cost rows.
Ensemble fit_dboost(const Eigen::MatrixXd& X, const Eigen::MatrixXd& costs,
                    DecisionContext& ctx, const BoostConfig& cfg = {});

// Same additive skeleton with the squared-error loss: residuals are
// targets - predictions and the step size is the exact least-squares
// minimizer clamped to be nonnegative.
Ensemble fit_mse_boost(const Eigen::MatrixXd& X, const Eigen::MatrixXd& targets,
                       const BoostConfig& cfg = {});

// Step size minimizing sum_i loss(predictions_i + beta * tree_outputs_i)
// over [0, beta_max]. Rows pair predictions, tree outputs and realized costs.
// Priming ctx's oracle with the cost rows beforehand avoids re-solving the
// oracle inside every evaluation.
double line_search_beta(const DecisionContext& ctx,
                        const Eigen::Ref<const Eigen::MatrixXd>& predictions,
                        const Eigen::Ref<const Eigen::MatrixXd>& tree_outputs,
                        const Eigen::Ref<const Eigen::MatrixXd>& costs,
                        const LineSearchSettings& grid = {});

namespace detail {

struct LineSearchResult {
  double beta = 0.0;
  double value = 0.0;
};

// Grid-plus-golden-section minimization of eval over [0, beta_max]. eval must
// be defined on the whole interval; ties keep the smallest point evaluated.
LineSearchResult line_search_minimum(const std::function<double(double)>& eval,
                                     const LineSearchSettings& settings);

// Loss-specific hooks for the shared boosting skeleton. All losses are sums
// over samples.
struct AdditiveLoss {
  // Loss of predicting the same vector for every sample.
  std::function<double(const Eigen::VectorXd&)> constant_loss;
  // Loss of the given per-row predictions.
  std::function<double(const Eigen::MatrixXd&)> total_loss;
  // Pseudo-residuals (negative gradients) at the given predictions.
  std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)> residuals;
  // Step size for adding tree outputs H to the predictions.
  std::function<double(const Eigen::MatrixXd&, const Eigen::MatrixXd&)> step_size;
};

// Shared skeleton: pick f0 from {mean, median, seeded perturbations of the
// mean} by constant_loss (ties keep the earliest candidate), then add stages
// until a stopping rule fires.
Ensemble fit_additive(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                      const BoostConfig& cfg, const AdditiveLoss& loss);

}  // namespace detail

}  // namespace dboost

#endif  // DBOOST_BOOSTING_HPP_
