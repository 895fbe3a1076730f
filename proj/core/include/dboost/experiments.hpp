// Copyright 2026, the dboost authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// see the LICENSE file for details.
#ifndef DBOOST_EXPERIMENTS_HPP_
#define DBOOST_EXPERIMENTS_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dboost/boosting.hpp"
#include "dboost/qcp.hpp"
#include "dboost/spo.hpp"

namespace dboost {

// Polynomial cost model c = H0 + sum_j H[j] x^(j+1) + tau * eps with
// elementwise feature powers and standard normal noise.
struct PolynomialModel {
  Eigen::VectorXd H0;
  std::vector<Eigen::MatrixXd> H;  // H[j] multiplies x^(j+1), j = 0..p-1.
  double tau = 0.0;
  int p = 0;

  Eigen::Index dz() const { return H0.size(); }
  Eigen::Index dx() const { return H.empty() ? 0 : H.front().cols(); }
};

// Coefficient matrices H_j: each entry is 0 with probability 1/2, otherwise
// U(-1,1). H0 entries are N(h0_mean, h0_sd); h0_sd == 0 skips the draws and
// sets H0 = h0_mean exactly.
PolynomialModel make_polynomial_model(Eigen::Index dz, Eigen::Index dx, int p,
                                      double h0_mean, double h0_sd,
                                      std::mt19937_64& rng);

// i.i.d. U(-1,1) feature matrix, drawn row-major.
Eigen::MatrixXd gen_features(Eigen::Index m, Eigen::Index dx, std::mt19937_64& rng);

// Cost rows from the polynomial model; noise is drawn row-major, one
// N(0,1) draw per entry, scaled by model.tau.
Eigen::MatrixXd gen_costs(const PolynomialModel& model, const Eigen::MatrixXd& X,
                          std::mt19937_64& rng);

enum class EdgeExponent {
  kAsPrinted,       // Pr(i -> j) = 0.75^|i - j - 1|
  kAdjacentFavored  // Pr(i -> j) = 0.75^(|i - j| - 1)
};

// A problem instance paired with its cost model.
struct BuiltProblem {
  QcpProblem problem;
  PolynomialModel model;
};

// Unit-flow routing on a random 5-node digraph with edge costs, L2 flow
// regularization (P = I) and box bounds 0 <= z <= 1. Redraws the graph until
// a source-to-sink path exists. The flow-balance rows are restricted to a
// row basis of the node-arc incidence matrix, which keeps the feasible set
// and makes the solution map differentiable.
BuiltProblem build_network_flow(std::mt19937_64& rng,
                                EdgeExponent exponent = EdgeExponent::kAsPrinted);

// Deterministic flow problem for a fixed edge list (pairs of 0-based node
// ids); shared by build_network_flow and tests.
QcpProblem network_flow_problem(const std::vector<std::pair<int, int>>& edges,
                                int n_nodes, int source, int sink);

// Equality-constrained QP: 3 x d_z Bernoulli A (redrawn while rank-deficient),
// b = A 1, P-hat = P + 0.1 Xi with both factors Gram matrices of standard
// normal factor loadings.
BuiltProblem build_qp(std::mt19937_64& rng, Eigen::Index dz = 25);

// Mean-variance portfolio: budget row, long-only rows, and a second-order
// cone row block ||R z|| <= sigma with R^T R = V from a 4-factor model;
// costs are negated returns.
BuiltProblem build_portfolio(std::mt19937_64& rng, Eigen::Index dz = 10);

// Two-asset scenario: min -r'z + 1/2||z||^2 on the simplex. Features are
// scalar x ~ U(0,1); returns are r1 = x + e1, r2 = x + sin(3x) + e2 with
// e ~ N(0, 0.1); costs are -r.
QcpProblem motivating_problem();
void gen_motivating(Eigen::Index m, std::mt19937_64& rng, Eigen::MatrixXd* X,
                    Eigen::MatrixXd* costs);

enum class Problem { kNetworkFlow, kQp, kPortfolio, kMotivating };
enum class Method { kCart, kCartForest, kSpot, kSpotForest, kMseBoost, kDboost };

const char* to_token(Problem p);
const char* to_token(Method m);
Problem problem_from_token(const std::string& token);
Method method_from_token(const std::string& token);

// All methods in canonical order.
const std::vector<Method>& all_methods();

struct ExperimentSpec {
  Problem problem = Problem::kQp;
  double tau = 0.0;
  int depth = 1;
  Eigen::Index m_train = 100;
  Eigen::Index m_test = 100;
  int trials = 1;
  std::uint64_t seed = 0;
  std::vector<Method> methods = all_methods();
  EdgeExponent edge_exponent = EdgeExponent::kAsPrinted;

  void validate() const;  // Throws std::invalid_argument.
};

struct MethodResult {
  Method method = Method::kCart;
  bool failed = false;
  std::string error;  // Empty unless failed.
  double train_excess = 0.0;
  double test_excess = 0.0;
  int n_trees = 0;  // Stages for boosters, members for forests, else 1.
  std::string stop_reason = "-";  // Boosting stop token, "-" otherwise.
  double runtime_s = 0.0;
};

struct TrialResult {
  int trial_index = 0;
  std::vector<MethodResult> methods;
};

// Runs one trial: builds the problem and model from the trial's own seed
// stream (seed XOR trial_index), generates train and test sets, fits every
// requested method at spec.depth, and records both splits' excess costs.
// Single-method failures are recorded, not thrown.
TrialResult run_trial(const ExperimentSpec& spec, int trial_index,
                      const SolverSettings& settings = {});

// Stage-by-stage view of the two boosting fits on the two-asset scenario:
// training excess cost after each stage (index 0 = f0 alone) and predictions
// over a dense feature grid.
struct MotivatingDetail {
  std::vector<double> dboost_excess_trace;
  std::vector<double> mse_excess_trace;
  std::vector<double> dboost_loss_trace;  // Summed decision loss per stage.
  std::vector<double> mse_loss_trace;     // Summed squared error per stage.
  Eigen::VectorXd grid_x;                 // Dense grid over [0, 1].
  Eigen::MatrixXd dboost_curve;           // Predicted costs on the grid.
  Eigen::MatrixXd mse_curve;
  Eigen::MatrixXd true_curve;  // Noiseless cost curve.
};

MotivatingDetail run_motivating_detail(const ExperimentSpec& spec,
                                       const SolverSettings& settings = {});

}  // namespace dboost

#endif  // DBOOST_EXPERIMENTS_HPP_
