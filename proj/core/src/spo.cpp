// Copyright 2026, the dboost authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// see the LICENSE file for details.
#include "dboost/spo.hpp"

#include <cmath>
#include <cstring>
#include <utility>

#include "dboost/qcpdiff.hpp"

namespace dboost {

namespace {

constexpr double kLossGrace = 1e-6;

}  // namespace

DecisionContext::DecisionContext(QcpProblem problem, SolverSettings settings)
    : sys_(assemble(problem)), settings_(settings) {}

QcpSolution DecisionContext::solve(const Eigen::Ref<const Eigen::VectorXd>& cost,
                                   Eigen::VectorXd* warm) const {
  if (warm != nullptr && warm->size() == sys_.dim()) {
    QcpSolution sol = solve_with_cost(sys_, cost, settings_, warm);
    *warm = sol.w;
    return sol;
  }
  QcpSolution sol = solve_with_cost(sys_, cost, settings_);
  if (warm != nullptr) *warm = sol.w;
  return sol;
}

std::string DecisionContext::key_of(const Eigen::Ref<const Eigen::VectorXd>& cost) {
  std::string key(static_cast<std::size_t>(cost.size()) * sizeof(double), '\0');
  for (Eigen::Index i = 0; i < cost.size(); ++i) {
    const double v = cost[i];
    std::memcpy(key.data() + static_cast<std::size_t>(i) * sizeof(double), &v, sizeof(double));
  }
  return key;
}

DecisionContext::OracleEntry DecisionContext::solve_oracle(
    const Eigen::Ref<const Eigen::VectorXd>& cost) const {
  QcpSolution sol = solve_with_cost(sys_, cost, settings_);
  OracleEntry e;
  e.objective = quadratic_objective(sys_.problem.P, cost, sol.z);
  e.z = std::move(sol.z);
  return e;
}

void DecisionContext::prime_oracle(const Eigen::Ref<const Eigen::MatrixXd>& costs) {
  if (costs.cols() != dz()) throw std::invalid_argument("cost rows must have dimension d_z");
  for (Eigen::Index i = 0; i < costs.rows(); ++i) {
    Eigen::VectorXd c = costs.row(i).transpose();
    std::string key = key_of(c);
    if (cache_.find(key) != cache_.end()) continue;
    cache_.emplace(std::move(key), solve_oracle(c));
  }
}

DecisionContext::OracleEntry DecisionContext::oracle(
    const Eigen::Ref<const Eigen::VectorXd>& cost) const {
  if (cost.size() != dz()) throw std::invalid_argument("cost has wrong dimension");
  auto it = cache_.find(key_of(cost));
  if (it != cache_.end()) return it->second;
  return solve_oracle(cost);
}

double DecisionContext::oracle_objective(const Eigen::Ref<const Eigen::VectorXd>& cost) const {
  if (cost.size() != dz()) throw std::invalid_argument("cost has wrong dimension");
  auto it = cache_.find(key_of(cost));
  if (it != cache_.end()) return it->second.objective;
  return solve_oracle(cost).objective;
}

bool DecisionContext::oracle_cached(const Eigen::Ref<const Eigen::VectorXd>& cost) const {
  return cache_.find(key_of(cost)) != cache_.end();
}

double qspo_loss(const DecisionContext& ctx, const Eigen::Ref<const Eigen::VectorXd>& c_hat,
                 const Eigen::Ref<const Eigen::VectorXd>& c, Eigen::VectorXd* warm) {
  if (c_hat.size() != ctx.dz() || c.size() != ctx.dz()) {
    throw std::invalid_argument("qspo_loss cost dimensions must equal d_z");
  }
  const QcpSolution sol = ctx.solve(c_hat, warm);
  const double realized = quadratic_objective(ctx.problem().P, c, sol.z);
  double loss = realized - ctx.oracle_objective(c);
  if (loss < 0.0) {
    if (loss < -kLossGrace) {
      throw SolverError("SPO loss " + std::to_string(loss) +
                        " below the -1e-6 tolerance floor; oracle bracket is not optimal");
    }
    loss = 0.0;
  }
  return loss;
}

Eigen::VectorXd qspo_grad(const DecisionContext& ctx,
                          const Eigen::Ref<const Eigen::VectorXd>& c_hat,
                          const Eigen::Ref<const Eigen::VectorXd>& c, Eigen::VectorXd* warm,
                          bool* degenerate) {
  if (c_hat.size() != ctx.dz() || c.size() != ctx.dz()) {
    throw std::invalid_argument("qspo_grad cost dimensions must equal d_z");
  }
  const QcpSolution sol = ctx.solve(c_hat, warm);
  const Eigen::VectorXd dl_dz = ctx.problem().P * sol.z + c;
  BackwardWorkspace ws =
      build_workspace(ctx.system(), sol.w, ctx.problem().dz(), ctx.problem().cone);
  DataGradients grads = backward(ws, sol, dl_dz);
  if (degenerate != nullptr) *degenerate = grads.degenerate;
  if (grads.degenerate) ctx.note_degenerate_gradient();
  return grads.dc;
}

double excess_cost(const DecisionContext& ctx,
                   const Eigen::Ref<const Eigen::MatrixXd>& predictions,
                   const Eigen::Ref<const Eigen::MatrixXd>& costs) {
  if (predictions.rows() != costs.rows() || predictions.cols() != costs.cols() ||
      predictions.cols() != ctx.dz() || predictions.rows() < 1) {
    throw std::invalid_argument("excess_cost requires aligned non-empty prediction/cost rows");
  }
  double numerator = 0.0;
  double denominator = 0.0;
  Eigen::VectorXd warm;
  for (Eigen::Index i = 0; i < predictions.rows(); ++i) {
    numerator += qspo_loss(ctx, predictions.row(i).transpose(), costs.row(i).transpose(), &warm);
    denominator += ctx.oracle_objective(costs.row(i).transpose());
  }
  const double mag = std::abs(denominator);
  if (mag < 1e-300) {
    if (std::abs(numerator) < 1e-300) return 0.0;
    throw DenominatorNearZero("excess_cost denominator is zero with nonzero numerator");
  }
  if (mag < 1e-10 * std::abs(numerator)) {
    throw DenominatorNearZero("excess_cost denominator " + std::to_string(denominator) +
                              " is vanishing relative to numerator " + std::to_string(numerator));
  }
  return numerator / mag;
}

}  // namespace dboost
