// Copyright 2026, the dboost authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// see the LICENSE file for details.
#ifndef DBOOST_SPO_HPP_
#define DBOOST_SPO_HPP_

#include <Eigen/Core>

#include <atomic>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "dboost/qcp.hpp"

namespace dboost {

struct DenominatorNearZero : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One decision problem whose cost vector varies per sample. Holds the
// assembled solver state and a cache of oracle decisions z*(c) keyed by the
// exact bytes of c. prime_oracle builds the cache and is not thread safe;
// everything else is read-only afterwards and safe to share across threads.
class DecisionContext {
 public:
  struct OracleEntry {
    Eigen::VectorXd z;
    double objective = 0.0;
  };

  explicit DecisionContext(QcpProblem problem, SolverSettings settings = {});

  const AssembledSystem& system() const { return sys_; }
  const QcpProblem& problem() const { return sys_.problem; }
  const SolverSettings& settings() const { return settings_; }
  Eigen::Index dz() const { return sys_.problem.dz(); }

  // Solves the decision problem for one cost vector. warm, when non-null,
  // carries the consolidated iterate between calls: an empty or mis-sized
  // vector means cold start, and the converged w is always written back.
  QcpSolution solve(const Eigen::Ref<const Eigen::VectorXd>& cost,
                    Eigen::VectorXd* warm = nullptr) const;

  // Solves and caches the oracle decision for every row of costs. Rows seen
  // before are skipped, so repeated priming is cheap.
  void prime_oracle(const Eigen::Ref<const Eigen::MatrixXd>& costs);

  // Cached entry if present, otherwise a fresh solve (not inserted).
  OracleEntry oracle(const Eigen::Ref<const Eigen::VectorXd>& cost) const;
  double oracle_objective(const Eigen::Ref<const Eigen::VectorXd>& cost) const;
  bool oracle_cached(const Eigen::Ref<const Eigen::VectorXd>& cost) const;
  std::size_t oracle_size() const { return cache_.size(); }
  void clear_oracle() { cache_.clear(); }

  std::int64_t degenerate_gradient_count() const { return degenerate_count_.load(); }
  void note_degenerate_gradient() const { degenerate_count_.fetch_add(1); }

 private:
  static std::string key_of(const Eigen::Ref<const Eigen::VectorXd>& cost);
  OracleEntry solve_oracle(const Eigen::Ref<const Eigen::VectorXd>& cost) const;

  AssembledSystem sys_;
  SolverSettings settings_;
  std::unordered_map<std::string, OracleEntry> cache_;
  mutable std::atomic<std::int64_t> degenerate_count_{0};
};

// Decision regret of predicting c_hat when the realized cost is c:
// [1/2 z*(c_hat)'P z*(c_hat) + c'z*(c_hat)] - [1/2 z*(c)'P z*(c) + c'z*(c)].
// Values in [-1e-6, 0) clamp to 0 (solver tolerance noise); anything more
// negative throws, since the oracle bracket must be optimal.
// warm, when non-null, holds the consolidated iterate reused across calls; a
// zero or empty vector means cold start, and the converged w is written back.
double qspo_loss(const DecisionContext& ctx, const Eigen::Ref<const Eigen::VectorXd>& c_hat,
                 const Eigen::Ref<const Eigen::VectorXd>& c, Eigen::VectorXd* warm = nullptr);

// Gradient of qspo_loss with respect to c_hat via implicit differentiation at
// the solve for c_hat. Degenerate (non-differentiable) points yield the
// least-squares surrogate direction, set *degenerate, and bump the context's
// warning counter.
Eigen::VectorXd qspo_grad(const DecisionContext& ctx,
                          const Eigen::Ref<const Eigen::VectorXd>& c_hat,
                          const Eigen::Ref<const Eigen::VectorXd>& c,
                          Eigen::VectorXd* warm = nullptr, bool* degenerate = nullptr);

// Dataset-level metric: sum of losses over the magnitude of the summed oracle
// objectives, so smaller is always better even when optimal objectives are
// negative. Rows of predictions and costs pair up sample by sample.
double excess_cost(const DecisionContext& ctx,
                   const Eigen::Ref<const Eigen::MatrixXd>& predictions,
                   const Eigen::Ref<const Eigen::MatrixXd>& costs);

}  // namespace dboost

#endif  // DBOOST_SPO_HPP_
