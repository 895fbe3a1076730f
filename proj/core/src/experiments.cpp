// Copyright 2026, the dboost authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// see the LICENSE file for details.
#include "dboost/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "dboost/rng.hpp"
#include "dboost/trees.hpp"

namespace dboost {
namespace {

constexpr int kBuildAttempts = 1000;
constexpr int kForestSize = 100;
constexpr int kMotivatingCurvePoints = 401;

// Fixed per-method salts so each method's stream is independent of which
// other methods run.
constexpr std::uint64_t method_salt(int canonical_index) {
  return (static_cast<std::uint64_t>(canonical_index) + 1) * 0x9e3779b97f4a7c15ULL;
}

double uniform01(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

// Greedily keeps rows forming a basis of the row space (Gram-Schmidt with a
// fixed tolerance); returns the kept row indices in order.
std::vector<int> row_basis(const Eigen::MatrixXd& rows) {
  std::vector<int> kept;
  std::vector<Eigen::VectorXd> basis;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    Eigen::VectorXd r = rows.row(i).transpose();
    const double scale = std::max(1.0, r.norm());
    for (const Eigen::VectorXd& b : basis) r -= b.dot(r) * b;
    if (r.norm() > 1e-9 * scale) {
      basis.push_back(r / r.norm());
      kept.push_back(static_cast<int>(i));
    }
  }
  return kept;
}

bool has_path(const std::vector<std::pair<int, int>>& edges, int n_nodes,
              int source, int sink) {
  std::vector<std::vector<int>> adj(static_cast<size_t>(n_nodes));
  for (const auto& [u, v] : edges) adj[static_cast<size_t>(u)].push_back(v);
  std::vector<bool> seen(static_cast<size_t>(n_nodes), false);
  std::deque<int> queue{source};
  seen[static_cast<size_t>(source)] = true;
  while (!queue.empty()) {
    const int at = queue.front();
    queue.pop_front();
    if (at == sink) return true;
    for (int next : adj[static_cast<size_t>(at)]) {
      if (!seen[static_cast<size_t>(next)]) {
        seen[static_cast<size_t>(next)] = true;
        queue.push_back(next);
      }
    }
  }
  return false;
}

}  // namespace

PolynomialModel make_polynomial_model(Eigen::Index dz, Eigen::Index dx, int p,
                                      double h0_mean, double h0_sd,
                                      std::mt19937_64& rng) {
  if (dz < 1 || dx < 1 || p < 0) {
    throw std::invalid_argument("make_polynomial_model: bad dimensions");
  }
  PolynomialModel model;
  model.p = p;
  if (h0_sd == 0.0) {
    model.H0 = Eigen::VectorXd::Constant(dz, h0_mean);
  } else {
    std::normal_distribution<double> h0(h0_mean, h0_sd);
    model.H0.resize(dz);
    for (Eigen::Index i = 0; i < dz; ++i) model.H0[i] = h0(rng);
  }
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  model.H.reserve(static_cast<size_t>(p));
  for (int j = 0; j < p; ++j) {
    Eigen::MatrixXd Hj(dz, dx);
    for (Eigen::Index r = 0; r < dz; ++r) {
      for (Eigen::Index c = 0; c < dx; ++c) {
        Hj(r, c) = uniform01(rng) < 0.5 ? 0.0 : value(rng);
      }
    }
    model.H.push_back(std::move(Hj));
  }
  return model;
}

Eigen::MatrixXd gen_features(Eigen::Index m, Eigen::Index dx, std::mt19937_64& rng) {
  if (m < 1 || dx < 1) throw std::invalid_argument("gen_features: bad dimensions");
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::MatrixXd X(m, dx);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < dx; ++j) X(i, j) = unit(rng);
  }
  return X;
}

Eigen::MatrixXd gen_costs(const PolynomialModel& model, const Eigen::MatrixXd& X,
                          std::mt19937_64& rng) {
  if (model.p != static_cast<int>(model.H.size())) {
    throw std::invalid_argument("gen_costs: model degree does not match H list");
  }
  if (model.p > 0 && X.cols() != model.dx()) {
    throw std::invalid_argument("gen_costs: feature dimension does not match model");
  }
  const Eigen::Index m = X.rows();
  const Eigen::Index dz = model.dz();
  Eigen::MatrixXd C(m, dz);
  Eigen::VectorXd xp(X.cols());
  for (Eigen::Index i = 0; i < m; ++i) {
    Eigen::VectorXd c = model.H0;
    xp.setOnes();
    for (int j = 0; j < model.p; ++j) {
      xp = xp.cwiseProduct(X.row(i).transpose());
      c.noalias() += model.H[static_cast<size_t>(j)] * xp;
    }
    C.row(i) = c.transpose();
  }
  if (model.tau != 0.0) {
    std::normal_distribution<double> noise(0.0, 1.0);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < dz; ++j) C(i, j) += model.tau * noise(rng);
    }
  }
  return C;
}

QcpProblem network_flow_problem(const std::vector<std::pair<int, int>>& edges,
                                int n_nodes, int source, int sink) {
  const Eigen::Index dz = static_cast<Eigen::Index>(edges.size());
  if (dz < 1) throw std::invalid_argument("network_flow_problem: no edges");
  if (source == sink || source < 0 || sink < 0 || source >= n_nodes || sink >= n_nodes) {
    throw std::invalid_argument("network_flow_problem: bad source/sink");
  }
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n_nodes || v >= n_nodes || u == v) {
      throw std::invalid_argument("network_flow_problem: bad edge");
    }
  }

  Eigen::MatrixXd incidence = Eigen::MatrixXd::Zero(n_nodes, dz);
  for (Eigen::Index e = 0; e < dz; ++e) {
    incidence(edges[static_cast<size_t>(e)].first, e) = 1.0;
    incidence(edges[static_cast<size_t>(e)].second, e) = -1.0;
  }
  Eigen::VectorXd balance = Eigen::VectorXd::Zero(n_nodes);
  balance[source] = 1.0;
  balance[sink] = -1.0;

  // Incidence rows are linearly dependent (they sum to zero); keep a row
  // basis so the dual solution is unique and the solve differentiable. The
  // dropped constraints are implied whenever the full system is feasible,
  // which a source-to-sink path guarantees.
  const std::vector<int> kept = row_basis(incidence);
  const Eigen::Index n_eq = static_cast<Eigen::Index>(kept.size());

  QcpProblem prob;
  prob.P = Eigen::MatrixXd::Identity(dz, dz);
  prob.c = Eigen::VectorXd::Zero(dz);
  prob.A.setZero(n_eq + 2 * dz, dz);
  prob.b.setZero(n_eq + 2 * dz);
  for (Eigen::Index i = 0; i < n_eq; ++i) {
    prob.A.row(i) = incidence.row(kept[static_cast<size_t>(i)]);
    prob.b[i] = balance[kept[static_cast<size_t>(i)]];
  }
  // z >= 0: -z + s = 0;  z <= 1: z + s = 1.
  prob.A.block(n_eq, 0, dz, dz) = -Eigen::MatrixXd::Identity(dz, dz);
  prob.A.block(n_eq + dz, 0, dz, dz) = Eigen::MatrixXd::Identity(dz, dz);
  prob.b.segment(n_eq + dz, dz).setOnes();
  prob.cone = ConeSpec{zero_cone(n_eq), nonneg_cone(2 * dz)};
  return prob;
}

BuiltProblem build_network_flow(std::mt19937_64& rng, EdgeExponent exponent) {
  constexpr int kNodes = 5;
  for (int attempt = 0; attempt < kBuildAttempts; ++attempt) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < kNodes; ++i) {
      for (int j = 0; j < kNodes; ++j) {
        if (i == j) continue;
        const double expo = exponent == EdgeExponent::kAsPrinted
                                ? std::abs(i - j - 1)
                                : std::abs(i - j) - 1;
        const double prob = std::pow(0.75, expo);
        if (uniform01(rng) < prob) edges.emplace_back(i, j);
      }
    }
    if (!has_path(edges, kNodes, 0, kNodes - 1)) continue;
    BuiltProblem built;
    built.problem = network_flow_problem(edges, kNodes, 0, kNodes - 1);
    built.model = make_polynomial_model(built.problem.dz(), 5, 3, -1.0, 1.0, rng);
    return built;
  }
  throw std::runtime_error(
      "build_network_flow: no source-to-sink path in 1000 sampled graphs");
}

BuiltProblem build_qp(std::mt19937_64& rng, Eigen::Index dz) {
  if (dz < 4) throw std::invalid_argument("build_qp: d_z must be at least 4");
  constexpr Eigen::Index kRows = 3;
  Eigen::MatrixXd A(kRows, dz);
  bool full_rank = false;
  for (int attempt = 0; attempt < kBuildAttempts && !full_rank; ++attempt) {
    for (Eigen::Index i = 0; i < kRows; ++i) {
      for (Eigen::Index j = 0; j < dz; ++j) {
        A(i, j) = uniform01(rng) < 0.5 ? 0.0 : 1.0;
      }
    }
    full_rank = Eigen::FullPivLU<Eigen::MatrixXd>(A).rank() == kRows;
  }
  if (!full_rank) {
    throw std::runtime_error("build_qp: no full-rank A in 1000 draws");
  }

  const Eigen::Index n = 10 * dz;
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto gram = [&]() {
    Eigen::MatrixXd L(n, dz);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < dz; ++j) L(i, j) = normal(rng);
    }
    return Eigen::MatrixXd((L.transpose() * L) / static_cast<double>(n));
  };
  const Eigen::MatrixXd base =
      gram() + 0.01 * Eigen::MatrixXd::Identity(dz, dz);
  const Eigen::MatrixXd xi = gram();

  BuiltProblem built;
  built.problem.P = base + 0.1 * xi;
  built.problem.c = Eigen::VectorXd::Zero(dz);
  built.problem.A = A;
  built.problem.b = A * Eigen::VectorXd::Ones(dz);
  built.problem.cone = ConeSpec{zero_cone(kRows)};
  built.model = make_polynomial_model(dz, 5, 3, 0.0, 0.0, rng);
  return built;
}

BuiltProblem build_portfolio(std::mt19937_64& rng, Eigen::Index dz) {
  if (dz < 2) throw std::invalid_argument("build_portfolio: d_z must be at least 2");
  constexpr Eigen::Index kFactors = 4;
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int attempt = 0; attempt < kBuildAttempts; ++attempt) {
    Eigen::MatrixXd L(kFactors, dz);
    for (Eigen::Index i = 0; i < kFactors; ++i) {
      for (Eigen::Index j = 0; j < dz; ++j) L(i, j) = unit(rng);
    }
    const Eigen::MatrixXd V =
        L.transpose() * L + 0.01 * Eigen::MatrixXd::Identity(dz, dz);
    const double total = Eigen::VectorXd::Ones(dz).dot(V * Eigen::VectorXd::Ones(dz));
    const double sigma = std::sqrt(total) / static_cast<double>(dz);
    // The equal-weight portfolio has risk exactly sigma^2, so the risk ball
    // always meets the simplex; the guard is kept for clarity.
    const double equal_risk = total / static_cast<double>(dz * dz);
    if (!(sigma > 0.0) || equal_risk > sigma * sigma * (1.0 + 1e-9)) continue;

    const Eigen::MatrixXd R = Eigen::LLT<Eigen::MatrixXd>(V).matrixU();

    BuiltProblem built;
    built.problem.P = Eigen::MatrixXd::Zero(dz, dz);
    built.problem.c = Eigen::VectorXd::Zero(dz);
    built.problem.A.setZero(1 + dz + 1 + dz, dz);
    built.problem.b.setZero(1 + dz + 1 + dz);
    built.problem.A.row(0).setOnes();  // 1'z = 1.
    built.problem.b[0] = 1.0;
    built.problem.A.block(1, 0, dz, dz) = -Eigen::MatrixXd::Identity(dz, dz);
    // SOC block (t, x): t = sigma, x = -R z, so ||R z|| <= sigma.
    built.problem.A.block(2 + dz, 0, dz, dz) = R;
    built.problem.b[1 + dz] = sigma;
    built.problem.cone = ConeSpec{zero_cone(1), nonneg_cone(dz), soc_cone(1 + dz)};
    built.model = make_polynomial_model(dz, 5, 3, 0.0, 1.0, rng);
    return built;
  }
  throw std::runtime_error("build_portfolio: no feasible risk cap in 1000 draws");
}

QcpProblem motivating_problem() {
  QcpProblem prob;
  prob.P = Eigen::MatrixXd::Identity(2, 2);
  prob.c = Eigen::VectorXd::Zero(2);
  prob.A.resize(3, 2);
  prob.A << 1, 1, -1, 0, 0, -1;
  prob.b.resize(3);
  prob.b << 1, 0, 0;
  prob.cone = ConeSpec{zero_cone(1), nonneg_cone(2)};
  return prob;
}

void gen_motivating(Eigen::Index m, std::mt19937_64& rng, Eigen::MatrixXd* X,
                    Eigen::MatrixXd* costs) {
  if (m < 1) throw std::invalid_argument("gen_motivating: need at least one sample");
  if (X == nullptr || costs == nullptr) {
    throw std::invalid_argument("gen_motivating: null output");
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 0.1);
  X->resize(m, 1);
  costs->resize(m, 2);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double x = unit(rng);
    const double r1 = x + noise(rng);
    const double r2 = x + std::sin(3.0 * x) + noise(rng);
    (*X)(i, 0) = x;
    (*costs)(i, 0) = -r1;
    (*costs)(i, 1) = -r2;
  }
}

const char* to_token(Problem p) {
  switch (p) {
    case Problem::kNetworkFlow:
      return "network_flow";
    case Problem::kQp:
      return "qp";
    case Problem::kPortfolio:
      return "portfolio";
    case Problem::kMotivating:
      return "motivating";
  }
  throw std::logic_error("unknown problem");
}

const char* to_token(Method m) {
  switch (m) {
    case Method::kCart:
      return "cart";
    case Method::kCartForest:
      return "cart_forest";
    case Method::kSpot:
      return "spot";
    case Method::kSpotForest:
      return "spot_forest";
    case Method::kMseBoost:
      return "mse_boost";
    case Method::kDboost:
      return "dboost";
  }
  throw std::logic_error("unknown method");
}

Problem problem_from_token(const std::string& token) {
  if (token == "network_flow") return Problem::kNetworkFlow;
  if (token == "qp") return Problem::kQp;
  if (token == "portfolio") return Problem::kPortfolio;
  if (token == "motivating") return Problem::kMotivating;
  throw std::invalid_argument("unknown problem token: " + token);
}

Method method_from_token(const std::string& token) {
  if (token == "cart") return Method::kCart;
  if (token == "cart_forest") return Method::kCartForest;
  if (token == "spot") return Method::kSpot;
  if (token == "spot_forest") return Method::kSpotForest;
  if (token == "mse_boost") return Method::kMseBoost;
  if (token == "dboost") return Method::kDboost;
  throw std::invalid_argument("unknown method token: " + token);
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods{Method::kCart,       Method::kCartForest,
                                           Method::kSpot,       Method::kSpotForest,
                                           Method::kMseBoost,   Method::kDboost};
  return methods;
}

void ExperimentSpec::validate() const {
  if (m_train < 1 || m_test < 1) {
    throw std::invalid_argument("ExperimentSpec: m_train and m_test must be >= 1");
  }
  if (trials < 1) throw std::invalid_argument("ExperimentSpec: trials must be >= 1");
  if (depth < 0 || depth > 2) {
    throw std::invalid_argument("ExperimentSpec: depth must be 0, 1, or 2");
  }
  if (!std::isfinite(tau) || tau < 0.0) {
    throw std::invalid_argument("ExperimentSpec: tau must be finite and nonnegative");
  }
  if (methods.empty()) {
    throw std::invalid_argument("ExperimentSpec: method list is empty");
  }
}

namespace {

struct TrialData {
  QcpProblem problem;
  Eigen::MatrixXd x_train, c_train, x_test, c_test;
};

TrialData make_trial_data(const ExperimentSpec& spec, std::uint64_t trial_seed) {
  std::mt19937_64 rng(trial_seed);
  TrialData data;
  if (spec.problem == Problem::kMotivating) {
    data.problem = motivating_problem();
    gen_motivating(spec.m_train, rng, &data.x_train, &data.c_train);
    gen_motivating(spec.m_test, rng, &data.x_test, &data.c_test);
    return data;
  }
  BuiltProblem built;
  switch (spec.problem) {
    case Problem::kNetworkFlow:
      built = build_network_flow(rng, spec.edge_exponent);
      break;
    case Problem::kQp:
      built = build_qp(rng);
      break;
    case Problem::kPortfolio:
      built = build_portfolio(rng);
      break;
    case Problem::kMotivating:
      break;  // Handled above.
  }
  built.model.tau = spec.tau;
  data.problem = std::move(built.problem);
  data.x_train = gen_features(spec.m_train, built.model.dx(), rng);
  data.c_train = gen_costs(built.model, data.x_train, rng);
  data.x_test = gen_features(spec.m_test, built.model.dx(), rng);
  data.c_test = gen_costs(built.model, data.x_test, rng);
  return data;
}

BoostConfig boost_config(const ExperimentSpec& spec, std::uint64_t method_seed) {
  BoostConfig cfg;
  cfg.max_depth = spec.depth;
  cfg.seed = method_seed;
  return cfg;
}

// Fits one method and fills everything but runtime.
void fit_and_score(Method method, const ExperimentSpec& spec, const TrialData& data,
                   DecisionContext& ctx, std::uint64_t method_seed, MethodResult* out) {
  Eigen::MatrixXd train_pred, test_pred;
  std::mt19937_64 rng(method_seed);
  const SubsampleRates rates;  // 50% rows, 50% features.
  switch (method) {
    case Method::kCart: {
      const RegressionTree tree = fit_mse_tree(data.x_train, data.c_train, spec.depth);
      train_pred = tree.predict_rows(data.x_train);
      test_pred = tree.predict_rows(data.x_test);
      out->n_trees = 1;
      break;
    }
    case Method::kSpot: {
      const RegressionTree tree =
          fit_spot_tree(data.x_train, data.c_train, spec.depth, ctx);
      train_pred = tree.predict_rows(data.x_train);
      test_pred = tree.predict_rows(data.x_test);
      out->n_trees = 1;
      break;
    }
    case Method::kCartForest:
    case Method::kSpotForest: {
      const TreeObjective objective = method == Method::kCartForest
                                          ? TreeObjective::kMse
                                          : TreeObjective::kSpo;
      const Forest forest = fit_forest(data.x_train, data.c_train, spec.depth,
                                       kForestSize, rates, objective, rng, &ctx);
      train_pred = forest.predict_rows(data.x_train);
      test_pred = forest.predict_rows(data.x_test);
      out->n_trees = static_cast<int>(forest.trees().size());
      break;
    }
    case Method::kMseBoost:
    case Method::kDboost: {
      const BoostConfig cfg = boost_config(spec, method_seed);
      const Ensemble ens = method == Method::kDboost
                               ? fit_dboost(data.x_train, data.c_train, ctx, cfg)
                               : fit_mse_boost(data.x_train, data.c_train, cfg);
      train_pred = predict_ensemble(ens, data.x_train);
      test_pred = predict_ensemble(ens, data.x_test);
      out->n_trees = ens.n_stages();
      out->stop_reason = to_token(ens.stop_reason);
      break;
    }
  }
  out->train_excess = excess_cost(ctx, train_pred, data.c_train);
  out->test_excess = excess_cost(ctx, test_pred, data.c_test);
  if (!std::isfinite(out->train_excess) || !std::isfinite(out->test_excess)) {
    throw std::runtime_error("non-finite excess cost");
  }
}

}  // namespace

TrialResult run_trial(const ExperimentSpec& spec, int trial_index,
                      const SolverSettings& settings) {
  spec.validate();
  if (trial_index < 0 || trial_index >= spec.trials) {
    throw std::invalid_argument("run_trial: trial_index out of range");
  }
  const std::uint64_t trial_seed = spec.seed ^ static_cast<std::uint64_t>(trial_index);
  const TrialData data = make_trial_data(spec, trial_seed);

  DecisionContext ctx(data.problem, settings);
  ctx.prime_oracle(data.c_train);
  ctx.prime_oracle(data.c_test);

  TrialResult result;
  result.trial_index = trial_index;
  // Canonical order, independent of the order methods were requested in.
  for (size_t idx = 0; idx < all_methods().size(); ++idx) {
    const Method method = all_methods()[idx];
    if (std::find(spec.methods.begin(), spec.methods.end(), method) ==
        spec.methods.end()) {
      continue;
    }
    MethodResult mr;
    mr.method = method;
    const std::uint64_t method_seed =
        splitmix64(trial_seed ^ method_salt(static_cast<int>(idx)));
    const auto started = std::chrono::steady_clock::now();
    try {
      fit_and_score(method, spec, data, ctx, method_seed, &mr);
    } catch (const std::exception& err) {
      mr.failed = true;
      mr.error = err.what();
      mr.train_excess = std::numeric_limits<double>::quiet_NaN();
      mr.test_excess = std::numeric_limits<double>::quiet_NaN();
      mr.stop_reason = "failed";
    }
    mr.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                 started)
                       .count();
    result.methods.push_back(std::move(mr));
  }
  return result;
}

MotivatingDetail run_motivating_detail(const ExperimentSpec& spec,
                                       const SolverSettings& settings) {
  ExperimentSpec local = spec;
  local.problem = Problem::kMotivating;
  local.validate();
  const std::uint64_t trial_seed = local.seed;  // Trial 0 stream.
  const TrialData data = make_trial_data(local, trial_seed);

  DecisionContext ctx(data.problem, settings);
  ctx.prime_oracle(data.c_train);

  // Same per-method seeds run_trial would use for trial 0.
  const auto seed_for = [&](Method method) {
    const auto& all = all_methods();
    const size_t idx = static_cast<size_t>(
        std::find(all.begin(), all.end(), method) - all.begin());
    return splitmix64(trial_seed ^ method_salt(static_cast<int>(idx)));
  };
  const Ensemble db = fit_dboost(data.x_train, data.c_train, ctx,
                                 boost_config(local, seed_for(Method::kDboost)));
  const Ensemble mse = fit_mse_boost(data.x_train, data.c_train,
                                     boost_config(local, seed_for(Method::kMseBoost)));

  MotivatingDetail detail;
  detail.dboost_loss_trace = db.loss_trace;
  detail.mse_loss_trace = mse.loss_trace;
  const auto excess_trace = [&](const Ensemble& ens) {
    std::vector<double> trace;
    Eigen::MatrixXd preds = ens.f0.transpose().replicate(data.x_train.rows(), 1);
    trace.push_back(excess_cost(ctx, preds, data.c_train));
    for (const Ensemble::Stage& stage : ens.stages) {
      preds += stage.beta * stage.tree.predict_rows(data.x_train);
      trace.push_back(excess_cost(ctx, preds, data.c_train));
    }
    return trace;
  };
  detail.dboost_excess_trace = excess_trace(db);
  detail.mse_excess_trace = excess_trace(mse);

  detail.grid_x.setLinSpaced(kMotivatingCurvePoints, 0.0, 1.0);
  Eigen::MatrixXd grid(kMotivatingCurvePoints, 1);
  grid.col(0) = detail.grid_x;
  detail.dboost_curve = predict_ensemble(db, grid);
  detail.mse_curve = predict_ensemble(mse, grid);
  detail.true_curve.resize(kMotivatingCurvePoints, 2);
  for (int i = 0; i < kMotivatingCurvePoints; ++i) {
    const double x = detail.grid_x[i];
    detail.true_curve(i, 0) = -x;
    detail.true_curve(i, 1) = -(x + std::sin(3.0 * x));
  }
  return detail;
}

}  // namespace dboost
