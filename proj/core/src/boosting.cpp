// Copyright 2026, the dboost authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// see the LICENSE file for details.
#include "dboost/boosting.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>
#include <utility>

#include "dboost/rng.hpp"

namespace dboost {
namespace {

constexpr double kLossGrace = 1e-6;

void check_boost_args(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                      const BoostConfig& cfg) {
  if (X.rows() != Y.rows() || X.rows() < 1) {
    throw std::invalid_argument("boosting: X and targets must align and be non-empty");
  }
  if (cfg.max_stages < 1) {
    throw std::invalid_argument("boosting: max_stages must be positive");
  }
  if (cfg.max_depth < 0 || cfg.max_depth > 2) {
    throw std::invalid_argument("boosting: max_depth must be 0, 1, or 2");
  }
  if (cfg.eps_beta <= 0.0 || cfg.eps_beta >= 1.0 || cfg.eps_loss <= 0.0 ||
      cfg.eps_loss >= 1.0) {
    throw std::invalid_argument("boosting: stopping thresholds must lie in (0, 1)");
  }
  if (cfg.line_search.beta_max <= 0.0 || cfg.line_search.grid_points < 2 ||
      cfg.line_search.refine_rel_tol <= 0.0 || cfg.line_search.max_refine_iters < 0) {
    throw std::invalid_argument("boosting: malformed line-search settings");
  }
  if (cfg.f0_restarts < 0) {
    throw std::invalid_argument("boosting: f0_restarts must be nonnegative");
  }
}

Eigen::VectorXd column_median(const Eigen::MatrixXd& Y) {
  Eigen::VectorXd med(Y.cols());
  std::vector<double> col(static_cast<size_t>(Y.rows()));
  for (Eigen::Index j = 0; j < Y.cols(); ++j) {
    for (Eigen::Index i = 0; i < Y.rows(); ++i) col[static_cast<size_t>(i)] = Y(i, j);
    std::sort(col.begin(), col.end());
    const size_t n = col.size();
    med[j] = (n % 2 == 1) ? col[n / 2] : 0.5 * (col[n / 2 - 1] + col[n / 2]);
  }
  return med;
}

// Base-prediction candidates: column mean, column median, then seeded
// perturbations mean + sd .* U(-1, 1). Order matters: ties keep the earliest.
std::vector<Eigen::VectorXd> f0_candidates(const Eigen::MatrixXd& Y,
                                           const BoostConfig& cfg) {
  const double m = static_cast<double>(Y.rows());
  const Eigen::VectorXd mean = Y.colwise().mean().transpose();
  Eigen::VectorXd sd(Y.cols());
  for (Eigen::Index j = 0; j < Y.cols(); ++j) {
    sd[j] = std::sqrt((Y.col(j).array() - mean[j]).square().sum() / m);
  }
  std::vector<Eigen::VectorXd> cands;
  cands.reserve(static_cast<size_t>(2 + cfg.f0_restarts));
  cands.push_back(mean);
  cands.push_back(column_median(Y));
  std::mt19937_64 rng(splitmix64(cfg.seed));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int r = 0; r < cfg.f0_restarts; ++r) {
    Eigen::VectorXd cand(Y.cols());
    for (Eigen::Index j = 0; j < Y.cols(); ++j) cand[j] = mean[j] + sd[j] * unit(rng);
    cands.push_back(std::move(cand));
  }
  return cands;
}

}  // namespace

const char* to_token(StopReason reason) {
  switch (reason) {
    case StopReason::kMaxStages:
      return "max_stages";
    case StopReason::kBetaBelowThreshold:
      return "beta_below_threshold";
    case StopReason::kSmallLossChange:
      return "small_loss_change";
  }
  throw std::logic_error("unknown stop reason");
}

StopReason stop_reason_from_token(const std::string& token) {
  if (token == "max_stages") return StopReason::kMaxStages;
  if (token == "beta_below_threshold") return StopReason::kBetaBelowThreshold;
  if (token == "small_loss_change") return StopReason::kSmallLossChange;
  throw std::invalid_argument("unknown stop reason token: " + token);
}

Eigen::VectorXd predict_ensemble(const Ensemble& ens, const Eigen::VectorXd& x) {
  Eigen::VectorXd out = ens.f0;
  for (const Ensemble::Stage& stage : ens.stages) {
    out += stage.beta * stage.tree.predict(x);
  }
  return out;
}

Eigen::MatrixXd predict_ensemble(const Ensemble& ens, const Eigen::MatrixXd& X) {
  Eigen::MatrixXd out = ens.f0.transpose().replicate(X.rows(), 1);
  for (const Ensemble::Stage& stage : ens.stages) {
    out += stage.beta * stage.tree.predict_rows(X);
  }
  return out;
}

namespace detail {

LineSearchResult line_search_minimum(const std::function<double(double)>& eval,
                                     const LineSearchSettings& settings) {
  const int n = settings.grid_points;
  const double spacing = settings.beta_max / static_cast<double>(n - 1);

  LineSearchResult best;
  best.beta = 0.0;
  best.value = eval(0.0);
  for (int j = 1; j < n; ++j) {
    const double beta = spacing * static_cast<double>(j);
    const double v = eval(beta);
    if (v < best.value) {
      best.beta = beta;
      best.value = v;
    }
  }

  // Golden-section refinement around the incumbent grid point.
  double a = std::max(0.0, best.beta - spacing);
  double b = std::min(settings.beta_max, best.beta + spacing);
  const double tol = settings.refine_rel_tol * spacing;
  int evals = 0;
  const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
  auto tracked = [&](double beta) {
    const double v = eval(beta);
    ++evals;
    if (v < best.value) {
      best.beta = beta;
      best.value = v;
    }
    return v;
  };
  if (b - a > tol && settings.max_refine_iters >= 2) {
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = tracked(x1);
    double f2 = tracked(x2);
    while (b - a > tol && evals < settings.max_refine_iters) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - invphi * (b - a);
        f1 = tracked(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + invphi * (b - a);
        f2 = tracked(x2);
      }
    }
  }
  return best;
}

Ensemble fit_additive(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                      const BoostConfig& cfg, const AdditiveLoss& loss) {
  check_boost_args(X, Y, cfg);

  Ensemble ens;
  double best_loss = 0.0;
  bool have_best = false;
  for (const Eigen::VectorXd& cand : f0_candidates(Y, cfg)) {
    const double l = loss.constant_loss(cand);
    if (!have_best || l < best_loss) {
      have_best = true;
      best_loss = l;
      ens.f0 = cand;
    }
  }

  Eigen::MatrixXd preds = ens.f0.transpose().replicate(X.rows(), 1);
  ens.loss_trace.push_back(best_loss);
  double prev_loss = best_loss;

  ens.stop_reason = StopReason::kMaxStages;
  for (int stage = 0; stage < cfg.max_stages; ++stage) {
    const Eigen::MatrixXd residuals = loss.residuals(preds);
    RegressionTree tree = fit_mse_tree(X, residuals, cfg.max_depth, cfg.split_grid);
    const Eigen::MatrixXd H = tree.predict_rows(X);
    const double beta = loss.step_size(preds, H);
    ens.last_beta = beta;
    if (beta < cfg.eps_beta) {
      ens.stop_reason = StopReason::kBetaBelowThreshold;
      break;  // The stage is discarded.
    }
    preds += beta * H;
    ens.stages.push_back(Ensemble::Stage{std::move(tree), beta});
    const double l = loss.total_loss(preds);
    ens.loss_trace.push_back(l);
    const double rel = prev_loss > 0.0 ? std::abs(l - prev_loss) / prev_loss : 0.0;
    ens.last_rel_change = rel;
    prev_loss = l;
    if (rel < cfg.eps_loss) {
      ens.stop_reason = StopReason::kSmallLossChange;
      break;
    }
  }
  return ens;
}

}  // namespace detail

double line_search_beta(const DecisionContext& ctx,
                        const Eigen::Ref<const Eigen::MatrixXd>& predictions,
                        const Eigen::Ref<const Eigen::MatrixXd>& tree_outputs,
                        const Eigen::Ref<const Eigen::MatrixXd>& costs,
                        const LineSearchSettings& grid) {
  const Eigen::Index m = predictions.rows();
  if (tree_outputs.rows() != m || costs.rows() != m || m < 1 ||
      predictions.cols() != ctx.dz() || tree_outputs.cols() != ctx.dz() ||
      costs.cols() != ctx.dz()) {
    throw std::invalid_argument("line_search_beta: row/column mismatch");
  }
  std::vector<Eigen::VectorXd> warm(static_cast<size_t>(m));
  Eigen::VectorXd c_hat(ctx.dz());
  const auto eval = [&](double beta) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      c_hat = predictions.row(i).transpose() + beta * tree_outputs.row(i).transpose();
      total += qspo_loss(ctx, c_hat, costs.row(i).transpose(), &warm[static_cast<size_t>(i)]);
    }
    return total;
  };
  return detail::line_search_minimum(eval, grid).beta;
}

Ensemble fit_dboost(const Eigen::MatrixXd& X, const Eigen::MatrixXd& costs,
                    DecisionContext& ctx, const BoostConfig& cfg) {
  if (costs.cols() != ctx.dz()) {
    throw std::invalid_argument("fit_dboost: cost columns must equal d_z");
  }
  check_boost_args(X, costs, cfg);
  ctx.prime_oracle(costs);

  const Eigen::Index m = costs.rows();
  const Eigen::MatrixXd& P = ctx.problem().P;
  // Per-sample consolidated iterates, chained across every solve the fit makes.
  std::vector<Eigen::VectorXd> warm(static_cast<size_t>(m));

  // Individual solver failures are tolerated (zero residual, skipped loss
  // term) until they exceed 1% of the samples, then the fit aborts.
  auto failed = std::make_shared<std::vector<bool>>(static_cast<size_t>(m), false);
  const auto note_failure = [failed, m](Eigen::Index i, const SolverError& err) {
    (*failed)[static_cast<size_t>(i)] = true;
    const Eigen::Index bad = static_cast<Eigen::Index>(
        std::count(failed->begin(), failed->end(), true));
    if (100 * bad > m) {
      throw SolverError("fit_dboost: solver failed on " + std::to_string(bad) + " of " +
                        std::to_string(m) + " samples (last: " + err.what() + ")");
    }
  };

  detail::AdditiveLoss loss;
  // A constant prediction solves once and prices the one decision against
  // every realized cost; identical to summing qspo_loss sample by sample.
  loss.constant_loss = [&](const Eigen::VectorXd& cand) {
    Eigen::VectorXd w;
    const Eigen::VectorXd z = ctx.solve(cand, &w).z;
    const double quad = 0.5 * z.dot(P * z);
    double total = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      double l = quad + costs.row(i).dot(z) - ctx.oracle_objective(costs.row(i).transpose());
      if (l < 0.0) {
        if (l < -kLossGrace) {
          throw SolverError("constant-prediction loss below the tolerance floor");
        }
        l = 0.0;
      }
      total += l;
    }
    return total;
  };
  loss.total_loss = [&, note_failure](const Eigen::MatrixXd& preds) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      try {
        total += qspo_loss(ctx, preds.row(i).transpose(), costs.row(i).transpose(),
                           &warm[static_cast<size_t>(i)]);
      } catch (const MaxIterationsExceeded& err) {
        note_failure(i, err);
      }
    }
    return total;
  };
  loss.residuals = [&, note_failure](const Eigen::MatrixXd& preds) {
    Eigen::MatrixXd R(m, ctx.dz());
    for (Eigen::Index i = 0; i < m; ++i) {
      try {
        R.row(i) = -qspo_grad(ctx, preds.row(i).transpose(), costs.row(i).transpose(),
                              &warm[static_cast<size_t>(i)])
                        .transpose();
      } catch (const MaxIterationsExceeded& err) {
        R.row(i).setZero();
        note_failure(i, err);
      }
    }
    return R;
  };
  loss.step_size = [&](const Eigen::MatrixXd& preds, const Eigen::MatrixXd& H) {
    return line_search_beta(ctx, preds, H, costs, cfg.line_search);
  };
  return detail::fit_additive(X, costs, cfg, loss);
}

Ensemble fit_mse_boost(const Eigen::MatrixXd& X, const Eigen::MatrixXd& targets,
                       const BoostConfig& cfg) {
  check_boost_args(X, targets, cfg);
  detail::AdditiveLoss loss;
  loss.constant_loss = [&](const Eigen::VectorXd& cand) {
    return (targets.rowwise() - cand.transpose()).squaredNorm();
  };
  loss.total_loss = [&](const Eigen::MatrixXd& preds) {
    return (targets - preds).squaredNorm();
  };
  loss.residuals = [&](const Eigen::MatrixXd& preds) {
    return Eigen::MatrixXd(targets - preds);
  };
  loss.step_size = [&](const Eigen::MatrixXd& preds, const Eigen::MatrixXd& H) {
    const double hh = H.squaredNorm();
    if (hh <= 0.0) return 0.0;
    const double rh = ((targets - preds).array() * H.array()).sum();
    return std::max(0.0, rh / hh);
  };
  return detail::fit_additive(X, targets, cfg, loss);
}

}  // namespace dboost
