// Copyright 2026, the dboost authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// see the LICENSE file for details.
#include "dboost/selfcheck.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "dboost/cones.hpp"
#include "dboost/experiments.hpp"
#include "dboost/qcp.hpp"
#include "dboost/rng.hpp"
#include "dboost/spo.hpp"

namespace dboost {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Harness {
  std::vector<CheckResult> results;

  void run(const std::string& name, const std::function<std::string()>& body) {
    CheckResult r;
    r.name = name;
    try {
      r.detail = body();  // Empty string means pass.
      r.passed = r.detail.empty();
    } catch (const std::exception& err) {
      r.passed = false;
      r.detail = std::string("exception: ") + err.what();
    }
    results.push_back(std::move(r));
  }
};

std::string describe(const std::string& what, double value, double bound) {
  std::ostringstream out;
  out << what << " = " << value << " exceeds " << bound;
  return out.str();
}

ConeSpec mixed_cone() {
  return ConeSpec{zero_cone(2), nonneg_cone(3), soc_cone(3)};
}

VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng, double scale = 2.0) {
  std::normal_distribution<double> normal(0.0, scale);
  VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

// A point with margin from every projection kink: NonNeg coordinates away
// from zero, Soc blocks away from both boundary and apex.
VectorXd random_regular_point(const ConeSpec& cone, std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    VectorXd v = random_vector(cone.dim(), rng);
    bool ok = true;
    Eigen::Index at = 0;
    for (const ConeBlock& blk : cone.blocks()) {
      auto seg = v.segment(at, blk.dim);
      if (blk.kind == ConeBlock::Kind::NonNeg) {
        ok = ok && seg.cwiseAbs().minCoeff() > 1e-2;
      } else if (blk.kind == ConeBlock::Kind::Soc) {
        const double t = seg[0];
        const double rho = seg.tail(blk.dim - 1).norm();
        ok = ok && rho > 1e-2 && std::abs(rho - std::abs(t)) > 1e-2;
      }
      at += blk.dim;
    }
    if (ok) return v;
  }
  throw std::runtime_error("no regular cone point found");
}

std::string check_idempotence(std::mt19937_64& rng) {
  const ConeSpec cone = mixed_cone();
  for (int i = 0; i < 200; ++i) {
    const VectorXd v = random_vector(cone.dim(), rng);
    const VectorXd p = project(cone, v);
    const double drift = (project(cone, p) - p).norm();
    if (drift > 1e-12) return describe("||P(P(v)) - P(v)||", drift, 1e-12);
  }
  return "";
}

std::string check_moreau(std::mt19937_64& rng) {
  const ConeSpec cone = mixed_cone();
  const ConeSpec cone_dual = dual(cone);
  for (int i = 0; i < 200; ++i) {
    const VectorXd v = random_vector(cone.dim(), rng);
    const VectorXd onto = project(cone, v);
    const VectorXd polar = v - onto;  // Should equal -P_{K*}(-v).
    const double split = (polar + project(cone_dual, -v)).norm();
    if (split > 1e-12 * std::max(1.0, v.norm())) {
      return describe("Moreau residual", split, 1e-12);
    }
    const double ortho = std::abs(onto.dot(polar));
    if (ortho > 1e-12 * std::max(1.0, v.squaredNorm())) {
      return describe("Moreau orthogonality", ortho, 1e-12);
    }
  }
  return "";
}

std::string check_nonexpansive(std::mt19937_64& rng) {
  const ConeSpec cone = mixed_cone();
  for (int i = 0; i < 200; ++i) {
    const VectorXd u = random_vector(cone.dim(), rng);
    const VectorXd v = random_vector(cone.dim(), rng);
    const double num = (project(cone, u) - project(cone, v)).norm();
    const double den = (u - v).norm();
    if (num > den + 1e-12) return describe("projection expansion", num - den, 1e-12);
  }
  return "";
}

std::string check_jacobian_fd(std::mt19937_64& rng) {
  const ConeSpec cone = mixed_cone();
  const double eps = 1e-7;
  for (int i = 0; i < 100; ++i) {
    const VectorXd v = random_regular_point(cone, rng);
    const LinearMap jac = dprojection(cone, v);
    VectorXd h = random_vector(cone.dim(), rng, 1.0);
    h.normalize();
    const VectorXd fd = (project(cone, v + eps * h) - project(cone, v - eps * h)) / (2 * eps);
    const double err = (jac.apply(h) - fd).norm();
    if (err > 1e-5) return describe("Jacobian FD mismatch", err, 1e-5);
  }
  return "";
}

std::string check_fixed_point_certificate(std::uint64_t seed) {
  SolverSettings settings;
  std::vector<std::pair<std::string, QcpProblem>> instances;
  {
    std::mt19937_64 rng(splitmix64(seed ^ 0x11ULL));
    instances.emplace_back("network_flow", build_network_flow(rng).problem);
  }
  {
    std::mt19937_64 rng(splitmix64(seed ^ 0x22ULL));
    instances.emplace_back("qp", build_qp(rng, 8).problem);
  }
  {
    std::mt19937_64 rng(splitmix64(seed ^ 0x33ULL));
    instances.emplace_back("portfolio", build_portfolio(rng, 5).problem);
  }
  instances.emplace_back("two_asset", motivating_problem());

  std::mt19937_64 rng(splitmix64(seed ^ 0x44ULL));
  for (auto& [name, problem] : instances) {
    problem.c = random_vector(problem.dz(), rng, 1.0);
    const AssembledSystem sys = assemble(problem);
    const QcpSolution sol = solve(sys, settings);
    const double drift =
        (fixed_point_step(sol.w, sys, problem.dz(), problem.cone) - sol.w).norm();
    if (drift > 10.0 * settings.tol_abs) {
      return name + ": " + describe("||F(w*) - w*||", drift, 10.0 * settings.tol_abs);
    }
  }
  return "";
}

std::string check_solver_determinism(std::uint64_t seed) {
  std::mt19937_64 rng(splitmix64(seed ^ 0x55ULL));
  QcpProblem problem = build_qp(rng, 8).problem;
  problem.c = random_vector(problem.dz(), rng, 1.0);
  const QcpSolution first = solve(problem);
  const QcpSolution second = solve(problem);
  if (first.z != second.z || first.y != second.y || first.iterations != second.iterations) {
    return "identical solves disagree";
  }
  return "";
}

std::string check_gradient_fd(std::uint64_t seed) {
  SolverSettings settings;
  settings.tol_abs = 1e-11;
  settings.tol_rel = 1e-11;
  std::mt19937_64 rng(splitmix64(seed ^ 0x66ULL));
  const BuiltProblem built = build_qp(rng, 6);
  const DecisionContext ctx(built.problem, settings);
  for (int attempt = 0; attempt < 50; ++attempt) {
    const VectorXd c_hat = random_vector(ctx.dz(), rng, 1.0);
    const VectorXd c = random_vector(ctx.dz(), rng, 1.0);
    bool degenerate = false;
    const VectorXd grad = qspo_grad(ctx, c_hat, c, nullptr, &degenerate);
    if (degenerate) continue;
    const double h = 1e-6;
    VectorXd fd(ctx.dz());
    VectorXd probe = c_hat;
    for (Eigen::Index k = 0; k < ctx.dz(); ++k) {
      probe[k] = c_hat[k] + h;
      const double up = qspo_loss(ctx, probe, c);
      probe[k] = c_hat[k] - h;
      const double down = qspo_loss(ctx, probe, c);
      probe[k] = c_hat[k];
      fd[k] = (up - down) / (2 * h);
    }
    const double err = (fd - grad).norm();
    const double bound = 1e-4 * std::max(1e-2, grad.norm());
    if (err > bound) return describe("loss gradient FD mismatch", err, bound);
    return "";
  }
  return "no non-degenerate instance found";
}

std::string check_trial_determinism(std::uint64_t seed) {
  ExperimentSpec spec;
  spec.problem = Problem::kMotivating;
  spec.m_train = 24;
  spec.m_test = 12;
  spec.trials = 2;
  spec.depth = 1;
  spec.seed = seed;
  spec.methods = {Method::kCart, Method::kMseBoost, Method::kDboost};

  const TrialResult once = run_trial(spec, 0);
  const TrialResult interleaved = run_trial(spec, 1);
  (void)interleaved;
  const TrialResult again = run_trial(spec, 0);
  if (once.methods.size() != again.methods.size()) return "method count changed";
  for (size_t i = 0; i < once.methods.size(); ++i) {
    const MethodResult& a = once.methods[i];
    const MethodResult& b = again.methods[i];
    if (a.failed || b.failed) return std::string("method failed: ") + a.error + b.error;
    if (a.train_excess != b.train_excess || a.test_excess != b.test_excess ||
        a.n_trees != b.n_trees || a.stop_reason != b.stop_reason) {
      return std::string("replay drift on ") + to_token(a.method);
    }
  }
  return "";
}

}  // namespace

std::vector<CheckResult> run_selfchecks(std::uint64_t seed) {
  Harness h;
  std::mt19937_64 cone_rng(splitmix64(seed));
  h.run("cone_projection_idempotent", [&] { return check_idempotence(cone_rng); });
  h.run("cone_moreau_decomposition", [&] { return check_moreau(cone_rng); });
  h.run("cone_projection_nonexpansive", [&] { return check_nonexpansive(cone_rng); });
  h.run("cone_jacobian_matches_fd", [&] { return check_jacobian_fd(cone_rng); });
  h.run("solver_fixed_point_certificate", [&] { return check_fixed_point_certificate(seed); });
  h.run("solver_deterministic_replay", [&] { return check_solver_determinism(seed); });
  h.run("loss_gradient_matches_fd", [&] { return check_gradient_fd(seed); });
  h.run("trial_deterministic_replay", [&] { return check_trial_determinism(seed); });
  return h.results;
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const CheckResult& r : results) {
    if (!r.passed) return false;
  }
  return true;
}

}  // namespace dboost
