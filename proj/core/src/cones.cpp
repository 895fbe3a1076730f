// Copyright 2026, the dboost authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// see the LICENSE file for details.
#include "dboost/cones.hpp"

#include <stdexcept>
#include <utility>

namespace dboost {

namespace {

void check_dim(const ConeSpec& cone, Eigen::Index n) {
  if (cone.dim() != n) {
    throw std::invalid_argument("cone dimension " + std::to_string(cone.dim()) +
                                " does not match vector dimension " + std::to_string(n));
  }
}

}  // namespace

ConeSpec::ConeSpec(std::initializer_list<ConeBlock> blocks)
    : ConeSpec(std::vector<ConeBlock>(blocks)) {}

ConeSpec::ConeSpec(std::vector<ConeBlock> blocks) : blocks_(std::move(blocks)) {
  validate();
  for (const ConeBlock& b : blocks_) dim_ += b.dim;
}

void ConeSpec::validate() const {
  for (const ConeBlock& b : blocks_) {
    const Eigen::Index min_dim = b.kind == ConeBlock::Kind::Soc ? 2 : 1;
    if (b.dim < min_dim) {
      throw std::invalid_argument("cone block dimension must be at least " +
                                  std::to_string(min_dim));
    }
  }
}

bool ConeSpec::is_problem_cone() const {
  for (const ConeBlock& b : blocks_) {
    if (b.kind == ConeBlock::Kind::Free) return false;
  }
  return true;
}

ConeSpec dual(const ConeSpec& cone) {
  std::vector<ConeBlock> out;
  out.reserve(cone.blocks().size());
  for (const ConeBlock& b : cone.blocks()) {
    switch (b.kind) {
      case ConeBlock::Kind::Zero:
        out.push_back(free_cone(b.dim));
        break;
      case ConeBlock::Kind::Free:
        out.push_back(zero_cone(b.dim));
        break;
      case ConeBlock::Kind::NonNeg:
      case ConeBlock::Kind::Soc:
        out.push_back(b);
        break;
    }
  }
  return ConeSpec(std::move(out));
}

LinearMap::LinearMap(Eigen::MatrixXd mat) : mat_(std::move(mat)) {
  if (mat_.rows() != mat_.cols()) {
    throw std::invalid_argument("LinearMap requires a square matrix");
  }
}

Eigen::VectorXd LinearMap::apply(const Eigen::Ref<const Eigen::VectorXd>& v) const {
  if (v.size() != mat_.cols()) throw std::invalid_argument("LinearMap dimension mismatch");
  return mat_ * v;
}

Eigen::VectorXd LinearMap::apply_transpose(const Eigen::Ref<const Eigen::VectorXd>& v) const {
  if (v.size() != mat_.rows()) throw std::invalid_argument("LinearMap dimension mismatch");
  return mat_.transpose() * v;
}

void project_into(const ConeSpec& cone, const Eigen::Ref<const Eigen::VectorXd>& v,
                  Eigen::VectorXd& out) {
  check_dim(cone, v.size());
  out.resize(v.size());
  Eigen::Index at = 0;
  for (const ConeBlock& b : cone.blocks()) {
    auto vb = v.segment(at, b.dim);
    auto ob = out.segment(at, b.dim);
    switch (b.kind) {
      case ConeBlock::Kind::Zero:
        ob.setZero();
        break;
      case ConeBlock::Kind::Free:
        ob = vb;
        break;
      case ConeBlock::Kind::NonNeg:
        ob = vb.cwiseMax(0.0);
        break;
      case ConeBlock::Kind::Soc: {
        const double t = vb[0];
        const double rho = vb.tail(b.dim - 1).norm();
        if (rho <= t) {
          ob = vb;
        } else if (rho <= -t) {
          ob.setZero();
        } else {
          const double scale = 0.5 * (t + rho);
          ob[0] = scale;
          ob.tail(b.dim - 1) = (scale / rho) * vb.tail(b.dim - 1);
        }
        break;
      }
    }
    at += b.dim;
  }
}

Eigen::VectorXd project(const ConeSpec& cone, const Eigen::Ref<const Eigen::VectorXd>& v) {
  Eigen::VectorXd out;
  project_into(cone, v, out);
  return out;
}

void dprojection_into(const ConeSpec& cone, const Eigen::Ref<const Eigen::VectorXd>& v,
                      Eigen::MatrixXd& out) {
  check_dim(cone, v.size());
  out.setZero(v.size(), v.size());
  Eigen::Index at = 0;
  for (const ConeBlock& b : cone.blocks()) {
    auto vb = v.segment(at, b.dim);
    auto ob = out.block(at, at, b.dim, b.dim);
    switch (b.kind) {
      case ConeBlock::Kind::Zero:
        break;
      case ConeBlock::Kind::Free:
        ob.setIdentity();
        break;
      case ConeBlock::Kind::NonNeg:
        for (Eigen::Index i = 0; i < b.dim; ++i) ob(i, i) = vb[i] > 0.0 ? 1.0 : 0.0;
        break;
      case ConeBlock::Kind::Soc: {
        const double t = vb[0];
        const auto x = vb.tail(b.dim - 1);
        const double rho = x.norm();
        if (rho <= t) {
          ob.setIdentity();
        } else if (rho < -t) {
          // zero block, already set
        } else {
          const Eigen::VectorXd u = x / rho;
          ob(0, 0) = 0.5;
          ob.block(0, 1, 1, b.dim - 1) = 0.5 * u.transpose();
          ob.block(1, 0, b.dim - 1, 1) = 0.5 * u;
          ob.block(1, 1, b.dim - 1, b.dim - 1) =
              ((t + rho) / (2.0 * rho)) *
                  Eigen::MatrixXd::Identity(b.dim - 1, b.dim - 1) -
              (t / (2.0 * rho)) * (u * u.transpose());
        }
        break;
      }
    }
    at += b.dim;
  }
}

LinearMap dprojection(const ConeSpec& cone, const Eigen::Ref<const Eigen::VectorXd>& v) {
  Eigen::MatrixXd out;
  dprojection_into(cone, v, out);
  return LinearMap(std::move(out));
}

Eigen::VectorXd project_C(const Eigen::Ref<const Eigen::VectorXd>& w, Eigen::Index n_free,
                          const ConeSpec& cone) {
  if (n_free < 0 || w.size() != n_free + cone.dim()) {
    throw std::invalid_argument("project_C dimension mismatch");
  }
  Eigen::VectorXd out(w.size());
  out.head(n_free) = w.head(n_free);
  Eigen::VectorXd tail;
  project_into(dual(cone), w.tail(cone.dim()), tail);
  out.tail(cone.dim()) = tail;
  return out;
}

LinearMap dprojection_C(const Eigen::Ref<const Eigen::VectorXd>& w, Eigen::Index n_free,
                        const ConeSpec& cone) {
  if (n_free < 0 || w.size() != n_free + cone.dim()) {
    throw std::invalid_argument("dprojection_C dimension mismatch");
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(w.size(), w.size());
  out.topLeftCorner(n_free, n_free).setIdentity();
  Eigen::MatrixXd tail;
  dprojection_into(dual(cone), w.tail(cone.dim()), tail);
  out.bottomRightCorner(cone.dim(), cone.dim()) = tail;
  return LinearMap(std::move(out));
}

}  // namespace dboost
