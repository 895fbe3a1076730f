// Copyright 2026, the dboost authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// see the LICENSE file for details.
#ifndef DBOOST_CONES_HPP_
#define DBOOST_CONES_HPP_

#include <Eigen/Core>

#include <initializer_list>
#include <vector>

namespace dboost {

// One block of a cone product. Soc blocks use the (t, x) layout: the scalar
// component comes first, so dim >= 2.
struct ConeBlock {
  enum class Kind { Zero, NonNeg, Soc, Free };
  Kind kind = Kind::Zero;
  Eigen::Index dim = 0;
};

inline ConeBlock zero_cone(Eigen::Index dim) { return {ConeBlock::Kind::Zero, dim}; }
inline ConeBlock nonneg_cone(Eigen::Index dim) { return {ConeBlock::Kind::NonNeg, dim}; }
inline ConeBlock soc_cone(Eigen::Index dim) { return {ConeBlock::Kind::Soc, dim}; }
inline ConeBlock free_cone(Eigen::Index dim) { return {ConeBlock::Kind::Free, dim}; }

// Ordered product of cone blocks. Free blocks only arise through dual();
// problem data uses Zero, NonNeg and Soc.
class ConeSpec {
 public:
  ConeSpec() = default;
  ConeSpec(std::initializer_list<ConeBlock> blocks);
  explicit ConeSpec(std::vector<ConeBlock> blocks);

  const std::vector<ConeBlock>& blocks() const { return blocks_; }
  Eigen::Index dim() const { return dim_; }
  bool empty() const { return blocks_.empty(); }

  // True when every block is Zero, NonNeg or Soc.
  bool is_problem_cone() const;

 private:
  void validate() const;

  std::vector<ConeBlock> blocks_;
  Eigen::Index dim_ = 0;
};

ConeSpec dual(const ConeSpec& cone);

// Dense square matrix acting on vectors of a fixed dimension. Projection
// Jacobians are block diagonal by cone block.
class LinearMap {
 public:
  LinearMap() = default;
  explicit LinearMap(Eigen::MatrixXd mat);

  Eigen::Index dim() const { return mat_.rows(); }
  const Eigen::MatrixXd& matrix() const { return mat_; }
  Eigen::MatrixXd& matrix() { return mat_; }

  Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& v) const;
  Eigen::VectorXd apply_transpose(const Eigen::Ref<const Eigen::VectorXd>& v) const;

 private:
  Eigen::MatrixXd mat_;
};

// Euclidean projection onto the cone.
Eigen::VectorXd project(const ConeSpec& cone, const Eigen::Ref<const Eigen::VectorXd>& v);
void project_into(const ConeSpec& cone, const Eigen::Ref<const Eigen::VectorXd>& v,
                  Eigen::VectorXd& out);

// Jacobian of the projection at v. At non-differentiable points the
// one-sided limit from the region containing v + 1e-12 * e_t is used for Soc
// blocks, and inactive (zero) coordinates of NonNeg blocks map to 0.
LinearMap dprojection(const ConeSpec& cone, const Eigen::Ref<const Eigen::VectorXd>& v);
void dprojection_into(const ConeSpec& cone, const Eigen::Ref<const Eigen::VectorXd>& v,
                      Eigen::MatrixXd& out);

// Projection onto R^n_free x dual(cone), the set the consolidated primal-dual
// iterate lives in: identity on the first n_free coordinates, dual-cone
// projection on the rest.
Eigen::VectorXd project_C(const Eigen::Ref<const Eigen::VectorXd>& w, Eigen::Index n_free,
                          const ConeSpec& cone);
LinearMap dprojection_C(const Eigen::Ref<const Eigen::VectorXd>& w, Eigen::Index n_free,
                        const ConeSpec& cone);

}  // namespace dboost

#endif  // DBOOST_CONES_HPP_
