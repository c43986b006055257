#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "greenhop/errors.hpp"
#include "greenhop/strings.hpp"

namespace greenhop {

/// Linear least-squares regression onto one-hot class targets. `weights` is
/// (D+1) x C with the bias row first, so scores = weights^T [1; x].
struct LlsrModel {
  Eigen::MatrixXd weights;

  Eigen::Index feature_dim() const { return weights.rows() - 1; }
  Eigen::Index n_classes() const { return weights.cols(); }
};

/// Solves the ridge-regularized normal equations. The regularizer skips the
/// bias row. The solve must reproduce the right-hand side to a relative
/// Frobenius tolerance of 1e-6, otherwise a NumericError reports the
/// ill-conditioning instead of returning a silently bad classifier.
inline LlsrModel fit_llsr(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                          int n_classes, double ridge) {
  const Eigen::Index n = features.rows();
  const Eigen::Index d = features.cols();
  if (n < 1 || d < 1) throw InvalidInputError("llsr: empty training matrix");
  if (n_classes < 2) throw InvalidInputError("llsr: need at least two classes");
  if (labels.size() != static_cast<std::size_t>(n))
    throw InvalidInputError("llsr: labels do not match rows");
  if (!(ridge >= 0.0)) throw InvalidInputError("llsr: ridge must be non-negative");

  // Normal matrix of the augmented design [1 X], assembled blockwise so the
  // augmented matrix itself is never materialized.
  Eigen::MatrixXd a(d + 1, d + 1);
  const Eigen::RowVectorXd column_sums = features.colwise().sum();
  a(0, 0) = static_cast<double>(n);
  a.block(0, 1, 1, d) = column_sums;
  a.block(1, 0, d, 1) = column_sums.transpose();
  a.block(1, 1, d, d).noalias() = features.transpose() * features;
  for (Eigen::Index i = 1; i <= d; ++i) a(i, i) += ridge;

  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(d + 1, n_classes);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    if (y < 0 || y >= n_classes) throw InvalidInputError("llsr: label out of range");
    b(0, y) += 1.0;
    b.block(1, y, d, 1) += features.row(i).transpose();
  }

  LlsrModel model;
  model.weights = a.ldlt().solve(b);

  const double residual = (a.selfadjointView<Eigen::Lower>() * model.weights - b).norm();
  if (!model.weights.allFinite() || residual > 1e-6 * b.norm())
    throw NumericError(
        "llsr: normal equations solve failed the residual check (relative residual " +
        format_double(residual / b.norm()) + "); increase ridge to regularize");
  return model;
}

inline Eigen::VectorXd llsr_scores(const LlsrModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.feature_dim())
    throw InvalidInputError("llsr: feature dimension mismatch");
  return model.weights.row(0).transpose() +
         model.weights.bottomRows(model.feature_dim()).transpose() * x;
}

/// Argmax over class scores; ties resolve to the lowest class index.
inline int llsr_predict(const LlsrModel& model, const Eigen::VectorXd& x) {
  const Eigen::VectorXd scores = llsr_scores(model, x);
  Eigen::Index best = 0;
  for (Eigen::Index c = 1; c < scores.size(); ++c)
    if (scores(c) > scores(best)) best = c;
  return static_cast<int>(best);
}

}  // namespace greenhop
