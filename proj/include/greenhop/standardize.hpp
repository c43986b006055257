#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "greenhop/errors.hpp"

namespace greenhop {

/// Per-dimension z-score parameters fitted on training features. Uses the
/// population standard deviation; dimensions with zero spread are stored as
/// std 0 and passed through centered but unscaled.
struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd std_dev;

  static Standardizer fit(const Eigen::MatrixXd& features) {
    if (features.rows() == 0 || features.cols() == 0)
      throw InvalidInputError("standardizer: empty feature matrix");
    Standardizer s;
    const double n = static_cast<double>(features.rows());
    s.mean = features.colwise().sum() / n;
    Eigen::MatrixXd centered = features.rowwise() - s.mean.transpose();
    s.std_dev = (centered.array().square().colwise().sum() / n).sqrt();
    return s;
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
    if (x.size() != mean.size())
      throw InvalidInputError("standardizer: dimension mismatch");
    Eigen::VectorXd out = x - mean;
    for (Eigen::Index i = 0; i < out.size(); ++i)
      if (std_dev(i) > 0.0) out(i) /= std_dev(i);
    return out;
  }

  void apply_in_place(Eigen::MatrixXd& features) const {
    if (features.cols() != mean.size())
      throw InvalidInputError("standardizer: dimension mismatch");
    features.rowwise() -= mean.transpose();
    for (Eigen::Index i = 0; i < std_dev.size(); ++i)
      if (std_dev(i) > 0.0) features.col(i) /= std_dev(i);
  }
};

}  // namespace greenhop
