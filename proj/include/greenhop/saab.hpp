#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "greenhop/descriptor.hpp"
#include "greenhop/errors.hpp"

namespace greenhop {

/// Data-driven orthonormal 24x24 filter bank: one constant DC kernel plus 23
/// AC kernels obtained from a PCA of DC-removed descriptors.
struct SaabTransform {
  using Matrix = Eigen::Matrix<double, kDescriptorDim, kDescriptorDim>;

  Matrix matrix = Matrix::Zero();         // rows are kernels; row 0 is DC
  Descriptor energies = Descriptor::Zero();  // DC mean-square response, then eigenvalues
};

inline Descriptor saab_dc_kernel() {
  return Descriptor::Constant(1.0 / std::sqrt(static_cast<double>(kDescriptorDim)));
}

/// Streaming second-moment accumulator for the Saab fit. Per-sample
/// accumulators can be filled in parallel and merged in a fixed order, which
/// keeps training deterministic regardless of the worker count.
class SaabAccumulator {
 public:
  SaabAccumulator() : moment_(SaabTransform::Matrix::Zero()) {}

  void add(const Descriptor& d) {
    const Descriptor dc = saab_dc_kernel();
    const double dc_response = dc.dot(d);
    const Descriptor ac = d - dc_response * dc;
    moment_.selfadjointView<Eigen::Lower>().rankUpdate(ac);
    dc_square_sum_ += dc_response * dc_response;
    ++count_;
  }

  void merge(const SaabAccumulator& other) {
    moment_ += other.moment_;
    dc_square_sum_ += other.dc_square_sum_;
    count_ += other.count_;
  }

  std::size_t count() const { return count_; }

  /// Eigendecomposes the DC-removed second moment restricted to the 23-D
  /// subspace orthogonal to DC. AC kernels come out in descending eigenvalue
  /// order with the first non-negligible component made positive. Throws
  /// NumericError when the accumulated descriptors do not span that subspace.
  SaabTransform finalize() const {
    constexpr int dim = kDescriptorDim;
    if (count_ < static_cast<std::size_t>(dim))
      throw NumericError("saab fit requires at least " + std::to_string(dim) +
                         " descriptors, got " + std::to_string(count_));

    SaabTransform::Matrix moment = moment_.selfadjointView<Eigen::Lower>();
    moment /= static_cast<double>(count_);

    // Householder basis of the DC-orthogonal subspace: H maps e0 to the DC
    // kernel, so its remaining columns are an orthonormal basis of dc-perp.
    const Descriptor dc = saab_dc_kernel();
    Descriptor v = -dc;
    v(0) += 1.0;  // e0 - dc
    const SaabTransform::Matrix householder =
        SaabTransform::Matrix::Identity() - (2.0 / v.squaredNorm()) * (v * v.transpose());
    const Eigen::Matrix<double, dim, dim - 1> basis = householder.rightCols<dim - 1>();

    const Eigen::Matrix<double, dim - 1, dim - 1> reduced =
        basis.transpose() * moment * basis;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, dim - 1, dim - 1>> solver(reduced);
    if (solver.info() != Eigen::Success)
      throw NumericError("saab fit: eigendecomposition failed to converge");

    const auto& eigenvalues = solver.eigenvalues();  // ascending
    const double max_eigen = std::max(eigenvalues(dim - 2), 0.0);
    const double tol = max_eigen * 1e-10;
    int rank = 0;
    for (int i = 0; i < dim - 1; ++i)
      if (eigenvalues(i) > tol) ++rank;
    if (rank < dim - 1)
      throw NumericError("saab fit: DC-removed descriptors span rank " + std::to_string(rank) +
                         ", need " + std::to_string(dim - 1));

    SaabTransform t;
    t.matrix.row(0) = dc.transpose();
    t.energies(0) = dc_square_sum_ / static_cast<double>(count_);
    for (int r = 0; r < dim - 1; ++r) {
      const int src = dim - 2 - r;  // descending eigenvalue order
      Descriptor kernel = basis * solver.eigenvectors().col(src);
      for (int i = 0; i < dim; ++i) {
        if (std::abs(kernel(i)) > 1e-12) {
          if (kernel(i) < 0.0) kernel = -kernel;
          break;
        }
      }
      t.matrix.row(r + 1) = kernel.transpose();
      t.energies(r + 1) = std::max(eigenvalues(src), 0.0);
    }
    return t;
  }

 private:
  SaabTransform::Matrix moment_;  // lower triangle holds the running sum
  double dc_square_sum_ = 0.0;
  std::size_t count_ = 0;
};

inline SaabTransform fit_saab(const std::vector<Descriptor>& descriptors) {
  SaabAccumulator acc;
  for (const auto& d : descriptors) acc.add(d);
  return acc.finalize();
}

inline Descriptor apply_saab(const SaabTransform& t, const Descriptor& d) { return t.matrix * d; }

}  // namespace greenhop
