#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

namespace ratiosparse {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class MatrixKind { OversampledDct, CorrelatedGaussian, Explicit };

// Dense m x n sensing matrix with its generation metadata.
// `param` is F for the oversampled DCT and r for the correlated Gaussian.
struct SensingMatrix {
  Matrix entries;
  MatrixKind kind = MatrixKind::Explicit;
  double param = 0.0;
  std::uint64_t seed = 0;

  Index rows() const { return entries.rows(); }
  Index cols() const { return entries.cols(); }
};

inline SensingMatrix explicit_matrix(Matrix a) {
  return SensingMatrix{std::move(a), MatrixKind::Explicit, 0.0, 0};
}

// Sparse ground truth: zero exactly off `support`, max |values_i| = 1.
struct GroundTruth {
  Vector values;
  std::vector<Index> support;  // sorted, ascending

  Index sparsity() const { return static_cast<Index>(support.size()); }
};

// (A, x, b) triple; `truth` is absent when b was supplied externally.
struct Instance {
  SensingMatrix matrix;
  std::optional<GroundTruth> truth;
  Vector rhs;
};

// Builds b = A*x.
Instance make_instance(SensingMatrix matrix, GroundTruth truth);

// Pairs a truth with an externally supplied b; enforces the consistency
// invariant ||A*truth - rhs|| <= 1e-12 * ||rhs||.
Instance make_instance(SensingMatrix matrix, GroundTruth truth, Vector rhs);

// Wraps an externally supplied right-hand side without a truth.
Instance make_instance(SensingMatrix matrix, Vector rhs);

}  // namespace ratiosparse
