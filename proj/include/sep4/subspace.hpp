#pragma once

#include "sep4/types.hpp"

namespace sep4 {

// k x d coordinate matrix whose rows span a subspace of the d-dimensional
// product space with party dimensions `dims`. Rows are linearly independent.
class SubspaceBasis {
 public:
  // Throws RankDeficientBasis when the smallest singular value is not above
  // tol_rank times the largest, DimensionMismatch when d != prod(dims).
  SubspaceBasis(Matrix rows, Dims dims, double tol_rank = 1e-9);

  const Matrix& rows() const { return rows_; }
  const Dims& dims() const { return dims_; }
  int dimension() const { return static_cast<int>(rows_.rows()); }
  long ambient() const { return rows_.cols(); }
  Vector vector(int i) const { return rows_.row(i).transpose(); }

  // d x k matrix with orthonormal columns spanning the same subspace.
  Matrix orthonormal_columns() const;
  // Orthogonal projector onto the subspace.
  Matrix projector() const;
  // || (1 - P) v || / || v ||
  double distance(const Vector& v) const;

 private:
  Matrix rows_;
  Dims dims_;
};

}  // namespace sep4
