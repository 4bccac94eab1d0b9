#include "sep4/subspace.hpp"

#include "sep4/error.hpp"

namespace sep4 {

SubspaceBasis::SubspaceBasis(Matrix rows, Dims dims, double tol_rank)
    : rows_(std::move(rows)), dims_(std::move(dims)) {
  if (rows_.cols() != total_dim(dims_)) {
    throw Error(ErrorCode::kDimensionMismatch, "basis row length does not match the product of dims");
  }
  if (rows_.rows() > rows_.cols()) {
    throw Error(ErrorCode::kRankDeficientBasis, "more basis vectors than ambient dimension");
  }
  if (rows_.rows() == 0) return;
  Eigen::JacobiSVD<Matrix> svd(rows_);
  const RealVector& s = svd.singularValues();
  if (!(s(s.size() - 1) > tol_rank * s(0))) {
    throw Error(ErrorCode::kRankDeficientBasis, "basis rows are linearly dependent");
  }
}

Matrix SubspaceBasis::orthonormal_columns() const {
  if (rows_.rows() == 0) return Matrix(rows_.cols(), 0);
  Eigen::HouseholderQR<Matrix> qr(rows_.transpose());
  return qr.householderQ() * Matrix::Identity(rows_.cols(), rows_.rows());
}

Matrix SubspaceBasis::projector() const {
  const Matrix q = orthonormal_columns();
  return q * q.adjoint();
}

double SubspaceBasis::distance(const Vector& v) const {
  const Matrix q = orthonormal_columns();
  const Vector r = v - q * (q.adjoint() * v);
  return r.norm() / v.norm();
}

}  // namespace sep4
