#include "sep4/tensor.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace sep4 {

int SubsetMask::size() const { return std::popcount(bits_); }

std::vector<int> SubsetMask::parties() const {
  std::vector<int> out;
  for (int i = 0; i < 32; ++i)
    if (contains(i)) out.push_back(i);
  return out;
}

long total_dim(const Dims& dims) {
  long d = 1;
  for (int di : dims) d *= di;
  return d;
}

std::vector<long> strides(const Dims& dims) {
  std::vector<long> s(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i) s[i] = s[i + 1] * dims[i + 1];
  return s;
}

std::vector<int> digits(long index, const Dims& dims) {
  std::vector<int> out(dims.size());
  for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
    out[i] = static_cast<int>(index % dims[i]);
    index /= dims[i];
  }
  return out;
}

namespace {

void check_dims(const Dims& dims, long d) {
  if (dims.empty()) throw Error(ErrorCode::kDimensionMismatch, "at least one party is required");
  for (int di : dims)
    if (di < 1) throw Error(ErrorCode::kDimensionMismatch, "party dimensions must be >= 1");
  if (total_dim(dims) != d) throw Error(ErrorCode::kDimensionMismatch, "product of dims differs from matrix size");
  if (d > kMaxTotalDim) throw Error(ErrorCode::kDimensionMismatch, "total dimension exceeds 4096");
}

// Value of the digits belonging to `subset`, weighted by their strides.
std::vector<long> subset_part(const Dims& dims, SubsetMask subset) {
  const long d = total_dim(dims);
  const auto st = strides(dims);
  std::vector<long> out(d, 0);
  for (long r = 0; r < d; ++r) {
    long rem = r;
    long acc = 0;
    for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
      const long digit = rem % dims[i];
      rem /= dims[i];
      if (subset.contains(i)) acc += digit * st[i];
    }
    out[r] = acc;
  }
  return out;
}

}  // namespace

Operator::Operator(Matrix matrix, Dims dims, ToleranceConfig cfg)
    : matrix_(std::move(matrix)), dims_(std::move(dims)), cfg_(cfg) {
  if (matrix_.rows() != matrix_.cols()) throw Error(ErrorCode::kDimensionMismatch, "matrix is not square");
  check_dims(dims_, matrix_.rows());
}

MultiState MultiState::create(const Matrix& matrix, const Dims& dims, const ToleranceConfig& cfg) {
  cfg.validate();
  if (!matrix.allFinite()) throw Error(ErrorCode::kInvalidArgument, "matrix contains NaN or Inf");
  Operator op(matrix, dims, cfg);
  const double asym = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  if (asym > cfg.tol_herm) throw Error(ErrorCode::kNotHermitian, "asymmetry " + std::to_string(asym));
  Matrix sym = 0.5 * (matrix + matrix.adjoint());
  Operator symmetric(std::move(sym), dims, cfg);
  const SpectralData spec = spectral(symmetric);
  const double lmax = std::max(spec.eigenvalues(0), 0.0);
  const double lmin = spec.eigenvalues(spec.eigenvalues.size() - 1);
  if (lmin < -cfg.tol_psd * lmax || (lmax == 0.0 && lmin < 0.0)) {
    throw Error(ErrorCode::kNotPositive, "eigenvalue " + std::to_string(lmin));
  }
  return MultiState(std::move(symmetric));
}

Operator partial_transpose(const Operator& op, SubsetMask subset) {
  if (!subset.valid_for(op.parties())) throw Error(ErrorCode::kInvalidArgument, "subset names a missing party");
  if (subset.empty()) return op;
  const auto sp = subset_part(op.dims(), subset);
  const long d = op.dim();
  const Matrix& in = op.matrix();
  Matrix out(d, d);
  for (long c = 0; c < d; ++c) {
    for (long r = 0; r < d; ++r) {
      const long r2 = r - sp[r] + sp[c];
      const long c2 = c - sp[c] + sp[r];
      out(r2, c2) = in(r, c);
    }
  }
  return Operator(std::move(out), op.dims(), op.config());
}

MultiState partial_transpose_state(const MultiState& rho, SubsetMask subset) {
  return MultiState::create(partial_transpose(rho, subset));
}

Operator reduced_operator(const Operator& op, SubsetMask keep) {
  if (keep.empty()) throw Error(ErrorCode::kEmptySubset, "reduced state needs at least one party");
  if (!keep.valid_for(op.parties())) throw Error(ErrorCode::kInvalidArgument, "subset names a missing party");
  Dims kept_dims;
  for (int i = 0; i < op.parties(); ++i)
    if (keep.contains(i)) kept_dims.push_back(op.dims()[i]);
  const long d = op.dim();
  const long dk = total_dim(kept_dims);
  std::vector<long> kidx(d), tidx(d);
  for (long r = 0; r < d; ++r) {
    const auto dg = digits(r, op.dims());
    long k = 0, t = 0;
    for (int i = 0; i < op.parties(); ++i) {
      if (keep.contains(i)) k = k * op.dims()[i] + dg[i];
      else t = t * op.dims()[i] + dg[i];
    }
    kidx[r] = k;
    tidx[r] = t;
  }
  Matrix out = Matrix::Zero(dk, dk);
  for (long c = 0; c < d; ++c)
    for (long r = 0; r < d; ++r)
      if (tidx[r] == tidx[c]) out(kidx[r], kidx[c]) += op.matrix()(r, c);
  return Operator(std::move(out), std::move(kept_dims), op.config());
}

MultiState reduced_state(const MultiState& rho, SubsetMask keep) {
  return MultiState::assume_valid(reduced_operator(rho, keep));
}

SpectralData spectral(const Operator& op) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(op.matrix());
  if (es.info() != Eigen::Success) throw Error(ErrorCode::kEigFailure, "Hermitian eigensolver did not converge");
  const long d = op.dim();
  SpectralData out{RealVector(d), Matrix(d, d)};
  // Eigen returns ascending order.
  for (long i = 0; i < d; ++i) {
    out.eigenvalues(i) = es.eigenvalues()(d - 1 - i);
    out.eigenvectors.col(i) = es.eigenvectors().col(d - 1 - i);
  }
  return out;
}

int rank_of(const SpectralData& spec, double tol_rank) {
  if (spec.eigenvalues.size() == 0) return 0;
  const double lmax = spec.eigenvalues(0);
  if (lmax <= 0.0) return 0;
  int r = 0;
  for (long i = 0; i < spec.eigenvalues.size(); ++i)
    if (spec.eigenvalues(i) > tol_rank * lmax) ++r;
  return r;
}

int rank_of(const Operator& op) { return rank_of(spectral(op), op.config().tol_rank); }

SubspaceBasis range_basis(const Operator& op) {
  const SpectralData spec = spectral(op);
  const int r = rank_of(spec, op.config().tol_rank);
  return SubspaceBasis(spec.eigenvectors.leftCols(r).transpose(), op.dims(), op.config().tol_rank);
}

SubspaceBasis kernel_basis(const Operator& op) {
  const SpectralData spec = spectral(op);
  const int r = rank_of(spec, op.config().tol_rank);
  return SubspaceBasis(spec.eigenvectors.rightCols(op.dim() - r).transpose(), op.dims(), op.config().tol_rank);
}

std::vector<int> local_ranks(const Operator& op) {
  std::vector<int> out;
  for (int i = 0; i < op.parties(); ++i) out.push_back(rank_of(reduced_operator(op, SubsetMask::of({i}))));
  return out;
}

Matrix apply_on_party(const Matrix& x, const Dims& dims, int party, const Matrix& a) {
  const long left = total_dim(Dims(dims.begin(), dims.begin() + party));
  const long right = total_dim(Dims(dims.begin() + party + 1, dims.end()));
  const long din = dims[party];
  const long dout = a.rows();
  Matrix out = Matrix::Zero(left * dout * right, x.cols());
  for (long l = 0; l < left; ++l)
    for (long j = 0; j < dout; ++j)
      for (long i = 0; i < din; ++i) {
        const Complex aji = a(j, i);
        if (aji == Complex(0.0)) continue;
        out.middleRows((l * dout + j) * right, right) += aji * x.middleRows((l * din + i) * right, right);
      }
  return out;
}

namespace {

// (W^dagger) M (W) with W = (x)_i iso_i, applied party by party.
Matrix sandwich(const Matrix& m, Dims dims, const std::vector<Matrix>& isos) {
  Matrix x = m;
  Dims cur = dims;
  for (int i = 0; i < static_cast<int>(isos.size()); ++i) {
    x = apply_on_party(x, cur, i, isos[i].adjoint());
    cur[i] = static_cast<int>(isos[i].cols());
  }
  Matrix y = x.adjoint();
  Dims cur2 = dims;
  for (int i = 0; i < static_cast<int>(isos.size()); ++i) {
    y = apply_on_party(y, cur2, i, isos[i].adjoint());
    cur2[i] = static_cast<int>(isos[i].cols());
  }
  Matrix out = y.adjoint();
  return 0.5 * (out + out.adjoint());
}

}  // namespace

Operator conjugate_local(const Operator& op, const std::vector<Matrix>& locals) {
  if (static_cast<int>(locals.size()) != op.parties()) throw Error(ErrorCode::kDimensionMismatch, "one local operator per party");
  std::vector<Matrix> adj;
  for (int i = 0; i < op.parties(); ++i) {
    if (locals[i].cols() != op.dims()[i] || locals[i].rows() != op.dims()[i])
      throw Error(ErrorCode::kDimensionMismatch, "local operator shape");
    adj.push_back(locals[i].adjoint());
  }
  return Operator(sandwich(op.matrix(), op.dims(), adj), op.dims(), op.config());
}

MultiState conjugate_local(const MultiState& rho, const std::vector<Matrix>& locals) {
  return MultiState::assume_valid(conjugate_local(static_cast<const Operator&>(rho), locals));
}

Compression compress_support(const MultiState& rho) {
  std::vector<Matrix> isos;
  Dims new_dims;
  std::vector<int> kept, dropped;
  for (int i = 0; i < rho.parties(); ++i) {
    const SpectralData spec = spectral(reduced_operator(rho, SubsetMask::of({i})));
    const int r = rank_of(spec, rho.config().tol_rank);
    isos.push_back(spec.eigenvectors.leftCols(std::max(r, 1)));
    if (r > 1) {
      kept.push_back(i);
      new_dims.push_back(r);
    } else {
      dropped.push_back(i);
    }
  }
  if (kept.empty()) throw Error(ErrorCode::kAllPartiesTrivial, "every local rank is one; the state is a pure product");
  Matrix m = sandwich(rho.matrix(), rho.dims(), isos);
  return Compression{MultiState::assume_valid(Operator(std::move(m), new_dims, rho.config())), std::move(isos),
                     std::move(kept), std::move(dropped)};
}

Matrix flatten(const Vector& v, const Dims& dims, int party) {
  const long d = total_dim(dims);
  const long di = dims[party];
  const long right = total_dim(Dims(dims.begin() + party + 1, dims.end()));
  Matrix out(di, d / di);
  for (long r = 0; r < d; ++r) {
    const long high = r / (di * right);
    const long digit = (r / right) % di;
    const long low = r % right;
    out(digit, high * right + low) = v(r);
  }
  return out;
}

double flattening_ratio(const Vector& v, const Dims& dims, int party) {
  if (dims[party] == 1 || total_dim(dims) == dims[party]) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(flatten(v, dims, party));
  const RealVector& s = svd.singularValues();
  if (s(0) == 0.0) return 0.0;
  return s.size() > 1 ? s(1) / s(0) : 0.0;
}

ProductCheck is_product(const Vector& v, const Dims& dims, double tol_product) {
  if (v.size() != total_dim(dims)) throw Error(ErrorCode::kDimensionMismatch, "vector length");
  if (v.norm() == 0.0) throw Error(ErrorCode::kZeroVector, "product test of the zero vector");
  ProductCheck out;
  for (int i = 0; i < static_cast<int>(dims.size()); ++i)
    out.residual = std::max(out.residual, flattening_ratio(v, dims, i));
  out.product = out.residual <= tol_product;
  Vector rem = v;
  for (int i = 0; i + 1 < static_cast<int>(dims.size()); ++i) {
    const long rest = rem.size() / dims[i];
    const Matrix m = rem.reshaped<Eigen::RowMajor>(dims[i], rest);
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
    const Vector u = svd.matrixU().col(0);
    out.factors.push_back(u);
    rem = (u.adjoint() * m).transpose();
  }
  out.factors.push_back(rem);
  return out;
}

Vector kron(const std::vector<Vector>& factors) {
  Vector out = Vector::Ones(1);
  for (const Vector& f : factors) {
    Vector next(out.size() * f.size());
    for (long i = 0; i < out.size(); ++i) next.segment(i * f.size(), f.size()) = out(i) * f;
    out = std::move(next);
  }
  return out;
}

std::vector<Vector> conjugate_factors(std::vector<Vector> factors, SubsetMask subset) {
  for (int i = 0; i < static_cast<int>(factors.size()); ++i)
    if (subset.contains(i)) factors[i] = factors[i].conjugate();
  return factors;
}

Vector permute_parties(const Vector& v, const Dims& dims, const std::vector<int>& order) {
  Dims out_dims;
  for (int p : order) out_dims.push_back(dims[p]);
  const auto out_strides = strides(out_dims);
  Vector out(v.size());
  for (long r = 0; r < v.size(); ++r) {
    const auto dg = digits(r, dims);
    long idx = 0;
    for (int j = 0; j < static_cast<int>(order.size()); ++j) idx += dg[order[j]] * out_strides[j];
    out(idx) = v(r);
  }
  return out;
}

}  // namespace sep4
