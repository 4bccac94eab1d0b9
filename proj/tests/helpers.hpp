#pragma once

#include "sep4/tensor.hpp"

#include <initializer_list>
#include <vector>

namespace sep4::test {

// |i1 i2 ... in> in the product basis of `dims`.
inline Vector ket(const Dims& dims, std::initializer_list<int> digits) {
  Vector v = Vector::Zero(total_dim(dims));
  long idx = 0;
  auto d = dims.begin();
  for (int x : digits) idx = idx * *d++ + x;
  v(idx) = 1.0;
  return v;
}

inline Matrix proj(const Vector& v) { return v * v.adjoint(); }

inline MultiState mixture(const std::vector<Vector>& vs, const Dims& dims) {
  Matrix m = Matrix::Zero(total_dim(dims), total_dim(dims));
  for (const Vector& v : vs) m += proj(v);
  return MultiState::create(m, dims);
}

inline Vector qubit(Complex a, Complex b) {
  Vector v(2);
  v << a, b;
  return v;
}

}  // namespace sep4::test
