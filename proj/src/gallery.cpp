#include "sep4/gallery.hpp"

#include "sep4/random.hpp"

#include <cmath>

namespace sep4 {

namespace {

Vector v2(Complex x, Complex y) {
  Vector v(2);
  v << x, y;
  return v;
}

}  // namespace

ProductBasisSpec divincenzo_upb() {
  const double s = 1.0 / std::sqrt(2.0);
  const Vector zero = v2(1, 0), one = v2(0, 1), plus = v2(s, s), minus = v2(s, -s);
  return {{2, 2, 2}, {{zero, zero, zero}, {plus, one, minus}, {one, minus, plus}, {minus, plus, one}}};
}

MultiState divincenzo_state() {
  const double s = 1.0 / std::sqrt(2.0);
  const Vector zero = v2(1, 0), one = v2(0, 1), plus = v2(s, s), minus = v2(s, -s);
  // Two-qubit amplitudes on |00>, |01>, |10>, |11>.
  auto two = [](double c, double x00, double x01, double x10, double x11) {
    Vector v(4);
    v << x00, x01, x10, x11;
    return Vector(c * v);
  };
  const Vector psi1 = two(1.0 / std::sqrt(6.0), 0, 2, 1, 1);
  const Vector psi2 = two(1.0 / std::sqrt(6.0), 0, -1, -2, 1);
  const Vector psi3 = two(1.0 / std::sqrt(3.0), 0, -1, 1, 1);
  const Vector psi4 = two(1.0 / std::sqrt(12.0), 3, -1, 1, 1);
  Matrix rho = Matrix::Zero(8, 8);
  for (const auto& [a, psi] : {std::pair{plus, psi1}, {minus, psi2}, {zero, psi3}, {one, psi4}}) {
    const Vector v = kron({a, psi});
    rho += v * v.adjoint();
  }
  return MultiState::create(rho, {2, 2, 2});
}

Matrix example_ab_range_rows(Complex a, Complex b) {
  Matrix r = Matrix::Zero(4, 9);
  // |ij> <-> column 3i + j
  r(0, 0) = 1.0;
  r(0, 4) = a;
  r(1, 1) = a;
  r(1, 3) = 1.0;
  r(1, 7) = b;
  r(2, 4) = 1.0;
  r(2, 6) = b;
  r(2, 8) = 1.0;
  r(3, 5) = 1.0;
  r(3, 7) = 1.0;
  return r;
}

MultiState example_ab_state(Complex a, Complex b) {
  const Matrix r = example_ab_range_rows(a, b);
  // sum_i |psi_i><psi_i| with psi_i the rows of r.
  const Matrix rho = r.transpose() * r.conjugate();
  return MultiState::create(rho, {3, 3});
}

MultiState upb_complement_state(const ProductBasisSpec& spec) {
  const long d = total_dim(spec.dims);
  Matrix rows(static_cast<long>(spec.members.size()), d);
  for (std::size_t i = 0; i < spec.members.size(); ++i) {
    if (spec.members[i].size() != spec.dims.size())
      throw Error(ErrorCode::kDimensionMismatch, "member needs one factor per party");
    rows.row(static_cast<long>(i)) = kron(spec.members[i]).transpose();
  }
  if (rows.rows() > 0) {
    Eigen::JacobiSVD<Matrix> svd(rows);
    const RealVector& s = svd.singularValues();
    if (rows.rows() > d || !(s(s.size() - 1) > 1e-10 * s(0)))
      throw Error(ErrorCode::kDependentVectors, "product vectors are linearly dependent");
  }
  const long comp = d - rows.rows();
  if (comp == 0) throw Error(ErrorCode::kDegenerateComplement, "the vectors span the whole space");
  const SubspaceBasis span(rows, spec.dims);
  const Matrix p = Matrix::Identity(d, d) - span.projector();
  return MultiState::create(p / static_cast<double>(comp), spec.dims);
}

MultiState random_separable(const Dims& dims, int terms, std::uint64_t seed) {
  Rng rng(seed);
  const long d = total_dim(dims);
  Matrix rho = Matrix::Zero(d, d);
  for (int t = 0; t < terms; ++t) {
    std::vector<Vector> f;
    for (int di : dims) f.push_back(random_unit_vector(di, rng));
    const Vector v = kron(f);
    rho += v * v.adjoint();
  }
  return MultiState::create(rho, dims);
}

MultiState random_ppt_rank4_33(std::uint64_t seed) {
  Rng rng(seed);
  // Real parameters: for complex a or b the family is in general NPT.
  std::normal_distribution<double> normal;
  auto nonzero = [&] {
    double x = 0.0;
    while (std::abs(x) < 0.1) x = normal(rng);
    return x;
  };
  const double a = nonzero(), b = nonzero();
  const MultiState base = example_ab_state(a, b);
  return conjugate_local(base, {random_unitary(3, rng), random_unitary(3, rng)});
}

}  // namespace sep4
