#include "sep4/oracle.hpp"

#include "sep4/chow.hpp"
#include "sep4/ppt.hpp"
#include "sep4/random.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

namespace sep4 {

namespace {

// digit_table[r][i] = i-th digit of basis index r.
std::vector<std::vector<int>> digit_table(const Dims& dims) {
  const long d = total_dim(dims);
  std::vector<std::vector<int>> out(d);
  for (long r = 0; r < d; ++r) out[r] = digits(r, dims);
  return out;
}

// <(x)_{j != i} f_j | x>, a vector on party i.
Vector contract_except(const Vector& x, const Dims& dims, const std::vector<std::vector<int>>& dg,
                       const std::vector<Vector>& f, int i) {
  Vector out = Vector::Zero(dims[i]);
  for (long r = 0; r < x.size(); ++r) {
    Complex c = x(r);
    for (int j = 0; j < static_cast<int>(dims.size()); ++j)
      if (j != i) c *= std::conj(f[j](dg[r][j]));
    out(dg[r][i]) += c;
  }
  return out;
}

void hosvd_init(const Vector& x, const Dims& dims, std::vector<Vector>& f) {
  f.resize(dims.size());
  for (int i = 0; i < static_cast<int>(dims.size()); ++i) {
    Eigen::JacobiSVD<Matrix> svd(flatten(x, dims, i), Eigen::ComputeThinU);
    f[i] = svd.matrixU().col(0);
  }
}

// Best rank-one fit by higher-order power sweeps, warm-started from `f`.
// Returns the fitted product vector (with its scale).
Vector rank_one_fit(const Vector& x, const Dims& dims, const std::vector<std::vector<int>>& dg,
                    std::vector<Vector>& f, int sweeps) {
  const int n = static_cast<int>(dims.size());
  if (n == 1) {
    f = {x.normalized()};
    return x;
  }
  if (n == 2) {
    Eigen::JacobiSVD<Matrix> svd(flatten(x, dims, 0), Eigen::ComputeThinU | Eigen::ComputeThinV);
    f = {svd.matrixU().col(0), svd.matrixV().col(0).conjugate()};
    return svd.singularValues()(0) * kron(f);
  }
  for (int s = 0; s < sweeps; ++s)
    for (int i = 0; i < n; ++i) {
      Vector v = contract_except(x, dims, dg, f, i);
      const double nv = v.norm();
      if (nv > 0.0) f[i] = v / nv;
    }
  const Vector p = kron(f);
  return p.dot(x) * p;  // <p|x> p
}

// Orthonormal basis of the complement of span(q) (q has orthonormal columns).
Matrix complement_basis(const Matrix& q) {
  const long d = q.rows();
  if (q.cols() == 0) return Matrix::Identity(d, d);
  Eigen::HouseholderQR<Matrix> qr(q);
  const Matrix full = qr.householderQ() * Matrix::Identity(d, d);
  return full.rightCols(d - q.cols());
}

// Gauss-Newton on || K^dagger (f_1 (x) ... (x) f_n) || with every step
// orthogonal to the current factors. Linear convergence even at tangential
// intersections, where alternating projections slow to O(1/k).
double polish_factors(const Matrix& k, const Dims& dims, std::vector<Vector>& f, int max_iter = 100) {
  const int n = static_cast<int>(dims.size());
  for (Vector& x : f) x.normalize();
  double res = (k.adjoint() * kron(f)).norm();
  if (k.cols() == 0) return res;
  int cols = 0;
  for (int di : dims) cols += di - 1;
  if (cols == 0) return res;
  int stuck = 0;
  for (int it = 0; it < max_iter && res > 1e-15; ++it) {
    const Vector r = k.adjoint() * kron(f);
    Matrix jac(k.cols(), cols);
    std::vector<Matrix> tangent(n);
    int off = 0;
    for (int i = 0; i < n; ++i) {
      tangent[i] = complement_basis(f[i]);
      for (long c = 0; c < tangent[i].cols(); ++c) {
        std::vector<Vector> g = f;
        g[i] = tangent[i].col(c);
        jac.col(off + c) = k.adjoint() * kron(g);
      }
      off += static_cast<int>(tangent[i].cols());
    }
    const Vector z = jac.completeOrthogonalDecomposition().solve(-r);
    double step = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 6 && !improved; ++halving, step *= 0.5) {
      std::vector<Vector> trial = f;
      off = 0;
      for (int i = 0; i < n; ++i) {
        const long m = tangent[i].cols();
        trial[i] = (f[i] + step * tangent[i] * z.segment(off, m)).normalized();
        off += static_cast<int>(m);
      }
      const double tr = (k.adjoint() * kron(trial)).norm();
      if (tr < res) {
        improved = true;
        stuck = tr > 0.9 * res ? stuck + 1 : 0;
        f = std::move(trial);
        res = tr;
      }
    }
    if (!improved || stuck > 8) break;
  }
  return res;
}

Vector least_squares_coefficients(const SubspaceBasis& basis, const Vector& v) {
  return basis.rows().transpose().colPivHouseholderQr().solve(v);
}

ProductVectorHit make_hit(const SubspaceBasis& basis, const Vector& v) {
  ProductVectorHit hit;
  hit.vector = v.normalized();
  const ProductCheck pc = is_product(hit.vector, basis.dims(), 1.0);
  hit.factors = pc.factors;
  hit.residual = pc.residual;
  hit.coefficients = least_squares_coefficients(basis, hit.vector);
  return hit;
}

}  // namespace

std::optional<ProductVectorHit> find_product_vector(const SubspaceBasis& basis, const ProductSearchOptions& opts) {
  const Dims& dims = basis.dims();
  if (basis.dimension() == 0) return std::nullopt;
  const Matrix q = basis.orthonormal_columns();
  const Matrix perp = complement_basis(q);
  const auto dg = digit_table(dims);
  Rng rng(opts.seed);
  const int polish_cap = 20 * opts.max_sweeps;
  for (int restart = 0; restart < opts.restarts; ++restart) {
    Vector x = q * random_unit_vector(basis.dimension(), rng);
    std::vector<Vector> f;
    hosvd_init(x, dims, f);
    std::vector<double> history;
    for (int it = 0; it < polish_cap; ++it) {
      const Vector p = rank_one_fit(x, dims, dg, f, 2);
      const double np = p.norm();
      if (np == 0.0) break;
      const Vector coeff = q.adjoint() * (p / np);
      const double inside = std::min(1.0, coeff.squaredNorm());
      const double dist = std::sqrt(std::max(0.0, 1.0 - inside));  // sin of the angle between p and the subspace
      x = (q * coeff).normalized();
      history.push_back(dist);
      if (dist < 1e-14) break;
      const int h = static_cast<int>(history.size());
      if (h > 20) {
        const double rate = dist / history[h - 11];
        if (rate > 0.9999) break;                                   // stalled at a nonzero distance
        if (it >= opts.max_sweeps && dist > 1e-4) break;            // not converging fast enough
        if (h > 40 && dist > 1e-2 && rate > 0.9) break;             // hopeless start
      }
    }
    const bool hit = is_product(x, dims, opts.tol_product).product;
    if (hit || (!history.empty() && history.back() < 1e-2)) {
      // Drive the hit (or a near miss) down to rounding level.
      hosvd_init(x, dims, f);
      rank_one_fit(x, dims, dg, f, 4);
      if (polish_factors(perp, dims, f) < 1e-12) {
        const Vector y = (q * (q.adjoint() * kron(f))).normalized();
        if (is_product(y, dims, opts.tol_product).product) return make_hit(basis, y);
      }
      if (hit) return make_hit(basis, x);
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Kernel product vectors of 3x3 states.

namespace {

// Bivariate polynomial of degree <= 3 in each variable: sum c[p][q] x^p y^q.
struct Poly33 {
  std::array<std::array<Complex, 4>, 4> c{};

  Complex eval(Complex x, Complex y) const {
    Complex acc(0.0);
    Complex xp(1.0);
    for (int p = 0; p < 4; ++p, xp *= x) {
      Complex yq(1.0);
      for (int q = 0; q < 4; ++q, yq *= y) acc += c[p][q] * xp * yq;
    }
    return acc;
  }
  Complex dx(Complex x, Complex y) const {
    Complex acc(0.0);
    for (int p = 1; p < 4; ++p)
      for (int q = 0; q < 4; ++q) acc += static_cast<double>(p) * c[p][q] * std::pow(x, p - 1) * std::pow(y, q);
    return acc;
  }
  Complex dy(Complex x, Complex y) const {
    Complex acc(0.0);
    for (int p = 0; p < 4; ++p)
      for (int q = 1; q < 4; ++q) acc += static_cast<double>(q) * c[p][q] * std::pow(x, p) * std::pow(y, q - 1);
    return acc;
  }
  // Coefficients of y^0..y^3 at fixed x.
  std::array<Complex, 4> in_y(Complex x) const {
    std::array<Complex, 4> out{};
    for (int q = 0; q < 4; ++q) {
      Complex xp(1.0);
      for (int p = 0; p < 4; ++p, xp *= x) out[q] += c[p][q] * xp;
    }
    return out;
  }
};

struct KernelSetup {
  std::array<Matrix, 3> coeff;  // M(a) = sum_i a_i coeff[i], 4 x 3
  Matrix orth;                  // 9 x 4 orthonormal basis of the orthocomplement
};

Matrix m_of(const KernelSetup& ks, const Vector& a) {
  return a(0) * ks.coeff[0] + a(1) * ks.coeff[1] + a(2) * ks.coeff[2];
}

Complex minor_without_row(const Matrix& m, int row) {
  Matrix sub(3, 3);
  int k = 0;
  for (int i = 0; i < 4; ++i)
    if (i != row) sub.row(k++) = m.row(i);
  return sub.determinant();
}

Poly33 interpolate_minor(const KernelSetup& ks, const Matrix& t, int row) {
  static const std::array<Complex, 4> w = {Complex(1, 0), Complex(0, 1), Complex(-1, 0), Complex(0, -1)};
  std::array<std::array<Complex, 4>, 4> samples{};
  for (int s = 0; s < 4; ++s)
    for (int u = 0; u < 4; ++u) {
      Vector xy1(3);
      xy1 << w[s], w[u], Complex(1.0);
      samples[s][u] = minor_without_row(m_of(ks, t * xy1), row);
    }
  Poly33 poly;
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q) {
      Complex acc(0.0);
      for (int s = 0; s < 4; ++s)
        for (int u = 0; u < 4; ++u) acc += samples[s][u] * std::conj(w[(p * s) % 4]) * std::conj(w[(q * u) % 4]);
      poly.c[p][q] = acc / 16.0;
    }
  return poly;
}

Complex sylvester_cubic(const std::array<Complex, 4>& a, const std::array<Complex, 4>& b) {
  Matrix s = Matrix::Zero(6, 6);
  for (int r = 0; r < 3; ++r)
    for (int q = 0; q < 4; ++q) {
      s(r, r + q) = a[3 - q];
      s(3 + r, r + q) = b[3 - q];
    }
  return s.partialPivLu().determinant();
}

std::vector<Complex> polynomial_roots(std::vector<Complex> coeffs /* low to high, leading nonzero */) {
  const int deg = static_cast<int>(coeffs.size()) - 1;
  if (deg < 1) return {};
  Matrix comp = Matrix::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -coeffs[i] / coeffs[deg];
  Eigen::ComplexEigenSolver<Matrix> es(comp, false);
  std::vector<Complex> out(es.eigenvalues().data(), es.eigenvalues().data() + deg);
  return out;
}

struct Attempt {
  bool degenerate = false;
  std::vector<Vector> vectors;
};

Attempt kernel_attempt(const KernelSetup& ks, Rng& rng) {
  Attempt out;
  const Matrix t = random_unitary(3, rng);
  const Poly33 f0 = interpolate_minor(ks, t, 0);
  const Poly33 f1 = interpolate_minor(ks, t, 1);

  constexpr int kSamples = 16;
  std::array<Complex, kSamples> values{};
  double scale = 0.0;
  for (int s = 0; s < kSamples; ++s) {
    const Complex x = std::polar(1.0, 2.0 * std::numbers::pi * s / kSamples);
    const auto a = f0.in_y(x);
    const auto b = f1.in_y(x);
    values[s] = sylvester_cubic(a, b);
    double na = 0.0, nb = 0.0;
    for (int q = 0; q < 4; ++q) {
      na = std::max(na, std::abs(a[q]));
      nb = std::max(nb, std::abs(b[q]));
    }
    scale = std::max(scale, std::pow(na, 3) * std::pow(nb, 3));
  }
  std::vector<Complex> coeffs(kSamples);
  double cmax = 0.0;
  for (int q = 0; q < kSamples; ++q) {
    Complex acc(0.0);
    for (int s = 0; s < kSamples; ++s) acc += values[s] * std::polar(1.0, -2.0 * std::numbers::pi * q * s / kSamples);
    coeffs[q] = acc / static_cast<double>(kSamples);
    cmax = std::max(cmax, std::abs(coeffs[q]));
  }
  if (cmax <= 1e-10 * scale) {
    // Resultant vanishes identically: infinitely many common points.
    out.degenerate = true;
    return out;
  }
  int deg = 9;
  while (deg > 0 && std::abs(coeffs[deg]) <= 1e-9 * cmax) --deg;
  if (deg < 9) {
    out.degenerate = true;  // intersection at infinity in this chart
    return out;
  }
  coeffs.resize(deg + 1);
  const std::vector<Complex> roots = polynomial_roots(coeffs);
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i] - roots[j]) < 1e-6 * std::max(1.0, std::abs(roots[i]))) {
        out.degenerate = true;
        return out;
      }

  for (Complex x : roots) {
    const auto ay = f0.in_y(x);
    if (std::abs(ay[3]) < 1e-12 * cmax) continue;
    const auto ys = polynomial_roots({ay[0], ay[1], ay[2], ay[3]});
    Complex y = ys.front();
    double best = std::abs(f1.eval(x, y));
    for (Complex cand : ys)
      if (double v = std::abs(f1.eval(x, cand)); v < best) {
        best = v;
        y = cand;
      }
    // Newton on the pair of cubics.
    for (int it = 0; it < 20; ++it) {
      const Complex g0 = f0.eval(x, y), g1 = f1.eval(x, y);
      const Complex j00 = f0.dx(x, y), j01 = f0.dy(x, y), j10 = f1.dx(x, y), j11 = f1.dy(x, y);
      const Complex det = j00 * j11 - j01 * j10;
      if (std::abs(det) == 0.0) break;
      const Complex sx = (g0 * j11 - g1 * j01) / det;
      const Complex sy = (j00 * g1 - j10 * g0) / det;
      x -= sx;
      y -= sy;
      if (std::abs(sx) + std::abs(sy) < 1e-15 * (1.0 + std::abs(x) + std::abs(y))) break;
    }
    Vector xy1(3);
    xy1 << x, y, Complex(1.0);
    const Vector a = (t * xy1).normalized();
    const Matrix m = m_of(ks, a);
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    const RealVector& s = svd.singularValues();
    if (s(2) > 1e-6 * s(0)) continue;  // spurious intersection: only two rows were dependent
    const Vector b = svd.matrixV().col(2).normalized();
    const Vector v = kron({a, b});
    if ((ks.orth.adjoint() * v).norm() > 1e-8) continue;
    bool dup = false;
    for (const Vector& u : out.vectors)
      if (std::abs(u.dot(v)) > 1.0 - 1e-8) dup = true;
    if (!dup) out.vectors.push_back(v);
  }
  return out;
}

}  // namespace

std::vector<ProductVectorHit> count_kernel_product_vectors_3x3(const SubspaceBasis& kernel, std::uint64_t seed) {
  if (kernel.dims() != Dims{3, 3}) throw Error(ErrorCode::kDimensionMismatch, "kernel must live in 3x3");
  if (kernel.dimension() != 5) throw Error(ErrorCode::kWrongDimension, "kernel must be 5-dimensional");
  KernelSetup ks;
  {
    Eigen::HouseholderQR<Matrix> qr(kernel.rows().transpose());
    const Matrix full = qr.householderQ() * Matrix::Identity(9, 9);
    ks.orth = full.rightCols(4);
  }
  // <w_j | a (x) b> = sum_{i,l} conj(w_j[3i + l]) a_i b_l
  for (int i = 0; i < 3; ++i) {
    ks.coeff[i] = Matrix(4, 3);
    for (int j = 0; j < 4; ++j)
      for (int l = 0; l < 3; ++l) ks.coeff[i](j, l) = std::conj(ks.orth(3 * i + l, j));
  }
  Rng rng(seed);
  std::vector<Attempt> attempts;
  for (int k = 0; k < 3; ++k) attempts.push_back(kernel_attempt(ks, rng));
  int best = -1;
  int best_votes = 0;
  for (int k = 0; k < 3; ++k) {
    if (attempts[k].degenerate) continue;
    int votes = 0;
    for (const Attempt& other : attempts)
      if (!other.degenerate && other.vectors.size() == attempts[k].vectors.size()) ++votes;
    if (votes > best_votes) {
      best = k;
      best_votes = votes;
    }
  }
  if (best < 0) throw Error(ErrorCode::kDegenerateConfiguration, "root clusters persist under three coordinate changes");
  std::vector<ProductVectorHit> out;
  for (const Vector& v : attempts[best].vectors) out.push_back(make_hit(kernel, v));
  return out;
}

// ---------------------------------------------------------------------------

BipartiteKernelVectors bipartite_kernel_product_vectors_2x2x2(const MultiState& rho, int cut, std::uint64_t seed) {
  if (rho.dims() != Dims{2, 2, 2}) throw Error(ErrorCode::kNotApplicable, "state is not on 2x2x2");
  if (cut < 0 || cut > 2) throw Error(ErrorCode::kInvalidArgument, "cut must name one of the three qubits");
  if (rank_of(rho) != 4) throw Error(ErrorCode::kNotApplicable, "state does not have rank four");
  if (!is_ppt(rho).is_ppt) throw Error(ErrorCode::kNotApplicable, "state is NPT");
  if (subspace_meets_segre(range_basis(rho), rho.config().tol_chow).meets)
    throw Error(ErrorCode::kNotApplicable, "range contains a product vector; the state is separable");

  std::vector<int> order{cut};
  for (int i = 0; i < 3; ++i)
    if (i != cut) order.push_back(i);
  std::vector<int> inverse(3);
  for (int j = 0; j < 3; ++j) inverse[order[j]] = j;
  const Operator grouped = group_bipartite(rho, SubsetMask::of({cut}));

  Rng rng(seed);
  for (int attempt = 0; attempt < 8; ++attempt) {
    const Matrix u = attempt == 0 ? Matrix(Matrix::Identity(2, 2)) : random_unitary(2, rng);
    const Operator rot = conjugate_local(grouped, {u, Matrix::Identity(4, 4)});
    const Matrix a = rot.matrix().block(0, 0, 4, 4);
    const Matrix b = rot.matrix().block(0, 4, 4, 4);
    Eigen::FullPivLU<Matrix> alu(a);
    if (alu.rcond() < 1e-8) continue;
    const Matrix x = b.adjoint() * alu.inverse();
    Eigen::ComplexEigenSolver<Matrix> es(x);
    if (es.info() != Eigen::Success) continue;
    const Vector lambda = es.eigenvalues();
    bool distinct = true;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (std::abs(lambda(i) - lambda(j)) < 1e-8 * (1.0 + std::abs(lambda(i)))) distinct = false;
    if (!distinct) continue;
    Matrix psi = es.eigenvectors();
    for (int i = 0; i < 4; ++i) psi.col(i).normalize();
    Eigen::FullPivLU<Matrix> plu(psi);
    if (plu.rcond() < 1e-10) continue;
    const Matrix recip = plu.inverse().adjoint();

    BipartiteKernelVectors out;
    out.cut = cut;
    for (int i = 0; i < 4; ++i) {
      Vector ai(2), perp(2);
      ai << 1.0, lambda(i);
      perp << -std::conj(lambda(i)), 1.0;
      out.local.push_back((u.adjoint() * ai).normalized());
      out.psi.push_back(psi.col(i));
      out.reciprocal.push_back(recip.col(i));
      const Vector grouped_v = kron({u.adjoint() * perp.normalized(), recip.col(i)});
      out.kernel.push_back(permute_parties(grouped_v, Dims{2, 2, 2}, inverse).normalized());
    }
    return out;
  }
  throw Error(ErrorCode::kNotApplicable, "no decomposition into four product terms across the cut");
}

// ---------------------------------------------------------------------------

Matrix Decomposition::assemble(const Dims& dims) const {
  const long d = total_dim(dims);
  Matrix out = Matrix::Zero(d, d);
  for (const DecompositionTerm& t : terms) {
    const Vector v = kron(t.factors);
    out += t.weight * v * v.adjoint();
  }
  return out;
}

namespace {

struct PeelContext {
  Dims dims;
  std::vector<SubsetMask> subsets;
  std::vector<Matrix> kernels;  // kernel basis columns of cur^{Gamma_S}
  std::vector<std::vector<int>> dg;
};

double range_objective(const PeelContext& ctx, const std::vector<Vector>& f) {
  double obj = 0.0;
  for (std::size_t s = 0; s < ctx.subsets.size(); ++s)
    if (ctx.kernels[s].cols() > 0)
      obj += (ctx.kernels[s].adjoint() * kron(conjugate_factors(f, ctx.subsets[s]))).squaredNorm();
  return obj;
}

// Gauss-Newton on the stacked residuals K_S^dagger phi^S. The conjugated
// factors make the map antilinear, so steps are solved in real coordinates.
double polish_range_criterion(const PeelContext& ctx, std::vector<Vector>& f, int max_iter = 100) {
  const int n = static_cast<int>(ctx.dims.size());
  for (Vector& x : f) x.normalize();
  long rows = 0;
  for (const Matrix& k : ctx.kernels) rows += k.cols();
  int cols = 0;
  for (int di : ctx.dims) cols += 2 * (di - 1);
  double res = std::sqrt(range_objective(ctx, f));
  if (rows == 0 || cols == 0) return res;

  auto stacked = [&](const std::vector<Vector>& g) {
    Vector out(rows);
    long at = 0;
    for (std::size_t s = 0; s < ctx.subsets.size(); ++s) {
      const Matrix& k = ctx.kernels[s];
      if (k.cols() == 0) continue;
      out.segment(at, k.cols()) = k.adjoint() * kron(conjugate_factors(g, ctx.subsets[s]));
      at += k.cols();
    }
    return out;
  };

  int stuck = 0;
  for (int it = 0; it < max_iter && res > 1e-15; ++it) {
    const Vector r = stacked(f);
    Eigen::MatrixXd jac(2 * rows, cols);
    std::vector<Matrix> tangent(n);
    int off = 0;
    for (int i = 0; i < n; ++i) {
      tangent[i] = complement_basis(f[i]);
      for (long c = 0; c < tangent[i].cols(); ++c) {
        for (int part = 0; part < 2; ++part) {
          // d/dx along t and d/dy along i*t; conjugated parties see conj(.)
          const Complex unit = part == 0 ? Complex(1.0) : Complex(0.0, 1.0);
          Vector col(rows);
          long at = 0;
          for (std::size_t s = 0; s < ctx.subsets.size(); ++s) {
            const Matrix& k = ctx.kernels[s];
            if (k.cols() == 0) continue;
            std::vector<Vector> g = conjugate_factors(f, ctx.subsets[s]);
            const Vector dir = unit * tangent[i].col(c);
            g[i] = ctx.subsets[s].contains(i) ? Vector(dir.conjugate()) : dir;
            col.segment(at, k.cols()) = k.adjoint() * kron(g);
            at += k.cols();
          }
          jac.col(off + 2 * c + part) << col.real(), col.imag();
        }
      }
      off += 2 * static_cast<int>(tangent[i].cols());
    }
    RealVector rhs(2 * rows);
    rhs << -r.real(), -r.imag();
    const RealVector z = jac.completeOrthogonalDecomposition().solve(rhs);
    double step = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 6 && !improved; ++halving, step *= 0.5) {
      std::vector<Vector> trial = f;
      off = 0;
      for (int i = 0; i < n; ++i) {
        const long m = tangent[i].cols();
        Vector dz(m);
        for (long c = 0; c < m; ++c) dz(c) = Complex(z(off + 2 * c), z(off + 2 * c + 1));
        trial[i] = (f[i] + step * tangent[i] * dz).normalized();
        off += 2 * static_cast<int>(m);
      }
      const double tr = stacked(trial).norm();
      if (tr < res) {
        improved = true;
        stuck = tr > 0.9 * res ? stuck + 1 : 0;
        f = std::move(trial);
        res = tr;
      }
    }
    if (!improved || stuck > 8) break;
  }
  return res;
}

// sum_S || K_S^dagger phi^S ||^2, minimized one factor at a time.
double range_criterion_search(const PeelContext& ctx, std::vector<Vector>& f, int max_sweeps) {
  const int n = static_cast<int>(ctx.dims.size());
  double obj = 0.0;
  std::vector<double> history;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (int i = 0; i < n; ++i) {
      const int di = ctx.dims[i];
      Matrix q = Matrix::Zero(di, di);
      for (std::size_t s = 0; s < ctx.subsets.size(); ++s) {
        const Matrix& k = ctx.kernels[s];
        if (k.cols() == 0) continue;
        const std::vector<Vector> b = conjugate_factors(f, ctx.subsets[s]);
        Matrix g(k.cols(), di);
        for (int l = 0; l < di; ++l) {
          std::vector<Vector> bl = b;
          bl[i] = Vector::Unit(di, l);
          g.col(l) = k.adjoint() * kron(bl);
        }
        const Matrix gg = g.adjoint() * g;
        q += ctx.subsets[s].contains(i) ? Matrix(gg.conjugate()) : gg;
      }
      Eigen::SelfAdjointEigenSolver<Matrix> es(q);
      f[i] = es.eigenvectors().col(0);
      obj = std::max(es.eigenvalues()(0), 0.0);
    }
    history.push_back(obj);
    if (obj < 1e-28) break;
    const int h = static_cast<int>(history.size());
    if (h > 20 && obj > history[h - 11] * 0.9999) break;
    if (h > 60 && obj > 1e-6) break;
  }
  return obj;
}

}  // namespace

std::optional<Decomposition> greedy_decompose(const MultiState& rho, int max_terms, std::uint64_t seed,
                                              int restarts_per_step) {
  const ToleranceConfig& cfg = rho.config();
  const double tr0 = rho.trace();
  if (tr0 <= 0.0) return Decomposition{};
  Rng rng(seed);
  Decomposition out;
  PeelContext ctx;
  ctx.dims = rho.dims();
  ctx.subsets = ppt_subsets(rho.parties());
  ctx.dg = digit_table(ctx.dims);
  Matrix cur = rho.matrix();
  // Eigenvalues below the rank cutoff of rho count as zero; inexact peels at
  // tangential product vectors leave ghosts of about that size.
  const double floor = std::max(1e-12 * tr0, 0.1 * cfg.tol_rank * spectral(rho).eigenvalues(0));

  auto cutoff_of = [&](const SpectralData& spec) {
    return std::max(cfg.tol_rank * std::max(spec.eigenvalues(0), 0.0), floor);
  };

  bool done = false;
  for (int step = 0; step <= max_terms; ++step) {
    const SpectralData spec = spectral(Operator(cur, ctx.dims, cfg));
    if (spec.eigenvalues(0) <= floor) {
      done = true;
      break;
    }
    if (step == max_terms) break;
    const double cut = cutoff_of(spec);
    int r = 0;
    while (r < spec.eigenvalues.size() && spec.eigenvalues(r) > cut) ++r;
    const Matrix vr = spec.eigenvectors.leftCols(r);
    const RealVector lr = spec.eigenvalues.head(r);
    cur = vr * lr.cast<Complex>().asDiagonal() * vr.adjoint();
    const Matrix pinv = vr * lr.cwiseInverse().cast<Complex>().asDiagonal() * vr.adjoint();

    const Operator cur_op(cur, ctx.dims, cfg);
    ctx.kernels.clear();
    std::vector<Matrix> pinvs;
    for (SubsetMask s : ctx.subsets) {
      const SpectralData ps = s.empty() ? spec : spectral(partial_transpose(cur_op, s));
      const double pc = cutoff_of(ps);
      int rs = 0;
      while (rs < ps.eigenvalues.size() && ps.eigenvalues(rs) > pc) ++rs;
      ctx.kernels.push_back(ps.eigenvectors.rightCols(ps.eigenvectors.cols() - rs));
      const Matrix vs = ps.eigenvectors.leftCols(rs);
      pinvs.push_back(s.empty() ? pinv
                                : Matrix(vs * ps.eigenvalues.head(rs).cwiseInverse().cast<Complex>().asDiagonal() *
                                         vs.adjoint()));
    }

    // Largest t keeping every partial transpose of the remainder PSD.
    auto ppt_step = [&](const std::vector<Vector>& f) {
      double t = std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < ctx.subsets.size(); ++s) {
        const Vector x = kron(conjugate_factors(f, ctx.subsets[s]));
        const double w = x.dot(pinvs[s] * x).real();
        if (!(w > 0.0)) return 0.0;
        t = std::min(t, 1.0 / w);
      }
      return t;
    };
    auto remainder_ppt = [&](const Matrix& rem) {
      ToleranceConfig loose = cfg;
      loose.tol_psd = std::max(cfg.tol_psd, 1e-9);
      const Operator rem_op(rem, ctx.dims, loose);
      // relative to the current scale, not the shrunken remainder
      for (SubsetMask s : ctx.subsets) {
        const SpectralData ps = spectral(partial_transpose(rem_op, s));
        if (ps.eigenvalues(ps.eigenvalues.size() - 1) < -loose.tol_psd * spec.eigenvalues(0)) return false;
      }
      return true;
    };

    if (r == 1) {
      // a rank-one remainder is its own last term when it is a product
      const ProductCheck pc = is_product(vr.col(0), ctx.dims, cfg.tol_product);
      if (!pc.product) return std::nullopt;
      std::vector<Vector> f;
      for (const Vector& x : pc.factors) f.push_back(x.normalized());
      const Vector phi = kron(f);
      const double t = phi.dot(cur * phi).real();
      out.terms.push_back({t, f});
      cur -= t * phi * phi.adjoint();
      continue;
    }

    bool peeled = false;
    double fallback_t = 0.0;
    std::vector<Vector> fallback_f;
    for (int attempt = 0; attempt < restarts_per_step && !peeled; ++attempt) {
      std::vector<Vector> f;
      for (int di : ctx.dims) f.push_back(random_unit_vector(di, rng));
      double obj = range_criterion_search(ctx, f, 400);
      // the squared objective pins phi only to ~1e-10; Gauss-Newton on the
      // range condition sharpens it so peels leave no ghost eigenvalues
      if (obj < 1e-4) {
        polish_range_criterion(ctx, f);
        obj = range_objective(ctx, f);
      }
      if (obj > 1e-20) continue;
      const Vector phi = kron(f);
      const double inv_weight = phi.dot(pinv * phi).real();
      if (!(inv_weight > 0.0)) continue;
      const double t = 1.0 / inv_weight;
      Matrix rem = cur - t * phi * phi.adjoint();
      rem = 0.5 * (rem + rem.adjoint());
      if (r > 1 && !remainder_ppt(rem)) {
        const double tp = ppt_step(f);
        if (tp > fallback_t) fallback_t = tp, fallback_f = f;
        continue;
      }
      out.terms.push_back({t, f});
      cur = rem;
      peeled = true;
    }
    // No rank-reducing peel keeps PPT (typical at full local support): take
    // the largest PPT-preserving one, which drops the rank of some transpose.
    if (!peeled && fallback_t > 1e-12 * tr0) {
      const Vector phi = kron(fallback_f);
      Matrix rem = cur - fallback_t * phi * phi.adjoint();
      rem = 0.5 * (rem + rem.adjoint());
      out.terms.push_back({fallback_t, fallback_f});
      cur = rem;
      peeled = true;
    }
    if (!peeled) return std::nullopt;
  }
  if (!done) return std::nullopt;
  out.residual = (rho.matrix() - out.assemble(rho.dims())).norm();
  out.length_upper_bound = static_cast<int>(out.terms.size());
  if (out.residual > 1e-8 * tr0) return std::nullopt;
  return out;
}

bool check_general_position(const std::vector<std::vector<Vector>>& product_vectors, double tol) {
  if (product_vectors.empty()) return true;
  const int n = static_cast<int>(product_vectors.front().size());
  const int m = static_cast<int>(product_vectors.size());
  for (int j = 0; j < n; ++j) {
    const int dj = static_cast<int>(product_vectors.front()[j].size());
    const int max_size = std::min(dj, m);
    for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
      const int size = std::popcount(mask);
      if (size > max_size) continue;
      Matrix cols(dj, size);
      int c = 0;
      for (int i = 0; i < m; ++i)
        if (mask >> i & 1u) cols.col(c++) = product_vectors[i][j].normalized();
      Eigen::JacobiSVD<Matrix> svd(cols);
      if (svd.singularValues()(size - 1) <= tol) return false;
    }
  }
  return true;
}

}  // namespace sep4
