#include "sep4/grassmann.hpp"

#include "sep4/error.hpp"

#include <algorithm>
#include <cmath>

namespace sep4 {

long binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<IndexTuple> increasing_tuples(int d, int k) {
  std::vector<IndexTuple> out;
  if (k < 0 || k > d) return out;
  IndexTuple t(k);
  for (int i = 0; i < k; ++i) t[i] = i + 1;
  while (true) {
    out.push_back(t);
    int i = k - 1;
    while (i >= 0 && t[i] == d - k + i + 1) --i;
    if (i < 0) break;
    ++t[i];
    for (int j = i + 1; j < k; ++j) t[j] = t[j - 1] + 1;
  }
  return out;
}

long tuple_rank(const IndexTuple& t, int d) {
  const int k = static_cast<int>(t.size());
  long r = binomial(d, k) - 1;
  for (int i = 0; i < k; ++i) r -= binomial(d - t[i], k - i);
  return r;
}

int sort_with_sign(IndexTuple& seq) {
  int sign = 1;
  for (std::size_t i = 1; i < seq.size(); ++i)
    for (std::size_t j = i; j > 0 && seq[j - 1] >= seq[j]; --j) {
      if (seq[j - 1] == seq[j]) return 0;
      std::swap(seq[j - 1], seq[j]);
      sign = -sign;
    }
  return sign;
}

PlueckerVector::PlueckerVector(int k, int d, std::vector<Complex> raw) : k_(k), d_(d), raw_(std::move(raw)) {
  if (static_cast<long>(raw_.size()) != binomial(d, k))
    throw Error(ErrorCode::kShapeMismatch, "Pluecker vector needs C(d, k) coordinates");
  for (const Complex& z : raw_) {
    scale_ = std::max(scale_, std::abs(z));
    norm_ += std::norm(z);
  }
  norm_ = std::sqrt(norm_);
  normalized_ = raw_;
  if (scale_ == 0.0) return;
  Complex phase(1.0);
  for (const Complex& z : raw_)
    if (std::abs(z) >= 1e-8 * scale_) {
      phase = std::conj(z) / std::abs(z);
      break;
    }
  for (Complex& z : normalized_) z *= phase / scale_;
}

Complex PlueckerVector::at(IndexTuple seq, bool use_normalized) const {
  if (static_cast<int>(seq.size()) != k_) throw Error(ErrorCode::kShapeMismatch, "tuple length differs from k");
  const int sign = sort_with_sign(seq);
  if (sign == 0) return Complex(0.0);
  if (seq.front() < 1 || seq.back() > d_) throw Error(ErrorCode::kInvalidArgument, "tuple index outside [d]");
  const auto& src = use_normalized ? normalized_ : raw_;
  return static_cast<double>(sign) * src[tuple_rank(seq, d_)];
}

PlueckerVector pluecker(const Matrix& rows) {
  const int k = static_cast<int>(rows.rows());
  const int d = static_cast<int>(rows.cols());
  if (k > d) throw Error(ErrorCode::kRankDeficientBasis, "more rows than columns");
  std::vector<Complex> raw;
  raw.reserve(binomial(d, k));
  Matrix sub(k, k);
  for (const IndexTuple& t : increasing_tuples(d, k)) {
    for (int j = 0; j < k; ++j) sub.col(j) = rows.col(t[j] - 1);
    raw.push_back(k == 0 ? Complex(1.0) : sub.partialPivLu().determinant());
  }
  return PlueckerVector(k, d, std::move(raw));
}

PlueckerVector pluecker(const SubspaceBasis& basis) { return pluecker(basis.rows()); }

double pluecker_relations_residual(const PlueckerVector& p) {
  const int k = p.k();
  const int d = p.d();
  if (k <= 1 || k >= d) return 0.0;
  double worst = 0.0;
  const auto small = increasing_tuples(d, k - 1);
  const auto large = increasing_tuples(d, k + 1);
  for (const IndexTuple& i_set : small) {
    for (const IndexTuple& j_set : large) {
      Complex acc(0.0);
      for (int l = 0; l <= k; ++l) {
        IndexTuple left = i_set;
        left.push_back(j_set[l]);
        IndexTuple right;
        for (int m = 0; m <= k; ++m)
          if (m != l) right.push_back(j_set[m]);
        const double sgn = (l % 2 == 0) ? 1.0 : -1.0;
        acc += sgn * p.at(left, true) * p.at(right, true);
      }
      worst = std::max(worst, std::abs(acc));
    }
  }
  return worst;
}

DualIndex dual_pluecker(const IndexTuple& q_index, int m, int n) {
  const int total = m * n;
  if (static_cast<int>(q_index.size()) != m + n - 1)
    throw Error(ErrorCode::kShapeMismatch, "dual index needs M + N - 1 entries");
  std::vector<bool> seen(total + 1, false);
  for (int r : q_index) {
    if (r < 1 || r > total) throw Error(ErrorCode::kInvalidArgument, "dual index outside [MN]");
    if (seen[r]) throw Error(ErrorCode::kDuplicateIndex, "dual index repeats " + std::to_string(r));
    seen[r] = true;
  }
  DualIndex out;
  for (int r = 1; r <= total; ++r)
    if (!seen[r]) out.complement.push_back(r);
  IndexTuple concat = out.complement;
  concat.insert(concat.end(), q_index.begin(), q_index.end());
  out.sign = sort_with_sign(concat);
  return out;
}

}  // namespace sep4
