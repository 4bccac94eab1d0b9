#pragma once

#include "sep4/subspace.hpp"
#include "sep4/types.hpp"

#include <vector>

namespace sep4 {

using IndexTuple = std::vector<int>;  // 1-based, strictly increasing unless stated otherwise

long binomial(int n, int k);

// All strictly increasing k-tuples over [d], lexicographic.
std::vector<IndexTuple> increasing_tuples(int d, int k);

// Position of a strictly increasing tuple in increasing_tuples(d, k).
long tuple_rank(const IndexTuple& t, int d);

// Sorts `seq` in place and returns the sign of the sorting permutation, or 0
// if an index repeats.
int sort_with_sign(IndexTuple& seq);

// Maximal minors p_{i1..ik} of a k x d basis, indexed in lexicographic tuple
// order. `normalized()` is the same point of the Grassmannian scaled so the
// largest |p| is one and the first coordinate with |p| >= 1e-8 is real
// positive.
class PlueckerVector {
 public:
  PlueckerVector(int k, int d, std::vector<Complex> raw);

  int k() const { return k_; }
  int d() const { return d_; }
  const std::vector<Complex>& raw() const { return raw_; }
  const std::vector<Complex>& normalized() const { return normalized_; }
  double scale() const { return scale_; }  // max |raw|
  double norm() const { return norm_; }    // Euclidean norm of raw

  // Coordinate of an arbitrary index sequence, with p antisymmetric.
  Complex at(IndexTuple seq, bool use_normalized = false) const;

 private:
  int k_;
  int d_;
  std::vector<Complex> raw_;
  std::vector<Complex> normalized_;
  double scale_ = 0.0;
  double norm_ = 0.0;
};

PlueckerVector pluecker(const SubspaceBasis& basis);
PlueckerVector pluecker(const Matrix& rows);  // unchecked rows, k <= d

// Max |residual| of the single-exchange quadratic relations
//   sum_l (-1)^l p_{I, j_l} p_{J \ j_l} = 0,  |I| = k-1, |J| = k+1,
// evaluated on the normalized vector.
double pluecker_relations_residual(const PlueckerVector& p);

struct DualIndex {
  int sign = 1;               // sign of the permutation (complement, q-index)
  IndexTuple complement;      // increasing
};

// Dual coordinate q_{r_1..r_{M+N-1}} = sign * p_{complement} for an M x N system.
DualIndex dual_pluecker(const IndexTuple& q_index, int m, int n);

}  // namespace sep4
