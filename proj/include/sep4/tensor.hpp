#pragma once

#include "sep4/error.hpp"
#include "sep4/subspace.hpp"
#include "sep4/tolerance.hpp"
#include "sep4/types.hpp"

#include <optional>
#include <vector>

namespace sep4 {

// Hermitian operator on H_1 (x) ... (x) H_n. Positivity is not implied;
// partial transposes of states live here.
class Operator {
 public:
  Operator(Matrix matrix, Dims dims, ToleranceConfig cfg = {});

  const Matrix& matrix() const { return matrix_; }
  const Dims& dims() const { return dims_; }
  const ToleranceConfig& config() const { return cfg_; }
  int parties() const { return static_cast<int>(dims_.size()); }
  long dim() const { return matrix_.rows(); }
  double trace() const { return matrix_.trace().real(); }

 protected:
  Matrix matrix_;
  Dims dims_;
  ToleranceConfig cfg_;
};

// Hermitian positive-semidefinite operator, not necessarily normalized.
class MultiState : public Operator {
 public:
  // Validates shape, symmetrizes within tol_herm and checks positivity.
  static MultiState create(const Matrix& matrix, const Dims& dims, const ToleranceConfig& cfg = {});
  static MultiState create(const Operator& op) { return create(op.matrix(), op.dims(), op.config()); }

  // For results that are positive by construction (partial traces,
  // compressions, local conjugations of a valid state).
  static MultiState assume_valid(Operator op) { return MultiState(std::move(op)); }

 private:
  explicit MultiState(Operator op) : Operator(std::move(op)) {}
};

struct SpectralData {
  RealVector eigenvalues;  // descending
  Matrix eigenvectors;     // column i pairs with eigenvalues(i)
};

Operator partial_transpose(const Operator& op, SubsetMask subset);
MultiState partial_transpose_state(const MultiState& rho, SubsetMask subset);  // throws NotPositive if NPT

Operator reduced_operator(const Operator& op, SubsetMask keep);
MultiState reduced_state(const MultiState& rho, SubsetMask keep);

SpectralData spectral(const Operator& op);

int rank_of(const Operator& op);
int rank_of(const SpectralData& spec, double tol_rank);
SubspaceBasis range_basis(const Operator& op);
SubspaceBasis kernel_basis(const Operator& op);
std::vector<int> local_ranks(const Operator& op);

struct Compression {
  MultiState state;
  std::vector<Matrix> isometries;  // one per original party, d_i x r_i, orthonormal columns
  std::vector<int> kept;           // original indices of parties with r_i > 1
  std::vector<int> dropped;        // original indices of parties with r_i == 1
};

// Restricts every party to the range of its reduced state and removes
// parties of local rank one. Throws AllPartiesTrivial when nothing is left.
Compression compress_support(const MultiState& rho);

struct ProductCheck {
  bool product = false;
  double residual = 0.0;         // max over parties of sigma_2 / sigma_1
  std::vector<Vector> factors;   // tensor product reproduces the best rank-one fit
};

ProductCheck is_product(const Vector& v, const Dims& dims, double tol_product = ToleranceConfig{}.tol_product);

// sigma_2 / sigma_1 of the flattening with `party` as the row index.
double flattening_ratio(const Vector& v, const Dims& dims, int party);
Matrix flatten(const Vector& v, const Dims& dims, int party);

Vector kron(const std::vector<Vector>& factors);

// (I (x) .. (x) A (x) .. (x) I) X where A acts on `party`; A is p x d_party.
// The result has the party's dimension replaced by p.
Matrix apply_on_party(const Matrix& x, const Dims& dims, int party, const Matrix& a);

// (U_1 (x) ... (x) U_n) rho (U_1 (x) ... (x) U_n)^dagger with U_i square.
Operator conjugate_local(const Operator& op, const std::vector<Matrix>& locals);
MultiState conjugate_local(const MultiState& rho, const std::vector<Matrix>& locals);

// Complex-conjugates the factors of the listed parties (partial conjugation of
// a product vector).
std::vector<Vector> conjugate_factors(std::vector<Vector> factors, SubsetMask subset);

// Reorders tensor factors: result party j is input party order[j].
Vector permute_parties(const Vector& v, const Dims& dims, const std::vector<int>& order);

}  // namespace sep4
