#pragma once

#include "sep4/subspace.hpp"
#include "sep4/tensor.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace sep4 {

struct ProductVectorHit {
  Vector coefficients;          // in the given basis: vector = B^T coefficients
  Vector vector;                // unit norm, inside the subspace
  std::vector<Vector> factors;  // kron(factors) == vector up to the residual
  double residual = 0.0;        // max over parties of sigma_2 / sigma_1
};

struct ProductSearchOptions {
  int restarts = 200;
  std::uint64_t seed = 0;
  double tol_product = 1e-8;
  int max_sweeps = 200;
};

// Alternating projection between the subspace and the set of product vectors
// from random starts. A miss is evidence of a completely entangled subspace,
// not proof.
std::optional<ProductVectorHit> find_product_vector(const SubspaceBasis& basis, const ProductSearchOptions& opts = {});

// Exact enumeration of the product vectors in a 5-dimensional subspace of
// C^3 (x) C^3 via the resultant of two cubic minors. Throws
// DegenerateConfiguration when three coordinate changes all produce root
// clusters closer than 1e-6, or when the set is not finite.
std::vector<ProductVectorHit> count_kernel_product_vectors_3x3(const SubspaceBasis& kernel, std::uint64_t seed = 0);

struct BipartiteKernelVectors {
  int cut = 0;                      // 0-based party split off as A_1
  std::vector<Vector> local;        // |a_i> on the cut party
  std::vector<Vector> psi;          // |psi_i> on the remaining two qubits
  std::vector<Vector> reciprocal;   // <psi'_i|psi_j> = delta_ij
  std::vector<Vector> kernel;       // |a_i^perp> (x) |psi'_i>, in the original party order, unit norm
};

// Four kernel vectors of a 2x2x2 PPT entangled state of rank four that are
// product across `cut` : rest. Throws NotApplicable when the hypotheses fail.
BipartiteKernelVectors bipartite_kernel_product_vectors_2x2x2(const MultiState& rho, int cut, std::uint64_t seed = 0);

struct DecompositionTerm {
  double weight = 0.0;
  std::vector<Vector> factors;  // unit vectors, one per party
};

struct Decomposition {
  std::vector<DecompositionTerm> terms;
  double residual = 0.0;  // Frobenius norm of rho - sum_k w_k |phi_k><phi_k|
  int length_upper_bound = 0;

  Matrix assemble(const Dims& dims) const;
};

// Peels product vectors phi from the range with the largest weight
// 1 / <phi|rho^+|phi> that keeps the remainder positive, each step lowering the
// rank by one. Candidates are accepted only if the remainder stays PPT.
// Returns nullopt when max_terms is exhausted or no admissible product vector
// is found; that never refutes separability.
std::optional<Decomposition> greedy_decompose(const MultiState& rho, int max_terms, std::uint64_t seed = 0,
                                              int restarts_per_step = 64);

// Per party j: every subset of at most d_j of the factors is linearly independent.
bool check_general_position(const std::vector<std::vector<Vector>>& product_vectors, double tol = 1e-8);

}  // namespace sep4
