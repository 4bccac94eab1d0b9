#pragma once

#include "sep4/tensor.hpp"

#include <cstdint>
#include <vector>

namespace sep4 {

// Product vectors given factor by factor.
struct ProductBasisSpec {
  Dims dims;
  std::vector<std::vector<Vector>> members;
};

// The four-member three-qubit UPB |000>, |+,1,->, |1,-,+>, |-,+,1>.
ProductBasisSpec divincenzo_upb();

// Rank-four three-qubit PPT entangled state
//   |+,psi_1><..| + |-,psi_2><..| + |0,psi_3><..| + |1,psi_4><..|,
// the projector onto the orthocomplement of divincenzo_upb().
MultiState divincenzo_state();

// Two-qutrit state sum_i |psi_i><psi_i| with
//   psi_1 = |00> + a|11>,  psi_2 = a|01> + |10> + b|21>,
//   psi_3 = |11> + b|20> + |22>,  psi_4 = |12> + |21>.
// Rank four for every (a, b). For real a, b it is PPT, and separable iff
// ab = 0; complex parameters generally give an NPT state.
MultiState example_ab_state(Complex a, Complex b);

// Rows psi_1..psi_4 of the state above, a basis of its range.
Matrix example_ab_range_rows(Complex a, Complex b);

// Projector onto the orthocomplement of span(spec), divided by its rank.
// Unextendibility is not checked.
MultiState upb_complement_state(const ProductBasisSpec& spec);

// Sum of `terms` product projectors with complex Gaussian factors.
MultiState random_separable(const Dims& dims, int terms, std::uint64_t seed);

// example_ab_state at random real nonzero (a, b), conjugated by random local unitaries.
MultiState random_ppt_rank4_33(std::uint64_t seed);

}  // namespace sep4
