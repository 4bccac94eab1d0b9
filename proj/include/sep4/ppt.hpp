#pragma once

#include "sep4/tensor.hpp"

#include <utility>
#include <vector>

namespace sep4 {

struct PartialTransposeRecord {
  SubsetMask subset;
  double min_eigenvalue = 0.0;
  int rank = 0;
};

struct PptReport {
  bool is_ppt = true;
  std::vector<PartialTransposeRecord> records;  // one per {S, S^c} pair
  SubsetMask worst_subset;                      // smallest min-eigenvalue
  double threshold = 0.0;                       // -tol_psd * lambda_max(rho)
};

// Subsets not containing the last party, ordered by popcount then
// lexicographically by sorted party list. Starts with the empty set.
std::vector<SubsetMask> ppt_subsets(int parties);

PptReport is_ppt(const Operator& rho);

// (rank(rho), rank(rho^{Gamma_1})) of a bipartite state.
std::pair<int, int> birank(const Operator& rho);

// Treats the listed parties as one system: returns the operator viewed on two
// parties (`group` first, the rest second), reordering tensor factors.
Operator group_bipartite(const Operator& rho, SubsetMask group);

}  // namespace sep4
