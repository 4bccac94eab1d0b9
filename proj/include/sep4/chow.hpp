#pragma once

#include "sep4/grassmann.hpp"
#include "sep4/subspace.hpp"
#include "sep4/types.hpp"

#include "json.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace sep4 {

struct ChowTerm {
  int sign = 1;
  IndexTuple tuple;  // strictly increasing, 1-based over [d]

  friend bool operator==(const ChowTerm&, const ChowTerm&) = default;
};

using ChowCell = std::vector<ChowTerm>;

// Determinantal Chow form of a Segre variety: F(p) = det[ sum_{terms} sign * p_tuple ].
// Plücker coordinates are taken in the lexicographic product basis.
struct ChowForm {
  std::string system;  // e.g. "3x3", "2x2x2", "5x2"
  Dims dims;
  int k = 0;           // subspace dimension delta_1
  std::vector<std::vector<ChowCell>> entries;

  int size() const { return static_cast<int>(entries.size()); }
  int degree() const { return size(); }
  int ambient() const { return static_cast<int>(total_dim(dims)); }
};

// d - 1 - sum_i (d_i - 1)
int delta_one(const Dims& dims);

// "2x2", "3x2", "Mx2:7", "3x3", "2x2x2", ... -> dims.
Dims parse_system(std::string_view label);
std::string system_label(const Dims& dims);

// Tables for [2,2], [3,2], [4,2], [2,3], [3,3], [2,2,2]; [M,2] with M > 4 is
// generated. Throws UnsupportedSystem otherwise.
ChowForm builtin_chow(const Dims& dims);

// Only the hard-coded tables (no generator fallback).
ChowForm table_chow(std::string_view system);
std::vector<std::string> table_names();

// FNV-1a 64 of the embedded table file, as 16 hex digits.
std::string table_checksum(std::string_view system);

// b_ij = sum over the C(M-1, j-1) ways of incrementing j-1 terms of
// (1, 3, ..., 2M-1) with 2(M-i)+1 removed.
ChowForm generate_chow_Mx2(int m);

// Replaces every p_t by p_{pi(t)}; `pi` lists pi(1..d). The antisymmetry
// sign of re-sorting is folded into the term sign. A nonempty `target`
// relabels the result as a form for that system (same d and k), e.g. [2,3]
// when pi reorders the [3,2] product basis party-swapped.
ChowForm permute_form(const ChowForm& form, const std::vector<int>& pi, const Dims& target = {});
// Cellwise comparison treating each cell as a multiset of terms.
bool same_form(const ChowForm& a, const ChowForm& b);
// Same as same_form after flipping the signs of whole rows, i.e. the two
// determinants agree up to a global sign.
bool same_form_up_to_sign(const ChowForm& a, const ChowForm& b);

// `normalized` evaluates on the Pluecker vector scaled to unit root-mean-square
// coordinate (Euclidean norm sqrt(C(d,k))) with the phase of normalized().
Matrix assemble_chow_matrix(const ChowForm& form, const PlueckerVector& p, bool normalized = true);
Complex eval_chow(const ChowForm& form, const PlueckerVector& p, bool normalized = true);

struct SegreTest {
  bool meets = false;   // true: the subspace contains a product vector
  double abs_f = 0.0;   // |F| on the normalized Plücker vector
  Complex value;        // F on the normalized vector
  Complex raw_value;    // F on the raw minors
};

// Throws WrongDimension when dim != delta_1 and UnsupportedSystem when no
// form is known for the basis' dims.
SegreTest subspace_meets_segre(const SubspaceBasis& basis, double tol_chow);

nlohmann::json chow_to_json(const ChowForm& form);
ChowForm chow_from_json(const nlohmann::json& j);

// Human-readable layout: rows separated by ';', cells by ',', e.g.
// [[+p1],[+p2];[+p3],[+p4]]
std::string chow_to_text(const ChowForm& form);

}  // namespace sep4
