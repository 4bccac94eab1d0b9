#pragma once

#include "sep4/oracle.hpp"
#include "sep4/ppt.hpp"
#include "sep4/tensor.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sep4 {

enum class Verdict { kSeparable, kEntangled, kOutOfScope };

enum class Rule {
  kNPT,
  kRank1Product,
  kRank1NonProduct,
  kPPTRank2,
  kPPTRank3,
  kPPTRank4Shape,
  kChow33,
  kChow222,
  kRankAbove4,
};

std::string_view to_string(Verdict v);
std::string_view to_string(Rule r);
Verdict verdict_from_string(std::string_view s);
Rule rule_from_string(std::string_view s);

struct LengthBounds {
  int lo = 0;
  int hi = 0;
  friend bool operator==(const LengthBounds&, const LengthBounds&) = default;
};

struct ChowEvaluation {
  std::string system;
  Complex value;       // on the normalized Pluecker vector of the compressed range
  Complex raw_value;   // on the raw minors of the orthonormal range basis
  double abs_value = 0.0;
  bool low_confidence = false;  // |F| within a factor 10 of tol_chow
};

struct ClassificationReport {
  Verdict verdict = Verdict::kOutOfScope;
  Rule rule_fired = Rule::kRankAbove4;
  Dims original_dims;
  Dims compressed_dims;
  std::vector<int> kept_parties;  // 0-based original indices surviving compression
  int rank = 0;
  std::vector<int> local_ranks;   // of the original state, one per party
  std::optional<PptReport> ppt;   // of the compressed state
  std::optional<ChowEvaluation> chow;
  std::optional<Decomposition> decomposition;  // factors on the original parties
  std::optional<LengthBounds> length_bounds;
  std::vector<std::string> citations;
  std::vector<std::string> warnings;
};

struct ClassifyOptions {
  std::uint64_t seed = 0;
  bool decompose = true;
};

ClassificationReport classify(const MultiState& rho, const ClassifyOptions& opts = {});

// Bounds on the length of a separable state from its rank, number of
// (compressed) parties and local ranks. Throws NotSeparableVerdict.
LengthBounds length_bounds(const ClassificationReport& report);

}  // namespace sep4
