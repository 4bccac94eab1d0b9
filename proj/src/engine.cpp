#include "sep4/engine.hpp"

#include "sep4/chow.hpp"

#include <algorithm>
#include <array>

namespace sep4 {

namespace {

constexpr std::array<std::pair<Verdict, std::string_view>, 3> kVerdictNames{{
    {Verdict::kSeparable, "Separable"},
    {Verdict::kEntangled, "Entangled"},
    {Verdict::kOutOfScope, "OutOfScope"},
}};

constexpr std::array<std::pair<Rule, std::string_view>, 9> kRuleNames{{
    {Rule::kNPT, "NPT"},
    {Rule::kRank1Product, "Rank1Product"},
    {Rule::kRank1NonProduct, "Rank1NonProduct"},
    {Rule::kPPTRank2, "PPTRank2"},
    {Rule::kPPTRank3, "PPTRank3"},
    {Rule::kPPTRank4Shape, "PPTRank4Shape"},
    {Rule::kChow33, "Chow33"},
    {Rule::kChow222, "Chow222"},
    {Rule::kRankAbove4, "RankAbove4"},
}};

// Lifts factors on the compressed parties back to the original ones.
Decomposition lift(const Decomposition& dec, const Compression& comp) {
  Decomposition out = dec;
  const int n = static_cast<int>(comp.isometries.size());
  for (DecompositionTerm& term : out.terms) {
    std::vector<Vector> full(n);
    for (std::size_t k = 0; k < comp.kept.size(); ++k) {
      const int p = comp.kept[k];
      full[p] = comp.isometries[p] * term.factors[k];
    }
    for (int p : comp.dropped) full[p] = comp.isometries[p].col(0);
    // The compressed state carries the whole scale; factors stay unit vectors.
    for (Vector& f : full) {
      const double nf = f.norm();
      term.weight *= nf * nf;
      f /= nf;
    }
    term.factors = std::move(full);
  }
  return out;
}

void finish_separable(ClassificationReport& report, const MultiState& rho, const std::optional<Compression>& comp,
                      const ClassifyOptions& opts) {
  report.length_bounds = length_bounds(report);
  if (!opts.decompose || report.rank > 4 || !comp) return;
  const int max_terms = std::max(report.rank, 6);
  if (auto dec = greedy_decompose(comp->state, max_terms, opts.seed)) {
    Decomposition lifted = lift(*dec, *comp);
    lifted.residual = (rho.matrix() - lifted.assemble(rho.dims())).norm();
    lifted.length_upper_bound = static_cast<int>(lifted.terms.size());
    report.decomposition = std::move(lifted);
  } else {
    report.warnings.push_back("greedy decomposition did not converge; separability is unaffected");
  }
}

}  // namespace

std::string_view to_string(Verdict v) {
  for (const auto& [k, s] : kVerdictNames)
    if (k == v) return s;
  return "?";
}

std::string_view to_string(Rule r) {
  for (const auto& [k, s] : kRuleNames)
    if (k == r) return s;
  return "?";
}

Verdict verdict_from_string(std::string_view s) {
  for (const auto& [k, name] : kVerdictNames)
    if (name == s) return k;
  throw Error(ErrorCode::kParseError, "unknown verdict " + std::string(s));
}

Rule rule_from_string(std::string_view s) {
  for (const auto& [k, name] : kRuleNames)
    if (name == s) return k;
  throw Error(ErrorCode::kParseError, "unknown rule " + std::string(s));
}

LengthBounds length_bounds(const ClassificationReport& report) {
  if (report.verdict != Verdict::kSeparable)
    throw Error(ErrorCode::kNotSeparableVerdict, "length bounds apply to separable verdicts only");
  const int r = report.rank;
  const Dims& local = report.compressed_dims;  // compressed dims are the local ranks > 1
  const int n = static_cast<int>(local.size());
  const int max_local = local.empty() ? 1 : *std::max_element(local.begin(), local.end());
  auto has_local = [&](int v) { return std::find(local.begin(), local.end(), v) != local.end(); };
  LengthBounds b{r, r};
  switch (r) {
    case 0:
    case 1:
    case 2:
      break;
    case 3:
      b.hi = (n >= 3 || has_local(3)) ? 3 : 4;
      break;
    case 4:
      b.hi = 6;
      if (n > 2 && max_local > 2) b.hi = 5;
      if (has_local(4)) b.hi = 4;
      break;
    default:
      throw Error(ErrorCode::kNotSeparableVerdict, "no length bound beyond rank four");
  }
  return b;
}

ClassificationReport classify(const MultiState& rho, const ClassifyOptions& opts) {
  ClassificationReport report;
  report.original_dims = rho.dims();
  report.local_ranks = local_ranks(rho);

  std::optional<Compression> comp;
  try {
    comp = compress_support(rho);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kAllPartiesTrivial) throw;
  }

  if (!comp) {
    // Every party has local rank one: a pure product state.
    report.rank = rank_of(rho);
    report.verdict = Verdict::kSeparable;
    report.rule_fired = Rule::kRank1Product;
    report.citations.push_back("a state whose single-party reductions all have rank one is a pure product state");
    report.length_bounds = LengthBounds{1, 1};
    if (opts.decompose && report.rank == 1) {
      const SubspaceBasis range = range_basis(rho);
      const Vector v = range.vector(0);
      const ProductCheck pc = is_product(v, rho.dims(), 1.0);
      Decomposition dec;
      std::vector<Vector> f;
      for (const Vector& x : pc.factors) f.push_back(x.normalized());
      dec.terms.push_back({rho.trace(), f});
      dec.residual = (rho.matrix() - dec.assemble(rho.dims())).norm();
      dec.length_upper_bound = 1;
      report.decomposition = std::move(dec);
    }
    return report;
  }

  const MultiState& state = comp->state;
  report.compressed_dims = state.dims();
  report.kept_parties = comp->kept;
  report.rank = rank_of(state);

  if (report.rank == 1) {
    const Vector v = range_basis(state).vector(0);
    const ProductCheck pc = is_product(v, state.dims(), state.config().tol_product);
    if (pc.product) {
      report.verdict = Verdict::kSeparable;
      report.rule_fired = Rule::kRank1Product;
      report.citations.push_back("a rank-one state is separable iff its range vector is a product vector");
      finish_separable(report, rho, comp, opts);
    } else {
      report.verdict = Verdict::kEntangled;
      report.rule_fired = Rule::kRank1NonProduct;
      report.citations.push_back("a rank-one state is separable iff its range vector is a product vector");
      report.ppt = is_ppt(state);
    }
    return report;
  }

  report.ppt = is_ppt(state);
  if (!report.ppt->is_ppt) {
    report.verdict = Verdict::kEntangled;
    report.rule_fired = Rule::kNPT;
    report.citations.push_back("every separable state has positive partial transposes");
    return report;
  }

  if (report.rank == 2 || report.rank == 3) {
    report.verdict = Verdict::kSeparable;
    report.rule_fired = report.rank == 2 ? Rule::kPPTRank2 : Rule::kPPTRank3;
    report.citations.push_back(report.rank == 2 ? "PPT states of rank two are separable and have length two"
                                                : "PPT states of rank three are separable");
    finish_separable(report, rho, comp, opts);
    return report;
  }

  if (report.rank > 4) {
    report.verdict = Verdict::kOutOfScope;
    report.rule_fired = Rule::kRankAbove4;
    report.citations.push_back("the rank criterion is silent for PPT states of rank five or more");
    return report;
  }

  // PPT, rank four.
  const Dims& cd = state.dims();
  const bool is33 = cd == Dims{3, 3};
  const bool is222 = cd == Dims{2, 2, 2};
  if (!is33 && !is222) {
    report.verdict = Verdict::kSeparable;
    report.rule_fired = Rule::kPPTRank4Shape;
    if (cd.size() == 2)
      report.citations.push_back("bipartite PPT entangled states of rank four are supported on 3x3");
    else if (cd.size() == 3)
      report.citations.push_back("tripartite PPT entangled states of rank four have local ranks 2, 2, 2");
    else
      report.citations.push_back("PPT states of rank four with four or more nontrivial parties are separable");
    finish_separable(report, rho, comp, opts);
    return report;
  }

  const SegreTest test = subspace_meets_segre(range_basis(state), state.config().tol_chow);
  ChowEvaluation ce;
  ce.system = system_label(cd);
  ce.value = test.value;
  ce.raw_value = test.raw_value;
  ce.abs_value = test.abs_f;
  const double tol = state.config().tol_chow;
  ce.low_confidence = test.abs_f > tol / 10.0 && test.abs_f < tol * 10.0;
  if (ce.low_confidence) report.warnings.push_back("|F| is within a factor 10 of tol_chow; verdict has low confidence");
  report.chow = ce;
  report.rule_fired = is33 ? Rule::kChow33 : Rule::kChow222;
  report.citations.push_back(
      "a PPT state of rank four is entangled iff its range contains no product vector, i.e. iff the Chow form of "
      "the Segre variety does not vanish on its Pluecker coordinates");
  if (test.meets) {
    report.verdict = Verdict::kSeparable;
    finish_separable(report, rho, comp, opts);
  } else {
    report.verdict = Verdict::kEntangled;
    if (is222) {
      for (const PartialTransposeRecord& rec : report.ppt->records)
        if (rec.rank != 4)
          report.warnings.push_back("partial transpose rank " + std::to_string(rec.rank) +
                                    " != 4 for an entangled 2x2x2 state; check tolerances");
    }
  }
  return report;
}

}  // namespace sep4
