#include "sep4/ppt.hpp"

#include <algorithm>

namespace sep4 {

std::vector<SubsetMask> ppt_subsets(int parties) {
  std::vector<SubsetMask> out;
  const std::uint32_t limit = parties > 0 ? 1u << (parties - 1) : 1u;
  for (std::uint32_t b = 0; b < limit; ++b) out.emplace_back(b);
  std::stable_sort(out.begin(), out.end(), [](SubsetMask a, SubsetMask b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.parties() < b.parties();
  });
  return out;
}

PptReport is_ppt(const Operator& rho) {
  PptReport report;
  const SpectralData base = spectral(rho);
  const double lmax = std::max(base.eigenvalues(0), 0.0);
  report.threshold = -rho.config().tol_psd * lmax;
  double worst = 0.0;
  bool first = true;
  for (SubsetMask s : ppt_subsets(rho.parties())) {
    const SpectralData spec = s.empty() ? base : spectral(partial_transpose(rho, s));
    PartialTransposeRecord rec{s, spec.eigenvalues(spec.eigenvalues.size() - 1),
                               rank_of(spec, rho.config().tol_rank)};
    if (first || rec.min_eigenvalue < worst) {
      worst = rec.min_eigenvalue;
      report.worst_subset = s;
      first = false;
    }
    if (rec.min_eigenvalue < report.threshold) report.is_ppt = false;
    report.records.push_back(rec);
  }
  return report;
}

std::pair<int, int> birank(const Operator& rho) {
  if (rho.parties() != 2) throw Error(ErrorCode::kNotBipartite, "birank needs exactly two parties");
  return {rank_of(rho), rank_of(partial_transpose(rho, SubsetMask::of({0})))};
}

Operator group_bipartite(const Operator& rho, SubsetMask group) {
  const int n = rho.parties();
  if (group.empty() || group == SubsetMask::all(n) || !group.valid_for(n))
    throw Error(ErrorCode::kInvalidArgument, "group must be a proper nonempty subset");
  std::vector<int> order;
  for (int i = 0; i < n; ++i)
    if (group.contains(i)) order.push_back(i);
  for (int i = 0; i < n; ++i)
    if (!group.contains(i)) order.push_back(i);
  const long d = rho.dim();
  std::vector<long> perm(d);
  for (long r = 0; r < d; ++r) {
    const auto dg = digits(r, rho.dims());
    long idx = 0;
    for (int j = 0; j < n; ++j) idx = idx * rho.dims()[order[j]] + dg[order[j]];
    perm[r] = idx;
  }
  Matrix out(d, d);
  for (long c = 0; c < d; ++c)
    for (long r = 0; r < d; ++r) out(perm[r], perm[c]) = rho.matrix()(r, c);
  int dg = 1, dr = 1;
  for (int i = 0; i < n; ++i) (group.contains(i) ? dg : dr) *= rho.dims()[i];
  return Operator(std::move(out), Dims{dg, dr}, rho.config());
}

}  // namespace sep4
