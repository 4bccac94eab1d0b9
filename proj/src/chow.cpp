#include "sep4/chow.hpp"

#include "sep4/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <map>
#include <sstream>

namespace sep4 {

namespace detail {
extern const std::pair<std::string_view, std::string_view> kChowTables[];
extern const int kChowTableCount;
}  // namespace detail

namespace {

std::string_view table_text(std::string_view system) {
  for (int i = 0; i < detail::kChowTableCount; ++i)
    if (detail::kChowTables[i].first == system) return detail::kChowTables[i].second;
  throw Error(ErrorCode::kUnsupportedSystem, "no Chow table for " + std::string(system));
}

std::vector<ChowTerm> sorted_cell(ChowCell cell) {
  std::sort(cell.begin(), cell.end(), [](const ChowTerm& a, const ChowTerm& b) {
    return std::tie(a.tuple, a.sign) < std::tie(b.tuple, b.sign);
  });
  return cell;
}

ChowCell negated(ChowCell cell) {
  for (ChowTerm& t : cell) t.sign = -t.sign;
  return cell;
}

void validate(const ChowForm& form) {
  const int d = form.ambient();
  if (form.k != delta_one(form.dims))
    throw Error(ErrorCode::kShapeMismatch, "tuple length differs from delta_1 for " + form.system);
  for (const auto& row : form.entries) {
    if (static_cast<int>(row.size()) != form.size()) throw Error(ErrorCode::kShapeMismatch, "Chow matrix is not square");
    for (const ChowCell& cell : row)
      for (const ChowTerm& t : cell) {
        if (static_cast<int>(t.tuple.size()) != form.k) throw Error(ErrorCode::kShapeMismatch, "tuple length");
        for (std::size_t i = 0; i < t.tuple.size(); ++i) {
          if (t.tuple[i] < 1 || t.tuple[i] > d) throw Error(ErrorCode::kShapeMismatch, "tuple index outside [d]");
          if (i > 0 && t.tuple[i] <= t.tuple[i - 1]) throw Error(ErrorCode::kShapeMismatch, "tuple not increasing");
        }
        if (t.sign != 1 && t.sign != -1) throw Error(ErrorCode::kShapeMismatch, "term sign must be +-1");
      }
  }
}

}  // namespace

int delta_one(const Dims& dims) {
  int s = 0;
  for (int di : dims) s += di - 1;
  return static_cast<int>(total_dim(dims)) - 1 - s;
}

Dims parse_system(std::string_view label) {
  auto fail = [&] { return Error(ErrorCode::kUnsupportedSystem, "cannot parse system '" + std::string(label) + "'"); };
  if (label.starts_with("Mx2:")) {
    int m = 0;
    const auto rest = label.substr(4);
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), m);
    if (ec != std::errc() || ptr != rest.data() + rest.size() || m < 2) throw fail();
    return {m, 2};
  }
  Dims dims;
  std::size_t pos = 0;
  while (pos <= label.size()) {
    const std::size_t next = std::min(label.find('x', pos), label.size());
    int v = 0;
    auto [ptr, ec] = std::from_chars(label.data() + pos, label.data() + next, v);
    if (ec != std::errc() || ptr != label.data() + next || v < 1) throw fail();
    dims.push_back(v);
    pos = next + 1;
  }
  if (dims.size() < 2) throw fail();
  return dims;
}

std::string system_label(const Dims& dims) {
  std::string out;
  for (std::size_t i = 0; i < dims.size(); ++i) out += (i ? "x" : "") + std::to_string(dims[i]);
  return out;
}

std::vector<std::string> table_names() {
  std::vector<std::string> out;
  for (int i = 0; i < detail::kChowTableCount; ++i) out.emplace_back(detail::kChowTables[i].first);
  return out;
}

std::string table_checksum(std::string_view system) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : table_text(system)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ChowForm table_chow(std::string_view system) {
  return chow_from_json(nlohmann::json::parse(table_text(system)));
}

ChowForm builtin_chow(const Dims& dims) {
  const std::string label = system_label(dims);
  for (int i = 0; i < detail::kChowTableCount; ++i)
    if (detail::kChowTables[i].first == label) return table_chow(label);
  if (dims.size() == 2 && dims[1] == 2 && dims[0] >= 2) return generate_chow_Mx2(dims[0]);
  throw Error(ErrorCode::kUnsupportedSystem, "no Chow form for " + label);
}

ChowForm generate_chow_Mx2(int m) {
  if (m < 2) throw Error(ErrorCode::kInvalidArgument, "M must be at least 2");
  ChowForm form;
  form.dims = {m, 2};
  form.system = system_label(form.dims);
  form.k = m - 1;
  form.entries.assign(m, std::vector<ChowCell>(m));
  for (int i = 1; i <= m; ++i) {
    IndexTuple base;
    for (int t = 1; t <= 2 * m - 1; t += 2)
      if (t != 2 * (m - i) + 1) base.push_back(t);
    // Subsets of positions to increment, enumerated by bitmask.
    for (std::uint32_t mask = 0; mask < (1u << (m - 1)); ++mask) {
      const int j = std::popcount(mask) + 1;
      IndexTuple t = base;
      for (int pos = 0; pos < m - 1; ++pos)
        if (mask >> pos & 1u) ++t[pos];
      std::sort(t.begin(), t.end());
      form.entries[i - 1][j - 1].push_back({1, std::move(t)});
    }
    for (ChowCell& cell : form.entries[i - 1]) cell = sorted_cell(std::move(cell));
  }
  return form;
}

ChowForm permute_form(const ChowForm& form, const std::vector<int>& pi, const Dims& target) {
  const int d = form.ambient();
  if (static_cast<int>(pi.size()) != d) throw Error(ErrorCode::kNotBijective, "permutation length differs from d");
  std::vector<bool> hit(d + 1, false);
  for (int v : pi) {
    if (v < 1 || v > d || hit[v]) throw Error(ErrorCode::kNotBijective, "permutation is not a bijection of [d]");
    hit[v] = true;
  }
  ChowForm out = form;
  for (auto& row : out.entries)
    for (ChowCell& cell : row) {
      for (ChowTerm& term : cell) {
        for (int& idx : term.tuple) idx = pi[idx - 1];
        term.sign *= sort_with_sign(term.tuple);
      }
    }
  if (!target.empty()) {
    if (total_dim(target) != d || delta_one(target) != form.k)
      throw Error(ErrorCode::kShapeMismatch, "target system " + system_label(target) + " is incompatible");
    out.dims = target;
    out.system = system_label(target);
  }
  return out;
}

bool same_form(const ChowForm& a, const ChowForm& b) {
  if (a.dims != b.dims || a.k != b.k || a.size() != b.size()) return false;
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.size(); ++j)
      if (sorted_cell(a.entries[i][j]) != sorted_cell(b.entries[i][j])) return false;
  return true;
}

bool same_form_up_to_sign(const ChowForm& a, const ChowForm& b) {
  if (a.dims != b.dims || a.k != b.k || a.size() != b.size()) return false;
  for (int i = 0; i < a.size(); ++i) {
    bool plus = true, minus = true;
    for (int j = 0; j < a.size(); ++j) {
      const auto ca = sorted_cell(a.entries[i][j]);
      plus = plus && ca == sorted_cell(b.entries[i][j]);
      minus = minus && ca == sorted_cell(negated(b.entries[i][j]));
    }
    if (!plus && !minus) return false;
  }
  return true;
}

Matrix assemble_chow_matrix(const ChowForm& form, const PlueckerVector& p, bool normalized) {
  if (p.k() != form.k || p.d() != form.ambient())
    throw Error(ErrorCode::kShapeMismatch, "Pluecker vector shape does not match the " + form.system + " form");
  const int n = form.size();
  // max-normalized coordinates rescaled to unit root-mean-square, which is
  // invariant under unitaries acting on C^d
  const double rms = normalized && p.norm() > 0.0
                         ? p.scale() * std::sqrt(static_cast<double>(binomial(p.d(), p.k()))) / p.norm()
                         : 1.0;
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (const ChowTerm& t : form.entries[i][j]) m(i, j) += static_cast<double>(t.sign) * p.at(t.tuple, normalized);
  return normalized ? (rms * m).eval() : m;
}

Complex eval_chow(const ChowForm& form, const PlueckerVector& p, bool normalized) {
  return assemble_chow_matrix(form, p, normalized).partialPivLu().determinant();
}

SegreTest subspace_meets_segre(const SubspaceBasis& basis, double tol_chow) {
  const ChowForm form = builtin_chow(basis.dims());
  if (basis.dimension() != form.k)
    throw Error(ErrorCode::kWrongDimension, "subspace dimension " + std::to_string(basis.dimension()) +
                                                " differs from delta_1 = " + std::to_string(form.k));
  const PlueckerVector p = pluecker(basis);
  SegreTest out;
  out.value = eval_chow(form, p, true);
  out.raw_value = eval_chow(form, p, false);
  out.abs_f = std::abs(out.value);
  out.meets = out.abs_f <= tol_chow;
  return out;
}

nlohmann::json chow_to_json(const ChowForm& form) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : form.entries) {
    nlohmann::json jr = nlohmann::json::array();
    for (const ChowCell& cell : row) {
      nlohmann::json jc = nlohmann::json::array();
      for (const ChowTerm& t : cell) jc.push_back({{"sign", t.sign}, {"tuple", t.tuple}});
      jr.push_back(std::move(jc));
    }
    rows.push_back(std::move(jr));
  }
  return {{"system", form.system}, {"dims", form.dims}, {"k", form.k}, {"matrix", std::move(rows)}};
}

ChowForm chow_from_json(const nlohmann::json& j) {
  ChowForm form;
  try {
    form.system = j.at("system").get<std::string>();
    form.dims = j.at("dims").get<Dims>();
    form.k = j.at("k").get<int>();
    for (const auto& jr : j.at("matrix")) {
      std::vector<ChowCell> row;
      for (const auto& jc : jr) {
        ChowCell cell;
        for (const auto& jt : jc) cell.push_back({jt.at("sign").get<int>(), jt.at("tuple").get<IndexTuple>()});
        row.push_back(std::move(cell));
      }
      form.entries.push_back(std::move(row));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  validate(form);
  return form;
}

std::string chow_to_text(const ChowForm& form) {
  std::ostringstream os;
  os << '[';
  for (int i = 0; i < form.size(); ++i) {
    if (i) os << ";\n ";
    for (int j = 0; j < form.size(); ++j) {
      if (j) os << ',';
      os << '[';
      for (const ChowTerm& t : form.entries[i][j]) {
        os << (t.sign > 0 ? "+p" : "-p");
        const bool sep = form.ambient() > 9;
        for (std::size_t q = 0; q < t.tuple.size(); ++q) os << (sep && q ? "_" : "") << t.tuple[q];
      }
      os << ']';
    }
  }
  os << ']';
  return os.str();
}

}  // namespace sep4
