#include "sep4/serialize.hpp"

#include <cmath>

namespace sep4 {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::kParseError, what); }

double finite(const Json& j) {
  if (!j.is_number()) bad("expected a number, got " + j.dump());
  const double x = j.get<double>();
  if (!std::isfinite(x)) bad("non-finite number");
  return x;
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) bad("expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing key \"") + key + "\"");
  return *it;
}

Dims dims_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) bad("dims must be a nonempty array");
  Dims d;
  for (const Json& x : j) {
    if (!x.is_number_integer() || x.get<long>() < 1) bad("dims entries must be positive integers");
    d.push_back(x.get<int>());
  }
  return d;
}

// nlohmann's own type errors surface as ParseError too.
template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    bad(e.what());
  }
}

Json ints(const std::vector<int>& v) { return Json(v); }

std::vector<int> ints_from(const Json& j) {
  if (!j.is_array()) bad("expected an integer array");
  std::vector<int> v;
  for (const Json& x : j) {
    if (!x.is_number_integer()) bad("expected an integer");
    v.push_back(x.get<int>());
  }
  return v;
}

}  // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {finite(j), 0.0};
  if (!j.is_array() || j.size() != 2) bad("complex entries are [re, im]");
  return {finite(j[0]), finite(j[1])};
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) bad("expected a complex vector");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

Json matrix_to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_to_json(m.row(r).transpose()));
  return out;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array()) bad("matrix must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows == 0 ? 0 : static_cast<Eigen::Index>(j[0].is_array() ? j[0].size() : 0);
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) bad("ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

Json state_to_json(const Operator& op) {
  return Json{{"dims", ints(op.dims())}, {"matrix", matrix_to_json(op.matrix())}};
}

MultiState state_from_json(const Json& j, const ToleranceConfig& cfg) {
  return guarded([&] {
    const Dims dims = dims_from_json(field(j, "dims"));
    const Matrix m = matrix_from_json(field(j, "matrix"));
    return MultiState::create(m, dims, cfg);
  });
}

Json basis_to_json(const SubspaceBasis& basis) {
  return Json{{"dims", ints(basis.dims())}, {"rows", matrix_to_json(basis.rows())}};
}

SubspaceBasis basis_from_json(const Json& j, double tol_rank) {
  return guarded([&] {
    const Dims dims = dims_from_json(field(j, "dims"));
    Matrix rows = matrix_from_json(field(j, "rows"));
    if (rows.rows() == 0) rows.resize(0, total_dim(dims));
    return SubspaceBasis(std::move(rows), dims, tol_rank);
  });
}

Json subset_to_json(SubsetMask s) {
  Json out = Json::array();
  for (int p : s.parties()) out.push_back(p + 1);
  return out;
}

SubsetMask subset_from_json(const Json& j) {
  std::uint32_t bits = 0;
  for (int p : ints_from(j)) {
    if (p < 1 || p > 32) bad("party index out of range");
    bits |= 1u << (p - 1);
  }
  return SubsetMask(bits);
}

Json ppt_to_json(const PptReport& r) {
  Json recs = Json::array();
  for (const PartialTransposeRecord& rec : r.records)
    recs.push_back({{"subset", subset_to_json(rec.subset)}, {"min_eigenvalue", rec.min_eigenvalue}, {"rank", rec.rank}});
  return Json{{"is_ppt", r.is_ppt},
              {"records", recs},
              {"worst_subset", subset_to_json(r.worst_subset)},
              {"threshold", r.threshold}};
}

PptReport ppt_from_json(const Json& j) {
  return guarded([&] {
    PptReport r;
    r.is_ppt = field(j, "is_ppt").get<bool>();
    for (const Json& rec : field(j, "records"))
      r.records.push_back({subset_from_json(field(rec, "subset")), finite(field(rec, "min_eigenvalue")),
                           field(rec, "rank").get<int>()});
    r.worst_subset = subset_from_json(field(j, "worst_subset"));
    r.threshold = finite(field(j, "threshold"));
    return r;
  });
}

Json pluecker_to_json(const PlueckerVector& p) {
  Json out = Json::object();
  const std::vector<IndexTuple> tuples = increasing_tuples(p.d(), p.k());
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    const Complex z = p.raw()[i];
    if (z == Complex(0.0, 0.0)) continue;
    std::string key;
    for (std::size_t t = 0; t < tuples[i].size(); ++t) key += (t ? "," : "") + std::to_string(tuples[i][t]);
    out[key] = complex_to_json(z);
  }
  return out;
}

Json hit_to_json(const ProductVectorHit& h) {
  Json factors = Json::array();
  for (const Vector& f : h.factors) factors.push_back(vector_to_json(f));
  return Json{{"coefficients", vector_to_json(h.coefficients)},
              {"vector", vector_to_json(h.vector)},
              {"factors", factors},
              {"residual", h.residual}};
}

Json decomposition_to_json(const Decomposition& d) {
  Json terms = Json::array();
  for (const DecompositionTerm& t : d.terms) {
    Json factors = Json::array();
    for (const Vector& f : t.factors) factors.push_back(vector_to_json(f));
    terms.push_back({{"weight", t.weight}, {"factors", factors}});
  }
  return Json{{"terms", terms}, {"residual", d.residual}, {"length_upper_bound", d.length_upper_bound}};
}

Decomposition decomposition_from_json(const Json& j) {
  return guarded([&] {
    Decomposition d;
    for (const Json& t : field(j, "terms")) {
      DecompositionTerm term;
      term.weight = finite(field(t, "weight"));
      for (const Json& f : field(t, "factors")) term.factors.push_back(vector_from_json(f));
      d.terms.push_back(std::move(term));
    }
    d.residual = finite(field(j, "residual"));
    d.length_upper_bound = field(j, "length_upper_bound").get<int>();
    return d;
  });
}

Json report_to_json(const ClassificationReport& r) {
  Json j{{"verdict", std::string(to_string(r.verdict))},
         {"rule_fired", std::string(to_string(r.rule_fired))},
         {"original_dims", ints(r.original_dims)},
         {"compressed_dims", ints(r.compressed_dims)},
         {"kept_parties", Json::array()},
         {"rank", r.rank},
         {"local_ranks", ints(r.local_ranks)},
         {"citations", r.citations},
         {"warnings", r.warnings}};
  for (int p : r.kept_parties) j["kept_parties"].push_back(p + 1);
  j["ppt"] = r.ppt ? ppt_to_json(*r.ppt) : Json();
  if (r.chow) {
    j["chow"] = {{"system", r.chow->system},
                 {"value", complex_to_json(r.chow->value)},
                 {"raw_value", complex_to_json(r.chow->raw_value)},
                 {"abs_value", r.chow->abs_value},
                 {"low_confidence", r.chow->low_confidence}};
  } else {
    j["chow"] = nullptr;
  }
  j["decomposition"] = r.decomposition ? decomposition_to_json(*r.decomposition) : Json();
  j["length_bounds"] =
      r.length_bounds ? Json{{"lo", r.length_bounds->lo}, {"hi", r.length_bounds->hi}} : Json();
  return j;
}

ClassificationReport report_from_json(const Json& j) {
  return guarded([&] {
    ClassificationReport r;
    r.verdict = verdict_from_string(field(j, "verdict").get<std::string>());
    r.rule_fired = rule_from_string(field(j, "rule_fired").get<std::string>());
    r.original_dims = ints_from(field(j, "original_dims"));
    r.compressed_dims = ints_from(field(j, "compressed_dims"));
    for (int p : ints_from(field(j, "kept_parties"))) r.kept_parties.push_back(p - 1);
    r.rank = field(j, "rank").get<int>();
    r.local_ranks = ints_from(field(j, "local_ranks"));
    r.citations = field(j, "citations").get<std::vector<std::string>>();
    r.warnings = field(j, "warnings").get<std::vector<std::string>>();
    if (const Json& p = field(j, "ppt"); !p.is_null()) r.ppt = ppt_from_json(p);
    if (const Json& c = field(j, "chow"); !c.is_null()) {
      ChowEvaluation ce;
      ce.system = field(c, "system").get<std::string>();
      ce.value = complex_from_json(field(c, "value"));
      ce.raw_value = complex_from_json(field(c, "raw_value"));
      ce.abs_value = finite(field(c, "abs_value"));
      ce.low_confidence = field(c, "low_confidence").get<bool>();
      r.chow = ce;
    }
    if (const Json& d = field(j, "decomposition"); !d.is_null()) r.decomposition = decomposition_from_json(d);
    if (const Json& b = field(j, "length_bounds"); !b.is_null())
      r.length_bounds = LengthBounds{field(b, "lo").get<int>(), field(b, "hi").get<int>()};
    return r;
  });
}

Json tolerance_to_json(const ToleranceConfig& cfg) {
  return Json{{"tol_herm", cfg.tol_herm},     {"tol_psd", cfg.tol_psd},         {"tol_rank", cfg.tol_rank},
              {"tol_orth", cfg.tol_orth},     {"tol_recon", cfg.tol_recon},     {"tol_product", cfg.tol_product},
              {"tol_chow", cfg.tol_chow}};
}

ToleranceConfig tolerance_from_json(const Json& j, ToleranceConfig base) {
  return guarded([&] {
    if (!j.is_object()) bad("tolerances must be an object");
    auto take = [&](const char* key, double& slot) {
      if (auto it = j.find(key); it != j.end()) slot = finite(*it);
    };
    take("tol_herm", base.tol_herm);
    take("tol_psd", base.tol_psd);
    take("tol_rank", base.tol_rank);
    take("tol_orth", base.tol_orth);
    take("tol_recon", base.tol_recon);
    take("tol_product", base.tol_product);
    take("tol_chow", base.tol_chow);
    base.validate();
    return base;
  });
}

}  // namespace sep4
