#include "sep4/sep4.h"

#include "sep4/chow.hpp"
#include "sep4/engine.hpp"
#include "sep4/gallery.hpp"
#include "sep4/serialize.hpp"

#include <cstdlib>
#include <cstring>
#include <string>

struct sep4_state {
  sep4::MultiState value;
};

struct sep4_report {
  sep4::ClassificationReport value;
  std::string rule;
};

namespace {

thread_local std::string g_last_error;

sep4::ToleranceConfig to_config(const sep4_tolerances* tol) {
  sep4::ToleranceConfig cfg;
  if (!tol) return cfg;
  cfg.tol_herm = tol->tol_herm;
  cfg.tol_psd = tol->tol_psd;
  cfg.tol_rank = tol->tol_rank;
  cfg.tol_orth = tol->tol_orth;
  cfg.tol_recon = tol->tol_recon;
  cfg.tol_product = tol->tol_product;
  cfg.tol_chow = tol->tol_chow;
  cfg.validate();
  return cfg;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (!p) throw sep4::Error(sep4::ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

// Runs f, translating every exception into a status and the thread-local message.
template <class F>
sep4_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return SEP4_OK;
  } catch (const sep4::Error& e) {
    g_last_error = e.message();
    return static_cast<sep4_status>(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SEP4_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown exception";
    return SEP4_E_INTERNAL;
  }
}

sep4::Json parse(const char* text) {
  try {
    return sep4::Json::parse(text);
  } catch (const sep4::Json::exception& e) {
    throw sep4::Error(sep4::ErrorCode::kParseError, e.what());
  }
}

sep4::Complex param_complex(const sep4::Json& p, const char* key, sep4::Complex fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : sep4::complex_from_json(*it);
}

std::uint64_t param_seed(const sep4::Json& p) {
  auto it = p.find("seed");
  if (it == p.end()) return 0;
  if (!it->is_number_unsigned()) throw sep4::Error(sep4::ErrorCode::kParseError, "seed must be a nonnegative integer");
  return it->get<std::uint64_t>();
}

}  // namespace

extern "C" {

const char* sep4_version(void) { return "0.1.0"; }

const char* sep4_status_name(sep4_status status) {
  if (status == SEP4_OK) return "Ok";
  if (status == SEP4_E_INTERNAL) return "Internal";
  if (status < SEP4_E_DIMENSION_MISMATCH || status > SEP4_E_INVALID_ARGUMENT) return "Unknown";
  return sep4::error_name(static_cast<sep4::ErrorCode>(status)).data();
}

const char* sep4_last_error(void) { return g_last_error.c_str(); }

void sep4_string_free(char* s) { std::free(s); }

void sep4_tolerances_default(sep4_tolerances* out) {
  if (!out) return;
  const sep4::ToleranceConfig cfg;
  *out = {cfg.tol_herm, cfg.tol_psd, cfg.tol_rank, cfg.tol_orth, cfg.tol_recon, cfg.tol_product, cfg.tol_chow};
}

sep4_status sep4_state_from_json(const char* json, const sep4_tolerances* tol, sep4_state** out) {
  return guard([&] {
    require(json, "json");
    require(out, "out");
    *out = new sep4_state{sep4::state_from_json(parse(json), to_config(tol))};
  });
}

sep4_status sep4_state_from_array(const int* dims, size_t parties, const double* re_im, const sep4_tolerances* tol,
                                  sep4_state** out) {
  return guard([&] {
    require(dims, "dims");
    require(re_im, "re_im");
    require(out, "out");
    sep4::Dims d(dims, dims + parties);
    for (int x : d)
      if (x < 1) throw sep4::Error(sep4::ErrorCode::kDimensionMismatch, "dims must be positive");
    const long n = sep4::total_dim(d);
    sep4::Matrix m(n, n);
    for (long r = 0; r < n; ++r)
      for (long c = 0; c < n; ++c) m(r, c) = {re_im[2 * (r * n + c)], re_im[2 * (r * n + c) + 1]};
    *out = new sep4_state{sep4::MultiState::create(m, d, to_config(tol))};
  });
}

sep4_status sep4_state_to_json(const sep4_state* state, char** out) {
  return guard([&] {
    require(state, "state");
    require(out, "out");
    *out = dup(sep4::state_to_json(state->value).dump());
  });
}

sep4_status sep4_state_dims(const sep4_state* state, int* dims, size_t capacity, size_t* parties) {
  return guard([&] {
    require(state, "state");
    const sep4::Dims& d = state->value.dims();
    for (size_t i = 0; i < d.size() && i < capacity && dims; ++i) dims[i] = d[i];
    if (parties) *parties = d.size();
  });
}

sep4_status sep4_state_rank(const sep4_state* state, int* rank) {
  return guard([&] {
    require(state, "state");
    require(rank, "rank");
    *rank = sep4::rank_of(state->value);
  });
}

sep4_status sep4_state_ppt(const sep4_state* state, char** out) {
  return guard([&] {
    require(state, "state");
    require(out, "out");
    *out = dup(sep4::ppt_to_json(sep4::is_ppt(state->value)).dump());
  });
}

void sep4_state_free(sep4_state* state) { delete state; }

sep4_status sep4_gallery(const char* name, const char* params_json, sep4_state** out) {
  return guard([&] {
    require(name, "name");
    require(out, "out");
    const sep4::Json p = params_json ? parse(params_json) : sep4::Json::object();
    if (!p.is_object()) throw sep4::Error(sep4::ErrorCode::kParseError, "params must be an object");
    const std::string n = name;
    if (n == "divincenzo") {
      *out = new sep4_state{sep4::divincenzo_state()};
    } else if (n == "example_ab") {
      *out = new sep4_state{sep4::example_ab_state(param_complex(p, "a", 1.0), param_complex(p, "b", 1.0))};
    } else if (n == "random_separable") {
      sep4::Dims dims{2, 2};
      if (auto it = p.find("dims"); it != p.end()) dims = it->get<sep4::Dims>();
      const int terms = p.value("terms", 2);
      if (terms < 1) throw sep4::Error(sep4::ErrorCode::kInvalidArgument, "terms must be positive");
      for (int x : dims)
        if (x < 1) throw sep4::Error(sep4::ErrorCode::kInvalidArgument, "dims must be positive");
      *out = new sep4_state{sep4::random_separable(dims, terms, param_seed(p))};
    } else if (n == "random_ppt_rank4_33") {
      *out = new sep4_state{sep4::random_ppt_rank4_33(param_seed(p))};
    } else {
      throw sep4::Error(sep4::ErrorCode::kInvalidArgument, "unknown gallery state " + n);
    }
  });
}

sep4_status sep4_gallery_names(char** out) {
  return guard([&] {
    require(out, "out");
    *out = dup(sep4::Json({"divincenzo", "example_ab", "random_separable", "random_ppt_rank4_33"}).dump());
  });
}

sep4_status sep4_classify(const sep4_state* state, uint64_t seed, int decompose, sep4_report** out) {
  return guard([&] {
    require(state, "state");
    require(out, "out");
    sep4::ClassifyOptions opts;
    opts.seed = seed;
    opts.decompose = decompose != 0;
    sep4::ClassificationReport r = sep4::classify(state->value, opts);
    std::string rule(sep4::to_string(r.rule_fired));
    *out = new sep4_report{std::move(r), std::move(rule)};
  });
}

sep4_verdict sep4_report_verdict(const sep4_report* report) {
  if (!report) return SEP4_OUT_OF_SCOPE;
  switch (report->value.verdict) {
    case sep4::Verdict::kSeparable:
      return SEP4_SEPARABLE;
    case sep4::Verdict::kEntangled:
      return SEP4_ENTANGLED;
    default:
      return SEP4_OUT_OF_SCOPE;
  }
}

const char* sep4_report_rule(const sep4_report* report) { return report ? report->rule.c_str() : ""; }

int sep4_report_rank(const sep4_report* report) { return report ? report->value.rank : -1; }

sep4_status sep4_report_to_json(const sep4_report* report, char** out) {
  return guard([&] {
    require(report, "report");
    require(out, "out");
    *out = dup(sep4::report_to_json(report->value).dump());
  });
}

sep4_status sep4_report_from_json(const char* json, sep4_report** out) {
  return guard([&] {
    require(json, "json");
    require(out, "out");
    sep4::ClassificationReport r = sep4::report_from_json(parse(json));
    std::string rule(sep4::to_string(r.rule_fired));
    *out = new sep4_report{std::move(r), std::move(rule)};
  });
}

void sep4_report_free(sep4_report* report) { delete report; }

sep4_status sep4_chow_print(const char* system, int as_json, char** out) {
  return guard([&] {
    require(system, "system");
    require(out, "out");
    const sep4::ChowForm form = sep4::builtin_chow(sep4::parse_system(system));
    *out = dup(as_json ? sep4::chow_to_json(form).dump() : sep4::chow_to_text(form));
  });
}

sep4_status sep4_chow_eval(const char* system, const char* basis_json, double normalized[2], double raw[2]) {
  return guard([&] {
    require(system, "system");
    require(basis_json, "basis_json");
    const sep4::ChowForm form = sep4::builtin_chow(sep4::parse_system(system));
    const sep4::SubspaceBasis basis = sep4::basis_from_json(parse(basis_json));
    if (basis.dims() != form.dims)
      throw sep4::Error(sep4::ErrorCode::kShapeMismatch, "basis dims do not match system " + form.system);
    if (basis.dimension() != form.k)
      throw sep4::Error(sep4::ErrorCode::kWrongDimension,
                        "basis has " + std::to_string(basis.dimension()) + " rows, form expects " +
                            std::to_string(form.k));
    const sep4::PlueckerVector p = sep4::pluecker(basis);
    const sep4::Complex fn = sep4::eval_chow(form, p, true);
    const sep4::Complex fr = sep4::eval_chow(form, p, false);
    if (normalized) normalized[0] = fn.real(), normalized[1] = fn.imag();
    if (raw) raw[0] = fr.real(), raw[1] = fr.imag();
  });
}

sep4_status sep4_table_checksums(char** out) {
  return guard([&] {
    require(out, "out");
    sep4::Json j = sep4::Json::object();
    for (const std::string& name : sep4::table_names()) j[name] = sep4::table_checksum(name);
    *out = dup(j.dump());
  });
}

}  // extern "C"
