// Command-line front end. Talks to the engine only through the C API.
#include "sep4/sep4.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitError = 3;

struct Failure {
  sep4_status status;
  std::string message;
};

void check(sep4_status s) {
  if (s != SEP4_OK) throw Failure{s, sep4_last_error()};
}

std::string take(char* s) {
  std::string out(s ? s : "");
  sep4_string_free(s);
  return out;
}

using StatePtr = std::unique_ptr<sep4_state, decltype(&sep4_state_free)>;
using ReportPtr = std::unique_ptr<sep4_report, decltype(&sep4_report_free)>;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{SEP4_E_INVALID_ARGUMENT, "cannot open " + path.string()};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Tolerances {
  sep4_tolerances values{};
  Tolerances() { sep4_tolerances_default(&values); }

  void attach(CLI::App* app) {
    app->add_option("--tol-herm", values.tol_herm, "Hermiticity tolerance")->capture_default_str();
    app->add_option("--tol-psd", values.tol_psd, "relative PSD tolerance")->capture_default_str();
    app->add_option("--tol-rank", values.tol_rank, "relative rank cutoff")->capture_default_str();
    app->add_option("--tol-orth", values.tol_orth, "orthogonality tolerance")->capture_default_str();
    app->add_option("--tol-recon", values.tol_recon, "reconstruction tolerance")->capture_default_str();
    app->add_option("--tol-product", values.tol_product, "product-vector tolerance")->capture_default_str();
    app->add_option("--tol-chow", values.tol_chow, "Chow-form vanishing threshold")
        ->envname("SEP4_TOL_CHOW")
        ->capture_default_str();
  }
};

std::string fmt_complex(const json& z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.12g%+.12gi", z[0].get<double>(), z[1].get<double>());
  return buf;
}

std::string fmt_list(const json& a) {
  std::string s = "[";
  for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + a[i].dump();
  return s + "]";
}

void print_human(const json& r, std::ostream& os) {
  os << "verdict: " << r["verdict"].get<std::string>() << "\n";
  os << "rule: " << r["rule_fired"].get<std::string>() << "\n";
  os << "rank: " << r["rank"] << "\n";
  os << "dims: " << fmt_list(r["original_dims"]) << " -> " << fmt_list(r["compressed_dims"]) << "\n";
  os << "local ranks: " << fmt_list(r["local_ranks"]) << "\n";
  if (!r["ppt"].is_null()) {
    const json& p = r["ppt"];
    double worst = 0.0;
    for (const json& rec : p["records"]) worst = std::min(worst, rec["min_eigenvalue"].get<double>());
    os << "ppt: " << (p["is_ppt"].get<bool>() ? "yes" : "no") << " (min eigenvalue " << worst << ", worst subset "
       << fmt_list(p["worst_subset"]) << ")\n";
  }
  if (!r["chow"].is_null()) {
    const json& c = r["chow"];
    os << "chow " << c["system"].get<std::string>() << ": F = " << fmt_complex(c["value"])
       << ", |F| = " << c["abs_value"].get<double>() << (c["low_confidence"].get<bool>() ? " (low confidence)" : "")
       << "\n";
  }
  if (!r["length_bounds"].is_null())
    os << "length: " << r["length_bounds"]["lo"] << ".." << r["length_bounds"]["hi"] << "\n";
  if (!r["decomposition"].is_null())
    os << "decomposition: " << r["decomposition"]["terms"].size() << " terms, residual "
       << r["decomposition"]["residual"].get<double>() << "\n";
  for (const json& c : r["citations"]) os << "because: " << c.get<std::string>() << "\n";
  for (const json& w : r["warnings"]) os << "warning: " << w.get<std::string>() << "\n";
}

// Classifies one file; returns the report JSON.
json classify_file(const fs::path& path, const sep4_tolerances& tol, std::uint64_t seed, bool decompose,
                   sep4_verdict* verdict = nullptr) {
  const std::string text = read_file(path);
  sep4_state* raw_state = nullptr;
  check(sep4_state_from_json(text.c_str(), &tol, &raw_state));
  StatePtr state(raw_state, sep4_state_free);
  sep4_report* raw_report = nullptr;
  check(sep4_classify(state.get(), seed, decompose ? 1 : 0, &raw_report));
  ReportPtr report(raw_report, sep4_report_free);
  if (verdict) *verdict = sep4_report_verdict(report.get());
  char* out = nullptr;
  check(sep4_report_to_json(report.get(), &out));
  return json::parse(take(out));
}

json error_json(const Failure& f) { return {{"code", sep4_status_name(f.status)}, {"message", f.message}}; }

int run_classify(const std::string& input, const Tolerances& tol, std::uint64_t seed, bool as_json, bool decompose) {
  sep4_verdict verdict = SEP4_OUT_OF_SCOPE;
  const json r = classify_file(input, tol.values, seed, decompose, &verdict);
  if (as_json)
    std::cout << r.dump(2) << "\n";
  else
    print_human(r, std::cout);
  return static_cast<int>(verdict);
}

int run_chow(const std::string& system, bool print, const std::string& eval_file, bool as_json) {
  if (print == !eval_file.empty()) throw Failure{SEP4_E_INVALID_ARGUMENT, "give exactly one of --print and --eval"};
  if (print) {
    char* out = nullptr;
    check(sep4_chow_print(system.c_str(), as_json ? 1 : 0, &out));
    std::string text = take(out);
    if (as_json) text = json::parse(text).dump(1);
    std::cout << text << "\n";
    return 0;
  }
  const std::string basis = read_file(eval_file);
  double fn[2] = {0, 0}, fr[2] = {0, 0};
  check(sep4_chow_eval(system.c_str(), basis.c_str(), fn, fr));
  const json n = {fn[0], fn[1]}, r = {fr[0], fr[1]};
  if (as_json)
    std::cout << json{{"system", system}, {"normalized", n}, {"raw", r}}.dump(2) << "\n";
  else
    std::cout << "F (normalized) = " << fmt_complex(n) << "\nF (raw)        = " << fmt_complex(r) << "\n";
  return 0;
}

int run_batch(const std::string& dir, const std::string& out_path, unsigned parallel, const Tolerances& tol,
              std::uint64_t seed, bool decompose) {
  if (!fs::is_directory(dir)) throw Failure{SEP4_E_INVALID_ARGUMENT, dir + " is not a directory"};
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });

  std::vector<json> lines(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      json line{{"file", files[i].filename().string()}};
      try {
        line["report"] = classify_file(files[i], tol.values, seed, decompose);
      } catch (const Failure& f) {
        line["error"] = error_json(f);
      } catch (const std::exception& e) {
        line["error"] = {{"code", "Internal"}, {"message", e.what()}};
      }
      lines[i] = std::move(line);
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(parallel, static_cast<unsigned>(files.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::ofstream file;
  if (out_path != "-") {
    file.open(out_path, std::ios::binary | std::ios::trunc);
    if (!file) throw Failure{SEP4_E_INVALID_ARGUMENT, "cannot write " + out_path};
  }
  std::ostream& os = out_path == "-" ? std::cout : file;
  json counts{{"Separable", 0}, {"Entangled", 0}, {"OutOfScope", 0}, {"error", 0}};
  for (const json& line : lines) {
    os << line.dump() << "\n";
    if (line.contains("error"))
      counts["error"] = counts["error"].get<int>() + 1;
    else {
      const std::string v = line["report"]["verdict"];
      counts[v] = counts[v].get<int>() + 1;
    }
  }
  (out_path == "-" ? std::cerr : std::cout) << json{{"files", lines.size()}, {"counts", counts}}.dump() << "\n";
  return 0;
}

struct GalleryArgs {
  std::string name;
  std::vector<double> a, b;
  std::vector<int> dims;
  int terms = 2;
  std::uint64_t seed = 0;
  std::string out = "-";
};

int run_gallery(const GalleryArgs& g) {
  if (g.name.empty() || g.name == "list") {
    char* out = nullptr;
    check(sep4_gallery_names(&out));
    for (const json& n : json::parse(take(out))) std::cout << n.get<std::string>() << "\n";
    return 0;
  }
  json params = json::object();
  auto complex_arg = [](const std::vector<double>& v) {
    return json{v.empty() ? 1.0 : v[0], v.size() > 1 ? v[1] : 0.0};
  };
  if (g.name == "example_ab") params = {{"a", complex_arg(g.a)}, {"b", complex_arg(g.b)}};
  if (g.name == "random_separable") params = {{"dims", g.dims.empty() ? std::vector<int>{2, 2} : g.dims}, {"terms", g.terms}};
  params["seed"] = g.seed;
  sep4_state* raw = nullptr;
  check(sep4_gallery(g.name.c_str(), params.dump().c_str(), &raw));
  StatePtr state(raw, sep4_state_free);
  char* out = nullptr;
  check(sep4_state_to_json(state.get(), &out));
  const std::string text = take(out);
  if (g.out == "-") {
    std::cout << text << "\n";
  } else {
    std::ofstream f(g.out, std::ios::binary | std::ios::trunc);
    if (!f) throw Failure{SEP4_E_INVALID_ARGUMENT, "cannot write " + g.out};
    f << text << "\n";
  }
  return 0;
}

std::string version_text() {
  char* out = nullptr;
  std::string text = std::string("sep4 ") + sep4_version() + "\n";
  if (sep4_table_checksums(&out) == SEP4_OK) {
    const json sums = json::parse(take(out));
    for (const auto& [name, sum] : sums.items()) text += "chow " + name + " " + sum.get<std::string>() + "\n";
  }
  return text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Separability of low-rank multipartite quantum states"};
  app.set_version_flag("--version", [] { return version_text(); });
  app.require_subcommand(1);

  Tolerances tol;
  std::uint64_t seed = 0;
  bool as_json = false;
  bool no_decompose = false;

  auto* classify = app.add_subcommand("classify", "classify one state JSON file");
  std::string input;
  classify->add_option("--input", input, "state JSON file")->required()->check(CLI::ExistingFile);
  classify->add_flag("--json", as_json, "print the report as JSON");
  classify->add_option("--seed", seed, "seed for the randomized searches");
  classify->add_flag("--no-decompose", no_decompose, "skip the decomposition of separable states");
  tol.attach(classify);

  auto* chow = app.add_subcommand("chow", "print or evaluate a Chow form");
  std::string system, eval_file;
  bool print = false;
  chow->add_option("--system", system, "2x2, 3x2, 4x2, Mx2:M, 2x3, 3x3 or 2x2x2")->required();
  chow->add_flag("--print", print, "dump the signed-tuple matrix");
  chow->add_option("--eval", eval_file, "basis JSON {\"dims\", \"rows\"}")->check(CLI::ExistingFile);
  chow->add_flag("--json", as_json, "JSON output");

  auto* batch = app.add_subcommand("batch", "classify every *.json state in a directory");
  std::string in_dir, out_path;
  unsigned parallel = 1;
  batch->add_option("--input", in_dir, "directory of state files")->required();
  batch->add_option("--out", out_path, "JSONL output file, - for stdout")->required();
  batch->add_option("--parallel", parallel, "worker threads")->check(CLI::Range(1u, 256u));
  batch->add_option("--seed", seed, "seed for the randomized searches");
  batch->add_flag("--no-decompose", no_decompose, "skip decompositions");
  tol.attach(batch);

  auto* gallery = app.add_subcommand("gallery", "emit a named state as state JSON");
  GalleryArgs g;
  gallery->add_option("name", g.name, "divincenzo, example_ab, random_separable, random_ppt_rank4_33, or list");
  gallery->add_option("--a", g.a, "a as RE [IM] for example_ab")->expected(1, 2);
  gallery->add_option("--b", g.b, "b as RE [IM] for example_ab")->expected(1, 2);
  gallery->add_option("--dims", g.dims, "party dimensions for random_separable")->delimiter(',');
  gallery->add_option("--terms", g.terms, "number of product terms for random_separable");
  gallery->add_option("--seed", g.seed, "seed of the random families");
  gallery->add_option("--out", g.out, "output file, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*classify) return run_classify(input, tol, seed, as_json, !no_decompose);
    if (*chow) return run_chow(system, print, eval_file, as_json);
    if (*batch) return run_batch(in_dir, out_path, parallel, tol, seed, !no_decompose);
    if (*gallery) return run_gallery(g);
  } catch (const Failure& f) {
    std::cerr << "error: " << sep4_status_name(f.status) << ": " << f.message << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
