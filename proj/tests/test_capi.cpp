// Exercises the shared library through the C header only.
#include "doctest.h"
#include "json.hpp"

#include "sep4/sep4.h"

#include <cmath>
#include <string>
#include <vector>

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  sep4_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(sep4_version()) == "0.1.0");
  CHECK(std::string(sep4_status_name(SEP4_OK)) == "Ok");
  CHECK(std::string(sep4_status_name(SEP4_E_PARSE_ERROR)) == "ParseError");
  sep4_tolerances tol;
  sep4_tolerances_default(&tol);
  CHECK(tol.tol_chow == 1e-8);
  CHECK(tol.tol_rank == 1e-9);
}

TEST_CASE("gallery state classified through the C API") {
  sep4_state* st = nullptr;
  REQUIRE(sep4_gallery("divincenzo", nullptr, &st) == SEP4_OK);
  int dims[4] = {0, 0, 0, 0};
  size_t parties = 0;
  CHECK(sep4_state_dims(st, dims, 4, &parties) == SEP4_OK);
  CHECK(parties == 3);
  CHECK(dims[0] == 2);
  int rank = 0;
  CHECK(sep4_state_rank(st, &rank) == SEP4_OK);
  CHECK(rank == 4);
  char* ppt = nullptr;
  CHECK(sep4_state_ppt(st, &ppt) == SEP4_OK);
  CHECK(nlohmann::json::parse(take(ppt))["is_ppt"] == true);

  sep4_report* rep = nullptr;
  REQUIRE(sep4_classify(st, 0, 1, &rep) == SEP4_OK);
  CHECK(sep4_report_verdict(rep) == SEP4_ENTANGLED);
  CHECK(std::string(sep4_report_rule(rep)) == "Chow222");
  CHECK(sep4_report_rank(rep) == 4);

  char* js = nullptr;
  REQUIRE(sep4_report_to_json(rep, &js) == SEP4_OK);
  const std::string text = take(js);
  sep4_report* back = nullptr;
  REQUIRE(sep4_report_from_json(text.c_str(), &back) == SEP4_OK);
  char* js2 = nullptr;
  REQUIRE(sep4_report_to_json(back, &js2) == SEP4_OK);
  CHECK(take(js2) == text);
  sep4_report_free(back);
  sep4_report_free(rep);
  sep4_state_free(st);
}

TEST_CASE("states from arrays and JSON") {
  // |00><00| + |11><11| on two qubits
  std::vector<double> m(2 * 16, 0.0);
  m[2 * 0] = 1.0;
  m[2 * 15] = 1.0;
  const int dims[2] = {2, 2};
  sep4_state* st = nullptr;
  REQUIRE(sep4_state_from_array(dims, 2, m.data(), nullptr, &st) == SEP4_OK);
  sep4_report* rep = nullptr;
  REQUIRE(sep4_classify(st, 0, 1, &rep) == SEP4_OK);
  CHECK(sep4_report_verdict(rep) == SEP4_SEPARABLE);
  CHECK(std::string(sep4_report_rule(rep)) == "PPTRank2");
  sep4_report_free(rep);

  char* js = nullptr;
  REQUIRE(sep4_state_to_json(st, &js) == SEP4_OK);
  sep4_state* again = nullptr;
  CHECK(sep4_state_from_json(take(js).c_str(), nullptr, &again) == SEP4_OK);
  sep4_state_free(again);
  sep4_state_free(st);

  const int bad_dims[2] = {2, 3};
  CHECK(sep4_state_from_array(bad_dims, 2, m.data(), nullptr, &st) != SEP4_OK);
}

TEST_CASE("errors carry codes and messages") {
  sep4_state* st = nullptr;
  CHECK(sep4_state_from_json("{not json", nullptr, &st) == SEP4_E_PARSE_ERROR);
  CHECK(st == nullptr);
  CHECK(std::string(sep4_last_error()).size() > 0);

  CHECK(sep4_state_from_json(R"({"dims":[2],"matrix":[[1,0],[0,-1]]})", nullptr, &st) == SEP4_E_NOT_POSITIVE);
  CHECK(sep4_state_from_json(R"({"dims":[2],"matrix":[[1,1],[0,1]]})", nullptr, &st) == SEP4_E_NOT_HERMITIAN);
  CHECK(sep4_state_from_json(R"({"dims":[3],"matrix":[[1,0],[0,1]]})", nullptr, &st) == SEP4_E_DIMENSION_MISMATCH);
  CHECK(sep4_gallery("nope", nullptr, &st) != SEP4_OK);
  CHECK(sep4_classify(nullptr, 0, 1, nullptr) == SEP4_E_INVALID_ARGUMENT);

  sep4_tolerances tol;
  sep4_tolerances_default(&tol);
  tol.tol_rank = NAN;
  CHECK(sep4_state_from_json(R"({"dims":[2],"matrix":[[1,0],[0,0]]})", &tol, &st) == SEP4_E_INVALID_ARGUMENT);
}

TEST_CASE("Chow forms through the C API") {
  char* txt = nullptr;
  REQUIRE(sep4_chow_print("2x2", 0, &txt) == SEP4_OK);
  CHECK(take(txt).find("p1") != std::string::npos);

  // range rows of the two-qutrit family at a = b = 1: raw F = -a^4 b^4 = -1
  const char* basis = R"({"dims":[3,3],"rows":[[1,0,0,0,1,0,0,0,0],[0,1,0,1,0,0,0,1,0],
                        [0,0,0,0,1,0,1,0,1],[0,0,0,0,0,1,0,1,0]]})";
  double fn[2], fr[2];
  REQUIRE(sep4_chow_eval("3x3", basis, fn, fr) == SEP4_OK);
  CHECK(fr[0] == doctest::Approx(-1.0));
  CHECK(std::abs(fr[1]) < 1e-12);
  CHECK(std::hypot(fn[0], fn[1]) > 1e-3);

  CHECK(sep4_chow_eval("2x2x2", basis, fn, fr) == SEP4_E_SHAPE_MISMATCH);
  CHECK(sep4_chow_eval("5x5", basis, fn, fr) != SEP4_OK);
  char* sums = nullptr;
  REQUIRE(sep4_table_checksums(&sums) == SEP4_OK);
  CHECK(nlohmann::json::parse(take(sums)).contains("2x2x2"));
}
