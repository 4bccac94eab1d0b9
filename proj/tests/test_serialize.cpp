#include "doctest.h"
#include "helpers.hpp"

#include "sep4/engine.hpp"
#include "sep4/gallery.hpp"
#include "sep4/grassmann.hpp"
#include "sep4/serialize.hpp"

#include <cmath>
#include <limits>

using namespace sep4;
using sep4::test::ket;
using sep4::test::proj;

TEST_CASE("complex numbers accept pairs and bare reals") {
  CHECK(complex_from_json(Json::parse("[1.5, -2]")) == Complex(1.5, -2.0));
  CHECK(complex_from_json(Json::parse("3")) == Complex(3.0, 0.0));
  CHECK(complex_to_json(Complex(0.25, 1.0)) == Json::parse("[0.25, 1.0]"));
  CHECK_THROWS_AS(complex_from_json(Json::parse("[1, 2, 3]")), Error);
  CHECK_THROWS_AS(complex_from_json(Json::parse("\"x\"")), Error);
  CHECK_THROWS_AS(complex_from_json(Json(std::numeric_limits<double>::quiet_NaN())), Error);
  CHECK_THROWS_AS(complex_from_json(Json::array({1.0, std::numeric_limits<double>::infinity()})), Error);
}

TEST_CASE("states round-trip and malformed input is rejected") {
  const MultiState rho = divincenzo_state();
  const Json j = state_to_json(rho);
  CHECK(j["dims"] == Json::parse("[2,2,2]"));
  const MultiState back = state_from_json(Json::parse(j.dump()));
  CHECK(back.dims() == rho.dims());
  CHECK((back.matrix() - rho.matrix()).norm() < 1e-14);

  Json nan = j;
  nan["matrix"][0][0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(state_from_json(nan), Error);

  Json ragged = j;
  ragged["matrix"][3].erase(0);
  CHECK_THROWS_AS(state_from_json(ragged), Error);

  Json wrong_dims = j;
  wrong_dims["dims"] = Json::parse("[2,3]");
  try {
    state_from_json(wrong_dims);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDimensionMismatch);
  }

  CHECK_THROWS_AS(state_from_json(Json::parse(R"({"matrix": [[1]]})")), Error);
  CHECK_THROWS_AS(state_from_json(Json::parse(R"({"dims": [2], "matrix": [[1, 1], [0, 1]]})")), Error);
}

TEST_CASE("subsets are 1-based party lists") {
  CHECK(subset_to_json(SubsetMask::of({0, 2})) == Json::parse("[1,3]"));
  CHECK(subset_from_json(Json::parse("[3,1]")) == SubsetMask::of({0, 2}));
  CHECK(subset_to_json(SubsetMask()) == Json::array());
  CHECK_THROWS_AS(subset_from_json(Json::parse("[0]")), Error);
}

TEST_CASE("Pluecker coordinates keyed by index tuple") {
  Matrix r = Matrix::Zero(2, 4);
  r(0, 0) = 1.0;
  r(1, 1) = 2.0;
  r(1, 2) = 1.0;
  const Json j = pluecker_to_json(pluecker(r));
  CHECK(j.size() == 2);
  CHECK(complex_from_json(j.at("1,2")) == Complex(2.0));
  CHECK(complex_from_json(j.at("1,3")) == Complex(1.0));
  CHECK_FALSE(j.contains("2,3"));
}

TEST_CASE("reports round-trip") {
  for (const MultiState& rho : {divincenzo_state(), example_ab_state(0.0, 1.0),
                                MultiState::create(proj(ket({2, 2}, {0, 0}) + ket({2, 2}, {1, 1})), {2, 2})}) {
    const ClassificationReport r = classify(rho);
    const Json j = report_to_json(r);
    const ClassificationReport back = report_from_json(Json::parse(j.dump()));
    CHECK(report_to_json(back) == j);
    CHECK(back.verdict == r.verdict);
    CHECK(back.rule_fired == r.rule_fired);
    CHECK(back.rank == r.rank);
    CHECK(back.kept_parties == r.kept_parties);
    CHECK(back.length_bounds == r.length_bounds);
    CHECK(back.decomposition.has_value() == r.decomposition.has_value());
    if (r.decomposition)
      CHECK((back.decomposition->assemble(rho.dims()) - rho.matrix()).norm() < 1e-8 * rho.trace());
    CHECK(j["verdict"].is_string());
    CHECK(j["rule_fired"].is_string());
  }
  CHECK_THROWS_AS(report_from_json(Json::parse(R"({"verdict": "Maybe"})")), Error);
}

TEST_CASE("tolerances") {
  ToleranceConfig cfg;
  cfg.tol_chow = 1e-6;
  const ToleranceConfig back = tolerance_from_json(tolerance_to_json(cfg));
  CHECK(back.tol_chow == 1e-6);
  CHECK(back.tol_rank == cfg.tol_rank);
  const ToleranceConfig partial = tolerance_from_json(Json::parse(R"({"tol_rank": 1e-7})"));
  CHECK(partial.tol_rank == 1e-7);
  CHECK(partial.tol_chow == ToleranceConfig{}.tol_chow);
  CHECK_THROWS_AS(tolerance_from_json(Json::parse(R"({"tol_rank": -1})")), Error);
}
