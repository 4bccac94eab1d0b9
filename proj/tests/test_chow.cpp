#include "doctest.h"
#include "helpers.hpp"

#include "sep4/chow.hpp"
#include "sep4/gallery.hpp"
#include "sep4/random.hpp"

#include <algorithm>

using namespace sep4;
using sep4::test::ket;

namespace {

ChowCell cell(std::initializer_list<std::pair<int, IndexTuple>> terms) {
  ChowCell c;
  for (const auto& [s, t] : terms) c.push_back({s, t});
  return c;
}

bool same_cell(ChowCell a, ChowCell b) {
  auto key = [](const ChowTerm& x, const ChowTerm& y) { return std::tie(x.tuple, x.sign) < std::tie(y.tuple, y.sign); };
  std::sort(a.begin(), a.end(), key);
  std::sort(b.begin(), b.end(), key);
  return a == b;
}

// k x d basis whose first row is the product vector, the rest random.
Matrix planted(const Dims& dims, int k, Rng& rng) {
  std::vector<Vector> f;
  for (int d : dims) f.push_back(random_complex_gaussian(d, rng));
  Matrix rows = random_complex_gaussian(k, total_dim(dims), rng);
  rows.row(0) = kron(f).transpose();
  return rows;
}

}  // namespace

TEST_CASE("expected subspace dimension") {
  CHECK(delta_one({2, 2}) == 1);
  CHECK(delta_one({3, 2}) == 2);
  CHECK(delta_one({3, 3}) == 4);
  CHECK(delta_one({2, 2, 2}) == 4);
  CHECK(delta_one({7, 2}) == 6);
}

TEST_CASE("system labels") {
  CHECK(parse_system("3x3") == Dims{3, 3});
  CHECK(parse_system("2x2x2") == Dims{2, 2, 2});
  CHECK(parse_system("Mx2:6") == Dims{6, 2});
  CHECK(system_label({2, 2, 2}) == "2x2x2");
  CHECK_THROWS_AS(parse_system("3xx"), Error);
  CHECK_THROWS_AS(parse_system("Mx2:1"), Error);
  CHECK_THROWS_AS(builtin_chow({3, 4}), Error);
  CHECK_THROWS_AS(builtin_chow({2, 2, 2, 2}), Error);
}

TEST_CASE("table spot checks") {
  const ChowForm f22 = builtin_chow({2, 2});
  REQUIRE(f22.size() == 2);
  CHECK(same_cell(f22.entries[0][0], cell({{1, {1}}})));
  CHECK(same_cell(f22.entries[1][1], cell({{1, {4}}})));

  const ChowForm f33 = builtin_chow({3, 3});
  REQUIRE(f33.size() == 6);
  CHECK(f33.k == 4);
  CHECK(same_cell(f33.entries[0][0], cell({{1, {1, 2, 4, 5}}})));

  const ChowForm f222 = builtin_chow({2, 2, 2});
  REQUIRE(f222.size() == 6);
  CHECK(same_cell(f222.entries[0][4], cell({{1, {1, 2, 5, 7}}, {-1, {1, 3, 5, 6}}})));

  // F = p1 p4 - p2 p3
  const PlueckerVector p(1, 4, {2.0, 3.0, 5.0, 7.0});
  CHECK(std::abs(eval_chow(f22, p, false) - Complex(2.0 * 7.0 - 3.0 * 5.0)) < 1e-14);

  // every referenced tuple is increasing, within [d] and of length k
  for (const std::string& name : table_names()) {
    const ChowForm f = table_chow(name);
    CHECK(f.k == delta_one(f.dims));
    for (const auto& row : f.entries) {
      CHECK(static_cast<int>(row.size()) == f.size());
      for (const ChowCell& c : row)
        for (const ChowTerm& t : c) {
          CHECK(static_cast<int>(t.tuple.size()) == f.k);
          CHECK(std::is_sorted(t.tuple.begin(), t.tuple.end()));
          CHECK(std::adjacent_find(t.tuple.begin(), t.tuple.end()) == t.tuple.end());
          CHECK(t.tuple.front() >= 1);
          CHECK(t.tuple.back() <= f.ambient());
          CHECK((t.sign == 1 || t.sign == -1));
        }
    }
  }
}

TEST_CASE("generator matches the Mx2 tables") {
  for (int m = 2; m <= 4; ++m) CHECK(same_form(generate_chow_Mx2(m), table_chow(system_label({m, 2}))));
  const ChowForm g3 = generate_chow_Mx2(3);
  CHECK(same_cell(g3.entries[0][1], cell({{1, {1, 4}}, {1, {2, 3}}})));
  const ChowForm g4 = generate_chow_Mx2(4);
  CHECK(same_cell(g4.entries[0][1], cell({{1, {1, 3, 6}}, {1, {1, 4, 5}}, {1, {2, 3, 5}}})));

  // M = 5: row 1 from the base sequence (1, 3, 5, 7)
  const ChowForm g5 = builtin_chow({5, 2});
  REQUIRE(g5.size() == 5);
  CHECK(same_cell(g5.entries[0][0], cell({{1, {1, 3, 5, 7}}})));
  CHECK(same_cell(g5.entries[0][1], cell({{1, {2, 3, 5, 7}}, {1, {1, 4, 5, 7}}, {1, {1, 3, 6, 7}}, {1, {1, 3, 5, 8}}})));
  CHECK(g5.entries[0][2].size() == 6);
  CHECK(same_cell(g5.entries[0][4], cell({{1, {2, 4, 6, 8}}})));
  // and the form vanishes exactly on subspaces containing a product vector
  Rng rng(8);
  const Dims d52{5, 2};
  const PlueckerVector hit = pluecker(SubspaceBasis(planted(d52, 4, rng), d52));
  CHECK(std::abs(eval_chow(g5, hit)) < 1e-10);
  const PlueckerVector miss = pluecker(SubspaceBasis(random_complex_gaussian(4, 10, rng), d52));
  CHECK(std::abs(eval_chow(g5, miss)) > 1e-6);
}

TEST_CASE("permuting the 3x2 form gives the 2x3 form") {
  const ChowForm f32 = builtin_chow({3, 2});
  const ChowForm f23 = builtin_chow({2, 3});
  const ChowForm permuted = permute_form(f32, {1, 4, 2, 5, 3, 6}, {2, 3});
  CHECK(permuted.system == "2x3");
  CHECK(same_form_up_to_sign(permuted, f23));
  // without relabelling it is still a form on 3x2 coordinates
  CHECK_FALSE(same_form_up_to_sign(permute_form(f32, {1, 4, 2, 5, 3, 6}), f23));
  CHECK_THROWS_AS(permute_form(f32, {1, 4, 2, 5, 3, 6}, {2, 2}), Error);

  CHECK(same_form(permute_form(f32, {1, 2, 3, 4, 5, 6}), f32));
  const std::vector<int> pi{3, 1, 6, 2, 5, 4}, inv{2, 4, 1, 6, 5, 3};
  CHECK(same_form(permute_form(permute_form(f32, pi), inv), f32));
  CHECK_THROWS_AS(permute_form(f32, {1, 1, 2, 3, 4, 5}), Error);
  CHECK_THROWS_AS(permute_form(f32, {1, 2, 3}), Error);
}

TEST_CASE("permuted form evaluates like the form on permuted columns") {
  Rng rng(12);
  const ChowForm f32 = builtin_chow({3, 2});
  const std::vector<int> pi{1, 4, 2, 5, 3, 6};
  const ChowForm g = permute_form(f32, pi);
  const Matrix b = random_complex_gaussian(2, 6, rng);
  Matrix bp(2, 6);
  for (int i = 0; i < 6; ++i) bp.col(i) = b.col(pi[i] - 1);
  const Complex lhs = eval_chow(g, pluecker(b), false);
  const Complex rhs = eval_chow(f32, pluecker(bp), false);
  CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
}

TEST_CASE("the example identity F = -a^4 b^4") {
  const ChowForm f33 = builtin_chow({3, 3});
  CHECK(std::abs(eval_chow(f33, pluecker(example_ab_range_rows(1.0, 1.0)), false) - Complex(-1.0)) < 1e-12);
  CHECK(std::abs(eval_chow(f33, pluecker(example_ab_range_rows(2.0, 1.0)), false) - Complex(-16.0)) < 1e-10);
  for (Complex b : {Complex(0.5), Complex(1.0, 1.0), Complex(3.0)})
    CHECK(std::abs(eval_chow(f33, pluecker(example_ab_range_rows(0.0, b)), false)) < 1e-12);
}

TEST_CASE("homogeneity of degree matrix_size") {
  Rng rng(13);
  for (const Dims& dims : {Dims{3, 3}, Dims{2, 2, 2}, Dims{4, 2}}) {
    const ChowForm f = builtin_chow(dims);
    const PlueckerVector p = pluecker(random_complex_gaussian(f.k, f.ambient(), rng));
    const Complex t(0.7, -1.3);
    std::vector<Complex> scaled = p.raw();
    for (Complex& z : scaled) z *= t;
    const Complex a = eval_chow(f, p, false), b = eval_chow(f, PlueckerVector(f.k, f.ambient(), scaled), false);
    CHECK(std::abs(b - std::pow(t, f.degree()) * a) <= 1e-10 * std::abs(b));
    // the normalized evaluation only sees the point of the Grassmannian
    CHECK(std::abs(eval_chow(f, p)) ==
          doctest::Approx(std::abs(eval_chow(f, PlueckerVector(f.k, f.ambient(), scaled)))).epsilon(1e-10));
  }
}

TEST_CASE("meeting the Segre variety") {
  const ToleranceConfig cfg;
  Matrix one = Matrix::Zero(1, 4);
  one(0, 0) = 1.0;
  CHECK(subspace_meets_segre(SubspaceBasis(one, {2, 2}), cfg.tol_chow).meets);

  const SegreTest ab = subspace_meets_segre(SubspaceBasis(example_ab_range_rows(1.0, 1.0), {3, 3}), cfg.tol_chow);
  CHECK_FALSE(ab.meets);
  CHECK(std::abs(ab.raw_value - Complex(-1.0)) < 1e-12);

  Rng rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix rows = random_complex_gaussian(4, 9, rng);
    rows.row(0) = ket({3, 3}, {0, 0}).transpose();
    const SegreTest t = subspace_meets_segre(SubspaceBasis(rows, {3, 3}), cfg.tol_chow);
    CHECK(t.meets);
    CHECK(t.abs_f <= cfg.tol_chow);
  }

  CHECK_THROWS_AS(subspace_meets_segre(SubspaceBasis(random_complex_gaussian(3, 9, rng), {3, 3}), 1e-8), Error);
  CHECK_THROWS_AS(subspace_meets_segre(SubspaceBasis(random_complex_gaussian(4, 12, rng), {3, 4}), 1e-8), Error);
  CHECK_THROWS_AS(eval_chow(builtin_chow({3, 3}), pluecker(random_complex_gaussian(3, 9, rng))), Error);
}

TEST_CASE("form export") {
  CHECK(chow_to_text(builtin_chow({2, 2})) == "[[+p1],[+p2];\n [+p3],[+p4]]");
  for (const std::string& name : table_names()) {
    const ChowForm f = table_chow(name);
    const ChowForm back = chow_from_json(chow_to_json(f));
    CHECK(back.system == f.system);
    CHECK(back.dims == f.dims);
    CHECK(same_form(back, f));
    const std::string sum = table_checksum(name);
    CHECK(sum.size() == 16);
    CHECK(sum.find_first_not_of("0123456789abcdef") == std::string::npos);
  }
  CHECK(table_names().size() == 6);
  CHECK_THROWS_AS(chow_from_json(nlohmann::json::parse(R"({"system":"2x2"})")), Error);
  CHECK_THROWS_AS(chow_from_json(nlohmann::json::parse(
                      R"({"system":"2x2","dims":[2,2],"k":1,"matrix":[[[{"sign":1,"tuple":[5]}]]]})")),
                  Error);
}
