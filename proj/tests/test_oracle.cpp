#include "doctest.h"
#include "helpers.hpp"

#include "sep4/gallery.hpp"
#include "sep4/oracle.hpp"
#include "sep4/random.hpp"

using namespace sep4;
using sep4::test::ket;
using sep4::test::proj;

namespace {

bool same_ray(const Vector& u, const Vector& v) { return std::abs(u.normalized().dot(v.normalized())) > 1 - 1e-8; }

void check_hit(const ProductVectorHit& h, const SubspaceBasis& basis, const Dims& dims) {
  CHECK(h.residual <= 1e-8);
  CHECK(basis.distance(h.vector) <= 1e-10);
  CHECK(is_product(h.vector, dims).product);
  CHECK((kron(h.factors) - h.vector).norm() <= 1e-8);
  CHECK((basis.rows().transpose() * h.coefficients - h.vector).norm() <= 1e-8);
}

}  // namespace

TEST_CASE("product-vector search") {
  const Dims q2{2, 2};
  Matrix rows(2, 4);
  rows.row(0) = (ket(q2, {0, 0}) + ket(q2, {1, 1})).transpose();
  rows.row(1) = ket(q2, {0, 1}).transpose();
  const SubspaceBasis b(rows, q2);
  const auto hit = find_product_vector(b);
  REQUIRE(hit);
  CHECK(same_ray(hit->vector, ket(q2, {0, 1})));
  check_hit(*hit, b, q2);

  const Dims q3{2, 2, 2};
  Rng rng(1);
  for (int trial = 0; trial < 5; ++trial) {
    Matrix r = random_complex_gaussian(4, 8, rng);
    r.row(0) = ket(q3, {0, 0, 0}).transpose();
    const SubspaceBasis basis(r, q3);
    ProductSearchOptions opts;
    opts.seed = trial;
    const auto h = find_product_vector(basis, opts);
    REQUIRE(h);
    CHECK(h->residual <= 1e-10);
    check_hit(*h, basis, q3);
  }
}

TEST_CASE("the example range is completely entangled") {
  ProductSearchOptions opts;
  opts.restarts = 500;
  CHECK_FALSE(find_product_vector(range_basis(example_ab_state(1.0, 1.0)), opts));
  CHECK_FALSE(find_product_vector(range_basis(divincenzo_state()), opts));
}

TEST_CASE("deterministic in the seed") {
  Rng rng(2);
  const Dims d{3, 3};
  Matrix r = random_complex_gaussian(4, 9, rng);
  r.row(0) = ket(d, {1, 2}).transpose() + ket(d, {0, 2}).transpose();
  const SubspaceBasis b(r, d);
  ProductSearchOptions opts;
  opts.seed = 42;
  const auto h1 = find_product_vector(b, opts), h2 = find_product_vector(b, opts);
  REQUIRE(h1);
  REQUIRE(h2);
  CHECK(h1->vector == h2->vector);
}

TEST_CASE("six kernel product vectors in general position") {
  const MultiState rho = example_ab_state(1.0, 1.0);
  const SubspaceBasis k = kernel_basis(rho);
  REQUIRE(k.dimension() == 5);
  const auto hits = count_kernel_product_vectors_3x3(k);
  REQUIRE(hits.size() == 6);
  std::vector<std::vector<Vector>> vs;
  for (const auto& h : hits) {
    check_hit(h, k, {3, 3});
    CHECK((rho.matrix() * h.vector).norm() <= 1e-8 * rho.matrix().norm());
    vs.push_back(h.factors);
  }
  for (std::size_t i = 0; i < hits.size(); ++i)
    for (std::size_t j = i + 1; j < hits.size(); ++j) CHECK_FALSE(same_ray(hits[i].vector, hits[j].vector));
  CHECK(check_general_position(vs));

  // the count does not depend on the random charts
  CHECK(count_kernel_product_vectors_3x3(k, 99).size() == 6);
}

TEST_CASE("kernel containing a chosen product vector") {
  Rng rng(3);
  const Dims d{3, 3};
  Matrix r = random_complex_gaussian(5, 9, rng);
  r.row(0) = ket(d, {0, 0}).transpose();
  const SubspaceBasis k(r, d);
  const auto hits = count_kernel_product_vectors_3x3(k, 1);
  CHECK(hits.size() == 6);
  bool found = false;
  for (const auto& h : hits) found = found || same_ray(h.vector, ket(d, {0, 0}));
  CHECK(found);
  CHECK_THROWS_AS(count_kernel_product_vectors_3x3(SubspaceBasis(random_complex_gaussian(4, 9, rng), d)), Error);
}

TEST_CASE("kernel of a separable rank-four state") {
  const MultiState sep = random_separable({3, 3}, 4, 5);
  try {
    const auto hits = count_kernel_product_vectors_3x3(kernel_basis(sep), 2);
    CHECK(hits.size() >= 6);
    for (const auto& h : hits) CHECK(is_product(h.vector, {3, 3}).product);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateConfiguration);
  }
}

TEST_CASE("bipartite kernel product vectors of the three-qubit state") {
  const MultiState rho = divincenzo_state();
  for (int cut = 0; cut < 3; ++cut) {
    const BipartiteKernelVectors kv = bipartite_kernel_product_vectors_2x2x2(rho, cut);
    REQUIRE(kv.kernel.size() == 4);
    REQUIRE(kv.psi.size() == 4);
    for (const Vector& v : kv.kernel) {
      CHECK(v.norm() == doctest::Approx(1.0));
      CHECK((rho.matrix() * v).norm() <= 1e-10);
    }
    // reciprocal bases
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        CHECK(std::abs(kv.reciprocal[i].dot(kv.psi[j]) - (i == j ? 1.0 : 0.0)) <= 1e-9);
    // product across the cut: local factor on `cut`, anything on the rest
    for (const Vector& v : kv.kernel) {
      CHECK(flattening_ratio(v, {2, 2, 2}, cut) <= 1e-8);
    }
  }
  CHECK_THROWS_AS(bipartite_kernel_product_vectors_2x2x2(random_separable({2, 2, 2}, 4, 1), 0), Error);
  CHECK_THROWS_AS(bipartite_kernel_product_vectors_2x2x2(example_ab_state(1.0, 1.0), 0), Error);
}

TEST_CASE("greedy decomposition") {
  const Dims q2{2, 2};
  const MultiState two = sep4::test::mixture({ket(q2, {0, 0}), ket(q2, {1, 1})}, q2);
  const auto d2 = greedy_decompose(two, 6);
  REQUIRE(d2);
  CHECK(d2->terms.size() == 2);
  CHECK(d2->residual <= 1e-8 * two.trace());

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const MultiState three = random_separable({2, 3, 2}, 3, seed);
    REQUIRE(rank_of(three) == 3);
    const auto d3 = greedy_decompose(three, 6, seed);
    REQUIRE(d3);
    CHECK(d3->terms.size() == 3);
    CHECK((d3->assemble(three.dims()) - three.matrix()).norm() <= 1e-8 * three.trace());
    for (const auto& t : d3->terms) {
      CHECK(t.weight > 0);
      CHECK(is_product(kron(t.factors), three.dims()).product);
    }
  }

  const MultiState ab = example_ab_state(1.0, 0.0);
  const auto d4 = greedy_decompose(ab, 6);
  REQUIRE(d4);
  CHECK(d4->terms.size() <= 6);
  CHECK(d4->residual <= 1e-8 * ab.trace());

  // entangled input: no admissible decomposition
  CHECK_FALSE(greedy_decompose(example_ab_state(1.0, 1.0), 6));
}

TEST_CASE("general position") {
  const double s = 1.0 / std::sqrt(2.0);
  const Vector z = sep4::test::qubit(1, 0), o = sep4::test::qubit(0, 1), e = sep4::test::qubit(s, s);
  CHECK(check_general_position({{z, z}, {o, o}, {e, e}}));
  CHECK_FALSE(check_general_position({{z, z}, {z, o}, {o, z}}));
}
