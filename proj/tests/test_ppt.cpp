#include "doctest.h"
#include "helpers.hpp"

#include "sep4/gallery.hpp"
#include "sep4/ppt.hpp"

using namespace sep4;
using sep4::test::ket;
using sep4::test::proj;

TEST_CASE("subset enumeration: popcount, then lexicographic, last party excluded") {
  const std::vector<SubsetMask> s3 = ppt_subsets(3);
  REQUIRE(s3.size() == 4);
  CHECK(s3[0] == SubsetMask());
  CHECK(s3[1] == SubsetMask::of({0}));
  CHECK(s3[2] == SubsetMask::of({1}));
  CHECK(s3[3] == SubsetMask::of({0, 1}));

  const std::vector<SubsetMask> s4 = ppt_subsets(4);
  REQUIRE(s4.size() == 8);
  CHECK(s4[4] == SubsetMask::of({0, 1}));
  CHECK(s4[5] == SubsetMask::of({0, 2}));
  CHECK(s4[6] == SubsetMask::of({1, 2}));
  CHECK(s4[7] == SubsetMask::of({0, 1, 2}));
  for (SubsetMask s : s4) CHECK_FALSE(s.contains(3));
}

TEST_CASE("separable mixtures are PPT") {
  const MultiState sep = random_separable({2, 3, 2}, 5, 17);
  const PptReport r = is_ppt(sep);
  CHECK(r.is_ppt);
  CHECK(r.records.size() == 4);
  for (const auto& rec : r.records) CHECK(rec.min_eigenvalue >= r.threshold);
}

TEST_CASE("GHZ is NPT") {
  const Vector ghz = ket({2, 2, 2}, {0, 0, 0}) + ket({2, 2, 2}, {1, 1, 1});
  const PptReport r = is_ppt(MultiState::create(proj(ghz), {2, 2, 2}));
  CHECK_FALSE(r.is_ppt);
  CHECK(r.worst_subset != SubsetMask());
  // the transposed GHZ projector has eigenvalue -1 on every nontrivial cut
  for (const auto& rec : r.records)
    if (rec.subset != SubsetMask()) CHECK(rec.min_eigenvalue == doctest::Approx(-1.0));
}

TEST_CASE("example family is PPT; DiVincenzo has PT ranks 4") {
  CHECK(is_ppt(example_ab_state(2.0, 0.5)).is_ppt);
  const PptReport dv = is_ppt(divincenzo_state());
  CHECK(dv.is_ppt);
  for (const auto& rec : dv.records) CHECK(rec.rank == 4);
}

TEST_CASE("ranks of complementary transposes agree") {
  const MultiState rho = example_ab_state({0.3, 1.2}, 2.0);
  const MultiState dv = divincenzo_state();
  for (std::uint32_t s = 0; s < 8; ++s)
    CHECK(rank_of(partial_transpose(dv, SubsetMask(s))) ==
          rank_of(partial_transpose(dv, SubsetMask(s).complement(3))));
  CHECK(rank_of(partial_transpose(rho, SubsetMask::of({0}))) == rank_of(partial_transpose(rho, SubsetMask::of({1}))));
}

TEST_CASE("PPT verdict is scale invariant") {
  const MultiState rho = example_ab_state(1.0, 1.0);
  for (double s : {1e-6, 1e6}) {
    const PptReport r = is_ppt(MultiState::create(s * rho.matrix(), rho.dims()));
    CHECK(r.is_ppt);
  }
  const Vector ghz = ket({2, 2}, {0, 0}) + ket({2, 2}, {1, 1});
  CHECK_FALSE(is_ppt(MultiState::create(1e-8 * proj(ghz), {2, 2})).is_ppt);
}

TEST_CASE("biranks") {
  CHECK(birank(MultiState::create(proj(ket({2, 3}, {1, 2})), {2, 3})) == std::pair{1, 1});
  const Operator grouped = group_bipartite(divincenzo_state(), SubsetMask::of({0}));
  CHECK(grouped.dims() == Dims{2, 4});
  CHECK(birank(grouped) == std::pair{4, 4});
  CHECK(birank(example_ab_state(1.0, 1.0)) == std::pair{4, 4});
  CHECK_THROWS_AS(birank(divincenzo_state()), Error);

  // grouping parties {2} first reorders the tensor factors
  const Operator g2 = group_bipartite(divincenzo_state(), SubsetMask::of({1}));
  CHECK(birank(g2) == std::pair{4, 4});
}
