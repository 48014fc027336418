#include "doctest.h"

#include "simploc/errors.hpp"
#include "simploc/group_rep.hpp"

#include "oracles.hpp"

using namespace simploc;
using namespace simploc::group_rep;

TEST_CASE("character lattice reduces torsion coordinates") {
  CharacterLattice m(1, {3});
  CHECK(m.make({2, 5}).coords == std::vector<std::int64_t>{2, 2});
  CHECK(m.make({0, -1}).coords == std::vector<std::int64_t>{0, 2});
  CHECK_THROWS_AS(m.make({1}), ValidationError);
  CHECK(m.add(m.make({1, 2}), m.make({1, 2})) == m.make({2, 1}));
  CHECK(m.order() == std::nullopt);
  CHECK(CharacterLattice(0, {2, 3}).order() == 6);
}

TEST_CASE("group data describe themselves") {
  CHECK(GroupDatum::trivial().describe() == "trivial");
  CHECK(GroupDatum::torus(1).describe() == "torus 1");
  CHECK(GroupDatum::diagonalizable(0, {3}).describe() == "finite 3");
  CHECK(GroupDatum::opaque("SL2").is_opaque());
  CHECK_THROWS_AS(GroupDatum::opaque("SL2").lattice(), UnsupportedError);
  CHECK(GroupDatum::trivial().is_trivial());
  CHECK_FALSE(GroupDatum::torus(2).is_trivial());
}

TEST_CASE("representation ring presentations") {
  CHECK(representation_ring(GroupDatum::trivial()).presentation() == "Z");
  CHECK(representation_ring(GroupDatum::torus(1)).presentation() == "Z[t^±1]");
  CHECK(representation_ring(GroupDatum::diagonalizable(0, {3})).presentation() == "Z[s]/(s^3 - 1)");
  CHECK(representation_ring(GroupDatum::diagonalizable(0, {3})).additive_rank() == 3);
}

TEST_CASE("group algebra arithmetic") {
  CharacterLattice m(2, {});
  auto t1 = RepRingElement::character(m, m.basis(0));
  auto t2 = RepRingElement::character(m, m.basis(1));
  auto lhs = (t1 + t2) * (t1 - t2);
  auto rhs = RepRingElement::character(m, m.scale(m.basis(0), 2)) - RepRingElement::character(m, m.scale(m.basis(1), 2));
  CHECK(lhs == rhs);
  CHECK((t1 - t1).is_zero());
  CHECK(augment(lhs) == 0);
  CHECK(augment(t1 * Integer(5) + RepRingElement::one(m)) == 6);

  // Z/3: s^3 = 1
  CharacterLattice c3(0, {3});
  auto s = RepRingElement::character(c3, c3.basis(0));
  CHECK(s * s * s == RepRingElement::one(c3));
}

TEST_CASE("elementary symmetric classes match subset products") {
  CharacterLattice m(3, {2});
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coord(-2, 2);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 1 + trial % 4;
    std::vector<Character> chars;
    for (std::size_t k = 0; k < n; ++k) chars.push_back(m.make({coord(rng), coord(rng), coord(rng), coord(rng)}));
    for (std::size_t i = 0; i <= n; ++i) {
      auto expected = RepRingElement::zero(m);
      std::vector<std::size_t> cur;
      oracle::subsets(n, i, 0, cur, [&](const std::vector<std::size_t>& s) {
        auto term = RepRingElement::one(m);
        for (auto k : s) term *= RepRingElement::character(m, chars[k]);
        expected += term;
      });
      CHECK(elementary_symmetric_class(m, chars, i) == expected);
    }
    CHECK_THROWS_AS(elementary_symmetric_class(m, chars, n + 1), RangeError);
  }
}
