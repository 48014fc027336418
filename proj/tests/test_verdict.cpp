#include "doctest.h"

#include "simploc/engine.hpp"
#include "simploc/errors.hpp"

#include "oracles.hpp"

using namespace simploc;
using namespace simploc::dsl;
using namespace simploc::engine;
using coeff::builtin_table;
using coeff::FgAbGroup;

namespace {

const GroupDatum kTrivial = GroupDatum::trivial();

bool mentions(const std::vector<std::string>& lines, const std::string& needle) {
  for (const auto& l : lines)
    if (l.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("preset outcomes on library trees") {
  auto cusp_k = run_preset("goodwillie_jones_Q", *cusp(kTrivial), kTrivial);
  REQUIRE(cusp_k.verdict);
  CHECK(cusp_k.verdict->kind == VerdictKind::IsoInDegree);
  CHECK(cusp_k.verdict->degree == 0);
  CHECK(mentions(cusp_k.verdict->hypotheses, "class B"));
  CHECK(mentions(cusp_k.verdict->hypotheses, "degrees 0 and -1"));

  auto node_k = run_preset("goodwillie_jones_Q", *node(kTrivial), kTrivial);
  CHECK_FALSE(node_k.verdict);
  CHECK(node_k.failed_hypothesis.find("class B") != std::string::npos);

  auto node_tc = run_preset("cyclotomic_Fp", *node(kTrivial), kTrivial);
  REQUIRE(node_tc.verdict);
  CHECK(node_tc.verdict->kind == VerdictKind::EquivalenceAllDegrees);

  auto hens = flag_bundle(henselian_base(5), {2, std::nullopt, std::nullopt}, {1});
  auto hens_tc = run_preset("cyclotomic_Fp", *hens, kTrivial);
  REQUIRE(hens_tc.verdict);
  CHECK(hens_tc.verdict->kind == VerdictKind::EquivalenceAllDegrees);
  CHECK(mentions(hens_tc.verdict->hypotheses, "p = 5"));
  CHECK_FALSE(run_preset("goodwillie_jones_Q", *hens, kTrivial).verdict);
  CHECK_FALSE(run_preset("ktop_C", *hens, kTrivial).verdict);

  auto mixed = disjoint({henselian_base(2), henselian_base(3)});
  CHECK_FALSE(run_preset("cyclotomic_Fp", *mixed, kTrivial).verdict);

  auto torus = GroupDatum::torus(2);
  auto top = run_preset("ktop_C", *grassmannian(4, 2, torus), torus);
  REQUIRE(top.verdict);
  CHECK(top.verdict->kind == VerdictKind::IsoInDegree);

  auto with_oracle = stratified_descent(projective_space(2, kTrivial), {1, 0, 1}, {1}, Integer(2));
  auto o = run_preset("goodwillie_jones_Q", *with_oracle, kTrivial);
  REQUIRE(o.verdict);
  CHECK(mentions(o.verdict->hypotheses, "assuming descent oracles at /"));

  CHECK_THROWS_AS(preset("nope"), LookupError);
  CHECK(preset_names().size() == 4);
}

TEST_CASE("fibers that do not vanish in degree -1 never give a degree-0 verdict") {
  std::mt19937 rng(5);
  oracle::TreeFuzzer fuzz(9, kTrivial);
  for (int trial = 0; trial < 200; ++trial) {
    FiberProfile fiber;
    fiber.description = "random";
    fiber.vanishes_elsewhere = rng() % 2;
    for (int d = -3; d <= 3; ++d)
      if (rng() % 2) fiber.known[d] = rng() % 2 ? FgAbGroup::zero() : FgAbGroup::free(1 + rng() % 3);
    fiber.known[-1] = rng() % 2 ? FgAbGroup::free(1) : FgAbGroup::cyclic(2 + rng() % 5);
    auto tree = fuzz.make(3).tree;
    auto out = verify_comparison(fiber, classify(*tree), 0);
    CHECK_FALSE(out.verdict);
    CHECK_FALSE(out.failed_hypothesis.empty());
  }
}

TEST_CASE("degreewise verdicts follow the fiber") {
  FiberProfile fiber{{{3, FgAbGroup::free(1)}}, true, "test"};
  auto b = classify(*cusp(kTrivial));
  CHECK(verify_comparison(fiber, b, 2).verdict);
  CHECK_FALSE(verify_comparison(fiber, b, 3).verdict);
  CHECK_FALSE(verify_comparison(fiber, b, 4).verdict);
  CHECK_FALSE(verify_comparison(fiber, b, std::nullopt).verdict);
  FiberProfile all{{}, true, "test"};
  CHECK(verify_comparison(all, classify(*node(kTrivial)), std::nullopt).verdict->kind ==
        VerdictKind::EquivalenceAllDegrees);
  MembershipClass invalid;
  CHECK_FALSE(verify_comparison(all, invalid, 0).verdict);
}

TEST_CASE("K splits as KH plus HC^- in positive degrees") {
  auto tree = cusp(kTrivial);
  auto cls = classify(*tree);
  auto kh = compute_graded(*tree, kTrivial, builtin_table("bott"), {0, 3});
  auto hc = fixture_value(coeff::parse_table("0 1 Q\n1 1 Q\n3 2 Q\n"), {0, 3});
  auto d2 = decompose_positive_K(kh, hc, cls, 2);
  CHECK(d2.value == FgAbGroup::free(2));
  CHECK(d2.verdict.kind == VerdictKind::SplitDecomposition);
  auto d1 = decompose_positive_K(kh, hc, cls, 1);
  CHECK(d1.value == FgAbGroup::rational_free(1));
  CHECK_THROWS_AS(decompose_positive_K(kh, hc, cls, 0), HypothesisError);
  CHECK_THROWS_AS(decompose_positive_K(kh, hc, classify(*node(kTrivial)), 1), HypothesisError);
}

TEST_CASE("rational vanishing over finite fields") {
  auto v = parshin_check(*cusp(kTrivial), kTrivial);
  CHECK(v.kind == VerdictKind::Vanishing);
  CHECK(v.degree_set == "i != 0");
  CHECK(v.conclusion_text.find("Q^2") != std::string::npos);
  CHECK(parshin_check(*grassmannian(4, 2, kTrivial), kTrivial).conclusion_text.find("Q^6") != std::string::npos);
  CHECK_THROWS_AS(parshin_check(*node(kTrivial), kTrivial), HypothesisError);
  auto out = run_preset("parshin_Fq", *node(kTrivial), kTrivial);
  CHECK_FALSE(out.verdict);
  CHECK(out.failed_hypothesis.find("class B") != std::string::npos);
}
