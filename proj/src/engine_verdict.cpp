#include "simploc/engine.hpp"
#include "simploc/errors.hpp"

namespace simploc::engine {

using dsl::ClassTag;

std::string verdict_kind_name(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::EquivalenceAllDegrees: return "EquivalenceAllDegrees";
    case VerdictKind::IsoInDegree: return "IsoInDegree";
    case VerdictKind::SplitDecomposition: return "SplitDecomposition";
    case VerdictKind::Vanishing: return "Vanishing";
    case VerdictKind::NotInB: return "NotInB";
  }
  return "?";
}

bool FiberProfile::vanishes_in(int degree) const {
  auto it = known.find(degree);
  if (it != known.end()) return it->second.is_zero();
  return vanishes_elsewhere;
}

bool FiberProfile::vanishes_everywhere() const {
  if (!vanishes_elsewhere) return false;
  for (const auto& [d, g] : known)
    if (!g.is_zero()) return false;
  return true;
}

namespace {

std::string class_hypothesis(const MembershipClass& c) {
  std::string out = "X/G in class " + dsl::class_tag_name(c.tag);
  if (c.prime) out += " (p = " + std::to_string(*c.prime) + ")";
  if (!c.assumed_oracles.empty()) {
    out += ", assuming descent oracles at";
    for (const auto& p : c.assumed_oracles) out += " " + p;
  }
  return out;
}

}  // namespace

ComparisonOutcome verify_comparison(const FiberProfile& fiber, const MembershipClass& tree_class,
                                    std::optional<int> target_degree) {
  if (tree_class.tag == ClassTag::invalid) return {std::nullopt, "tree is invalid: " + tree_class.reason};
  auto fiber_text = "fiber on BG, " + fiber.description + ",";
  if (fiber.vanishes_everywhere()) {
    if (!dsl::at_least(tree_class.tag, ClassTag::C)) {
      return {std::nullopt, "vanishing on BG only propagates over class C; tree is class " +
                                dsl::class_tag_name(tree_class.tag)};
    }
    Verdict v;
    v.kind = VerdictKind::EquivalenceAllDegrees;
    v.hypotheses = {class_hypothesis(tree_class), fiber_text + " vanishes in every degree",
                    "both invariants are truncating and satisfy cdh descent"};
    v.conclusion_text = "the comparison map is an equivalence on X/G";
    return {v, ""};
  }
  if (!target_degree) {
    return {std::nullopt, "fiber on BG is not known to vanish in every degree and no target degree was given"};
  }
  int i = *target_degree;
  for (int d : {i, i - 1}) {
    if (!fiber.vanishes_in(d)) {
      return {std::nullopt, "fiber on BG does not vanish in degree " + std::to_string(d)};
    }
  }
  if (tree_class.tag != ClassTag::B) {
    return {std::nullopt, "a degreewise comparison needs class B; tree is class " +
                              dsl::class_tag_name(tree_class.tag) +
                              (tree_class.reason.empty() ? "" : " (" + tree_class.reason + ")")};
  }
  Verdict v;
  v.kind = VerdictKind::IsoInDegree;
  v.degree = i;
  v.hypotheses = {class_hypothesis(tree_class),
                  fiber_text + " vanishes in degrees " + std::to_string(i) + " and " + std::to_string(i - 1)};
  v.conclusion_text = "the comparison map is an isomorphism in degree " + std::to_string(i);
  return {v, ""};
}

KDecomposition decompose_positive_K(const GradedModuleValue& kh, const GradedModuleValue& hcminus,
                                    const MembershipClass& tree_class, int degree) {
  if (tree_class.tag != ClassTag::B) {
    throw HypothesisError("K = KH + HC^- needs class B; tree is class " + dsl::class_tag_name(tree_class.tag));
  }
  if (degree < 1) throw HypothesisError("K = KH + HC^- only holds in degrees >= 1");
  Verdict v;
  v.kind = VerdictKind::SplitDecomposition;
  v.degree = degree;
  v.hypotheses = {class_hypothesis(tree_class), "base field of characteristic 0",
                  "degree " + std::to_string(degree) + " >= 1"};
  v.conclusion_text = "K_" + std::to_string(degree) + " = KH_" + std::to_string(degree) + " + HC^-_" +
                      std::to_string(degree);
  return {direct_sum(kh.at(degree), hcminus.at(degree)), v};
}

Verdict parshin_check(const ConstructionTree& tree, const GroupDatum& group) {
  auto cls = dsl::classify(tree);
  if (cls.tag != ClassTag::B) {
    throw HypothesisError("rational vanishing needs class B; tree is class " + dsl::class_tag_name(cls.tag));
  }
  auto table = coeff::builtin_table("rational_deg0");
  auto value = compute_graded(tree, group, table, {0, 0});
  if (table.lowest_nonzero_degree() != 0 || table.highest_nonzero_degree() != 0) {
    throw InternalError("rational coefficient table is not concentrated in degree 0");
  }
  Verdict v;
  v.kind = VerdictKind::Vanishing;
  v.degree_set = "i != 0";
  v.hypotheses = {class_hypothesis(cls), "finite base field: K_*(F_q; Q) is Q in degree 0",
                  "K(-; Q) = KH(-; Q) on X/G"};
  v.conclusion_text = "K_i(X/G; Q) = 0 for i != 0; K_0(X/G; Q) = " + value.at(0).format() + " over R(G)";
  return v;
}

Preset preset(const std::string& id) {
  auto zero = FgAbGroup::zero();
  if (id == "cyclotomic_Fp") {
    return {id, "K(-; F_p) -> TC(-; F_p)", {{}, true, "K^inf(BG; F_p)"}, std::nullopt};
  }
  if (id == "goodwillie_jones_Q") {
    return {id, "K(-) -> HC^-(-/Q)", {{{0, zero}, {-1, zero}}, false, "K^inf(BG)"}, 0};
  }
  if (id == "parshin_Fq") {
    return {id, "K(-; Q) -> KH(-; Q) over F_q", {{}, true, "fiber of K(BG; Q) -> KH(BG; Q)"}, std::nullopt};
  }
  if (id == "ktop_C") {
    return {id, "KH(-) -> K^top(-(C))", {{{0, zero}, {-1, zero}}, false, "fiber of KH(BG) -> K^top(BG(C))"}, 0};
  }
  throw LookupError("unknown preset '" + id + "'");
}

std::vector<std::string> preset_names() { return {"cyclotomic_Fp", "goodwillie_jones_Q", "parshin_Fq", "ktop_C"}; }

ComparisonOutcome run_preset(const std::string& id, const ConstructionTree& tree, const GroupDatum& group) {
  auto p = preset(id);
  auto cls = dsl::classify(tree);
  if (id == "parshin_Fq") {
    try {
      return {parshin_check(tree, group), ""};
    } catch (const HypothesisError& e) {
      return {std::nullopt, e.what()};
    }
  }
  if (id == "cyclotomic_Fp" && cls.tag == ClassTag::C_p) {
    Verdict v;
    v.kind = VerdictKind::EquivalenceAllDegrees;
    v.hypotheses = {class_hypothesis(cls), "K^inf(-; F_p) vanishes on strictly henselian bases of residue characteristic p",
                    "both invariants are truncating and satisfy cdh descent"};
    v.conclusion_text = "K(X/G; F_p) -> TC(X/G; F_p) is an equivalence";
    return {v, ""};
  }
  return verify_comparison(p.fiber, cls, p.target_degree);
}

}  // namespace simploc::engine
