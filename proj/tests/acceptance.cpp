// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "simploc/engine.hpp"
#include "simploc/errors.hpp"
#include "simploc/schubert.hpp"
#include "simploc/script.hpp"

#include "oracles.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace simploc;
using namespace simploc::dsl;
using coeff::builtin_table;
using coeff::CoefficientTable;
using coeff::FgAbGroup;
using coeff::IntMatrix;

namespace {

std::string g_fixtures = "tests/fixtures";

class Check {
public:
  void expect(bool ok, const std::string& what) {
    ++count_;
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  bool passed() const { return failed_ == 0 && count_ > 0; }
  int count() const { return count_; }
  int failed() const { return failed_; }
  const std::vector<std::string>& failures() const { return failures_; }

private:
  int count_ = 0;
  int failed_ = 0;
  std::vector<std::string> failures_;
};

std::string run_fixture(const std::string& name, int& code) {
  std::ifstream in(g_fixtures + "/" + name);
  if (!in) throw LookupError("missing fixture " + name);
  std::ostringstream buf, out, err;
  buf << in.rdbuf();
  auto s = script::parse_script(buf.str(), g_fixtures);
  code = script::run(s, {}, out, err);
  return out.str();
}

bool contains(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

Integer rank_of(const TreePtr& tree, const GroupDatum& group) {
  return Integer(engine::compute_degree0(*tree, group).rank());
}

// ----- 1 -------------------------------------------------------------------

void node_negative_k(Check& c) {
  int code = 0;
  auto out = run_fixture("node.simploc", code);
  c.expect(code == 0, "node script exits 0");
  c.expect(contains(out, "  degree -1: Z\n"), "degree -1 is Z");
  c.expect(contains(out, "  degree -2: 0\n") && contains(out, "  degree -3: 0\n"), "degrees <= -2 vanish");

  auto trivial = GroupDatum::trivial();
  auto value = engine::compute_graded(*node(trivial), trivial, builtin_table("unit"), {-6, 0});
  c.expect(value.at(-1) == FgAbGroup::free(1), "engine: degree -1 is Z");
  for (int i = -6; i <= -2; ++i) c.expect(value.at(i).is_zero(), "engine: degree " + std::to_string(i) + " vanishes");
  auto evidence = engine::refute_membership_B(*node(trivial));
  c.expect(evidence && evidence->degree == -1 && evidence->value == FgAbGroup::free(1), "NotInB evidence");
}

// ----- 2 -------------------------------------------------------------------

void cone_of_p1_values(Check& c) {
  auto trivial = GroupDatum::trivial();
  auto cone = cone_of_p1(trivial);
  c.expect(rank_of(cone, trivial) == 3, "compute_degree0 rank 3");

  std::ifstream in(g_fixtures + "/kh_fixture.table");
  std::ostringstream buf;
  buf << in.rdbuf();
  auto table = coeff::parse_table(buf.str(), "kh");
  auto value = engine::compute_graded(*cone, trivial, table, {0, 6});
  c.expect(value.is_formal(), "formal shape");
  for (int i = 0; i <= 6; ++i) {
    // KH_i(X) = KH_i(Q)^3 by three-fold direct sum
    auto expected = direct_sum(direct_sum(table.at(i), table.at(i)), table.at(i));
    c.expect(value.at(i) == expected, "KH_" + std::to_string(i) + " is three copies");
  }

  int code = 0;
  auto out = run_fixture("cone_report.simploc", code);
  c.expect(code == 0, "cone report exits 0");
  for (int i = 1; i <= 6; ++i) {
    auto kh = direct_sum(direct_sum(table.at(i), table.at(i)), table.at(i));
    auto hc = i % 2 ? FgAbGroup::rational_free(1) : FgAbGroup::zero();
    auto k = kh.is_zero() && hc.is_zero() ? FgAbGroup::zero() : FgAbGroup::rational_free(kh.free_rank() + hc.free_rank());
    auto row = "  " + std::to_string(i) + " | " + k.format() + " | " + kh.format() + " | " + hc.format() + "\n";
    c.expect(contains(out, row), "report row " + std::to_string(i));
  }
  c.expect(contains(out, "  1 | Q^4 | Q^3 | Q\n"), "odd degrees carry the extra Q");
}

// ----- 3 -------------------------------------------------------------------

void affine_finite_cross_check(Check& c) {
  for (const auto& group : {GroupDatum::trivial(), GroupDatum::torus(2)}) {
    auto tree = schubert::affine_schubert_tree({2, {2, 0}}, group);
    auto d = tree->as<StratifiedDescentNode>();
    c.expect(d != nullptr, "descent on top");
    if (!d) return;
    c.expect(rank_of(d->total_space, group) == 4, "Y rank 4");
    c.expect(d->oracle_rank == Integer(3), "oracle rank 3");
    c.expect(rank_of(tree, group) == rank_of(cone_of_p1(group), group), "equals the cone rank");
  }
}

// ----- 4 -------------------------------------------------------------------

std::vector<std::pair<std::string, TreePtr>> library_trees(const GroupDatum& g) {
  std::vector<std::pair<std::string, TreePtr>> out{
      {"P1", projective_space(1, g)},          {"P3", projective_space(3, g)},
      {"Gr(4,2)", grassmannian(4, 2, g)},       {"flag", flag_variety(3, {1, 1, 1}, g)},
      {"hirzebruch0", hirzebruch(0, g)},        {"hirzebruch2", hirzebruch(2, g)},
      {"cusp", cusp(g)},                        {"node", node(g)},
      {"cone", cone_of_p1(g)},                  {"cone(P2)", projective_cone(projective_space(2, g), 1, g)},
      {"node+cusp", disjoint({node(g), cusp(g)})},
      {"bundle over node", flag_bundle(node(g), {2, std::nullopt, std::nullopt}, {1})}};
  if (g.is_trivial() || g.free_rank() >= 4) {
    out.emplace_back("finite schubert", schubert::finite_schubert_tree({4, 2, {0, 0, 1, 1, 2}}, g));
    out.emplace_back("affine schubert", schubert::affine_schubert_tree({3, {2, 1, 0}}, g));
  }
  return out;
}

void verdict_presets(Check& c) {
  int class_b = 0, class_c = 0;
  for (const auto& g : {GroupDatum::trivial(), GroupDatum::torus(2), GroupDatum::torus(4)}) {
    for (const auto& [name, tree] : library_trees(g)) {
      auto tag = classify(*tree).tag;
      auto label = name + " over " + g.describe();
      if (tag == ClassTag::C) {
        ++class_c;
        auto o = engine::run_preset("cyclotomic_Fp", *tree, g);
        c.expect(o.verdict && o.verdict->kind == engine::VerdictKind::EquivalenceAllDegrees,
                 "cyclotomic_Fp on " + label);
      } else if (tag == ClassTag::B) {
        ++class_b;
        auto gj = engine::run_preset("goodwillie_jones_Q", *tree, g);
        c.expect(gj.verdict && gj.verdict->kind == engine::VerdictKind::IsoInDegree && gj.verdict->degree == 0,
                 "goodwillie_jones_Q on " + label);
        auto pq = engine::run_preset("parshin_Fq", *tree, g);
        c.expect(pq.verdict && pq.verdict->kind == engine::VerdictKind::Vanishing && pq.verdict->degree_set == "i != 0",
                 "parshin_Fq on " + label);
      }
    }
  }
  c.expect(class_b > 0 && class_c > 0, "both classes exercised");

  // a fiber that vanishes only in degree 0 must block every preset
  std::mt19937 rng(4);
  auto trivial = GroupDatum::trivial();
  oracle::TreeFuzzer fuzz(13, trivial);
  std::vector<TreePtr> trees;
  for (const auto& [name, tree] : library_trees(trivial)) trees.push_back(tree);
  for (int k = 0; k < 40; ++k) trees.push_back(fuzz.make(4).tree);
  for (const auto& id : engine::preset_names()) {
    for (const auto& tree : trees) {
      engine::FiberProfile fiber;
      fiber.description = "synthetic";
      fiber.known[0] = FgAbGroup::zero();
      fiber.known[-1] = rng() % 2 ? FgAbGroup::free(1 + rng() % 3) : FgAbGroup::cyclic(2 + rng() % 4);
      for (int d : {-3, -2, 1, 2}) fiber.known[d] = FgAbGroup::free(1 + rng() % 2);
      auto target = engine::preset(id).target_degree.value_or(0);
      auto o = engine::verify_comparison(fiber, classify(*tree), target);
      c.expect(!o.verdict, "preset " + id + " refuses a fiber nonzero in degree -1");
    }
  }
}

// ----- 5 -------------------------------------------------------------------

// Degreewise values as (free rank, multiset of prime-power torsion), built only
// from direct sums and cancellation.
struct OracleGroup {
  std::int64_t free = 0;
  std::multiset<Integer> torsion;

  void add(const OracleGroup& o, const Integer& copies = 1) {
    for (Integer k = 0; k < copies; ++k) {
      free += o.free;
      torsion.insert(o.torsion.begin(), o.torsion.end());
    }
  }
  bool remove(const OracleGroup& o) {
    if (o.free > free) return false;
    free -= o.free;
    for (const auto& t : o.torsion) {
      auto it = torsion.find(t);
      if (it == torsion.end()) return false;
      torsion.erase(it);
    }
    return true;
  }
};

OracleGroup from_table(const FgAbGroup& g) {
  OracleGroup out;
  out.free = g.free_rank();
  for (auto f : g.invariant_factors()) {
    // prime-power split by trial division
    for (Integer p = 2; p * p <= f; ++p) {
      Integer q = 1;
      while (f % p == 0) {
        f /= p;
        q *= p;
      }
      if (q > 1) out.torsion.insert(q);
    }
    if (f > 1) out.torsion.insert(f);
  }
  return out;
}

bool same(const OracleGroup& o, const FgAbGroup& g) {
  if (g.rational() || g.free_rank() != o.free) return false;
  auto ed = g.elementary_divisors();
  return std::multiset<Integer>(ed.begin(), ed.end()) == o.torsion;
}

OracleGroup degreewise(const ConstructionTree& tree, const OracleGroup& pt, Check& c, const GroupDatum& g) {
  if (tree.as<PointNode>()) return pt;
  if (auto n = tree.as<DisjointNode>()) {
    OracleGroup out;
    for (const auto& kid : n->children) out.add(degreewise(*kid, pt, c, g));
    return out;
  }
  if (auto n = tree.as<FlagBundleNode>()) {
    OracleGroup out;
    out.add(degreewise(*n->base, pt, c, g), oracle::tower_rank(n->bundle.rank, n->d_vec));
    return out;
  }
  if (auto n = tree.as<StratifiedDescentNode>()) {
    OracleGroup out;
    out.add(pt, *n->oracle_rank);
    return out;
  }
  const auto& b = std::get<BlowupNode>(tree.node());
  std::array<OracleGroup, 4> v;
  for (std::size_t k = 0; k < 4; ++k)
    if (b.corners[k]) v[k] = degreewise(*b.corners[k], pt, c, g);
  // X + E = Y + Z: the unknown is the opposite side minus its partner
  auto idx = [](Corner x) { return static_cast<std::size_t>(x); };
  bool left = b.unknown == Corner::X || b.unknown == Corner::E;
  OracleGroup out;
  if (left) {
    out.add(v[idx(Corner::Y)]);
    out.add(v[idx(Corner::Z)]);
  } else {
    out.add(v[idx(Corner::X)]);
    out.add(v[idx(Corner::E)]);
  }
  Corner partner = b.unknown == Corner::X ? Corner::E
                   : b.unknown == Corner::E ? Corner::X
                   : b.unknown == Corner::Y ? Corner::Z
                                            : Corner::Y;
  c.expect(out.remove(v[idx(partner)]), "split square cancels");
  return out;
}

void check_additivity(const ConstructionTree& tree, const GroupDatum& g, Check& c) {
  for (const auto& kid : tree.children())
    if (kid) check_additivity(*kid, g, c);
  auto b = tree.as<BlowupNode>();
  if (!b) return;
  std::array<Integer, 4> r;
  for (std::size_t k = 0; k < 4; ++k) {
    r[k] = b->corners[k] ? Integer(engine::compute_degree0(*b->corners[k], g).rank())
                         : Integer(engine::compute_degree0(tree, g).rank());
  }
  c.expect(r[0] + r[3] == r[1] + r[2], "rank X + rank E = rank Y + rank Z");
}

void formality(Check& c) {
  std::vector<CoefficientTable> tables{builtin_table("unit"), builtin_table("bott"),
                                       coeff::parse_table("name torsion\n0 1\n1 0 2 4\n-2 1 6\n3 0 9\n")};
  int trees = 0;
  for (int rank = 1; rank <= 3; ++rank) {
    auto g = GroupDatum::torus(rank);
    oracle::TreeFuzzer fuzz(100 + rank, g);
    int made = 0;
    while (made < 20) {
      auto depth = fuzz.pick(2, 6);
      auto f = fuzz.make(depth);
      if (f.rank > 3000) continue;  // keep label vectors small
      ++made;
      ++trees;
      c.expect(classify(*f.tree).tag == ClassTag::B, "fuzzed tree is class B");
      c.expect(rank_of(f.tree, g) == f.rank, "degree-0 rank matches the generator");
      check_additivity(*f.tree, g, c);
      for (const auto& table : tables) {
        auto value = engine::compute_graded(*f.tree, g, table, {-4, 4});
        for (int i = -4; i <= 4; ++i) {
          auto expected = degreewise(*f.tree, from_table(table.at(i)), c, g);
          c.expect(same(expected, value.at(i)), table.name() + " degree " + std::to_string(i));
        }
      }
    }
  }
  c.expect(trees >= 50, "at least 50 trees");
}

// ----- 6 -------------------------------------------------------------------

void combinatorics(Check& c) {
  for (int n = 1; n <= 8; ++n)
    for (int d = 0; d <= n; ++d) {
      for (const auto& j : oracle::all_j_sequences(n, d)) {
        schubert::FiniteSchubertDatum s{n, d, j};
        auto cells = schubert::cell_count_finite(s);
        c.expect(cells == oracle::brute_cells_finite(n, d, j), "finite DP = brute force");
        Integer tower = 1;
        for (int i = 1; i <= n; ++i) tower *= oracle::binomial(i - j[i - 1], j[i] - j[i - 1]);
        c.expect(cells <= tower, "finite cells <= tower rank");
      }
      if (d >= 1) {
        std::vector<int> full(static_cast<std::size_t>(n) + 1, 0);
        for (int i = n - d + 1; i <= n; ++i) full[i] = i - (n - d);
        c.expect(schubert::cell_count_finite({n, d, full}) == engine::sod_count(n, {d}), "full Grassmannian");
      }
    }
  for (int n = 1; n <= 4; ++n)
    for (const auto& mu : oracle::all_partitions(n, 6)) {
      schubert::CoweightDatum datum{n, mu};
      auto cells = schubert::affine_cell_count(datum);
      c.expect(cells == oracle::brute_cells_affine(mu), "affine DP = brute force");
      Integer bound = 1;
      for (int k : schubert::minuscule_decomposition(datum).fundamentals) bound *= oracle::binomial(n, k);
      c.expect(cells <= bound, "affine cells <= tower rank");
    }
}

// ----- 7 -------------------------------------------------------------------

void smith_form(Check& c) {
  std::mt19937 rng(77);
  std::uniform_int_distribution<int> dim(1, 3);
  for (int trial = 0; trial < 200; ++trial) {
    auto a = oracle::random_matrix(rng, dim(rng), dim(rng), -3, 3);
    auto s = coeff::snf(a);
    c.expect(s.left * a * s.right == s.diagonal, "L A R = D");
    c.expect(s.cokernel() == oracle::cokernel_by_minors(a), "cokernel matches minors");
  }
}

// ----- 8 -------------------------------------------------------------------

void ring_oracle(Check& c) {
  using group_rep::RepRingElement;
  for (int n = 1; n <= 5; ++n) {
    auto g = GroupDatum::torus(n);
    const auto& lattice = g.lattice();
    auto p = engine::ring_degree0(*projective_space(n - 1, g), g);
    c.expect(engine::augmented_additive_rank(p) == n, "augmented rank n");
    if (p.factors.size() != 1 || p.factors[0].relations.size() != 1) {
      c.expect(false, "one relation");
      continue;
    }
    std::vector<Character> chars;
    for (int j = 0; j < n; ++j) chars.push_back(lattice.basis(static_cast<std::size_t>(j)));
    const auto& terms = p.factors[0].relations[0].terms();
    for (int k = 0; k <= n; ++k) {
      auto e = group_rep::elementary_symmetric_class(lattice, chars, static_cast<std::size_t>(k));
      if (k % 2) e = -e;
      auto it = terms.find({n - k});
      c.expect(it != terms.end() && it->second == e, "coefficient of x^" + std::to_string(n - k));
    }
    c.expect(terms.size() == static_cast<std::size_t>(n) + 1, "no stray terms");
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_fixtures = argv[1];
  else if (const char* env = std::getenv("SIMPLOC_FIXTURES")) g_fixtures = env;

  std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"node negative K-group", node_negative_k},
      {"cone of P1", cone_of_p1_values},
      {"affine/finite cross-check", affine_finite_cross_check},
      {"verdict presets", verdict_presets},
      {"formality on fuzzed class-B trees", formality},
      {"combinatorial oracles", combinatorics},
      {"Smith normal form", smith_form},
      {"ring presentation oracle", ring_oracle},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Check c;
    std::string crash;
    try {
      criteria[k].second(c);
    } catch (const std::exception& e) {
      crash = e.what();
    }
    bool ok = c.passed() && crash.empty();
    std::cout << "criterion " << k + 1 << ": " << (ok ? "PASS" : "FAIL") << "  " << criteria[k].first << " ("
              << c.count() - c.failed() << "/" << c.count() << " checks)\n";
    if (!crash.empty()) std::cout << "    exception: " << crash << "\n";
    for (const auto& f : c.failures()) std::cout << "    failed: " << f << "\n";
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
