#include "doctest.h"

#include "simploc/engine.hpp"
#include "simploc/errors.hpp"
#include "simploc/schubert.hpp"
#include "simploc/script.hpp"

#include "json.hpp"
#include "oracles.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace simploc;
using namespace simploc::dsl;
using namespace simploc::script;

namespace {

std::string fixtures() {
  const char* dir = std::getenv("SIMPLOC_FIXTURES");
  return dir ? dir : "tests/fixtures";
}

Script load(const std::string& name) {
  std::ifstream in(fixtures() + "/" + name);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_script(buf.str(), fixtures());
}

struct Output {
  int code;
  std::string out;
  std::string err;
};

Output execute(const Script& s, RunOptions options = {}) {
  std::ostringstream out, err;
  int code = run(s, options, out, err);
  return {code, out.str(), err.str()};
}

Output execute_text(const std::string& text, RunOptions options = {}) {
  return execute(parse_script(text), options);
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

void round_trip(const TreePtr& tree, const GroupDatum& group) {
  auto text = print_tree(*tree);
  auto back = parse_tree(text, group);
  CHECK_MESSAGE(*back == *tree, text);
  CHECK(print_tree(*back) == text);
}

}  // namespace

TEST_CASE("script parsing") {
  auto s = parse_script("let y = node\nclassify y\n");
  CHECK_FALSE(s.group);
  CHECK(s.commands.size() == 2);
  CHECK(s.group_datum().is_trivial());

  try {
    parse_script("let =\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 5);
  }
  CHECK_THROWS_AS(parse_script("classify y\n"), ParseError);
  CHECK_THROWS_AS(parse_script("let y = node\ncompute y table=nope degrees=0..0\n"), ParseError);
  CHECK_THROWS_AS(parse_script("let y = mystery(3)\n"), ParseError);
  CHECK_THROWS_AS(parse_script("group torus 1\ngroup torus 2\n"), ParseError);
  try {
    parse_script("let a = point\n\nlet b = disjoint(a, c)\n");
    FAIL("expected an undefined name");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(contains(e.message(), "c"));
  }
  auto inline_table = parse_script("table t\n0 1\n2 1\nend\nlet x = P(1)\ncompute x table=t degrees=0..2\n");
  CHECK(inline_table.commands.size() == 3);
  auto e = parse_expr("blowup(unknown=X, Y=P(1), maps={0: [[1, -1]]})");
  CHECK(e.kind == Expr::Kind::call);
  CHECK(e.keywords.size() == 3);
}

TEST_CASE("print_tree and parse_tree are inverse") {
  for (const auto& group : {GroupDatum::trivial(), GroupDatum::torus(3), GroupDatum::opaque("G"),
                            GroupDatum::diagonalizable(1, {2, 3})}) {
    round_trip(projective_space(2, group), group);
    round_trip(grassmannian(4, 2, group), group);
    round_trip(flag_variety(4, {1, 2}, group), group);
    round_trip(hirzebruch(3, group), group);
    round_trip(cusp(group), group);
    round_trip(node(group), group);
    round_trip(cone_of_p1(group), group);
    round_trip(flag_bundle(henselian_base(7), {2, std::nullopt, std::nullopt}, {1}), group);
    oracle::TreeFuzzer fuzz(21, group);
    for (int k = 0; k < 40; ++k) round_trip(fuzz.make(4).tree, group);
  }
  auto torus = GroupDatum::torus(4);
  round_trip(schubert::finite_schubert_tree({4, 2, {0, 0, 1, 1, 2}}, torus), torus);
  round_trip(schubert::affine_schubert_tree({3, {3, 1, 0}}, torus), torus);
}

TEST_CASE("node script") {
  auto o = execute(load("node.simploc"));
  CHECK(o.code == 0);
  CHECK(contains(o.out, "classify n: class C"));
  CHECK(contains(o.out, "NotInB: degree -1 of the unit table is Z"));
  CHECK(contains(o.out, "  degree -1: Z\n"));
  CHECK(contains(o.out, "  degree -2: 0\n"));
  CHECK(contains(o.out, "  degree -3: 0\n"));
  CHECK(contains(o.out, "verdict n preset=cyclotomic_Fp: EquivalenceAllDegrees"));
  CHECK(contains(o.out, "verdict n preset=goodwillie_jones_Q: no verdict"));
}

TEST_CASE("cone report") {
  auto o = execute(load("cone_report.simploc"));
  CHECK(o.code == 0);
  for (int i : {1, 3, 5}) CHECK(contains(o.out, "  " + std::to_string(i) + " | Q^4 | Q^3 | Q\n"));
  for (int i : {2, 4, 6}) CHECK(contains(o.out, "  " + std::to_string(i) + " | 0 | 0 | 0\n"));
  CHECK(contains(o.out, "  0 | - | Q^3 |"));
  CHECK(contains(o.out, "IsoInDegree(0)"));
}

TEST_CASE("records output") {
  RunOptions options;
  options.format = OutputFormat::records;
  auto o = execute(load("schubert.simploc"), options);
  CHECK(o.code == 0);
  std::istringstream lines(o.out);
  std::string line;
  std::map<std::string, int> kinds;
  while (std::getline(lines, line)) {
    auto j = nlohmann::json::parse(line);
    CHECK(j.at("schema") == kRecordsSchema);
    ++kinds[j.at("record").get<std::string>()];
    if (j["record"] == "ring") CHECK(j.at("augmented_rank") == "4");
  }
  CHECK(kinds["classification"] == 1);
  CHECK(kinds["compute_row"] == 5);
  CHECK(kinds["ring"] == 1);
  CHECK(kinds["verdict"] == 1);

  std::ostringstream sidecar;
  options.format = OutputFormat::text;
  options.records_sidecar = &sidecar;
  auto t = execute(load("node.simploc"), options);
  CHECK(contains(t.out, "classify n"));
  CHECK(contains(sidecar.str(), "\"not_in_b\""));
}

TEST_CASE("exit codes and error reporting") {
  auto under = execute(load("underdetermined.simploc"));
  CHECK(under.code == 2);
  CHECK(contains(under.err, "error: line 2: underdetermined"));

  auto bad_table = execute_text("table t = \"missing.table\"\n");
  CHECK(bad_table.code == 1);

  auto unsupported = execute_text("let c = cusp\nring c\n");
  CHECK(unsupported.code == 2);

  auto hyp = execute_text("let n = node\nverdict n preset=parshin_Fq\n");
  CHECK(hyp.code == 0);
  CHECK(contains(hyp.out, "no verdict"));

  auto invalid = execute_text("group torus 1\nlet f = flag_bundle(point, rank=2, chars=[[1]], d=[1])\nclassify f\n");
  CHECK(invalid.code == 1);

  auto stops = execute_text("let n = node\ncompute n table=bott degrees=-2..0\nclassify n\n");
  CHECK(stops.code == 2);
  CHECK_FALSE(contains(stops.out, "classify n"));

  CHECK(exit_code_for(ValidationError("x")) == 1);
  CHECK(exit_code_for(HypothesisError("x")) == 1);
  CHECK(exit_code_for(UnsupportedError("x")) == 2);
  CHECK(exit_code_for(UnderdeterminedError("x")) == 2);
  CHECK(exit_code_for(InternalError("x")) == 3);
}

TEST_CASE("check validates without computing") {
  std::ostringstream out, err;
  auto s = parse_script("let n = node\nlet c = cusp\ncompute n table=bott degrees=-5..0\n");
  CHECK(check(s, {}, out, err) == 0);
  CHECK(contains(out.str(), "n"));
  CHECK(contains(out.str(), "C"));
}

TEST_CASE("normalize_j option") {
  auto text = "let s = finite_schubert(3, 2, [0, 0, 0, 2])\nclassify s\ncompute s table=unit degrees=0..0\n";
  auto strict = execute_text(text);
  auto relaxed = execute_text(text, RunOptions{true});
  CHECK(strict.code == 0);
  CHECK(relaxed.code == 0);
  // the forced bound j_2 = 1 shrinks the tower, not the cell count
  CHECK(contains(strict.out, "degree 0: Z^3"));
  CHECK(contains(relaxed.out, "degree 0: Z^3"));
  CHECK(strict.out != relaxed.out);
}

TEST_CASE("minimal scripts") {
  auto s = parse_script("group torus 1\nlet x = P(1)\ncompute x table=unit degrees=-2..2");
  REQUIRE(s.group);
  CHECK(s.group->group.free_rank() == 1);
  REQUIRE(s.commands.size() == 2);
  auto c = std::get_if<ComputeCmd>(&s.commands[1]);
  REQUIRE(c);
  CHECK(c->degrees.lowest == -2);
  CHECK(c->degrees.highest == 2);
  auto o = execute(s);
  CHECK(o.code == 0);
  CHECK(contains(o.out, "degree 0: R(G)^2"));
  auto cusp = execute_text("let c = cusp\nclassify c\n");
  CHECK(contains(cusp.out, "classify c: class B"));
}

TEST_CASE("output is deterministic") {
  for (const auto& name : {"node.simploc", "cone_report.simploc", "schubert.simploc"}) {
    RunOptions options;
    std::ostringstream a, b;
    options.records_sidecar = &a;
    auto first = execute(load(name), options);
    options.records_sidecar = &b;
    auto second = execute(load(name), options);
    CHECK(first.out == second.out);
    CHECK(a.str() == b.str());
  }
}
