#include "simploc/errors.hpp"
#include "simploc/schubert.hpp"
#include "simploc/script.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace simploc::script {

namespace {

enum class Tok { ident, integer, string, punct, range, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  int column = 1;
};

std::vector<Token> lex(std::string_view text, int line, int column_offset) {
  std::vector<Token> out;
  std::size_t k = 0;
  auto column = [&](std::size_t at) { return static_cast<int>(at) + 1 + column_offset; };
  auto digit = [&](std::size_t at) { return at < text.size() && std::isdigit(static_cast<unsigned char>(text[at])); };
  while (k < text.size()) {
    char c = text[k];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++k;
      continue;
    }
    std::size_t start = k;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (k < text.size() && (std::isalnum(static_cast<unsigned char>(text[k])) || text[k] == '_')) ++k;
      out.push_back({Tok::ident, std::string(text.substr(start, k - start)), column(start)});
    } else if (digit(k) || (c == '-' && digit(k + 1))) {
      ++k;
      while (digit(k)) ++k;
      out.push_back({Tok::integer, std::string(text.substr(start, k - start)), column(start)});
    } else if (c == '"') {
      ++k;
      while (k < text.size() && text[k] != '"') ++k;
      if (k == text.size()) throw ParseError("unterminated string", line, column(start));
      out.push_back({Tok::string, std::string(text.substr(start + 1, k - start - 1)), column(start)});
      ++k;
    } else if (c == '.' && k + 1 < text.size() && text[k + 1] == '.') {
      k += 2;
      out.push_back({Tok::range, "..", column(start)});
    } else if (std::string_view("()[]{},=:").find(c) != std::string_view::npos) {
      ++k;
      out.push_back({Tok::punct, std::string(1, c), column(start)});
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line, column(start));
    }
  }
  out.push_back({Tok::end, "", column(text.size())});
  return out;
}

class Cursor {
public:
  Cursor(std::vector<Token> tokens, int line) : tokens_(std::move(tokens)), line_(line) {}

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  Token next() {
    auto t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }
  bool at_punct(const char* p) const { return peek().kind == Tok::punct && peek().text == p; }
  bool at_end() const { return peek().kind == Tok::end; }
  int line() const { return line_; }

  [[noreturn]] void fail(const std::string& message) const {
    const auto& t = peek();
    auto found = t.kind == Tok::end ? std::string("end of line") : "'" + t.text + "'";
    throw ParseError(message + ", found " + found, line_, t.column);
  }
  Token expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(std::string("expected ") + what);
    return next();
  }
  void expect_punct(const char* p) {
    if (!at_punct(p)) fail(std::string("expected '") + p + "'");
    next();
  }
  void expect_end() {
    if (!at_end()) fail("unexpected trailing input");
  }

private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  int line_;
};

Expr parse_value(Cursor& cur);

void parse_call_args(Cursor& cur, Expr& call) {
  cur.expect_punct("(");
  if (cur.at_punct(")")) {
    cur.next();
    return;
  }
  for (;;) {
    if (cur.peek().kind == Tok::ident && cur.peek(1).kind == Tok::punct && cur.peek(1).text == "=") {
      call.keywords.push_back(cur.next().text);
      cur.next();
      call.keyword_values.push_back(parse_value(cur));
    } else {
      if (!call.keywords.empty()) cur.fail("positional argument after keyword argument");
      call.args.push_back(parse_value(cur));
    }
    if (cur.at_punct(",")) {
      cur.next();
      continue;
    }
    cur.expect_punct(")");
    return;
  }
}

Expr parse_value(Cursor& cur) {
  Expr e;
  e.line = cur.line();
  e.column = cur.peek().column;
  const auto& t = cur.peek();
  if (t.kind == Tok::integer) {
    e.kind = Expr::Kind::integer;
    e.text = cur.next().text;
    return e;
  }
  if (t.kind == Tok::ident) {
    e.text = cur.next().text;
    e.kind = Expr::Kind::identifier;
    if (cur.at_punct("(")) {
      e.kind = Expr::Kind::call;
      parse_call_args(cur, e);
    }
    return e;
  }
  if (cur.at_punct("[")) {
    cur.next();
    e.kind = Expr::Kind::list;
    if (cur.at_punct("]")) {
      cur.next();
      return e;
    }
    for (;;) {
      e.args.push_back(parse_value(cur));
      if (cur.at_punct(",")) {
        cur.next();
        continue;
      }
      cur.expect_punct("]");
      return e;
    }
  }
  if (cur.at_punct("{")) {
    cur.next();
    e.kind = Expr::Kind::map;
    if (cur.at_punct("}")) {
      cur.next();
      return e;
    }
    for (;;) {
      auto key = cur.expect(Tok::integer, "an integer key");
      e.keys.push_back(std::stoll(key.text));
      cur.expect_punct(":");
      e.args.push_back(parse_value(cur));
      if (cur.at_punct(",")) {
        cur.next();
        continue;
      }
      cur.expect_punct("}");
      return e;
    }
  }
  cur.fail("expected an expression");
}

// ----- evaluation -------------------------------------------------------------

[[noreturn]] void fail_at(const Expr& e, const std::string& message) { throw ParseError(message, e.line, e.column); }

long long as_int(const Expr& e, const char* what) {
  if (e.kind != Expr::Kind::integer) fail_at(e, std::string("expected an integer for ") + what);
  try {
    return std::stoll(e.text);
  } catch (const std::out_of_range&) {
    fail_at(e, std::string("integer out of range for ") + what);
  }
}

Integer as_big(const Expr& e, const char* what) {
  if (e.kind != Expr::Kind::integer) fail_at(e, std::string("expected an integer for ") + what);
  return Integer(e.text);
}

int as_small(const Expr& e, const char* what) {
  auto v = as_int(e, what);
  if (v < -1'000'000 || v > 1'000'000) fail_at(e, std::string("integer out of range for ") + what);
  return static_cast<int>(v);
}

std::vector<int> as_int_list(const Expr& e, const char* what) {
  if (e.kind != Expr::Kind::list) fail_at(e, std::string("expected a list for ") + what);
  std::vector<int> out;
  for (const auto& v : e.args) out.push_back(as_small(v, what));
  return out;
}

std::string as_ident(const Expr& e, const char* what) {
  if (e.kind != Expr::Kind::identifier) fail_at(e, std::string("expected a name for ") + what);
  return e.text;
}

coeff::IntMatrix as_matrix(const Expr& e) {
  if (e.kind != Expr::Kind::list) fail_at(e, "expected a matrix (list of rows)");
  std::vector<std::vector<Integer>> rows;
  for (const auto& row : e.args) {
    if (row.kind != Expr::Kind::list) fail_at(row, "expected a matrix row");
    std::vector<Integer> r;
    for (const auto& v : row.args) r.push_back(as_big(v, "matrix entry"));
    if (!rows.empty() && r.size() != rows.front().size()) fail_at(row, "ragged matrix rows");
    rows.push_back(std::move(r));
  }
  return coeff::IntMatrix::from_rows(rows);
}

struct Keywords {
  const Expr& call;
  std::set<std::string> allowed;
  std::set<std::string> required;

  void check() const {
    std::set<std::string> seen;
    for (std::size_t k = 0; k < call.keywords.size(); ++k) {
      const auto& key = call.keywords[k];
      if (!allowed.contains(key)) fail_at(call.keyword_values[k], call.text + ": unknown argument '" + key + "'");
      if (!seen.insert(key).second) fail_at(call.keyword_values[k], call.text + ": duplicate argument '" + key + "'");
    }
    for (const auto& key : required)
      if (!seen.contains(key)) fail_at(call, call.text + ": missing argument '" + key + "'");
  }
  const Expr* get(const std::string& key) const {
    for (std::size_t k = 0; k < call.keywords.size(); ++k)
      if (call.keywords[k] == key) return &call.keyword_values[k];
    return nullptr;
  }
};

void positional(const Expr& call, std::size_t count) {
  if (call.args.size() != count) {
    fail_at(call, call.text + " expects " + std::to_string(count) + " positional argument(s), got " +
                      std::to_string(call.args.size()));
  }
}

dsl::Corner corner_of(const Expr& e) {
  auto name = as_ident(e, "corner");
  if (name == "X") return dsl::Corner::X;
  if (name == "Y") return dsl::Corner::Y;
  if (name == "Z") return dsl::Corner::Z;
  if (name == "E") return dsl::Corner::E;
  fail_at(e, "unknown corner '" + name + "'");
}

dsl::SplitKind split_of(const Expr& e) {
  auto name = as_ident(e, "split");
  if (name == "none") return dsl::SplitKind::none;
  if (name == "retraction") return dsl::SplitKind::retraction;
  if (name == "section") return dsl::SplitKind::section;
  fail_at(e, "unknown split kind '" + name + "'");
}

const std::set<std::string>& zero_arity_library() {
  static const std::set<std::string> names{"point", "cusp", "node", "cone_of_P1"};
  return names;
}

class Evaluator {
public:
  Evaluator(const dsl::GroupDatum& group, const Environment& env, const EvalOptions& options)
      : group_(group), env_(env), options_(options) {}

  dsl::TreePtr tree(const Expr& e) {
    if (e.kind == Expr::Kind::identifier) {
      if (auto it = env_.find(e.text); it != env_.end()) return it->second;
      if (zero_arity_library().contains(e.text)) {
        Expr call = e;
        call.kind = Expr::Kind::call;
        return this->call(call);
      }
      fail_at(e, "undefined name '" + e.text + "'");
    }
    if (e.kind != Expr::Kind::call) fail_at(e, "expected a construction tree");
    return call(e);
  }

private:
  dsl::TreePtr call(const Expr& e) {
    const auto& f = e.text;
    if (f == "point") {
      positional(e, 0);
      Keywords{e, {}, {}}.check();
      return dsl::point();
    }
    if (f == "henselian") {
      positional(e, 0);
      Keywords kw{e, {"p"}, {"p"}};
      kw.check();
      return dsl::henselian_base(as_small(*kw.get("p"), "p"));
    }
    if (f == "disjoint") {
      Keywords{e, {}, {}}.check();
      if (e.args.empty()) fail_at(e, "disjoint needs at least one summand");
      std::vector<dsl::TreePtr> kids;
      for (const auto& a : e.args) kids.push_back(tree(a));
      return dsl::disjoint(std::move(kids));
    }
    if (f == "flag_bundle") return flag_bundle(e);
    if (f == "descent") return descent(e);
    if (f == "blowup") return blowup(e);
    if (f == "projective_cone") {
      positional(e, 2);
      Keywords{e, {}, {}}.check();
      return wrap(e, [&] { return dsl::projective_cone(tree(e.args[0]), as_small(e.args[1], "twist"), group_); });
    }
    if (f == "finite_schubert") {
      positional(e, 3);
      Keywords{e, {}, {}}.check();
      schubert::FiniteSchubertDatum datum{as_small(e.args[0], "n"), as_small(e.args[1], "d"),
                                          as_int_list(e.args[2], "j")};
      return wrap(e, [&] {
        return schubert::finite_schubert_tree(options_.normalize_j ? schubert::normalize_j(datum) : datum, group_);
      });
    }
    if (f == "affine_schubert") {
      positional(e, 2);
      Keywords{e, {}, {}}.check();
      schubert::CoweightDatum datum{as_small(e.args[0], "n"), as_int_list(e.args[1], "mu")};
      return wrap(e, [&] { return schubert::affine_schubert_tree(datum, group_); });
    }
    if (f == "flag") {
      positional(e, 2);
      Keywords{e, {}, {}}.check();
      std::vector<long long> params{as_int(e.args[0], "n")};
      for (int d : as_int_list(e.args[1], "d")) params.push_back(d);
      return wrap(e, [&] { return dsl::example_library(f, params, group_); });
    }
    Keywords{e, {}, {}}.check();
    std::vector<long long> params;
    for (const auto& a : e.args) params.push_back(as_int(a, f.c_str()));
    return wrap(e, [&] { return dsl::example_library(f, params, group_); });
  }

  template <class F>
  dsl::TreePtr wrap(const Expr& e, F&& build) {
    try {
      return build();
    } catch (const LookupError& ex) {
      fail_at(e, ex.what());
    } catch (const RangeError& ex) {
      fail_at(e, ex.what());
    }
  }

  dsl::TreePtr flag_bundle(const Expr& e) {
    positional(e, 1);
    Keywords kw{e, {"rank", "chars", "twists", "d"}, {"rank", "d"}};
    kw.check();
    dsl::BundleDatum bundle;
    bundle.rank = as_small(*kw.get("rank"), "rank");
    if (auto c = kw.get("chars")) {
      if (c->kind != Expr::Kind::list) fail_at(*c, "expected a list of characters");
      if (group_.is_opaque()) fail_at(*c, "split characters need a diagonalizable group");
      std::vector<dsl::Character> chars;
      for (const auto& ch : c->args) {
        auto coords = as_int_list(ch, "character");
        try {
          chars.push_back(group_.lattice().make({coords.begin(), coords.end()}));
        } catch (const ValidationError& ex) {
          fail_at(ch, ex.what());
        }
      }
      bundle.split_characters = std::move(chars);
    }
    if (auto t = kw.get("twists")) bundle.twist_labels = as_int_list(*t, "twists");
    return dsl::flag_bundle(tree(e.args[0]), std::move(bundle), as_int_list(*kw.get("d"), "d"));
  }

  dsl::TreePtr descent(const Expr& e) {
    positional(e, 1);
    Keywords kw{e, {"generic", "presentation", "d", "oracle"}, {"generic", "presentation", "d"}};
    kw.check();
    auto pres = as_int_list(*kw.get("presentation"), "presentation");
    if (pres.size() != 2) fail_at(*kw.get("presentation"), "presentation needs [source rank, target rank]");
    dsl::SheafDatum sheaf{as_small(*kw.get("generic"), "generic"), pres[0], pres[1]};
    std::optional<Integer> oracle;
    if (auto o = kw.get("oracle")) oracle = as_big(*o, "oracle");
    return dsl::stratified_descent(tree(e.args[0]), sheaf, as_int_list(*kw.get("d"), "d"), oracle);
  }

  dsl::TreePtr blowup(const Expr& e) {
    positional(e, 0);
    Keywords kw{e, {"unknown", "X", "Y", "Z", "E", "split", "maps"}, {"unknown", "split"}};
    kw.check();
    auto unknown = corner_of(*kw.get("unknown"));
    std::array<dsl::TreePtr, 4> corners;
    const char* names[] = {"X", "Y", "Z", "E"};
    for (std::size_t k = 0; k < 4; ++k)
      if (auto c = kw.get(names[k])) corners[k] = tree(*c);
    std::map<int, coeff::IntMatrix> maps;
    if (auto m = kw.get("maps")) {
      if (m->kind != Expr::Kind::map) fail_at(*m, "expected a map {degree: matrix, ...}");
      for (std::size_t k = 0; k < m->keys.size(); ++k) {
        if (!maps.emplace(static_cast<int>(m->keys[k]), as_matrix(m->args[k])).second) {
          fail_at(m->args[k], "duplicate degree in maps");
        }
      }
    }
    return dsl::blowup(unknown, corners[0], corners[1], corners[2], corners[3], split_of(*kw.get("split")),
                       std::move(maps));
  }

  const dsl::GroupDatum& group_;
  const Environment& env_;
  EvalOptions options_;
};

// Tree-valued positions whose identifiers must name a definition.
void check_names(const Expr& e, const std::set<std::string>& defined) {
  if (e.kind == Expr::Kind::identifier) {
    if (!defined.contains(e.text) && !zero_arity_library().contains(e.text)) {
      fail_at(e, "undefined name '" + e.text + "'");
    }
    return;
  }
  if (e.kind != Expr::Kind::call) return;
  static const std::set<std::string> builtins{"point",           "henselian",       "disjoint",
                                              "flag_bundle",     "descent",         "blowup",
                                              "projective_cone", "finite_schubert", "affine_schubert"};
  auto library = dsl::library_names();
  if (!builtins.contains(e.text) && std::find(library.begin(), library.end(), e.text) == library.end()) {
    fail_at(e, "unknown library entry '" + e.text + "'");
  }
  for (const auto& a : e.args)
    if (a.kind == Expr::Kind::identifier || a.kind == Expr::Kind::call) check_names(a, defined);
  for (std::size_t k = 0; k < e.keywords.size(); ++k) {
    const auto& key = e.keywords[k];
    if (key == "X" || key == "Y" || key == "Z" || key == "E") check_names(e.keyword_values[k], defined);
  }
}

DegreeWindow parse_window(Cursor& cur) {
  auto lo = cur.expect(Tok::integer, "a degree");
  if (cur.peek().kind != Tok::range) cur.fail("expected '..'");
  cur.next();
  auto hi = cur.expect(Tok::integer, "a degree");
  DegreeWindow w{std::stoi(lo.text), std::stoi(hi.text)};
  if (w.lowest > w.highest) throw ParseError("empty degree range", cur.line(), lo.column);
  return w;
}

std::map<std::string, Token> parse_options(Cursor& cur, const std::set<std::string>& allowed,
                                           std::map<std::string, DegreeWindow>& windows) {
  std::map<std::string, Token> out;
  while (!cur.at_end()) {
    auto key = cur.expect(Tok::ident, "an option name");
    if (!allowed.contains(key.text)) throw ParseError("unknown option '" + key.text + "'", cur.line(), key.column);
    if (out.contains(key.text) || windows.contains(key.text)) {
      throw ParseError("duplicate option '" + key.text + "'", cur.line(), key.column);
    }
    cur.expect_punct("=");
    if (key.text == "degrees") {
      windows[key.text] = parse_window(cur);
    } else {
      out[key.text] = cur.expect(Tok::ident, "a name");
    }
  }
  return out;
}

void require_options(const std::map<std::string, Token>& opts, const std::map<std::string, DegreeWindow>& windows,
                     const std::vector<std::string>& keys, int line, int column) {
  for (const auto& k : keys)
    if (!opts.contains(k) && !windows.contains(k)) throw ParseError("missing option '" + k + "'", line, column);
}

dsl::GroupDatum parse_group(Cursor& cur) {
  auto kind = cur.expect(Tok::ident, "a group kind");
  auto ints = [&] {
    std::vector<std::int64_t> out;
    while (cur.peek().kind == Tok::integer) {
      auto t = cur.next();
      auto v = std::stoll(t.text);
      if (v < 2) throw ParseError("finite orders must be >= 2", cur.line(), t.column);
      out.push_back(v);
    }
    return out;
  };
  if (kind.text == "trivial") {
    cur.expect_end();
    return dsl::GroupDatum::trivial();
  }
  if (kind.text == "torus") {
    auto r = cur.expect(Tok::integer, "a torus rank");
    int rank = std::stoi(r.text);
    if (rank < 0) throw ParseError("negative torus rank", cur.line(), r.column);
    std::vector<std::int64_t> orders;
    if (!cur.at_end()) {
      auto f = cur.expect(Tok::ident, "'finite'");
      if (f.text != "finite") throw ParseError("expected 'finite'", cur.line(), f.column);
      orders = ints();
      if (orders.empty()) cur.fail("expected finite orders");
    }
    cur.expect_end();
    return dsl::GroupDatum::diagonalizable(rank, orders);
  }
  if (kind.text == "finite") {
    auto orders = ints();
    if (orders.empty()) cur.fail("expected finite orders");
    cur.expect_end();
    return dsl::GroupDatum::diagonalizable(0, orders);
  }
  if (kind.text == "opaque") {
    auto label = cur.expect(Tok::ident, "a label");
    cur.expect_end();
    return dsl::GroupDatum::opaque(label.text);
  }
  throw ParseError("unknown group kind '" + kind.text + "'", cur.line(), kind.column);
}

}  // namespace

Expr parse_expr(std::string_view text, int line, int column_offset) {
  Cursor cur(lex(text, line, column_offset), line);
  auto e = parse_value(cur);
  cur.expect_end();
  return e;
}

dsl::TreePtr evaluate(const Expr& expr, const dsl::GroupDatum& group, const Environment& env,
                      const EvalOptions& options) {
  return Evaluator(group, env, options).tree(expr);
}

dsl::TreePtr parse_tree(std::string_view text, const dsl::GroupDatum& group, const Environment& env,
                        const EvalOptions& options) {
  return evaluate(parse_expr(text), group, env, options);
}

dsl::GroupDatum Script::group_datum() const { return group ? group->group : dsl::GroupDatum::trivial(); }

Script parse_script(std::string_view text, std::string base_dir) {
  Script script;
  script.base_dir = std::move(base_dir);
  std::set<std::string> defined;
  std::set<std::string> tables;
  for (const auto& name : coeff::builtin_table_names()) tables.insert(name);

  std::vector<std::string> lines;
  {
    std::istringstream in{std::string(text)};
    std::string l;
    while (std::getline(in, l)) {
      if (!l.empty() && l.back() == '\r') l.pop_back();
      lines.push_back(l);
    }
  }

  auto require_defined = [&](const Token& t, int line) {
    if (!defined.contains(t.text)) throw ParseError("undefined name '" + t.text + "'", line, t.column);
  };
  auto require_table = [&](const Token& t, int line) {
    if (!tables.contains(t.text)) throw ParseError("unknown table '" + t.text + "'", line, t.column);
  };

  for (std::size_t index = 0; index < lines.size(); ++index) {
    int line = static_cast<int>(index) + 1;
    const auto& raw = lines[index];
    Cursor cur(lex(raw, line, 0), line);
    if (cur.at_end()) continue;
    auto head = cur.expect(Tok::ident, "a command");
    const auto& kw = head.text;

    if (kw == "group") {
      if (script.group) {
        throw ParseError("duplicate group declaration (first on line " + std::to_string(script.group->line) + ")",
                         line, head.column);
      }
      script.group = GroupDecl{parse_group(cur), line};
    } else if (kw == "table") {
      auto id = cur.expect(Tok::ident, "a table name");
      if (tables.contains(id.text)) throw ParseError("table '" + id.text + "' already defined", line, id.column);
      TableDecl decl{id.text, std::nullopt, "", line};
      if (cur.at_punct("=")) {
        cur.next();
        decl.path = cur.expect(Tok::string, "a quoted path").text;
        cur.expect_end();
      } else {
        cur.expect_end();
        bool closed = false;
        while (++index < lines.size()) {
          std::istringstream probe(lines[index]);
          std::string first, rest;
          probe >> first;
          if (first == "end" && !(probe >> rest)) {
            closed = true;
            break;
          }
          decl.body += lines[index] + "\n";
        }
        if (!closed) throw ParseError("table block without 'end'", line, head.column);
      }
      tables.insert(decl.id);
      script.commands.emplace_back(std::move(decl));
    } else if (kw == "let") {
      auto name = cur.expect(Tok::ident, "a name");
      cur.expect_punct("=");
      if (cur.at_end()) cur.fail("expected an expression");
      auto eq = raw.find('=');
      auto expr = parse_expr(std::string_view(raw).substr(eq + 1), line, static_cast<int>(eq) + 1);
      check_names(expr, defined);
      defined.insert(name.text);
      script.commands.emplace_back(LetCmd{name.text, std::move(expr), line});
    } else if (kw == "compute") {
      auto name = cur.expect(Tok::ident, "a name");
      require_defined(name, line);
      std::map<std::string, DegreeWindow> windows;
      auto opts = parse_options(cur, {"table", "degrees"}, windows);
      require_options(opts, windows, {"table", "degrees"}, line, head.column);
      require_table(opts["table"], line);
      script.commands.emplace_back(ComputeCmd{name.text, opts["table"].text, windows["degrees"], line});
    } else if (kw == "classify" || kw == "ring") {
      auto name = cur.expect(Tok::ident, "a name");
      require_defined(name, line);
      cur.expect_end();
      if (kw == "classify") script.commands.emplace_back(ClassifyCmd{name.text, line});
      else script.commands.emplace_back(RingCmd{name.text, line});
    } else if (kw == "verdict") {
      auto name = cur.expect(Tok::ident, "a name");
      require_defined(name, line);
      std::map<std::string, DegreeWindow> windows;
      auto opts = parse_options(cur, {"preset"}, windows);
      require_options(opts, windows, {"preset"}, line, head.column);
      script.commands.emplace_back(VerdictCmd{name.text, opts["preset"].text, line});
    } else if (kw == "report") {
      auto name = cur.expect(Tok::ident, "a name");
      require_defined(name, line);
      std::map<std::string, DegreeWindow> windows;
      auto opts = parse_options(cur, {"kh", "hcminus", "degrees", "preset"}, windows);
      require_options(opts, windows, {"kh", "hcminus", "degrees"}, line, head.column);
      require_table(opts["kh"], line);
      require_table(opts["hcminus"], line);
      ReportCmd cmd{name.text, opts["kh"].text, opts["hcminus"].text, windows["degrees"], std::nullopt, line};
      if (opts.contains("preset")) cmd.preset = opts["preset"].text;
      script.commands.emplace_back(std::move(cmd));
    } else {
      throw ParseError("unknown command '" + kw + "'", line, head.column);
    }
  }
  return script;
}

}  // namespace simploc::script
