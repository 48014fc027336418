#pragma once

// Construction scripts: a line-oriented batch language over the example
// library, the Schubert front end and explicit construction-tree syntax.

#include "simploc/coeff.hpp"
#include "simploc/dsl.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace simploc::script {

/// Generic expression: integers, identifiers, calls with positional and
/// keyword arguments, lists and integer-keyed maps.
struct Expr {
  enum class Kind { integer, identifier, call, list, map };

  Kind kind = Kind::integer;
  std::string text;  ///< integer literal or identifier / callee name
  std::vector<Expr> args;
  std::vector<std::string> keywords;  ///< parallel to keyword_values
  std::vector<Expr> keyword_values;
  std::vector<long long> keys;  ///< map keys, parallel to args
  int line = 1;
  int column = 1;
};

/// Parses one expression spanning the whole text. Lines and columns are
/// reported relative to `line` and `column_offset`.
Expr parse_expr(std::string_view text, int line = 1, int column_offset = 0);

struct EvalOptions {
  bool normalize_j = false;
};

using Environment = std::map<std::string, dsl::TreePtr>;

/// Builds the tree an expression denotes. Errors carry the expression position.
dsl::TreePtr evaluate(const Expr& expr, const dsl::GroupDatum& group, const Environment& env = {},
                      const EvalOptions& options = {});

/// parse_expr followed by evaluate; inverse of dsl::print_tree.
dsl::TreePtr parse_tree(std::string_view text, const dsl::GroupDatum& group, const Environment& env = {},
                        const EvalOptions& options = {});

struct GroupDecl {
  dsl::GroupDatum group;
  int line = 0;
};

struct TableDecl {
  std::string id;
  std::optional<std::string> path;  ///< file form; otherwise `body` holds the inline records
  std::string body;
  int line = 0;
};

struct LetCmd {
  std::string name;
  Expr expr;
  int line = 0;
};

struct DegreeWindow {
  int lowest = 0;
  int highest = 0;
};

struct ComputeCmd {
  std::string name;
  std::string table;
  DegreeWindow degrees;
  int line = 0;
};

struct ClassifyCmd {
  std::string name;
  int line = 0;
};

struct VerdictCmd {
  std::string name;
  std::string preset;
  int line = 0;
};

/// kh names a coefficient table E_*(pt) pushed through the tree; hcminus names
/// a table holding the values HC^-_i(X) themselves.
struct ReportCmd {
  std::string name;
  std::string kh;
  std::string hcminus;
  DegreeWindow degrees;
  std::optional<std::string> preset;
  int line = 0;
};

struct RingCmd {
  std::string name;
  int line = 0;
};

using Command = std::variant<TableDecl, LetCmd, ComputeCmd, ClassifyCmd, VerdictCmd, ReportCmd, RingCmd>;

struct Script {
  std::optional<GroupDecl> group;  ///< trivial group when absent
  std::vector<Command> commands;
  std::string base_dir = ".";  ///< table paths are resolved against this

  dsl::GroupDatum group_datum() const;
};

/// Line/column ParseError on malformed input or use of an undefined name.
Script parse_script(std::string_view text, std::string base_dir = ".");

enum class OutputFormat { text, records };

inline constexpr const char* kRecordsSchema = "simploc.records/1";

struct RunOptions {
  bool normalize_j = false;
  OutputFormat format = OutputFormat::text;
  std::ostream* records_sidecar = nullptr;  ///< receives records alongside text output
};

/// Exit codes: 0 success, 1 parse/validation/hypothesis errors,
/// 2 underdetermined or unsupported computation, 3 internal errors.
int exit_code_for(const std::exception& error);

/// Executes commands in order, stopping at the first error.
int run(const Script& script, const RunOptions& options, std::ostream& out, std::ostream& err);

/// Validates and classifies every definition without computing.
int check(const Script& script, const RunOptions& options, std::ostream& out, std::ostream& err);

}  // namespace simploc::script
