#include "simploc/engine.hpp"
#include "simploc/errors.hpp"
#include "simploc/script.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace simploc::script {

using nlohmann::json;

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const UnderdeterminedError*>(&error) || dynamic_cast<const UnsupportedError*>(&error)) return 2;
  if (dynamic_cast<const InternalError*>(&error)) return 3;
  return 1;
}

namespace {

std::string error_kind(const std::exception& error) {
  if (dynamic_cast<const ParseError*>(&error)) return "parse";
  if (dynamic_cast<const ValidationError*>(&error)) return "validation";
  if (dynamic_cast<const LookupError*>(&error)) return "lookup";
  if (dynamic_cast<const RangeError*>(&error)) return "range";
  if (dynamic_cast<const HypothesisError*>(&error)) return "hypothesis";
  if (dynamic_cast<const UnderdeterminedError*>(&error)) return "underdetermined";
  if (dynamic_cast<const UnsupportedError*>(&error)) return "unsupported";
  if (dynamic_cast<const InternalError*>(&error)) return "internal";
  return "error";
}

json group_json(const coeff::FgAbGroup& g) {
  json factors = json::array();
  for (const auto& f : g.invariant_factors()) factors.push_back(to_string(f));
  return {{"free_rank", g.free_rank()}, {"factors", factors}, {"rational", g.rational()}, {"text", g.format()}};
}

json verdict_json(const engine::Verdict& v) {
  json out{{"kind", engine::verdict_kind_name(v.kind)}, {"hypotheses", v.hypotheses}, {"conclusion", v.conclusion_text}};
  if (v.degree) out["degree"] = *v.degree;
  if (!v.degree_set.empty()) out["degree_set"] = v.degree_set;
  if (v.evidence) out["evidence"] = group_json(*v.evidence);
  return out;
}

std::string verdict_title(const engine::Verdict& v) {
  auto name = engine::verdict_kind_name(v.kind);
  if (v.degree) return name + "(" + std::to_string(*v.degree) + ")";
  if (!v.degree_set.empty()) return name + "(" + v.degree_set + ")";
  return name;
}

// Degree-i value of a formal shape as an R(G)-module.
std::string module_text(const engine::GradedModuleValue& value, int degree, const dsl::GroupDatum& group) {
  auto g = value.at(degree);
  if (group.is_trivial() || !value.is_formal() || g.is_zero()) return g.format();
  const auto& shape = std::get<engine::FormalShape>(value.shape());
  auto coeff = shape.table.at(degree);
  auto rank = shape.degree0.rank();
  std::string ring = coeff.rational() ? "R(G)_Q" : "R(G)";
  if (!coeff.has_torsion()) {
    auto r = static_cast<std::size_t>(coeff.free_rank()) * rank;
    return r == 1 ? ring : ring + "^" + std::to_string(r);
  }
  return "(" + coeff.format() + ") (x) R(G)" + (rank == 1 ? "" : "^" + std::to_string(rank));
}

class Runner {
public:
  Runner(const Script& script, const RunOptions& options, std::ostream& out)
      : script_(script), options_(options), out_(out), group_(script.group_datum()) {
    for (const auto& name : coeff::builtin_table_names()) tables_.emplace(name, coeff::builtin_table(name));
  }

  void execute(const Command& cmd) {
    std::visit([&](const auto& c) { handle(c); }, cmd);
  }

  void define_only(const Command& cmd) {
    if (auto t = std::get_if<TableDecl>(&cmd)) handle(*t);
    if (auto l = std::get_if<LetCmd>(&cmd)) handle(*l);
  }

  void record(json r) {
    r["schema"] = kRecordsSchema;
    auto line = r.dump();
    if (options_.format == OutputFormat::records) out_ << line << "\n";
    if (options_.records_sidecar) *options_.records_sidecar << line << "\n";
  }

  void text(const std::string& line) {
    if (options_.format == OutputFormat::text) out_ << line << "\n";
  }

  const dsl::GroupDatum& group() const { return group_; }
  const Environment& env() const { return env_; }

  void handle(const TableDecl& t) {
    std::string body = t.body;
    if (t.path) {
      auto path = std::filesystem::path(*t.path);
      if (path.is_relative()) path = std::filesystem::path(script_.base_dir) / path;
      std::ifstream in(path);
      if (!in) throw LookupError("cannot read table file '" + path.string() + "'");
      std::ostringstream buf;
      buf << in.rdbuf();
      body = buf.str();
    }
    try {
      tables_.insert_or_assign(t.id, coeff::parse_table(body, t.id));
    } catch (const ParseError& e) {
      throw ValidationError("table '" + t.id + "' line " + std::to_string(e.line()) + ": " + e.what());
    }
  }

  void handle(const LetCmd& l) {
    env_[l.name] = evaluate(l.expr, group_, env_, EvalOptions{options_.normalize_j});
  }

  void handle(const ComputeCmd& c) {
    const auto& tree = *env_.at(c.name);
    const auto& table = tables_.at(c.table);
    auto value = engine::compute_graded(tree, group_, table, {c.degrees.lowest, c.degrees.highest});
    bool oracle = !value.assumed_oracles().empty();
    text("compute " + c.name + " table=" + table.name() + " degrees=" + std::to_string(c.degrees.lowest) + ".." +
         std::to_string(c.degrees.highest) + " (group " + group_.describe() + ", " +
         (value.is_formal() ? "formal" : "explicit") + ")");
    for (int i = c.degrees.lowest; i <= c.degrees.highest; ++i) {
      auto g = value.at(i);
      text("  degree " + std::to_string(i) + ": " + module_text(value, i, group_) + (oracle && !g.is_zero() ? "  [oracle]" : ""));
      auto r = json{{"record", "compute_row"}, {"name", c.name}, {"table", table.name()}, {"degree", i},
                    {"formal", value.is_formal()}, {"value", group_json(g)}, {"module", module_text(value, i, group_)},
                    {"assumed_oracles", value.assumed_oracles()}};
      record(std::move(r));
    }
    for (const auto& p : value.provenance()) text("  provenance: " + p);
    for (const auto& p : value.assumed_oracles()) text("  assumed oracle: descent rank at " + p);
  }

  void handle(const ClassifyCmd& c) {
    auto tree = env_.at(c.name);
    auto violations = dsl::validate(*tree, group_);
    if (!violations.empty()) {
      std::string msg = "invalid tree '" + c.name + "':";
      for (const auto& v : violations) msg += " [" + v.path + "] " + v.rule + ";";
      throw ValidationError(msg);
    }
    auto cls = dsl::classify(*tree);
    std::optional<dsl::NotInBEvidence> evidence;
    if (cls.tag == dsl::ClassTag::C) evidence = engine::refute_membership_B(*tree);
    std::string line = "classify " + c.name + ": class " + dsl::class_tag_name(cls.tag);
    if (cls.prime) line += " (p = " + std::to_string(*cls.prime) + ")";
    text(line);
    if (!cls.reason.empty()) text("  reason: " + cls.reason);
    for (const auto& p : cls.assumed_oracles) text("  assumed oracle: descent rank at " + p);
    if (evidence) {
      text("  NotInB: degree " + std::to_string(evidence->degree) + " of the unit table is " +
           evidence->value.format() + " (class B values vanish in negative degrees)");
    }
    json r{{"record", "classification"}, {"name", c.name}, {"tag", dsl::class_tag_name(cls.tag)},
           {"reason", cls.reason}, {"assumed_oracles", cls.assumed_oracles}};
    if (cls.prime) r["prime"] = *cls.prime;
    if (evidence) r["not_in_b"] = {{"degree", evidence->degree}, {"value", group_json(evidence->value)}};
    record(std::move(r));
  }

  void print_outcome(const std::string& name, const std::string& preset_id, const engine::ComparisonOutcome& o) {
    auto p = engine::preset(preset_id);
    if (o.verdict) {
      text("verdict " + name + " preset=" + preset_id + ": " + verdict_title(*o.verdict));
      text("  comparison: " + p.comparison);
      for (const auto& h : o.verdict->hypotheses) text("  hypothesis: " + h);
      text("  conclusion: " + o.verdict->conclusion_text);
    } else {
      text("verdict " + name + " preset=" + preset_id + ": no verdict");
      text("  comparison: " + p.comparison);
      text("  failed hypothesis: " + o.failed_hypothesis);
    }
    json r{{"record", "verdict"}, {"name", name}, {"preset", preset_id}, {"comparison", p.comparison}};
    if (o.verdict) r["verdict"] = verdict_json(*o.verdict);
    else r["failed_hypothesis"] = o.failed_hypothesis;
    record(std::move(r));
  }

  void handle(const VerdictCmd& c) {
    auto outcome = engine::run_preset(c.preset, *env_.at(c.name), group_);
    print_outcome(c.name, c.preset, outcome);
  }

  void handle(const ReportCmd& c) {
    const auto& tree = *env_.at(c.name);
    DegreeRange range{c.degrees.lowest, c.degrees.highest};
    auto kh = engine::compute_graded(tree, group_, tables_.at(c.kh), range);
    // HC^- is not truncating: its values on X come from the fixture table as given.
    auto hc = engine::fixture_value(tables_.at(c.hcminus), range);
    auto cls = dsl::classify(tree);
    text("report " + c.name + " kh=" + c.kh + " hcminus=" + c.hcminus + " degrees=" +
         std::to_string(c.degrees.lowest) + ".." + std::to_string(c.degrees.highest));
    text("  i | K_i | KH_i | HC^-_i");
    std::optional<std::string> k_note;
    for (int i = c.degrees.highest; i >= c.degrees.lowest; --i) {
      std::string k = "-";
      json r{{"record", "report_row"}, {"name", c.name}, {"degree", i}, {"kh", group_json(kh.at(i))},
             {"hcminus", group_json(hc.at(i))}};
      if (i >= 1) {
        try {
          auto d = engine::decompose_positive_K(kh, hc, cls, i);
          r["k_verdict"] = verdict_json(d.verdict);
          if (group_.is_trivial()) {
            k = d.value.format();
            r["k"] = group_json(d.value);
          } else if (kh.at(i).is_zero() || hc.at(i).is_zero()) {
            k = kh.at(i).is_zero() ? module_text(hc, i, group_) : module_text(kh, i, group_);
            r["k"] = group_json(d.value);
          } else {
            // R(G)-modules plus plain values: keep the sum formal.
            k = module_text(kh, i, group_) + " + " + module_text(hc, i, group_);
            r["k_text"] = k;
          }
        } catch (const HypothesisError& e) {
          k_note = e.what();
        } catch (const UnsupportedError&) {
          // Integral plus rational: keep the sum formal.
          k = kh.at(i).format() + " + " + hc.at(i).format();
          r["k_text"] = k;
        }
      }
      text("  " + std::to_string(i) + " | " + k + " | " + module_text(kh, i, group_) + " | " +
           module_text(hc, i, group_));
      record(std::move(r));
    }
    if (c.degrees.highest >= 1 && !k_note) text("  K_i = KH_i + HC^-_i for i >= 1 (class B, characteristic 0)");
    if (k_note) text("  K column omitted: " + *k_note);
    if (c.preset) print_outcome(c.name, *c.preset, engine::run_preset(*c.preset, tree, group_));
  }

  void handle(const RingCmd& c) {
    auto pres = engine::ring_degree0(*env_.at(c.name), group_);
    auto rank = engine::augmented_additive_rank(pres);
    text("ring " + c.name + ": " + pres.format());
    text("  augmented additive rank: " + to_string(rank));
    record({{"record", "ring"}, {"name", c.name}, {"presentation", pres.format()}, {"augmented_rank", to_string(rank)}});
  }

private:
  using DegreeRange = engine::DegreeRange;

  const Script& script_;
  const RunOptions& options_;
  std::ostream& out_;
  dsl::GroupDatum group_;
  Environment env_;
  std::map<std::string, coeff::CoefficientTable> tables_;
};

int report_error(Runner& runner, const std::exception& e, int line, std::ostream& err) {
  int code = exit_code_for(e);
  std::string where = line > 0 ? "line " + std::to_string(line) + ": " : "";
  std::string message = e.what();
  if (auto p = dynamic_cast<const ParseError*>(&e)) {
    where = "line " + std::to_string(p->line()) + ", column " + std::to_string(p->column()) + ": ";
    message = p->message();
  }
  err << "error: " << where << error_kind(e) << ": " << message << "\n";
  json r{{"record", "error"}, {"kind", error_kind(e)}, {"message", e.what()}, {"exit_code", code}};
  if (line > 0) r["line"] = line;
  runner.record(std::move(r));
  return code;
}

int command_line(const Command& cmd) {
  return std::visit([](const auto& c) { return c.line; }, cmd);
}

}  // namespace

int run(const Script& script, const RunOptions& options, std::ostream& out, std::ostream& err) {
  Runner runner(script, options, out);
  for (const auto& cmd : script.commands) {
    try {
      runner.execute(cmd);
    } catch (const std::exception& e) {
      return report_error(runner, e, command_line(cmd), err);
    }
  }
  return 0;
}

int check(const Script& script, const RunOptions& options, std::ostream& out, std::ostream& err) {
  Runner runner(script, options, out);
  int status = 0;
  for (const auto& cmd : script.commands) {
    try {
      runner.define_only(cmd);
    } catch (const std::exception& e) {
      return report_error(runner, e, command_line(cmd), err);
    }
    auto let = std::get_if<LetCmd>(&cmd);
    if (!let) continue;
    const auto& tree = *runner.env().at(let->name);
    auto violations = dsl::validate(tree, runner.group());
    json r{{"record", "check"}, {"name", let->name}};
    if (!violations.empty()) {
      status = 1;
      runner.text(let->name + ": invalid");
      json vs = json::array();
      for (const auto& v : violations) {
        runner.text("  [" + v.path + "] " + v.rule);
        vs.push_back({{"path", v.path}, {"rule", v.rule}});
      }
      r["violations"] = vs;
    } else {
      auto cls = dsl::classify(tree);
      runner.text(let->name + ": class " + dsl::class_tag_name(cls.tag) +
                  (cls.reason.empty() ? "" : " (" + cls.reason + ")"));
      r["tag"] = dsl::class_tag_name(cls.tag);
    }
    runner.record(std::move(r));
  }
  return status;
}

}  // namespace simploc::script
