#include "simploc/coeff.hpp"
#include "simploc/errors.hpp"

#include <sstream>

namespace simploc::coeff {

namespace {

int residue(int degree, int period) {
  int r = degree % period;
  return r < 0 ? r + period : r;
}

}  // namespace

bool Periodicity::covers(int degree) const {
  return (!lowest || degree >= *lowest) && (!highest || degree <= *highest);
}

CoefficientTable::CoefficientTable(std::string name, std::map<int, FgAbGroup> degree_groups,
                                   std::optional<Periodicity> periodicity, std::vector<Generator> generators)
    : name_(std::move(name)),
      groups_(std::move(degree_groups)),
      periodicity_(std::move(periodicity)),
      generators_(std::move(generators)) {
  std::erase_if(groups_, [](const auto& entry) { return entry.second.is_zero(); });
  if (periodicity_) {
    const auto& p = *periodicity_;
    if (p.period < 1) throw ValidationError("table '" + name_ + "': period must be positive");
    if (p.lowest && p.highest && *p.lowest > *p.highest) {
      throw ValidationError("table '" + name_ + "': empty periodic range");
    }
    for (const auto& [r, g] : p.pattern) {
      if (r < 0 || r >= p.period) throw ValidationError("table '" + name_ + "': pattern residue out of range");
    }
    for (const auto& [degree, g] : groups_) {
      if (!p.covers(degree)) continue;
      auto it = p.pattern.find(residue(degree, p.period));
      auto expected = it == p.pattern.end() ? FgAbGroup::zero() : it->second;
      if (!(expected == g)) {
        throw ValidationError("table '" + name_ + "': degree " + std::to_string(degree) +
                              " contradicts the declared periodicity");
      }
    }
  }
  if (at(0).free_rank() < 1) {
    throw ValidationError("table '" + name_ + "': degree 0 must contain a free summand (unit)");
  }
}

FgAbGroup CoefficientTable::at(int degree) const {
  if (auto it = groups_.find(degree); it != groups_.end()) return it->second;
  if (periodicity_ && periodicity_->covers(degree)) {
    auto it = periodicity_->pattern.find(residue(degree, periodicity_->period));
    if (it != periodicity_->pattern.end()) return it->second;
  }
  return FgAbGroup::zero();
}

std::optional<int> CoefficientTable::lowest_nonzero_degree() const {
  std::optional<int> best;
  if (!groups_.empty()) best = groups_.begin()->first;
  if (periodicity_) {
    const auto& p = *periodicity_;
    bool any = false;
    for (const auto& [r, g] : p.pattern) any = any || !g.is_zero();
    if (any) {
      if (!p.lowest) return std::nullopt;
      for (int d = *p.lowest; d < *p.lowest + p.period && (!p.highest || d <= *p.highest); ++d) {
        if (!at(d).is_zero()) {
          best = best ? std::min(*best, d) : d;
          break;
        }
      }
    }
  }
  return best;
}

std::optional<int> CoefficientTable::highest_nonzero_degree() const {
  std::optional<int> best;
  if (!groups_.empty()) best = groups_.rbegin()->first;
  if (periodicity_) {
    const auto& p = *periodicity_;
    bool any = false;
    for (const auto& [r, g] : p.pattern) any = any || !g.is_zero();
    if (any) {
      if (!p.highest) return std::nullopt;
      for (int d = *p.highest; d > *p.highest - p.period && (!p.lowest || d >= *p.lowest); --d) {
        if (!at(d).is_zero()) {
          best = best ? std::max(*best, d) : d;
          break;
        }
      }
    }
  }
  return best;
}

bool CoefficientTable::has_torsion() const {
  for (const auto& [d, g] : groups_)
    if (g.has_torsion()) return true;
  if (periodicity_)
    for (const auto& [r, g] : periodicity_->pattern)
      if (g.has_torsion()) return true;
  return false;
}

bool CoefficientTable::is_rational() const { return at(0).rational(); }

CoefficientTable builtin_table(std::string_view name) {
  if (name == "unit") return CoefficientTable("unit", {{0, FgAbGroup::free(1)}});
  if (name == "bott") {
    Periodicity p{2, std::nullopt, std::nullopt, {{0, FgAbGroup::free(1)}}, "beta"};
    return CoefficientTable("bott", {}, p, {{"beta", 2, true}});
  }
  if (name == "hcminus_rational") {
    Periodicity p{2, std::nullopt, 0, {{0, FgAbGroup::rational_free(1)}}, "u"};
    return CoefficientTable("hcminus_rational", {}, p, {{"u", -2, false}});
  }
  if (name == "rational_deg0") return CoefficientTable("rational_deg0", {{0, FgAbGroup::rational_free(1)}});
  throw LookupError("unknown coefficient table '" + std::string(name) + "'");
}

std::vector<std::string> builtin_table_names() { return {"unit", "bott", "hcminus_rational", "rational_deg0"}; }

namespace {

struct Token {
  std::string text;
  int column;
};

std::vector<Token> split_line(const std::string& line) {
  std::vector<Token> out;
  std::size_t k = 0;
  while (k < line.size()) {
    if (line[k] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[k]))) {
      ++k;
      continue;
    }
    std::size_t start = k;
    while (k < line.size() && !std::isspace(static_cast<unsigned char>(line[k])) && line[k] != '#') ++k;
    out.push_back({line.substr(start, k - start), static_cast<int>(start) + 1});
  }
  return out;
}

long long parse_int(const Token& token, int line) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(token.text, &used);
    if (used != token.text.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected an integer, found '" + token.text + "'", line, token.column);
  }
}

}  // namespace

CoefficientTable parse_table(std::string_view text, std::string default_name) {
  std::string name = std::move(default_name);
  std::map<int, FgAbGroup> records;
  std::optional<Periodicity> periodicity;
  std::vector<Generator> generators;

  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = split_line(line);
    if (tokens.empty()) continue;
    const auto& head = tokens.front();
    if (head.text == "name") {
      if (tokens.size() != 2) throw ParseError("expected 'name <id>'", line_no, head.column);
      name = tokens[1].text;
    } else if (head.text == "period") {
      if (tokens.size() < 2) throw ParseError("expected 'period <p>'", line_no, head.column);
      Periodicity p;
      p.period = static_cast<int>(parse_int(tokens[1], line_no));
      for (std::size_t k = 2; k < tokens.size(); k += 2) {
        if (k + 1 >= tokens.size()) throw ParseError("missing value after '" + tokens[k].text + "'", line_no, tokens[k].column);
        if (tokens[k].text == "from") {
          p.lowest = static_cast<int>(parse_int(tokens[k + 1], line_no));
        } else if (tokens[k].text == "to") {
          p.highest = static_cast<int>(parse_int(tokens[k + 1], line_no));
        } else if (tokens[k].text == "witness") {
          p.witness = tokens[k + 1].text;
        } else {
          throw ParseError("unknown period option '" + tokens[k].text + "'", line_no, tokens[k].column);
        }
      }
      periodicity = p;
    } else if (head.text == "generator") {
      if (tokens.size() < 3 || tokens.size() > 4) {
        throw ParseError("expected 'generator <symbol> <degree> [invertible]'", line_no, head.column);
      }
      Generator g{tokens[1].text, static_cast<int>(parse_int(tokens[2], line_no)), false};
      if (tokens.size() == 4) {
        if (tokens[3].text != "invertible") throw ParseError("expected 'invertible'", line_no, tokens[3].column);
        g.invertible = true;
      }
      generators.push_back(g);
    } else {
      int degree = static_cast<int>(parse_int(head, line_no));
      if (tokens.size() < 2) throw ParseError("record needs a free rank", line_no, head.column);
      auto rank = parse_int(tokens[1], line_no);
      if (rank < 0) throw ParseError("negative free rank", line_no, tokens[1].column);
      std::vector<Integer> factors;
      bool rational = false;
      for (std::size_t k = 2; k < tokens.size(); ++k) {
        if (tokens[k].text == "Q") {
          rational = true;
          continue;
        }
        auto f = parse_int(tokens[k], line_no);
        if (f < 2) throw ParseError("invariant factors must be >= 2", line_no, tokens[k].column);
        factors.emplace_back(f);
      }
      if (records.contains(degree)) throw ParseError("duplicate degree " + std::to_string(degree), line_no, head.column);
      records[degree] = FgAbGroup::make(rank, factors, rational);
    }
  }
  if (periodicity) {
    for (const auto& [degree, g] : records) {
      int r = degree % periodicity->period;
      if (r < 0) r += periodicity->period;
      if (periodicity->pattern.contains(r)) {
        throw ValidationError("table '" + name + "': two records for residue " + std::to_string(r));
      }
      periodicity->pattern[r] = g;
    }
    records.clear();
  }
  return CoefficientTable(name, records, periodicity, generators);
}

std::string format_table(const CoefficientTable& table) {
  std::ostringstream out;
  out << "name " << table.name() << "\n";
  auto write_record = [&out](int degree, const FgAbGroup& g) {
    out << degree << " " << g.free_rank();
    for (const auto& f : g.invariant_factors()) out << " " << f;
    if (g.rational()) out << " Q";
    out << "\n";
  };
  for (const auto& g : table.generators()) {
    out << "generator " << g.symbol << " " << g.degree << (g.invertible ? " invertible" : "") << "\n";
  }
  if (const auto& p = table.periodicity()) {
    out << "period " << p->period;
    if (p->lowest) out << " from " << *p->lowest;
    if (p->highest) out << " to " << *p->highest;
    if (!p->witness.empty()) out << " witness " << p->witness;
    out << "\n";
    for (const auto& [r, g] : p->pattern) write_record(r, g);
  } else {
    for (const auto& [d, g] : table.stored_groups()) write_record(d, g);
  }
  return out.str();
}

}  // namespace simploc::coeff
