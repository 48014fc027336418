#include "simploc/engine.hpp"
#include "simploc/errors.hpp"

#include <algorithm>
#include <sstream>

namespace simploc::engine {

using group_rep::Character;
using group_rep::CharacterLattice;
using group_rep::RepRingElement;

GeneratorPolynomial GeneratorPolynomial::constant(const RepRingElement& c, std::size_t variables) {
  GeneratorPolynomial p(c.lattice(), variables);
  p.add_term(Exponents(variables, 0), c);
  return p;
}

GeneratorPolynomial GeneratorPolynomial::generator(const CharacterLattice& lattice, std::size_t variables,
                                                   std::size_t index, int power) {
  if (index >= variables) throw RangeError("generator index out of range");
  if (power < 0) throw RangeError("negative generator power");
  GeneratorPolynomial p(lattice, variables);
  Exponents e(variables, 0);
  e[index] = power;
  p.add_term(e, RepRingElement::one(lattice));
  return p;
}

void GeneratorPolynomial::add_term(const Exponents& e, const RepRingElement& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

GeneratorPolynomial& GeneratorPolynomial::operator+=(const GeneratorPolynomial& other) {
  if (other.variables_ != variables_ || !(other.lattice_ == lattice_)) {
    throw InternalError("polynomial arithmetic across different rings");
  }
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

GeneratorPolynomial& GeneratorPolynomial::operator-=(const GeneratorPolynomial& other) {
  if (other.variables_ != variables_ || !(other.lattice_ == lattice_)) {
    throw InternalError("polynomial arithmetic across different rings");
  }
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

GeneratorPolynomial operator*(const GeneratorPolynomial& a, const GeneratorPolynomial& b) {
  if (a.variables_ != b.variables_ || !(a.lattice_ == b.lattice_)) {
    throw InternalError("polynomial arithmetic across different rings");
  }
  GeneratorPolynomial out(a.lattice_, a.variables_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      GeneratorPolynomial::Exponents e(a.variables_);
      for (std::size_t k = 0; k < e.size(); ++k) e[k] = ea[k] + eb[k];
      out.add_term(e, ca * cb);
    }
  return out;
}

GeneratorPolynomial GeneratorPolynomial::widened(std::size_t variables) const {
  if (variables < variables_) throw InternalError("cannot narrow a polynomial ring");
  GeneratorPolynomial out(lattice_, variables);
  for (const auto& [e, c] : terms_) {
    auto w = e;
    w.resize(variables, 0);
    out.add_term(w, c);
  }
  return out;
}

std::map<GeneratorPolynomial::Exponents, Integer> GeneratorPolynomial::augmented() const {
  std::map<Exponents, Integer> out;
  for (const auto& [e, c] : terms_) {
    auto v = group_rep::augment(c);
    if (v == 0) continue;
    out[e] += v;
    if (out[e] == 0) out.erase(e);
  }
  return out;
}

std::string GeneratorPolynomial::format(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  // Highest total degree first.
  std::vector<std::pair<Exponents, RepRingElement>> ordered(terms_.begin(), terms_.end());
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (const auto& [e, c] : ordered) {
    std::string mono;
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (e[k] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += k < names.size() ? names[k] : "x" + std::to_string(k + 1);
      if (e[k] > 1) mono += "^" + std::to_string(e[k]);
    }
    auto coeff = c.format();
    bool negative = c.terms().size() == 1 && c.terms().begin()->second < 0;
    if (negative) coeff = (-c).format();
    bool compound = c.terms().size() > 1;
    std::string term;
    if (mono.empty()) term = compound ? "(" + coeff + ")" : coeff;
    else if (coeff == "1") term = mono;
    else term = (compound ? "(" + coeff + ")" : coeff) + "*" + mono;
    if (first) out << (negative ? "-" : "") << term;
    else out << (negative ? " - " : " + ") << term;
    first = false;
  }
  return out.str();
}

std::string RingPresentation::format() const {
  std::ostringstream out;
  auto base = group_rep::RepresentationRing(lattice).presentation();
  for (std::size_t f = 0; f < factors.size(); ++f) {
    if (f) out << " x ";
    const auto& t = factors[f];
    if (t.generators.empty()) {
      out << base;
      continue;
    }
    out << base << "[";
    for (std::size_t k = 0; k < t.generators.size(); ++k) out << (k ? "," : "") << t.generators[k];
    out << "]/(";
    for (std::size_t k = 0; k < t.relations.size(); ++k) {
      if (k) out << ", ";
      const auto& roots = t.relation_roots[k];
      for (std::size_t j = 0; j < roots.size(); ++j) out << (j ? "*" : "") << "(" << roots[j].format(t.generators) << ")";
    }
    out << ")";
  }
  return out.str();
}

namespace {

std::vector<TowerPresentation> towers(const ConstructionTree& tree, const CharacterLattice& lattice,
                                      const dsl::NodePath& path) {
  if (tree.as<dsl::PointNode>()) return {TowerPresentation{}};
  if (auto n = tree.as<dsl::DisjointNode>()) {
    std::vector<TowerPresentation> out;
    for (std::size_t k = 0; k < n->children.size(); ++k) {
      auto part = towers(*n->children[k], lattice, dsl::child_path(path, k));
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  auto n = tree.as<dsl::FlagBundleNode>();
  if (!n) throw UnsupportedError("ring presentation: " + tree.kind_name() + " at " + path + " is not supported");
  if (n->d_vec != std::vector<int>{1}) {
    throw UnsupportedError("ring presentation: flag bundle at " + path + " is not a projective bundle (d = (1))");
  }
  if (!n->bundle.split_characters) {
    throw UnsupportedError("ring presentation: bundle at " + path + " has no split characters");
  }
  const auto& chars = *n->bundle.split_characters;
  std::vector<int> twists(chars.size(), 0);
  if (n->bundle.twist_labels) twists = *n->bundle.twist_labels;
  int shift = *std::min_element(twists.begin(), twists.end());
  bool twisted = std::any_of(twists.begin(), twists.end(), [&](int t) { return t != shift; });

  auto base = towers(*n->base, lattice, dsl::child_path(path, 0));
  for (auto& t : base) {
    std::size_t k = t.generators.size();
    if (twisted && k == 0) {
      throw UnsupportedError("ring presentation: twisted bundle at " + path + " over a base without a line class");
    }
    std::size_t vars = k + 1;
    for (auto& r : t.relations) r = r.widened(vars);
    for (auto& roots : t.relation_roots)
      for (auto& r : roots) r = r.widened(vars);
    auto x = GeneratorPolynomial::generator(lattice, vars, k);
    auto relation = GeneratorPolynomial::constant(RepRingElement::one(lattice), vars);
    std::vector<GeneratorPolynomial> roots;
    for (std::size_t j = 0; j < chars.size(); ++j) {
      auto c = GeneratorPolynomial::constant(RepRingElement::character(lattice, chars[j]), vars);
      int power = twists[j] - shift;
      if (power > 0) c = c * GeneratorPolynomial::generator(lattice, vars, k - 1, power);
      auto root = x - c;
      relation = relation * root;
      roots.push_back(root);
    }
    t.generators.push_back("x" + std::to_string(vars));
    t.relations.push_back(relation);
    t.relation_roots.push_back(roots);
    t.relation_degrees.push_back(static_cast<int>(chars.size()));
  }
  return base;
}

}  // namespace

RingPresentation ring_degree0(const ConstructionTree& tree, const GroupDatum& group) {
  auto vs = dsl::validate(tree, group);
  if (!vs.empty()) throw ValidationError("invalid tree at " + vs.front().path + ": " + vs.front().rule);
  return {group.lattice(), towers(tree, group.lattice(), "/")};
}

Integer augmented_additive_rank(const RingPresentation& presentation) {
  Integer total = 0;
  for (const auto& t : presentation.factors) {
    Integer rank = 1;
    for (std::size_t j = 0; j < t.relations.size(); ++j) {
      int n = t.relation_degrees[j];
      bool leading = false;
      for (const auto& [e, c] : t.relations[j].augmented()) {
        for (std::size_t k = j + 1; k < e.size(); ++k)
          if (e[k] != 0) throw InternalError("relation " + std::to_string(j + 1) + " involves a later generator");
        if (e[j] > n) throw InternalError("relation " + std::to_string(j + 1) + " exceeds its degree");
        if (e[j] == n) {
          bool pure = std::all_of(e.begin(), e.begin() + static_cast<long>(j), [](int v) { return v == 0; });
          if (!pure || c != 1) throw InternalError("relation " + std::to_string(j + 1) + " is not monic");
          leading = true;
        }
      }
      if (!leading) throw InternalError("relation " + std::to_string(j + 1) + " has no leading term");
      rank *= n;
    }
    total += rank;
  }
  return total;
}

}  // namespace simploc::engine
