#include "simploc/group_rep.hpp"

#include "simploc/errors.hpp"

#include <numeric>
#include <sstream>

namespace simploc::group_rep {

namespace {

std::int64_t reduce_mod(std::int64_t value, std::int64_t modulus) {
  auto r = value % modulus;
  return r < 0 ? r + modulus : r;
}

}  // namespace

CharacterLattice::CharacterLattice(int free_rank, std::vector<std::int64_t> finite_orders)
    : free_rank_(free_rank), orders_(std::move(finite_orders)) {
  if (free_rank_ < 0) throw ValidationError("character lattice: negative free rank");
  for (auto order : orders_) {
    if (order < 2) throw ValidationError("character lattice: finite orders must be >= 2");
  }
}

Character CharacterLattice::make(std::vector<std::int64_t> coords) const {
  if (coords.size() != dimension()) {
    throw ValidationError("character has " + std::to_string(coords.size()) +
                          " coordinates, lattice has dimension " + std::to_string(dimension()));
  }
  for (std::size_t j = 0; j < orders_.size(); ++j) {
    auto& c = coords[static_cast<std::size_t>(free_rank_) + j];
    c = reduce_mod(c, orders_[j]);
  }
  return Character{std::move(coords)};
}

Character CharacterLattice::zero() const { return Character{std::vector<std::int64_t>(dimension(), 0)}; }

Character CharacterLattice::basis(std::size_t index) const {
  if (index >= dimension()) throw RangeError("character lattice: basis index out of range");
  auto c = zero();
  c.coords[index] = 1;
  return make(std::move(c.coords));
}

Character CharacterLattice::add(const Character& a, const Character& b) const {
  std::vector<std::int64_t> out(dimension());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = a.coords.at(k) + b.coords.at(k);
  return make(std::move(out));
}

Character CharacterLattice::negate(const Character& a) const { return scale(a, -1); }

Character CharacterLattice::scale(const Character& a, std::int64_t factor) const {
  std::vector<std::int64_t> out(dimension());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = a.coords.at(k) * factor;
  return make(std::move(out));
}

bool CharacterLattice::contains(const Character& c) const noexcept {
  if (c.coords.size() != dimension()) return false;
  for (std::size_t j = 0; j < orders_.size(); ++j) {
    auto v = c.coords[static_cast<std::size_t>(free_rank_) + j];
    if (v < 0 || v >= orders_[j]) return false;
  }
  return true;
}

std::optional<std::int64_t> CharacterLattice::order() const {
  if (free_rank_ > 0) return std::nullopt;
  return std::accumulate(orders_.begin(), orders_.end(), std::int64_t{1}, std::multiplies<>());
}

std::string CharacterLattice::variable_name(std::size_t index) const {
  if (dimension() == 1) return index < static_cast<std::size_t>(free_rank_) ? "t" : "s";
  if (index < static_cast<std::size_t>(free_rank_)) return "t" + std::to_string(index + 1);
  return "s" + std::to_string(index - static_cast<std::size_t>(free_rank_) + 1);
}

std::string CharacterLattice::format(const Character& c) const {
  std::string out;
  for (std::size_t k = 0; k < c.coords.size(); ++k) {
    if (c.coords[k] == 0) continue;
    if (!out.empty()) out += "*";
    out += variable_name(k);
    if (c.coords[k] != 1) out += "^" + std::to_string(c.coords[k]);
  }
  return out.empty() ? "1" : out;
}

GroupDatum GroupDatum::trivial() { return GroupDatum{}; }

GroupDatum GroupDatum::diagonalizable(int free_rank, std::vector<std::int64_t> finite_orders) {
  GroupDatum g;
  g.lattice_ = CharacterLattice(free_rank, std::move(finite_orders));
  return g;
}

GroupDatum GroupDatum::opaque(std::string label) {
  GroupDatum g;
  g.opaque_label_ = std::move(label);
  return g;
}

const CharacterLattice& GroupDatum::lattice() const {
  if (is_opaque()) {
    throw UnsupportedError("group '" + *opaque_label_ +
                           "' has no computable representation ring (opaque index set)");
  }
  return lattice_;
}

std::string GroupDatum::describe() const {
  if (is_opaque()) return "opaque " + *opaque_label_;
  if (is_trivial()) return "trivial";
  std::ostringstream out;
  if (free_rank() > 0) out << "torus " << free_rank();
  if (!finite_orders().empty()) {
    if (free_rank() > 0) out << " ";
    out << "finite";
    for (auto o : finite_orders()) out << " " << o;
  }
  return out.str();
}

RepRingElement RepRingElement::one(const CharacterLattice& lattice) { return constant(lattice, 1); }

RepRingElement RepRingElement::constant(const CharacterLattice& lattice, const Integer& value) {
  return character(lattice, lattice.zero(), value);
}

RepRingElement RepRingElement::character(const CharacterLattice& lattice, const Character& c,
                                         const Integer& coefficient) {
  if (!lattice.contains(c)) throw ValidationError("character is not a reduced lattice element");
  RepRingElement e(lattice);
  e.add_term(c, coefficient);
  return e;
}

Integer RepRingElement::coefficient(const Character& c) const {
  auto it = terms_.find(c);
  return it == terms_.end() ? Integer{0} : it->second;
}

void RepRingElement::add_term(const Character& c, const Integer& coefficient) {
  if (coefficient == 0) return;
  auto [it, inserted] = terms_.try_emplace(c, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == 0) terms_.erase(it);
  }
}

void RepRingElement::require_same_lattice(const RepRingElement& other) const {
  if (!(lattice_ == other.lattice_)) throw ValidationError("representation ring elements over different lattices");
}

RepRingElement& RepRingElement::operator+=(const RepRingElement& other) {
  require_same_lattice(other);
  for (const auto& [c, k] : other.terms_) add_term(c, k);
  return *this;
}

RepRingElement& RepRingElement::operator-=(const RepRingElement& other) {
  require_same_lattice(other);
  for (const auto& [c, k] : other.terms_) add_term(c, -k);
  return *this;
}

RepRingElement& RepRingElement::operator*=(const RepRingElement& other) {
  require_same_lattice(other);
  RepRingElement product(lattice_);
  for (const auto& [a, ka] : terms_) {
    for (const auto& [b, kb] : other.terms_) product.add_term(lattice_.add(a, b), ka * kb);
  }
  terms_ = std::move(product.terms_);
  return *this;
}

RepRingElement& RepRingElement::operator*=(const Integer& scalar) {
  if (scalar == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [c, k] : terms_) k *= scalar;
  return *this;
}

RepRingElement RepRingElement::operator-() const {
  RepRingElement out = *this;
  return out *= Integer{-1};
}

std::string RepRingElement::format() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [c, k] : terms_) {
    auto magnitude = k < 0 ? Integer(-k) : k;
    if (first) {
      if (k < 0) out += "-";
    } else {
      out += k < 0 ? " - " : " + ";
    }
    first = false;
    auto name = lattice_.format(c);
    if (name == "1") {
      out += magnitude.str();
    } else {
      if (magnitude != 1) out += magnitude.str() + "*";
      out += name;
    }
  }
  return out;
}

RepRingElement RepresentationRing::variable(std::size_t index) const {
  return RepRingElement::character(lattice_, lattice_.basis(index));
}

std::string RepresentationRing::presentation() const {
  if (lattice_.is_trivial()) return "Z";
  std::string vars;
  std::string relations;
  for (std::size_t k = 0; k < lattice_.dimension(); ++k) {
    if (!vars.empty()) vars += ", ";
    auto name = lattice_.variable_name(k);
    if (k < static_cast<std::size_t>(lattice_.free_rank())) {
      vars += name + "^±1";
    } else {
      vars += name;
      if (!relations.empty()) relations += ", ";
      relations += name + "^" +
                   std::to_string(lattice_.finite_orders()[k - static_cast<std::size_t>(lattice_.free_rank())]) +
                   " - 1";
    }
  }
  auto out = "Z[" + vars + "]";
  if (!relations.empty()) out += "/(" + relations + ")";
  return out;
}

RepresentationRing representation_ring(const GroupDatum& group) { return RepresentationRing(group.lattice()); }

RepRingElement elementary_symmetric_class(const CharacterLattice& lattice, const std::vector<Character>& chars,
                                          std::size_t i) {
  if (i > chars.size()) {
    throw RangeError("elementary_symmetric_class: index " + std::to_string(i) + " exceeds " +
                     std::to_string(chars.size()) + " characters");
  }
  // e[k] after processing a prefix of chars; standard one-pass recurrence.
  std::vector<RepRingElement> e(i + 1, RepRingElement::zero(lattice));
  e[0] = RepRingElement::one(lattice);
  for (const auto& c : chars) {
    auto line = RepRingElement::character(lattice, c);
    for (std::size_t k = i; k >= 1; --k) e[k] += e[k - 1] * line;
  }
  return e[i];
}

Integer augment(const RepRingElement& element) {
  Integer total = 0;
  for (const auto& [c, k] : element.terms()) total += k;
  return total;
}

}  // namespace simploc::group_rep
