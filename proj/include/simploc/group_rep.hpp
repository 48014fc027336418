#pragma once

// Groups with decomposable representation theory and their representation
// rings. Diagonalizable groups D(M) are described by their character lattice
// M = Z^r x Z/l_1 x ... x Z/l_s; R(D(M)) is the group algebra Z[M].

#include "simploc/integer.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace simploc::group_rep {

/// An element of a character lattice, one coordinate per factor. Torsion
/// coordinates are kept reduced into [0, l).
struct Character {
  std::vector<std::int64_t> coords;

  auto operator<=>(const Character&) const = default;
};

class CharacterLattice {
public:
  CharacterLattice() = default;
  CharacterLattice(int free_rank, std::vector<std::int64_t> finite_orders);

  int free_rank() const noexcept { return free_rank_; }
  const std::vector<std::int64_t>& finite_orders() const noexcept { return orders_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(free_rank_) + orders_.size(); }
  bool is_trivial() const noexcept { return dimension() == 0; }

  /// Reduces torsion coordinates; throws ValidationError on a length mismatch.
  Character make(std::vector<std::int64_t> coords) const;
  Character zero() const;
  Character basis(std::size_t index) const;

  Character add(const Character& a, const Character& b) const;
  Character negate(const Character& a) const;
  Character scale(const Character& a, std::int64_t factor) const;

  /// True when `c` has the right length and reduced torsion coordinates.
  bool contains(const Character& c) const noexcept;

  /// Number of elements when M is finite (free_rank == 0).
  std::optional<std::int64_t> order() const;

  std::string variable_name(std::size_t index) const;
  std::string format(const Character& c) const;

  bool operator==(const CharacterLattice&) const = default;

private:
  int free_rank_ = 0;
  std::vector<std::int64_t> orders_;
};

/// A group with decomposable representation theory. Linearly reductive groups
/// without a diagonalizable presentation are carried as an opaque label; any
/// path that needs ring arithmetic rejects them.
class GroupDatum {
public:
  static GroupDatum trivial();
  static GroupDatum diagonalizable(int free_rank, std::vector<std::int64_t> finite_orders);
  static GroupDatum torus(int rank) { return diagonalizable(rank, {}); }
  static GroupDatum opaque(std::string label);

  bool is_opaque() const noexcept { return opaque_label_.has_value(); }
  bool is_trivial() const noexcept { return !is_opaque() && lattice_.is_trivial(); }
  bool is_torus() const noexcept { return !is_opaque() && lattice_.finite_orders().empty(); }
  int free_rank() const noexcept { return lattice_.free_rank(); }
  const std::vector<std::int64_t>& finite_orders() const noexcept { return lattice_.finite_orders(); }

  /// Throws UnsupportedError for opaque groups.
  const CharacterLattice& lattice() const;

  std::string describe() const;

  bool operator==(const GroupDatum&) const = default;

private:
  CharacterLattice lattice_;
  std::optional<std::string> opaque_label_;
};

/// Element of Z[M]: a finitely supported map from characters to integers.
/// Zero coefficients are never stored, so equality is map equality.
class RepRingElement {
public:
  RepRingElement() = default;
  explicit RepRingElement(CharacterLattice lattice) : lattice_(std::move(lattice)) {}

  static RepRingElement zero(const CharacterLattice& lattice) { return RepRingElement(lattice); }
  static RepRingElement one(const CharacterLattice& lattice);
  static RepRingElement constant(const CharacterLattice& lattice, const Integer& value);
  static RepRingElement character(const CharacterLattice& lattice, const Character& c,
                                  const Integer& coefficient = 1);

  const CharacterLattice& lattice() const noexcept { return lattice_; }
  const std::map<Character, Integer>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  Integer coefficient(const Character& c) const;

  RepRingElement& operator+=(const RepRingElement& other);
  RepRingElement& operator-=(const RepRingElement& other);
  RepRingElement& operator*=(const RepRingElement& other);
  RepRingElement& operator*=(const Integer& scalar);

  friend RepRingElement operator+(RepRingElement a, const RepRingElement& b) { return a += b; }
  friend RepRingElement operator-(RepRingElement a, const RepRingElement& b) { return a -= b; }
  friend RepRingElement operator*(RepRingElement a, const RepRingElement& b) { return a *= b; }
  friend RepRingElement operator*(RepRingElement a, const Integer& s) { return a *= s; }
  RepRingElement operator-() const;

  bool operator==(const RepRingElement&) const = default;

  std::string format() const;

private:
  void add_term(const Character& c, const Integer& coefficient);
  void require_same_lattice(const RepRingElement& other) const;

  CharacterLattice lattice_;
  std::map<Character, Integer> terms_;
};

/// Ring descriptor for R(G) = Z[M]. It is a rank-1 free module over itself;
/// `presentation()` renders it as a quotient of a Laurent ring.
class RepresentationRing {
public:
  explicit RepresentationRing(CharacterLattice lattice) : lattice_(std::move(lattice)) {}

  const CharacterLattice& lattice() const noexcept { return lattice_; }

  RepRingElement zero() const { return RepRingElement::zero(lattice_); }
  RepRingElement one() const { return RepRingElement::one(lattice_); }
  RepRingElement variable(std::size_t index) const;

  /// "Z", "Z[t^±1]", "Z[t]/(t^3 - 1)", ...
  std::string presentation() const;

  /// Rank of Z[M] as an abelian group when M is finite.
  std::optional<std::int64_t> additive_rank() const { return lattice_.order(); }

private:
  CharacterLattice lattice_;
};

RepresentationRing representation_ring(const GroupDatum& group);

/// e_i of the classes [L_j]: the class of the i-th exterior power of the split
/// bundle sum L_j. Throws RangeError unless 0 <= i <= chars.size().
RepRingElement elementary_symmetric_class(const CharacterLattice& lattice,
                                          const std::vector<Character>& chars, std::size_t i);

/// Restriction to the trivial group: every character maps to 1.
Integer augment(const RepRingElement& element);

}  // namespace simploc::group_rep
