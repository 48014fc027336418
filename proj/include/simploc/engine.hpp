#pragma once

// Evaluation of construction trees: degree-0 modules over R(G), graded values
// E^G_*(X), blowup long exact sequences, ring presentations on the split
// projective-bundle fragment, and theorem-backed comparison verdicts.

#include "simploc/coeff.hpp"
#include "simploc/dsl.hpp"
#include "simploc/group_rep.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace simploc::engine {

using coeff::CoefficientTable;
using coeff::FgAbGroup;
using coeff::IntMatrix;
using dsl::ConstructionTree;
using dsl::MembershipClass;
using group_rep::GroupDatum;

/// Number of pieces in the semiorthogonal decomposition of Flag(E, d) over
/// its base: rank! / (d_1! ... d_m! (rank - sum d)!). RangeError unless
/// rank >= 1, every d_i >= 1 and sum d <= rank.
Integer sod_count(int rank, const std::vector<int>& d_vec);

/// E^G_0(X) as a free module over R(G).
struct Degree0Module {
  std::vector<std::string> basis_labels;
  std::vector<dsl::NodePath> assumed_oracles;

  std::size_t rank() const noexcept { return basis_labels.size(); }
};

/// Requires class B, or class C with trivial G and comparison maps on every
/// non-split square (then only the rank is meaningful).
Degree0Module compute_degree0(const ConstructionTree& tree, const GroupDatum& group);

struct FormalShape {
  Degree0Module degree0;
  CoefficientTable table;
};

/// Values on the closed window [lowest, highest]; trivial G only.
struct ExplicitShape {
  int lowest = 0;
  int highest = 0;
  std::map<int, FgAbGroup> groups;
};

class GradedModuleValue {
public:
  GradedModuleValue(std::variant<FormalShape, ExplicitShape> shape, std::vector<std::string> provenance,
                    std::vector<dsl::NodePath> assumed_oracles);

  bool is_formal() const noexcept { return std::holds_alternative<FormalShape>(shape_); }
  const std::variant<FormalShape, ExplicitShape>& shape() const noexcept { return shape_; }
  const std::vector<std::string>& provenance() const noexcept { return provenance_; }
  const std::vector<dsl::NodePath>& assumed_oracles() const noexcept { return assumed_oracles_; }

  /// Degree-i value as an abelian group (free rank counts copies of R(G)).
  /// Formal: table[i] tensored with Z^rank. Explicit: RangeError outside the window.
  FgAbGroup at(int degree) const;

private:
  std::variant<FormalShape, ExplicitShape> shape_;
  std::vector<std::string> provenance_;
  std::vector<dsl::NodePath> assumed_oracles_;
};

struct DegreeRange {
  int lowest = 0;
  int highest = 0;
};

/// Class B: the formal shape. Class C: explicit values on `range`, assembled
/// by solving the blowup long exact sequences.
GradedModuleValue compute_graded(const ConstructionTree& tree, const GroupDatum& group, const CoefficientTable& table,
                                 DegreeRange range);

/// Degreewise values read straight from a table, for invariants of X that are
/// supplied as fixtures rather than computed from the tree.
GradedModuleValue fixture_value(const CoefficientTable& table, DegreeRange range);

/// Long exact sequence of a blowup square with unknown X:
///   ... -> E_i(X) -> E_i(Y) + E_i(Z) -> E_i(E) -> E_{i-1}(X) -> ...
/// Known corners must be free or rational in every degree used.
struct BlowupSequence {
  std::map<int, FgAbGroup> y;
  std::map<int, FgAbGroup> z;
  std::map<int, FgAbGroup> e;
  std::map<int, IntMatrix> maps;
};

/// The comparison map in degree i (a zero matrix when either side vanishes).
/// Throws UnderdeterminedError when a needed matrix is absent.
IntMatrix comparison_map(const BlowupSequence& seq, int degree);

/// E_i(X) = coker(phi_{i+1}) + ker(phi_i) for i in [lowest, highest]; needs
/// corner values on [lowest, highest + 1].
std::map<int, FgAbGroup> solve_blowup_sequence(const BlowupSequence& seq, int lowest, int highest);

/// Maps of the reassembled sequence on free parts: alpha_i: X_i -> Y_i + Z_i and
/// boundary_i: E_i -> X_{i-1}, with X_i ordered as (coker phi_{i+1}, ker phi_i).
struct SequenceSegment {
  IntMatrix alpha;
  IntMatrix phi;
  IntMatrix boundary;
};
SequenceSegment sequence_segment(const BlowupSequence& seq, int degree);

/// Rank of an integer matrix over Q.
std::size_t rational_rank(const IntMatrix& m);

// ----- ring presentations ---------------------------------------------------

/// Polynomial in the tower generators x_1..x_k with coefficients in R(G).
class GeneratorPolynomial {
public:
  using Exponents = std::vector<int>;

  GeneratorPolynomial(group_rep::CharacterLattice lattice, std::size_t variables)
      : lattice_(std::move(lattice)), variables_(variables) {}

  static GeneratorPolynomial constant(const group_rep::RepRingElement& c, std::size_t variables);
  static GeneratorPolynomial generator(const group_rep::CharacterLattice& lattice, std::size_t variables,
                                       std::size_t index, int power = 1);

  std::size_t variables() const noexcept { return variables_; }
  const group_rep::CharacterLattice& lattice() const noexcept { return lattice_; }
  const std::map<Exponents, group_rep::RepRingElement>& terms() const noexcept { return terms_; }

  GeneratorPolynomial& operator+=(const GeneratorPolynomial& other);
  GeneratorPolynomial& operator-=(const GeneratorPolynomial& other);
  friend GeneratorPolynomial operator*(const GeneratorPolynomial& a, const GeneratorPolynomial& b);
  friend GeneratorPolynomial operator-(GeneratorPolynomial a, const GeneratorPolynomial& b) { return a -= b; }
  bool operator==(const GeneratorPolynomial&) const = default;

  /// Embeds into a polynomial ring with more generators.
  GeneratorPolynomial widened(std::size_t variables) const;

  /// Coefficients pushed along the augmentation R(G) -> Z.
  std::map<Exponents, Integer> augmented() const;

  std::string format(const std::vector<std::string>& names) const;

private:
  void add_term(const Exponents& e, const group_rep::RepRingElement& c);

  group_rep::CharacterLattice lattice_;
  std::size_t variables_ = 0;
  std::map<Exponents, group_rep::RepRingElement> terms_;
};

/// R(G)[x_1..x_k]/(f_1..f_k) where f_j is monic of degree n_j in x_j and only
/// involves x_1..x_j. The factor list of each relation (x_j - c) is kept too.
struct TowerPresentation {
  std::vector<std::string> generators;
  std::vector<GeneratorPolynomial> relations;
  std::vector<std::vector<GeneratorPolynomial>> relation_roots;
  std::vector<int> relation_degrees;
};

/// A product of tower presentations (one factor per disjoint component).
struct RingPresentation {
  group_rep::CharacterLattice lattice;
  std::vector<TowerPresentation> factors;

  std::string format() const;
};

/// Iterated presentation for trees built from Point, Disjoint and projective
/// bundles P(sum L_j) with split characters: adjoin x with prod_j (x - [L_j]).
/// UnsupportedError otherwise.
RingPresentation ring_degree0(const ConstructionTree& tree, const GroupDatum& group);

/// Additive rank of the presentation after augmenting coefficients to Z,
/// obtained by counting standard monomials of the triangular monic system.
/// Throws InternalError if a relation is not monic in its generator.
Integer augmented_additive_rank(const RingPresentation& presentation);

// ----- verdicts ---------------------------------------------------------------

enum class VerdictKind { EquivalenceAllDegrees, IsoInDegree, SplitDecomposition, Vanishing, NotInB };
std::string verdict_kind_name(VerdictKind kind);

struct Verdict {
  VerdictKind kind = VerdictKind::EquivalenceAllDegrees;
  std::optional<int> degree;        ///< IsoInDegree, SplitDecomposition, NotInB
  std::string degree_set;           ///< Vanishing, e.g. "i != 0"
  std::optional<FgAbGroup> evidence;  ///< NotInB
  std::vector<std::string> hypotheses;
  std::string conclusion_text;
};

/// Homotopy groups of the fiber of a map of truncating invariants on BG.
/// Degrees absent from `known` are zero when `vanishes_elsewhere`, unknown otherwise.
struct FiberProfile {
  std::map<int, FgAbGroup> known;
  bool vanishes_elsewhere = false;
  std::string description;

  bool vanishes_in(int degree) const;
  bool vanishes_everywhere() const;
};

struct ComparisonOutcome {
  std::optional<Verdict> verdict;
  std::string failed_hypothesis;  ///< set when no verdict is issued
};

ComparisonOutcome verify_comparison(const FiberProfile& fiber, const MembershipClass& tree_class,
                                    std::optional<int> target_degree);

struct KDecomposition {
  FgAbGroup value;
  Verdict verdict;  ///< the SplitDecomposition this value was read off from
};

/// K_i = KH_i + HC^-_i for class B and i >= 1; HypothesisError otherwise.
KDecomposition decompose_positive_K(const GradedModuleValue& kh, const GradedModuleValue& hcminus,
                                    const MembershipClass& tree_class, int degree);

/// Nonzero unit-table value in a negative degree; only for class C, trivial G.
std::optional<dsl::NotInBEvidence> refute_membership_B(const ConstructionTree& tree);

/// Rational K-groups vanish outside degree 0; HypothesisError unless class B.
Verdict parshin_check(const ConstructionTree& tree, const GroupDatum& group);

/// Named bundles of fiber-vanishing facts on BG.
struct Preset {
  std::string id;
  std::string comparison;  ///< the map whose fiber is described
  FiberProfile fiber;
  std::optional<int> target_degree;
};

Preset preset(const std::string& id);
std::vector<std::string> preset_names();

/// Runs a preset against a tree (parshin_Fq dispatches to parshin_check).
ComparisonOutcome run_preset(const std::string& id, const ConstructionTree& tree, const GroupDatum& group);

}  // namespace simploc::engine
