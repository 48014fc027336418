#pragma once

// Construction trees for simple varieties: the term language of the closure
// properties (point, disjoint unions, flag bundles, stratified descent along
// derived projectivizations, 3-out-of-4 for abstract blowup squares).

#include "simploc/coeff.hpp"
#include "simploc/group_rep.hpp"

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace simploc::dsl {

using group_rep::Character;
using group_rep::GroupDatum;

/// Equivariant vector bundle, recorded only through what the rules consume.
struct BundleDatum {
  int rank = 1;
  std::optional<std::vector<Character>> split_characters;
  std::optional<std::vector<int>> twist_labels;

  bool operator==(const BundleDatum&) const = default;
};

/// Coherent sheaf presented as coker(E1 -> E0).
struct SheafDatum {
  int generic_rank = 1;
  int source_rank = 0;  ///< rank of E1
  int target_rank = 1;  ///< rank of E0

  bool operator==(const SheafDatum&) const = default;
};

enum class Corner { X = 0, Y = 1, Z = 2, E = 3 };
enum class SplitKind { none, retraction, section };

std::string corner_name(Corner c);
std::string split_name(SplitKind s);

class ConstructionTree;
using TreePtr = std::shared_ptr<const ConstructionTree>;

struct PointNode {
  bool operator==(const PointNode&) const = default;
};

/// Strictly henselian base Spec R / G of residue characteristic p.
/// Classification-only: carries no computable module.
struct HenselianBaseNode {
  int prime = 2;
};

struct DisjointNode {
  std::vector<TreePtr> children;
};

/// Flag_X(E, d) over the base X.
struct FlagBundleNode {
  TreePtr base;
  BundleDatum bundle;
  std::vector<int> d_vec;
};

/// Defines the base X from a stratified flag bundle Y = Flag_X(F, d) in the class.
struct StratifiedDescentNode {
  TreePtr total_space;
  SheafDatum sheaf;
  std::vector<int> d_vec;
  std::optional<Integer> oracle_rank;
};

/// Abstract blowup square (X, Y, Z, E); `corners[unknown]` is null.
struct BlowupNode {
  std::array<TreePtr, 4> corners;
  Corner unknown = Corner::X;
  SplitKind split = SplitKind::none;
  /// Per-degree map E_i(Y) + E_i(Z) -> E_i(E). Rows index E's basis, columns
  /// index Y's basis followed by Z's.
  std::map<int, coeff::IntMatrix> comparison_maps;

  const TreePtr& corner(Corner c) const { return corners[static_cast<std::size_t>(c)]; }
};

using Node = std::variant<PointNode, HenselianBaseNode, DisjointNode, FlagBundleNode, StratifiedDescentNode, BlowupNode>;

class ConstructionTree {
public:
  explicit ConstructionTree(Node node) : node_(std::move(node)) {}

  const Node& node() const noexcept { return node_; }
  template <class T>
  const T* as() const noexcept {
    return std::get_if<T>(&node_);
  }

  /// Children in addressing order: disjoint summands; flag base; descent total
  /// space; blowup corners X, Y, Z, E with the unknown one skipped.
  std::vector<TreePtr> children() const;
  std::string kind_name() const;

private:
  Node node_;
};

bool operator==(const ConstructionTree& a, const ConstructionTree& b);

TreePtr point();
TreePtr henselian_base(int prime);
TreePtr disjoint(std::vector<TreePtr> children);
TreePtr flag_bundle(TreePtr base, BundleDatum bundle, std::vector<int> d_vec);
TreePtr stratified_descent(TreePtr total_space, SheafDatum sheaf, std::vector<int> d_vec,
                           std::optional<Integer> oracle_rank = std::nullopt);
TreePtr blowup(Corner unknown, TreePtr x, TreePtr y, TreePtr z, TreePtr e, SplitKind split,
               std::map<int, coeff::IntMatrix> comparison_maps = {});

/// Slash-separated child indices, "/" for the root.
using NodePath = std::string;
NodePath child_path(const NodePath& parent, std::size_t index);

struct Violation {
  NodePath path;
  std::string rule;

  bool operator==(const Violation&) const = default;
};

/// All invariant violations, recursively; never throws on bad trees.
std::vector<Violation> validate(const ConstructionTree& tree, const GroupDatum& group);

enum class ClassTag { B, C, C_p, invalid };
std::string class_tag_name(ClassTag tag);

/// Tag strength B > C > C_p > invalid.
int tag_strength(ClassTag tag);
inline bool at_least(ClassTag tag, ClassTag floor) { return tag_strength(tag) >= tag_strength(floor); }

struct NotInBEvidence {
  int degree = 0;
  coeff::FgAbGroup value;
};

struct MembershipClass {
  ClassTag tag = ClassTag::invalid;
  std::optional<int> prime;  ///< for C_p
  std::vector<NodePath> assumed_oracles;
  std::optional<NotInBEvidence> b_refuted;
  std::string reason;  ///< why B was not established, or why invalid
};

/// Syntactic classification. A C tag means "B not established by this tree".
MembershipClass classify(const ConstructionTree& tree);

/// Example trees. Toric entries carry standard torus weights when the group's
/// free rank suffices; otherwise (and for the trivial group) trivial characters.
TreePtr projective_space(int n, const GroupDatum& group);
TreePtr grassmannian(int n, int d, const GroupDatum& group);
TreePtr flag_variety(int n, std::vector<int> d_vec, const GroupDatum& group);
TreePtr hirzebruch(int m, const GroupDatum& group);
TreePtr cusp(const GroupDatum& group);
TreePtr node(const GroupDatum& group);
TreePtr cone_of_p1(const GroupDatum& group);
TreePtr projective_cone(TreePtr base, int line_bundle_twist, const GroupDatum& group);

/// Dispatch by name; params are the integer arguments in declaration order
/// (flag takes n followed by the dimension vector). projective_cone is not
/// reachable here because it needs a tree argument.
TreePtr example_library(const std::string& name, const std::vector<long long>& params, const GroupDatum& group);
std::vector<std::string> library_names();

/// Restriction of the action along 1 -> G: split characters become trivial.
TreePtr restrict_to_trivial(const TreePtr& tree);

/// Canonical explicit-node text (the construction-script expression syntax).
std::string print_tree(const ConstructionTree& tree);

}  // namespace simploc::dsl
