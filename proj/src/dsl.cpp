#include "simploc/dsl.hpp"

#include "simploc/errors.hpp"

#include <numeric>
#include <set>
#include <sstream>

namespace simploc::dsl {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

bool same_tree(const TreePtr& a, const TreePtr& b) {
  if (!a || !b) return !a && !b;
  return *a == *b;
}

bool is_prime(int p) {
  if (p < 2) return false;
  for (int k = 2; k * k <= p; ++k)
    if (p % k == 0) return false;
  return true;
}

}  // namespace

std::string corner_name(Corner c) {
  switch (c) {
    case Corner::X: return "X";
    case Corner::Y: return "Y";
    case Corner::Z: return "Z";
    case Corner::E: return "E";
  }
  return "?";
}

std::string split_name(SplitKind s) {
  switch (s) {
    case SplitKind::none: return "none";
    case SplitKind::retraction: return "retraction";
    case SplitKind::section: return "section";
  }
  return "?";
}

std::vector<TreePtr> ConstructionTree::children() const {
  return std::visit(Overloaded{
                        [](const PointNode&) { return std::vector<TreePtr>{}; },
                        [](const HenselianBaseNode&) { return std::vector<TreePtr>{}; },
                        [](const DisjointNode& n) { return n.children; },
                        [](const FlagBundleNode& n) { return std::vector<TreePtr>{n.base}; },
                        [](const StratifiedDescentNode& n) { return std::vector<TreePtr>{n.total_space}; },
                        [](const BlowupNode& n) {
                          std::vector<TreePtr> out;
                          for (std::size_t k = 0; k < 4; ++k)
                            if (static_cast<Corner>(k) != n.unknown) out.push_back(n.corners[k]);
                          return out;
                        },
                    },
                    node_);
}

std::string ConstructionTree::kind_name() const {
  return std::visit(Overloaded{
                        [](const PointNode&) { return std::string("point"); },
                        [](const HenselianBaseNode&) { return std::string("henselian"); },
                        [](const DisjointNode&) { return std::string("disjoint"); },
                        [](const FlagBundleNode&) { return std::string("flag_bundle"); },
                        [](const StratifiedDescentNode&) { return std::string("descent"); },
                        [](const BlowupNode&) { return std::string("blowup"); },
                    },
                    node_);
}

bool operator==(const ConstructionTree& a, const ConstructionTree& b) {
  if (a.node().index() != b.node().index()) return false;
  return std::visit(
      Overloaded{
          [](const PointNode&, const PointNode&) { return true; },
          [](const HenselianBaseNode& x, const HenselianBaseNode& y) { return x.prime == y.prime; },
          [](const DisjointNode& x, const DisjointNode& y) {
            if (x.children.size() != y.children.size()) return false;
            for (std::size_t k = 0; k < x.children.size(); ++k)
              if (!same_tree(x.children[k], y.children[k])) return false;
            return true;
          },
          [](const FlagBundleNode& x, const FlagBundleNode& y) {
            return x.bundle == y.bundle && x.d_vec == y.d_vec && same_tree(x.base, y.base);
          },
          [](const StratifiedDescentNode& x, const StratifiedDescentNode& y) {
            return x.sheaf == y.sheaf && x.d_vec == y.d_vec && x.oracle_rank == y.oracle_rank &&
                   same_tree(x.total_space, y.total_space);
          },
          [](const BlowupNode& x, const BlowupNode& y) {
            if (x.unknown != y.unknown || x.split != y.split || x.comparison_maps != y.comparison_maps) return false;
            for (std::size_t k = 0; k < 4; ++k)
              if (!same_tree(x.corners[k], y.corners[k])) return false;
            return true;
          },
          [](const auto&, const auto&) { return false; },
      },
      a.node(), b.node());
}

TreePtr point() { return std::make_shared<const ConstructionTree>(PointNode{}); }

TreePtr henselian_base(int prime) { return std::make_shared<const ConstructionTree>(HenselianBaseNode{prime}); }

TreePtr disjoint(std::vector<TreePtr> children) {
  return std::make_shared<const ConstructionTree>(DisjointNode{std::move(children)});
}

TreePtr flag_bundle(TreePtr base, BundleDatum bundle, std::vector<int> d_vec) {
  return std::make_shared<const ConstructionTree>(FlagBundleNode{std::move(base), std::move(bundle), std::move(d_vec)});
}

TreePtr stratified_descent(TreePtr total_space, SheafDatum sheaf, std::vector<int> d_vec,
                           std::optional<Integer> oracle_rank) {
  return std::make_shared<const ConstructionTree>(
      StratifiedDescentNode{std::move(total_space), sheaf, std::move(d_vec), std::move(oracle_rank)});
}

TreePtr blowup(Corner unknown, TreePtr x, TreePtr y, TreePtr z, TreePtr e, SplitKind split,
               std::map<int, coeff::IntMatrix> comparison_maps) {
  BlowupNode n;
  n.corners = {std::move(x), std::move(y), std::move(z), std::move(e)};
  n.unknown = unknown;
  n.split = split;
  n.comparison_maps = std::move(comparison_maps);
  return std::make_shared<const ConstructionTree>(std::move(n));
}

NodePath child_path(const NodePath& parent, std::size_t index) {
  return (parent == "/" ? std::string("/") : parent + "/") + std::to_string(index);
}

namespace {

void check_d_vec(const std::vector<int>& d_vec, const NodePath& path, std::vector<Violation>& out) {
  if (d_vec.empty()) out.push_back({path, "empty dimension vector"});
  for (int d : d_vec)
    if (d <= 0) {
      out.push_back({path, "dimension vector entries must be positive"});
      break;
    }
}

void validate_node(const TreePtr& tree, const GroupDatum& group, const NodePath& path, std::vector<Violation>& out) {
  if (!tree) {
    out.push_back({path, "missing subtree"});
    return;
  }
  std::visit(Overloaded{
                 [](const PointNode&) {},
                 [&](const HenselianBaseNode& n) {
                   if (!is_prime(n.prime)) out.push_back({path, "henselian base needs a prime residue characteristic"});
                 },
                 [&](const DisjointNode& n) {
                   if (n.children.empty()) out.push_back({path, "disjoint union needs at least one summand"});
                 },
                 [&](const FlagBundleNode& n) {
                   const auto& b = n.bundle;
                   if (b.rank < 1) out.push_back({path, "bundle rank must be >= 1"});
                   check_d_vec(n.d_vec, path, out);
                   auto total = std::accumulate(n.d_vec.begin(), n.d_vec.end(), 0LL);
                   if (total > b.rank) out.push_back({path, "d exceeds rank"});
                   if (b.split_characters) {
                     if (static_cast<int>(b.split_characters->size()) != b.rank) {
                       out.push_back({path, "split characters length differs from bundle rank"});
                     }
                     if (group.is_opaque()) {
                       out.push_back({path, "split characters need a diagonalizable group"});
                     } else {
                       for (const auto& c : *b.split_characters)
                         if (!group.lattice().contains(c)) {
                           out.push_back({path, "split character is not an element of the character lattice"});
                           break;
                         }
                     }
                   }
                   if (b.twist_labels && static_cast<int>(b.twist_labels->size()) != b.rank) {
                     out.push_back({path, "twist labels length differs from bundle rank"});
                   }
                 },
                 [&](const StratifiedDescentNode& n) {
                   const auto& s = n.sheaf;
                   if (s.generic_rank < 1) out.push_back({path, "sheaf rank must be >= 1"});
                   if (s.source_rank < 0 || s.target_rank < 0) out.push_back({path, "negative presentation rank"});
                   if (s.generic_rank > s.target_rank) out.push_back({path, "generic rank exceeds presentation target rank"});
                   check_d_vec(n.d_vec, path, out);
                   auto total = std::accumulate(n.d_vec.begin(), n.d_vec.end(), 0LL);
                   if (total > s.generic_rank) out.push_back({path, "d exceeds sheaf rank"});
                   if (n.oracle_rank && *n.oracle_rank < 0) out.push_back({path, "negative oracle rank"});
                 },
                 [&](const BlowupNode& n) {
                   for (std::size_t k = 0; k < 4; ++k) {
                     auto c = static_cast<Corner>(k);
                     if (c == n.unknown && n.corners[k]) out.push_back({path, "unknown corner " + corner_name(c) + " must be empty"});
                     if (c != n.unknown && !n.corners[k]) out.push_back({path, "corner " + corner_name(c) + " missing"});
                   }
                 },
             },
             tree->node());
  auto kids = tree->children();
  for (std::size_t k = 0; k < kids.size(); ++k) validate_node(kids[k], group, child_path(path, k), out);
}

struct ClassScan {
  std::set<int> primes;
  std::optional<NodePath> first_non_split;
  std::vector<NodePath> oracles;
};

void scan(const ConstructionTree& tree, const NodePath& path, ClassScan& s) {
  if (auto h = tree.as<HenselianBaseNode>()) s.primes.insert(h->prime);
  if (auto b = tree.as<BlowupNode>(); b && b->split == SplitKind::none && !s.first_non_split) s.first_non_split = path;
  if (auto d = tree.as<StratifiedDescentNode>(); d && d->oracle_rank) s.oracles.push_back(path);
  auto kids = tree.children();
  for (std::size_t k = 0; k < kids.size(); ++k)
    if (kids[k]) scan(*kids[k], child_path(path, k), s);
}

}  // namespace

std::vector<Violation> validate(const ConstructionTree& tree, const GroupDatum& group) {
  std::vector<Violation> out;
  auto self = std::shared_ptr<const ConstructionTree>(&tree, [](const ConstructionTree*) {});
  validate_node(self, group, "/", out);
  return out;
}

std::string class_tag_name(ClassTag tag) {
  switch (tag) {
    case ClassTag::B: return "B";
    case ClassTag::C: return "C";
    case ClassTag::C_p: return "C_p";
    case ClassTag::invalid: return "invalid";
  }
  return "?";
}

int tag_strength(ClassTag tag) {
  switch (tag) {
    case ClassTag::B: return 3;
    case ClassTag::C: return 2;
    case ClassTag::C_p: return 1;
    case ClassTag::invalid: return 0;
  }
  return 0;
}

MembershipClass classify(const ConstructionTree& tree) {
  ClassScan s;
  scan(tree, "/", s);
  MembershipClass out;
  out.assumed_oracles = s.oracles;
  if (!s.primes.empty()) {
    if (s.primes.size() > 1) {
      out.tag = ClassTag::invalid;
      out.reason = "henselian bases with different residue characteristics";
      return out;
    }
    out.tag = ClassTag::C_p;
    out.prime = *s.primes.begin();
    out.reason = "tree contains a henselian base";
    return out;
  }
  if (s.first_non_split) {
    out.tag = ClassTag::C;
    out.reason = "blowup square at " + *s.first_non_split + " declares no split";
    return out;
  }
  out.tag = ClassTag::B;
  return out;
}

namespace {

std::optional<std::vector<Character>> weights(int count, const GroupDatum& group) {
  if (group.is_opaque()) return std::nullopt;
  const auto& lattice = group.lattice();
  std::vector<Character> out;
  for (int k = 0; k < count; ++k) {
    out.push_back(group.free_rank() >= count ? lattice.basis(static_cast<std::size_t>(k)) : lattice.zero());
  }
  return out;
}

std::optional<std::vector<Character>> trivial_weights(int count, const GroupDatum& group) {
  if (group.is_opaque()) return std::nullopt;
  return std::vector<Character>(static_cast<std::size_t>(count), group.lattice().zero());
}

void require(bool ok, const std::string& message) {
  if (!ok) throw RangeError(message);
}

}  // namespace

TreePtr projective_space(int n, const GroupDatum& group) {
  require(n >= 0, "projective_space: n must be >= 0");
  return flag_bundle(point(), {n + 1, weights(n + 1, group), std::nullopt}, {1});
}

TreePtr grassmannian(int n, int d, const GroupDatum& group) {
  require(n >= 1 && d >= 1 && d <= n, "grassmannian: need 1 <= d <= n");
  return flag_bundle(point(), {n, weights(n, group), std::nullopt}, {d});
}

TreePtr flag_variety(int n, std::vector<int> d_vec, const GroupDatum& group) {
  require(n >= 1 && !d_vec.empty(), "flag: need n >= 1 and a nonempty dimension vector");
  long long total = 0;
  for (int d : d_vec) {
    require(d >= 1, "flag: dimension vector entries must be positive");
    total += d;
  }
  require(total <= n, "flag: total dimension exceeds n");
  return flag_bundle(point(), {n, weights(n, group), std::nullopt}, std::move(d_vec));
}

TreePtr hirzebruch(int m, const GroupDatum& group) {
  require(m >= 0, "hirzebruch: m must be >= 0");
  return flag_bundle(projective_space(1, group), {2, trivial_weights(2, group), std::vector<int>{0, -m}}, {1});
}

TreePtr cusp(const GroupDatum& group) {
  return blowup(Corner::X, nullptr, projective_space(1, group), point(), point(), SplitKind::retraction);
}

TreePtr node(const GroupDatum& group) {
  std::map<int, coeff::IntMatrix> maps{{0, coeff::IntMatrix{{1, 1, 1}, {1, 1, 1}}}};
  return blowup(Corner::X, nullptr, projective_space(1, group), point(), disjoint({point(), point()}), SplitKind::none,
                std::move(maps));
}

TreePtr projective_cone(TreePtr base, int line_bundle_twist, const GroupDatum& group) {
  auto y = flag_bundle(base, {2, trivial_weights(2, group), std::vector<int>{0, line_bundle_twist}}, {1});
  return blowup(Corner::X, nullptr, std::move(y), point(), std::move(base), SplitKind::retraction);
}

TreePtr cone_of_p1(const GroupDatum& group) { return projective_cone(projective_space(1, group), 2, group); }

std::vector<std::string> library_names() {
  return {"projective_space", "P", "grassmannian", "flag", "hirzebruch", "cusp", "node", "cone_of_P1", "projective_cone"};
}

TreePtr example_library(const std::string& name, const std::vector<long long>& params, const GroupDatum& group) {
  auto arity = [&](std::size_t n) {
    if (params.size() != n) {
      throw RangeError(name + " expects " + std::to_string(n) + " integer argument(s), got " +
                       std::to_string(params.size()));
    }
  };
  if (name == "projective_space" || name == "P") {
    arity(1);
    return projective_space(static_cast<int>(params[0]), group);
  }
  if (name == "grassmannian") {
    arity(2);
    return grassmannian(static_cast<int>(params[0]), static_cast<int>(params[1]), group);
  }
  if (name == "flag") {
    require(params.size() >= 2, "flag expects n followed by a dimension vector");
    std::vector<int> d(params.begin() + 1, params.end());
    return flag_variety(static_cast<int>(params[0]), std::move(d), group);
  }
  if (name == "hirzebruch") {
    arity(1);
    return hirzebruch(static_cast<int>(params[0]), group);
  }
  if (name == "cusp") {
    arity(0);
    return cusp(group);
  }
  if (name == "node") {
    arity(0);
    return node(group);
  }
  if (name == "cone_of_P1") {
    arity(0);
    return cone_of_p1(group);
  }
  throw LookupError("unknown library entry '" + name + "'");
}

TreePtr restrict_to_trivial(const TreePtr& tree) {
  if (!tree) return tree;
  return std::visit(
      Overloaded{
          [&](const PointNode&) { return tree; },
          [&](const HenselianBaseNode&) { return tree; },
          [&](const DisjointNode& n) {
            std::vector<TreePtr> kids;
            for (const auto& c : n.children) kids.push_back(restrict_to_trivial(c));
            return disjoint(std::move(kids));
          },
          [&](const FlagBundleNode& n) {
            auto bundle = n.bundle;
            if (bundle.split_characters) {
              bundle.split_characters = std::vector<Character>(bundle.split_characters->size(), Character{});
            }
            return flag_bundle(restrict_to_trivial(n.base), std::move(bundle), n.d_vec);
          },
          [&](const StratifiedDescentNode& n) {
            return stratified_descent(restrict_to_trivial(n.total_space), n.sheaf, n.d_vec, n.oracle_rank);
          },
          [&](const BlowupNode& n) {
            return blowup(n.unknown, restrict_to_trivial(n.corners[0]), restrict_to_trivial(n.corners[1]),
                          restrict_to_trivial(n.corners[2]), restrict_to_trivial(n.corners[3]), n.split,
                          n.comparison_maps);
          },
      },
      tree->node());
}

namespace {

void print_ints(std::ostream& out, const std::vector<int>& v) {
  out << "[";
  for (std::size_t k = 0; k < v.size(); ++k) out << (k ? "," : "") << v[k];
  out << "]";
}

void print_node(std::ostream& out, const ConstructionTree& tree) {
  std::visit(Overloaded{
                 [&](const PointNode&) { out << "point"; },
                 [&](const HenselianBaseNode& n) { out << "henselian(p=" << n.prime << ")"; },
                 [&](const DisjointNode& n) {
                   out << "disjoint(";
                   for (std::size_t k = 0; k < n.children.size(); ++k) {
                     if (k) out << ", ";
                     print_node(out, *n.children[k]);
                   }
                   out << ")";
                 },
                 [&](const FlagBundleNode& n) {
                   out << "flag_bundle(";
                   print_node(out, *n.base);
                   out << ", rank=" << n.bundle.rank;
                   if (n.bundle.split_characters) {
                     out << ", chars=[";
                     for (std::size_t k = 0; k < n.bundle.split_characters->size(); ++k) {
                       out << (k ? "," : "") << "[";
                       const auto& c = (*n.bundle.split_characters)[k].coords;
                       for (std::size_t j = 0; j < c.size(); ++j) out << (j ? "," : "") << c[j];
                       out << "]";
                     }
                     out << "]";
                   }
                   if (n.bundle.twist_labels) {
                     out << ", twists=";
                     print_ints(out, *n.bundle.twist_labels);
                   }
                   out << ", d=";
                   print_ints(out, n.d_vec);
                   out << ")";
                 },
                 [&](const StratifiedDescentNode& n) {
                   out << "descent(";
                   print_node(out, *n.total_space);
                   out << ", generic=" << n.sheaf.generic_rank << ", presentation=[" << n.sheaf.source_rank << ","
                       << n.sheaf.target_rank << "], d=";
                   print_ints(out, n.d_vec);
                   if (n.oracle_rank) out << ", oracle=" << *n.oracle_rank;
                   out << ")";
                 },
                 [&](const BlowupNode& n) {
                   out << "blowup(unknown=" << corner_name(n.unknown);
                   for (std::size_t k = 0; k < 4; ++k) {
                     if (!n.corners[k]) continue;
                     out << ", " << corner_name(static_cast<Corner>(k)) << "=";
                     print_node(out, *n.corners[k]);
                   }
                   out << ", split=" << split_name(n.split);
                   if (!n.comparison_maps.empty()) {
                     out << ", maps={";
                     bool first = true;
                     for (const auto& [degree, m] : n.comparison_maps) {
                       out << (first ? "" : ", ") << degree << ": " << m.format();
                       first = false;
                     }
                     out << "}";
                   }
                   out << ")";
                 },
             },
             tree.node());
}

}  // namespace

std::string print_tree(const ConstructionTree& tree) {
  std::ostringstream out;
  print_node(out, tree);
  return out.str();
}

}  // namespace simploc::dsl
