#include "simploc/engine.hpp"
#include "simploc/errors.hpp"

#include <numeric>
#include <sstream>

namespace simploc::engine {

using dsl::BlowupNode;
using dsl::ClassTag;
using dsl::Corner;
using dsl::DisjointNode;
using dsl::FlagBundleNode;
using dsl::HenselianBaseNode;
using dsl::NodePath;
using dsl::PointNode;
using dsl::SplitKind;
using dsl::StratifiedDescentNode;

Integer sod_count(int rank, const std::vector<int>& d_vec) {
  if (rank < 1) throw RangeError("sod_count: rank must be >= 1");
  long long total = 0;
  for (int d : d_vec) {
    if (d < 1) throw RangeError("sod_count: dimension vector entries must be >= 1");
    total += d;
  }
  if (total > rank) throw RangeError("sod_count: sum of the dimension vector exceeds the rank");
  auto factorial = [](long long n) {
    Integer f = 1;
    for (long long k = 2; k <= n; ++k) f *= k;
    return f;
  };
  Integer denom = factorial(rank - total);
  for (int d : d_vec) denom *= factorial(d);
  return factorial(rank) / denom;
}

namespace {

std::string join_violations(const std::vector<dsl::Violation>& vs) {
  std::string out = "invalid tree:";
  for (const auto& v : vs) out += " [" + v.path + "] " + v.rule + ";";
  return out;
}

void require_valid(const ConstructionTree& tree, const GroupDatum& group) {
  auto vs = dsl::validate(tree, group);
  if (!vs.empty()) throw ValidationError(join_violations(vs));
}

std::size_t checked_size(const Integer& v, const NodePath& path) {
  if (v > Integer(1'000'000)) throw UnsupportedError("rank at " + path + " too large to enumerate a basis");
  return static_cast<std::size_t>(v);
}

// Degree-0 rank recursion over the rules that preserve freeness.
class Degree0Evaluator {
public:
  std::vector<std::string> provenance;
  std::vector<NodePath> oracles;

  std::vector<std::string> eval(const ConstructionTree& tree, const NodePath& path) {
    if (tree.as<PointNode>()) return {"pt"};
    if (tree.as<HenselianBaseNode>()) {
      throw UnsupportedError("henselian base at " + path + " is classification-only");
    }
    if (auto n = tree.as<DisjointNode>()) {
      std::vector<std::string> out;
      for (std::size_t k = 0; k < n->children.size(); ++k) {
        for (auto& label : eval(*n->children[k], dsl::child_path(path, k))) {
          out.push_back("s" + std::to_string(k) + "." + label);
        }
      }
      provenance.push_back("disjoint at " + path + ": rank " + std::to_string(out.size()));
      return out;
    }
    if (auto n = tree.as<FlagBundleNode>()) {
      auto base = eval(*n->base, dsl::child_path(path, 0));
      auto pieces = checked_size(sod_count(n->bundle.rank, n->d_vec), path);
      std::vector<std::string> out;
      for (std::size_t j = 0; j < pieces; ++j)
        for (const auto& label : base) out.push_back(label + "*c" + std::to_string(j));
      provenance.push_back("flag bundle at " + path + ": " + std::to_string(pieces) + " semiorthogonal pieces");
      return out;
    }
    if (auto n = tree.as<StratifiedDescentNode>()) {
      auto total = eval(*n->total_space, dsl::child_path(path, 0));
      if (!n->oracle_rank) throw UnderdeterminedError("rank undetermined: summand certificate only (descent at " + path + ")");
      if (*n->oracle_rank > Integer(total.size())) {
        throw ValidationError("descent at " + path + ": oracle rank " + to_string(*n->oracle_rank) +
                              " exceeds the rank of the total space (" + std::to_string(total.size()) + ")");
      }
      oracles.push_back(path);
      provenance.push_back("descent at " + path + ": rank " + to_string(*n->oracle_rank) + " from oracle");
      std::vector<std::string> out;
      auto r = checked_size(*n->oracle_rank, path);
      for (std::size_t k = 0; k < r; ++k) out.push_back("d" + path + "#" + std::to_string(k));
      return out;
    }
    const auto& b = std::get<BlowupNode>(tree.node());
    if (b.split == SplitKind::none) {
      throw InternalError("non-split blowup at " + path + " reached the split-square rank rule");
    }
    std::map<Corner, long long> rank;
    std::size_t child = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      auto c = static_cast<Corner>(k);
      if (c == b.unknown) continue;
      rank[c] = static_cast<long long>(eval(*b.corners[k], dsl::child_path(path, child++)).size());
    }
    // rank X + rank E = rank Y + rank Z
    long long r = 0;
    switch (b.unknown) {
      case Corner::X: r = rank[Corner::Y] + rank[Corner::Z] - rank[Corner::E]; break;
      case Corner::Y: r = rank[Corner::X] + rank[Corner::E] - rank[Corner::Z]; break;
      case Corner::Z: r = rank[Corner::X] + rank[Corner::E] - rank[Corner::Y]; break;
      case Corner::E: r = rank[Corner::Y] + rank[Corner::Z] - rank[Corner::X]; break;
    }
    if (r < 0) throw ValidationError("inconsistent split data at " + path + ": negative rank for corner " +
                                     dsl::corner_name(b.unknown));
    provenance.push_back("split blowup at " + path + " (" + dsl::split_name(b.split) + "): corner " +
                         dsl::corner_name(b.unknown) + " has rank " + std::to_string(r));
    std::vector<std::string> out;
    for (long long k = 0; k < r; ++k) out.push_back("b" + path + "#" + std::to_string(k));
    return out;
  }
};

int nonsplit_depth(const ConstructionTree& tree) {
  int best = 0;
  for (const auto& kid : tree.children())
    if (kid) best = std::max(best, nonsplit_depth(*kid));
  auto b = tree.as<BlowupNode>();
  return best + (b && b->split == SplitKind::none ? 1 : 0);
}

using Window = std::map<int, FgAbGroup>;

// Explicit degreewise evaluation for trivial G.
class ExplicitEvaluator {
public:
  explicit ExplicitEvaluator(const CoefficientTable& table) : table_(table) {}

  std::vector<std::string> provenance;
  std::vector<NodePath> oracles;

  Window eval(const ConstructionTree& tree, const NodePath& path, int lo, int hi) {
    if (dsl::classify(tree).tag == ClassTag::B) {
      Degree0Evaluator d0;
      auto rank = static_cast<std::int64_t>(d0.eval(tree, path).size());
      oracles.insert(oracles.end(), d0.oracles.begin(), d0.oracles.end());
      provenance.insert(provenance.end(), d0.provenance.begin(), d0.provenance.end());
      Window out;
      for (int i = lo; i <= hi; ++i) out[i] = tensor_free(table_.at(i), rank);
      return out;
    }
    if (auto n = tree.as<DisjointNode>()) {
      Window out;
      for (int i = lo; i <= hi; ++i) out[i] = FgAbGroup::zero();
      for (std::size_t k = 0; k < n->children.size(); ++k) {
        auto part = eval(*n->children[k], dsl::child_path(path, k), lo, hi);
        for (int i = lo; i <= hi; ++i) out[i] = direct_sum(out[i], part[i]);
      }
      return out;
    }
    if (auto n = tree.as<FlagBundleNode>()) {
      auto base = eval(*n->base, dsl::child_path(path, 0), lo, hi);
      auto pieces = sod_count(n->bundle.rank, n->d_vec);
      Window out;
      for (int i = lo; i <= hi; ++i) {
        out[i] = FgAbGroup::zero();
        for (Integer k = 0; k < pieces; ++k) out[i] = direct_sum(out[i], base[i]);
      }
      provenance.push_back("flag bundle at " + path + ": " + to_string(pieces) + " copies of the base");
      return out;
    }
    if (tree.as<StratifiedDescentNode>()) {
      throw UnderdeterminedError("rank undetermined: summand certificate only (descent over a class-C total space at " +
                                 path + ")");
    }
    if (tree.as<HenselianBaseNode>() || tree.as<PointNode>()) {
      throw InternalError("unexpected leaf in explicit evaluation at " + path);
    }
    const auto& b = std::get<BlowupNode>(tree.node());
    return b.split == SplitKind::none ? eval_nonsplit(b, path, lo, hi) : eval_split(b, path, lo, hi);
  }

private:
  std::map<Corner, Window> corners(const BlowupNode& b, const NodePath& path, int lo, int hi) {
    std::map<Corner, Window> out;
    std::size_t child = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      auto c = static_cast<Corner>(k);
      if (c == b.unknown) continue;
      out[c] = eval(*b.corners[k], dsl::child_path(path, child++), lo, hi);
    }
    return out;
  }

  Window eval_split(const BlowupNode& b, const NodePath& path, int lo, int hi) {
    auto v = corners(b, path, lo, hi);
    Window out;
    for (int i = lo; i <= hi; ++i) {
      // X + E = Y + Z degreewise
      std::optional<FgAbGroup> r;
      auto at = [&](Corner c) { return v[c][i]; };
      switch (b.unknown) {
        case Corner::X: r = cancel(direct_sum(at(Corner::Y), at(Corner::Z)), at(Corner::E)); break;
        case Corner::Y: r = cancel(direct_sum(at(Corner::X), at(Corner::E)), at(Corner::Z)); break;
        case Corner::Z: r = cancel(direct_sum(at(Corner::X), at(Corner::E)), at(Corner::Y)); break;
        case Corner::E: r = cancel(direct_sum(at(Corner::Y), at(Corner::Z)), at(Corner::X)); break;
      }
      if (!r) {
        throw ValidationError("inconsistent split data at " + path + " in degree " + std::to_string(i));
      }
      out[i] = *r;
    }
    provenance.push_back("split blowup at " + path + ": corner " + dsl::corner_name(b.unknown) +
                         " by cancellation in degrees " + std::to_string(lo) + ".." + std::to_string(hi));
    return out;
  }

  Window eval_nonsplit(const BlowupNode& b, const NodePath& path, int lo, int hi) {
    if (b.unknown != Corner::X) {
      throw UnsupportedError("non-split blowup at " + path + ": only an unknown X corner can be solved");
    }
    auto v = corners(b, path, lo, hi + 1);
    BlowupSequence seq{v[Corner::Y], v[Corner::Z], v[Corner::E], b.comparison_maps};
    try {
      auto out = solve_blowup_sequence(seq, lo, hi);
      provenance.push_back("long exact sequence at " + path + " in degrees " + std::to_string(lo) + ".." +
                           std::to_string(hi));
      return out;
    } catch (const UnderdeterminedError& e) {
      throw UnderdeterminedError(std::string(e.what()) + " (blowup at " + path + ")");
    }
  }

  CoefficientTable table_;
};

}  // namespace

Degree0Module compute_degree0(const ConstructionTree& tree, const GroupDatum& group) {
  require_valid(tree, group);
  auto cls = dsl::classify(tree);
  switch (cls.tag) {
    case ClassTag::invalid: throw ValidationError("invalid tree: " + cls.reason);
    case ClassTag::C_p: throw UnsupportedError("class C_p trees carry no computable module (" + cls.reason + ")");
    case ClassTag::B: {
      Degree0Evaluator ev;
      auto labels = ev.eval(tree, "/");
      return {std::move(labels), std::move(ev.oracles)};
    }
    case ClassTag::C: break;
  }
  if (!group.is_trivial()) {
    throw UnsupportedError("degree-0 module of a class C tree needs the trivial group (" + cls.reason + ")");
  }
  ExplicitEvaluator ev(coeff::builtin_table("unit"));
  auto value = ev.eval(tree, "/", 0, 0).at(0);
  if (value.has_torsion() || value.rational()) {
    throw InternalError("degree-0 value " + value.format() + " is not free");
  }
  Degree0Module out;
  for (std::int64_t k = 0; k < value.free_rank(); ++k) out.basis_labels.push_back("les#" + std::to_string(k));
  out.assumed_oracles = std::move(ev.oracles);
  return out;
}

GradedModuleValue::GradedModuleValue(std::variant<FormalShape, ExplicitShape> shape, std::vector<std::string> provenance,
                                     std::vector<dsl::NodePath> assumed_oracles)
    : shape_(std::move(shape)), provenance_(std::move(provenance)), assumed_oracles_(std::move(assumed_oracles)) {}

FgAbGroup GradedModuleValue::at(int degree) const {
  if (auto f = std::get_if<FormalShape>(&shape_)) {
    return tensor_free(f->table.at(degree), static_cast<std::int64_t>(f->degree0.rank()));
  }
  const auto& e = std::get<ExplicitShape>(shape_);
  if (degree < e.lowest || degree > e.highest) {
    throw RangeError("degree " + std::to_string(degree) + " outside the computed window " + std::to_string(e.lowest) +
                     ".." + std::to_string(e.highest));
  }
  return e.groups.at(degree);
}

GradedModuleValue compute_graded(const ConstructionTree& tree, const GroupDatum& group, const CoefficientTable& table,
                                 DegreeRange range) {
  if (range.lowest > range.highest) throw RangeError("empty degree range");
  require_valid(tree, group);
  auto cls = dsl::classify(tree);
  switch (cls.tag) {
    case ClassTag::invalid: throw ValidationError("invalid tree: " + cls.reason);
    case ClassTag::C_p: throw UnsupportedError("class C_p trees carry no computable module (" + cls.reason + ")");
    case ClassTag::B: {
      Degree0Evaluator ev;
      auto labels = ev.eval(tree, "/");
      auto provenance = std::move(ev.provenance);
      provenance.push_back("formal: degree i is " + table.name() + "[i] tensored with Z^" +
                           std::to_string(labels.size()));
      auto oracles = ev.oracles;
      return GradedModuleValue(FormalShape{{std::move(labels), ev.oracles}, table}, std::move(provenance),
                               std::move(oracles));
    }
    case ClassTag::C: break;
  }
  if (!group.is_trivial()) {
    throw UnsupportedError("graded value of a class C tree needs the trivial group; only rank bounds are available (" +
                           cls.reason + ")");
  }
  ExplicitEvaluator ev(table);
  ExplicitShape shape{range.lowest, range.highest, ev.eval(tree, "/", range.lowest, range.highest)};
  for (auto it = shape.groups.begin(); it != shape.groups.end();) {
    if (it->first < range.lowest || it->first > range.highest) it = shape.groups.erase(it);
    else ++it;
  }
  return GradedModuleValue(std::move(shape), std::move(ev.provenance), std::move(ev.oracles));
}

GradedModuleValue fixture_value(const CoefficientTable& table, DegreeRange range) {
  if (range.lowest > range.highest) throw RangeError("empty degree range");
  ExplicitShape shape{range.lowest, range.highest, {}};
  for (int i = range.lowest; i <= range.highest; ++i) shape.groups[i] = table.at(i);
  return GradedModuleValue(std::move(shape), {"fixture: values of table " + table.name()}, {});
}

// ----- long exact sequence --------------------------------------------------

namespace {

FgAbGroup lookup(const std::map<int, FgAbGroup>& m, int degree, const char* corner) {
  auto it = m.find(degree);
  if (it == m.end()) {
    throw RangeError(std::string("corner ") + corner + " has no value in degree " + std::to_string(degree));
  }
  return it->second;
}

std::int64_t free_dimension(const FgAbGroup& g, const char* corner, int degree) {
  if (g.has_torsion()) {
    throw UnsupportedError(std::string("corner ") + corner + " has torsion in degree " + std::to_string(degree) +
                           "; the long exact sequence needs free or rational corners");
  }
  return g.free_rank();
}

bool any_rational(const BlowupSequence& seq, int degree) {
  return lookup(seq.y, degree, "Y").rational() || lookup(seq.z, degree, "Z").rational() ||
         lookup(seq.e, degree, "E").rational();
}

}  // namespace

IntMatrix comparison_map(const BlowupSequence& seq, int degree) {
  auto src = static_cast<std::size_t>(free_dimension(lookup(seq.y, degree, "Y"), "Y", degree) +
                                      free_dimension(lookup(seq.z, degree, "Z"), "Z", degree));
  auto tgt = static_cast<std::size_t>(free_dimension(lookup(seq.e, degree, "E"), "E", degree));
  if (src == 0 || tgt == 0) return IntMatrix(tgt, src);
  auto it = seq.maps.find(degree);
  if (it == seq.maps.end()) {
    throw UnderdeterminedError("underdetermined long exact sequence: no comparison map in degree " +
                               std::to_string(degree));
  }
  if (it->second.rows() != tgt || it->second.cols() != src) {
    throw ValidationError("comparison map in degree " + std::to_string(degree) + " is " +
                          std::to_string(it->second.rows()) + "x" + std::to_string(it->second.cols()) + ", expected " +
                          std::to_string(tgt) + "x" + std::to_string(src));
  }
  return it->second;
}

std::map<int, FgAbGroup> solve_blowup_sequence(const BlowupSequence& seq, int lowest, int highest) {
  std::map<int, FgAbGroup> out;
  for (int i = lowest; i <= highest; ++i) {
    auto phi = comparison_map(seq, i);
    auto next = comparison_map(seq, i + 1);
    auto kernel = FgAbGroup::free(static_cast<std::int64_t>(snf(phi).kernel_rank()));
    auto coker = snf(next).cokernel();
    bool rational = any_rational(seq, i) || any_rational(seq, i + 1);
    if (rational) {
      kernel = kernel.is_zero() ? kernel : kernel.rationalized();
      coker = coker.free_rank() == 0 ? FgAbGroup::zero() : coker.rationalized();
    }
    out[i] = direct_sum(coker, kernel);
  }
  return out;
}

SequenceSegment sequence_segment(const BlowupSequence& seq, int degree) {
  auto phi = comparison_map(seq, degree);
  auto phi_next = comparison_map(seq, degree + 1);
  auto phi_prev = comparison_map(seq, degree - 1);
  auto s = snf(phi);
  auto s_next = snf(phi_next);
  auto s_prev = snf(phi_prev);

  // X_i = coker(phi_{i+1}) free part + ker(phi_i); alpha_i is zero on the first block.
  std::size_t coker_i = phi_next.rows() - s_next.rank;
  std::size_t ker_i = phi.cols() - s.rank;
  IntMatrix alpha(phi.cols(), coker_i + ker_i);
  for (std::size_t k = 0; k < ker_i; ++k)
    for (std::size_t r = 0; r < phi.cols(); ++r) alpha(r, coker_i + k) = s.right(r, s.rank + k);

  // X_{i-1} = coker(phi_i) free part + ker(phi_{i-1}); boundary projects E_i onto the first block.
  std::size_t coker_prev = phi.rows() - s.rank;
  std::size_t ker_prev = phi_prev.cols() - s_prev.rank;
  IntMatrix boundary(coker_prev + ker_prev, phi.rows());
  for (std::size_t k = 0; k < coker_prev; ++k)
    for (std::size_t c = 0; c < phi.rows(); ++c) boundary(k, c) = s.left(s.rank + k, c);
  return {alpha, phi, boundary};
}

std::size_t rational_rank(const IntMatrix& m) {
  // Fraction-free elimination.
  IntMatrix a = m;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < a.cols() && rank < a.rows(); ++c) {
    std::size_t pivot = rank;
    while (pivot < a.rows() && a(pivot, c) == 0) ++pivot;
    if (pivot == a.rows()) continue;
    a.swap_rows(rank, pivot);
    for (std::size_t r = rank + 1; r < a.rows(); ++r) {
      if (a(r, c) == 0) continue;
      Integer f = a(r, c), p = a(rank, c);
      for (std::size_t k = c; k < a.cols(); ++k) a(r, k) = a(r, k) * p - a(rank, k) * f;
    }
    ++rank;
  }
  return rank;
}

// ----- class-B refutation -----------------------------------------------------

std::optional<dsl::NotInBEvidence> refute_membership_B(const ConstructionTree& tree) {
  if (dsl::classify(tree).tag != ClassTag::C) return std::nullopt;
  auto self = std::shared_ptr<const ConstructionTree>(&tree, [](const ConstructionTree*) {});
  auto restricted = dsl::restrict_to_trivial(self);
  int depth = nonsplit_depth(*restricted);
  try {
    auto value = compute_graded(*restricted, GroupDatum::trivial(), coeff::builtin_table("unit"), {-(depth + 1), -1});
    for (int i = -1; i >= -(depth + 1); --i) {
      auto g = value.at(i);
      if (!g.is_zero()) return dsl::NotInBEvidence{i, g};
    }
  } catch (const UnderdeterminedError&) {
    return std::nullopt;
  } catch (const UnsupportedError&) {
    return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace simploc::engine
