#include "simploc/schubert.hpp"

#include "simploc/errors.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace simploc::schubert {

namespace {

Integer binomial(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  Integer out = 1;
  for (long long i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

std::optional<std::vector<dsl::Character>> torus_weights(int count, const dsl::GroupDatum& group, bool standard) {
  if (group.is_opaque()) return std::nullopt;
  const auto& lattice = group.lattice();
  std::vector<dsl::Character> out;
  for (int k = 0; k < count; ++k) {
    bool basis = standard && group.free_rank() >= count;
    out.push_back(basis ? lattice.basis(static_cast<std::size_t>(k)) : lattice.zero());
  }
  return out;
}

}  // namespace

void check(const FiniteSchubertDatum& datum) {
  const auto& j = datum.j_seq;
  if (datum.n < 1) throw ValidationError("schubert datum: n must be >= 1");
  if (datum.d < 0 || datum.d > datum.n) throw ValidationError("schubert datum: need 0 <= d <= n");
  if (static_cast<int>(j.size()) != datum.n + 1) {
    throw ValidationError("schubert datum: j needs n + 1 entries j_0..j_n");
  }
  if (j.front() != 0) throw ValidationError("schubert datum: j_0 must be 0");
  if (j.back() != datum.d) throw ValidationError("schubert datum: j_n must equal d");
  for (int i = 1; i <= datum.n; ++i) {
    if (j[i] < j[i - 1]) throw ValidationError("schubert datum: j must be nondecreasing");
    if (j[i] > i) throw ValidationError("schubert datum: j_" + std::to_string(i) + " exceeds " + std::to_string(i));
  }
}

FiniteSchubertDatum normalize_j(const FiniteSchubertDatum& datum) {
  check(datum);
  auto out = datum;
  for (int i = datum.n - 1; i >= 0; --i) out.j_seq[i] = std::max(out.j_seq[i], out.j_seq[i + 1] - 1);
  return out;
}

Integer bott_samelson_rank(const FiniteSchubertDatum& datum) {
  check(datum);
  Integer out = 1;
  for (int i = 1; i <= datum.n; ++i) out *= binomial(i - datum.j_seq[i - 1], datum.j_seq[i] - datum.j_seq[i - 1]);
  return out;
}

Integer cell_count_finite(const FiniteSchubertDatum& datum) {
  check(datum);
  // ways[c] = number of subsets of {1..i} of size c meeting every bound so far
  std::vector<Integer> ways(static_cast<std::size_t>(datum.d) + 1, 0);
  ways[0] = 1;
  for (int i = 1; i <= datum.n; ++i) {
    std::vector<Integer> next(ways.size(), 0);
    for (std::size_t c = 0; c < ways.size(); ++c) {
      if (ways[c] == 0) continue;
      next[c] += ways[c];
      if (c + 1 < ways.size()) next[c + 1] += ways[c];
    }
    for (std::size_t c = 0; c < next.size(); ++c)
      if (static_cast<int>(c) < datum.j_seq[i]) next[c] = 0;
    ways = std::move(next);
  }
  return ways[static_cast<std::size_t>(datum.d)];
}

dsl::TreePtr finite_schubert_tree(const FiniteSchubertDatum& datum, const dsl::GroupDatum& group) {
  check(datum);
  if (datum.d == 0) return dsl::point();
  auto tree = dsl::point();
  std::vector<int> steps;
  bool first = true;
  for (int i = 1; i <= datum.n; ++i) {
    int di = datum.j_seq[i] - datum.j_seq[i - 1];
    if (di == 0) continue;
    int rank = i - datum.j_seq[i - 1];
    tree = dsl::flag_bundle(tree, {rank, torus_weights(rank, group, first), std::nullopt}, {di});
    steps.push_back(di);
    first = false;
  }
  return dsl::stratified_descent(tree, {datum.d, 0, datum.d}, steps, cell_count_finite(datum));
}

void check(const CoweightDatum& datum) {
  if (datum.n < 1) throw ValidationError("coweight: n must be >= 1");
  if (static_cast<int>(datum.mu.size()) != datum.n) throw ValidationError("coweight: mu needs n entries");
  for (std::size_t k = 1; k < datum.mu.size(); ++k)
    if (datum.mu[k] > datum.mu[k - 1]) throw ValidationError("coweight: mu must be weakly decreasing");
}

MinusculeDecomposition minuscule_decomposition(const CoweightDatum& datum) {
  check(datum);
  MinusculeDecomposition out;
  out.twist = -datum.mu.back();
  // Columns of the partition mu + twist, largest first.
  int top = datum.mu.front() + out.twist;
  for (int level = 1; level <= top; ++level) {
    int k = static_cast<int>(std::count_if(datum.mu.begin(), datum.mu.end(),
                                           [&](int v) { return v + out.twist >= level; }));
    out.fundamentals.push_back(k);
  }
  return out;
}

Integer affine_cell_count(const CoweightDatum& datum) {
  check(datum);
  const int n = datum.n;
  std::vector<long long> prefix(static_cast<std::size_t>(n) + 1, 0);
  for (int k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + datum.mu[k];
  // state: (coordinates placed, their sum); values are assigned from mu_1 down to mu_n,
  // which lists the sorted form of nu in descending order.
  std::map<std::pair<int, long long>, Integer> states{{{0, 0}, 1}};
  for (int v = datum.mu.front(); v >= datum.mu.back(); --v) {
    std::map<std::pair<int, long long>, Integer> next;
    for (const auto& [key, ways] : states) {
      auto [m, s] = key;
      for (int c = 0; m + c <= n; ++c) {
        if (c > 0 && s + static_cast<long long>(c) * v > prefix[m + c]) break;
        next[{m + c, s + static_cast<long long>(c) * v}] += ways * binomial(n - m, c);
      }
    }
    states = std::move(next);
  }
  auto it = states.find({n, prefix[n]});
  return it == states.end() ? Integer(0) : it->second;
}

dsl::TreePtr affine_schubert_tree(const CoweightDatum& datum, const dsl::GroupDatum& group) {
  check(datum);
  auto dec = minuscule_decomposition(datum);
  if (dec.fundamentals.empty()) return dsl::point();
  auto weights = torus_weights(datum.n, group, true);
  int k1 = dec.fundamentals.front();
  if (dec.fundamentals.size() == 1) return dsl::flag_bundle(dsl::point(), {datum.n, weights, std::nullopt}, {k1});
  CoweightDatum lambda{datum.n, {}};
  for (int k = 0; k < datum.n; ++k) lambda.mu.push_back(datum.mu[k] + dec.twist - (k < k1 ? 1 : 0));
  auto y = dsl::flag_bundle(affine_schubert_tree(lambda, group), {datum.n, weights, std::nullopt}, {k1});
  int size = std::accumulate(datum.mu.begin(), datum.mu.end(), 0) + dec.twist * datum.n;
  return dsl::stratified_descent(y, {k1, size, size}, {k1}, affine_cell_count(datum));
}

}  // namespace simploc::schubert
