#pragma once

// Schubert varieties in finite and affine Grassmannians as construction trees,
// with cell counts from dynamic programming.

#include "simploc/dsl.hpp"

#include <vector>

namespace simploc::schubert {

/// X_j(d) in Gr(n, d): d-planes W with dim(W cap C^i) >= j_i.
/// j_seq has entries j_0..j_n with j_0 = 0 and j_n = d.
struct FiniteSchubertDatum {
  int n = 0;
  int d = 0;
  std::vector<int> j_seq;
};

/// ValidationError unless j_0 = 0, j_n = d, j is nondecreasing and j_i <= i.
void check(const FiniteSchubertDatum& datum);

/// Replaces j by the sequence the incidence conditions actually force:
/// j_i := max(j_i, j_{i+1} - 1), computed downward.
FiniteSchubertDatum normalize_j(const FiniteSchubertDatum& datum);

/// Rank of the Bott-Samelson resolution: prod_i C(i - j_{i-1}, j_i - j_{i-1}).
/// Every term is 1 when j_i = j_{i-1}.
Integer bott_samelson_rank(const FiniteSchubertDatum& datum);

/// Number of Schubert cells in X_j(d): d-subsets S of {1..n} with
/// |S cap {1..i}| >= j_i for all i.
Integer cell_count_finite(const FiniteSchubertDatum& datum);

/// Bott-Samelson tower topped by a descent node carrying cell_count_finite as oracle.
dsl::TreePtr finite_schubert_tree(const FiniteSchubertDatum& datum, const dsl::GroupDatum& group);

/// Dominant coweight mu_1 >= ... >= mu_n of GL_n.
struct CoweightDatum {
  int n = 0;
  std::vector<int> mu;
};

/// ValidationError unless mu has n weakly decreasing entries.
void check(const CoweightDatum& datum);

struct MinusculeDecomposition {
  std::vector<int> fundamentals;  ///< k_1 >= k_2 >= ... with mu + twist*(1..1) = sum omega_{k_j}
  int twist = 0;
};

MinusculeDecomposition minuscule_decomposition(const CoweightDatum& datum);

/// Number of cells in Gr_{<= mu}: coweights lambda in the W-orbits of the
/// dominant weights below mu, i.e. integer vectors whose sorted form is
/// dominated by mu.
Integer affine_cell_count(const CoweightDatum& datum);

/// Convolution tower over minuscule steps, topped by a descent node with
/// affine_cell_count as oracle.
dsl::TreePtr affine_schubert_tree(const CoweightDatum& datum, const dsl::GroupDatum& group);

}  // namespace simploc::schubert
