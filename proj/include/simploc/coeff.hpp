#pragma once

// Finitely generated abelian groups, Smith normal form over Z, and graded
// coefficient tables E_*(pt).

#include "simploc/integer.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace simploc::coeff {

/// Z^r + Z/a_1 + ... + Z/a_k with a_1 | a_2 | ... | a_k and every a_i >= 2.
/// A rational group is "tensored with Q": only the free rank survives.
class FgAbGroup {
public:
  FgAbGroup() = default;

  /// Canonicalizes arbitrary factor lists: 0 entries count as free summands,
  /// units are dropped, signs ignored, the divisibility chain is rebuilt.
  static FgAbGroup make(std::int64_t free_rank, const std::vector<Integer>& factors = {}, bool rational = false);
  static FgAbGroup zero() { return {}; }
  static FgAbGroup free(std::int64_t rank) { return make(rank); }
  static FgAbGroup rational_free(std::int64_t rank) { return make(rank, {}, true); }
  static FgAbGroup cyclic(const Integer& order) { return make(0, {order}); }

  std::int64_t free_rank() const noexcept { return free_rank_; }
  const std::vector<Integer>& invariant_factors() const noexcept { return factors_; }
  bool rational() const noexcept { return rational_; }
  bool is_zero() const noexcept { return free_rank_ == 0 && factors_.empty(); }
  bool has_torsion() const noexcept { return !factors_.empty(); }

  /// Multiset of prime powers of the torsion part, sorted.
  std::vector<Integer> elementary_divisors() const;

  FgAbGroup rationalized() const { return make(free_rank_, {}, true); }

  /// "0", "Z", "Z^3 + Z/2 + Z/12", "Q^2".
  std::string format() const;

  bool operator==(const FgAbGroup&) const = default;

private:
  std::int64_t free_rank_ = 0;
  std::vector<Integer> factors_;
  bool rational_ = false;
};

/// Throws UnsupportedError when a rational and a nonzero integral group meet.
FgAbGroup direct_sum(const FgAbGroup& a, const FgAbGroup& b);

/// A (+) Z^copies.
FgAbGroup tensor_free(const FgAbGroup& a, std::int64_t copies);

/// The group C with C + b == a, when it exists (f.g. abelian groups cancel).
std::optional<FgAbGroup> cancel(const FgAbGroup& a, const FgAbGroup& b);

/// Dense integer matrix, row-major.
class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long long>> rows);
  static IntMatrix from_rows(const std::vector<std::vector<Integer>>& rows, std::size_t cols_if_empty = 0);
  static IntMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntMatrix transposed() const;
  std::vector<std::vector<Integer>> to_rows() const;
  std::string format() const;

  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);
  /// row[target] += factor * row[source]
  void add_row_multiple(std::size_t target, std::size_t source, const Integer& factor);
  void add_col_multiple(std::size_t target, std::size_t source, const Integer& factor);
  void negate_row(std::size_t r);

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  bool operator==(const IntMatrix&) const = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

/// Smith normal form: left * A * right == diagonal, with unimodular transforms
/// and positive diagonal entries d_1 | d_2 | ... | d_rank.
struct SmithForm {
  IntMatrix left;
  IntMatrix right;
  IntMatrix diagonal;
  std::vector<Integer> factors;  ///< the nonzero diagonal entries, units included
  std::size_t rank = 0;

  /// Cokernel of A viewed as a map Z^cols -> Z^rows.
  FgAbGroup cokernel() const;
  /// The kernel is free of this rank.
  std::size_t kernel_rank() const { return diagonal.cols() - rank; }
};

SmithForm snf(const IntMatrix& matrix);

struct Generator {
  std::string symbol;
  int degree = 0;
  bool invertible = false;

  bool operator==(const Generator&) const = default;
};

/// Periodic extension: for degrees within [lowest, highest] (open ends when
/// absent) the value is pattern[degree mod period].
struct Periodicity {
  int period = 1;
  std::optional<int> lowest;
  std::optional<int> highest;
  std::map<int, FgAbGroup> pattern;  ///< keyed by residue in [0, period)
  std::string witness;               ///< generator symbol realizing the shift

  bool covers(int degree) const;
  bool operator==(const Periodicity&) const = default;
};

/// Graded coefficient ring E_*(pt). Total function of the degree: anything not
/// stored (and not covered by the periodic rule) is the zero group.
class CoefficientTable {
public:
  CoefficientTable(std::string name, std::map<int, FgAbGroup> degree_groups,
                   std::optional<Periodicity> periodicity = std::nullopt, std::vector<Generator> generators = {});

  const std::string& name() const noexcept { return name_; }
  const std::map<int, FgAbGroup>& stored_groups() const noexcept { return groups_; }
  const std::optional<Periodicity>& periodicity() const noexcept { return periodicity_; }
  const std::vector<Generator>& generators() const noexcept { return generators_; }

  FgAbGroup at(int degree) const;

  /// Lowest degree with a nonzero value; nullopt when unbounded below.
  std::optional<int> lowest_nonzero_degree() const;
  std::optional<int> highest_nonzero_degree() const;
  bool has_torsion() const;
  bool is_rational() const;

  bool operator==(const CoefficientTable&) const = default;

private:
  std::string name_;
  std::map<int, FgAbGroup> groups_;
  std::optional<Periodicity> periodicity_;
  std::vector<Generator> generators_;
};

/// One of "unit", "bott", "hcminus_rational", "rational_deg0".
CoefficientTable builtin_table(std::string_view name);
std::vector<std::string> builtin_table_names();

/// Declarative table format, one record per line:
///   name <id>
///   period <p> [from <lo>] [to <hi>] [witness <symbol>]
///   generator <symbol> <degree> [invertible]
///   <degree> <free_rank> [<invariant factor> ...] [Q]
/// '#' starts a comment. With a period line, records give the repeating pattern.
CoefficientTable parse_table(std::string_view text, std::string default_name = "user");
std::string format_table(const CoefficientTable& table);

}  // namespace simploc::coeff
