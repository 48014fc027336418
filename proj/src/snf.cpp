#include "simploc/coeff.hpp"
#include "simploc/errors.hpp"

#include <sstream>

namespace simploc::coeff {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw ValidationError("IntMatrix: ragged rows");
    for (auto v : row) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<Integer>>& rows, std::size_t cols_if_empty) {
  IntMatrix m(rows.size(), rows.empty() ? cols_if_empty : rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols_) throw ValidationError("IntMatrix: ragged rows");
    for (std::size_t c = 0; c < m.cols_; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t k = 0; k < n; ++k) m(k, k) = 1;
  return m;
}

IntMatrix IntMatrix::transposed() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

std::vector<std::vector<Integer>> IntMatrix::to_rows() const {
  std::vector<std::vector<Integer>> out(rows_, std::vector<Integer>(cols_));
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out[r][c] = (*this)(r, c);
  return out;
}

std::string IntMatrix::format() const {
  std::ostringstream out;
  out << "[";
  for (std::size_t r = 0; r < rows_; ++r) {
    out << (r ? ", [" : "[");
    for (std::size_t c = 0; c < cols_; ++c) out << (c ? "," : "") << (*this)(r, c);
    out << "]";
  }
  out << "]";
  return out.str();
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
}

void IntMatrix::swap_cols(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, a), (*this)(r, b));
}

void IntMatrix::add_row_multiple(std::size_t target, std::size_t source, const Integer& factor) {
  if (factor == 0) return;
  for (std::size_t c = 0; c < cols_; ++c) (*this)(target, c) += factor * (*this)(source, c);
}

void IntMatrix::add_col_multiple(std::size_t target, std::size_t source, const Integer& factor) {
  if (factor == 0) return;
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, target) += factor * (*this)(r, source);
}

void IntMatrix::negate_row(std::size_t r) {
  for (std::size_t c = 0; c < cols_; ++c) (*this)(r, c) = -(*this)(r, c);
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw ValidationError("IntMatrix: dimension mismatch in product");
  IntMatrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(r, k) == 0) continue;
      for (std::size_t c = 0; c < b.cols(); ++c) out(r, c) += a(r, k) * b(k, c);
    }
  return out;
}

FgAbGroup SmithForm::cokernel() const {
  return FgAbGroup::make(static_cast<std::int64_t>(diagonal.rows() - rank), factors);
}

namespace {

Integer abs_value(const Integer& v) { return v < 0 ? Integer(-v) : v; }

// Row operations act on (work, left); column operations on (work, right).
struct Reducer {
  IntMatrix work;
  IntMatrix left;
  IntMatrix right;

  void swap_rows(std::size_t a, std::size_t b) {
    work.swap_rows(a, b);
    left.swap_rows(a, b);
  }
  void swap_cols(std::size_t a, std::size_t b) {
    work.swap_cols(a, b);
    right.swap_cols(a, b);
  }
  void add_row(std::size_t target, std::size_t source, const Integer& f) {
    work.add_row_multiple(target, source, f);
    left.add_row_multiple(target, source, f);
  }
  void add_col(std::size_t target, std::size_t source, const Integer& f) {
    work.add_col_multiple(target, source, f);
    right.add_col_multiple(target, source, f);
  }

  // Smallest nonzero |entry| in the lower-right block starting at t.
  bool move_min_to_pivot(std::size_t t) {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t r = t; r < work.rows(); ++r)
      for (std::size_t c = t; c < work.cols(); ++c) {
        if (work(r, c) == 0) continue;
        if (!best || abs_value(work(r, c)) < abs_value(work(best->first, best->second))) best = {r, c};
      }
    if (!best) return false;
    swap_rows(t, best->first);
    swap_cols(t, best->second);
    return true;
  }

  // Clears row t and column t beyond the pivot. Returns false when a nonzero
  // remainder survived (the pivot must then be replaced by a smaller entry).
  bool clear_cross(std::size_t t) {
    bool clean = true;
    for (std::size_t r = t + 1; r < work.rows(); ++r) {
      if (work(r, t) == 0) continue;
      add_row(r, t, -(work(r, t) / work(t, t)));
      if (work(r, t) != 0) clean = false;
    }
    for (std::size_t c = t + 1; c < work.cols(); ++c) {
      if (work(t, c) == 0) continue;
      add_col(c, t, -(work(t, c) / work(t, t)));
      if (work(t, c) != 0) clean = false;
    }
    return clean;
  }

  void pull_smallest_cross_entry(std::size_t t) {
    std::size_t best_r = t, best_c = t;
    Integer best = abs_value(work(t, t));
    for (std::size_t r = t + 1; r < work.rows(); ++r)
      if (work(r, t) != 0 && abs_value(work(r, t)) < best) {
        best = abs_value(work(r, t));
        best_r = r;
        best_c = t;
      }
    for (std::size_t c = t + 1; c < work.cols(); ++c)
      if (work(t, c) != 0 && abs_value(work(t, c)) < best) {
        best = abs_value(work(t, c));
        best_r = t;
        best_c = c;
      }
    swap_rows(t, best_r);
    swap_cols(t, best_c);
  }

  std::optional<std::size_t> non_divisible_row(std::size_t t) const {
    for (std::size_t r = t + 1; r < work.rows(); ++r)
      for (std::size_t c = t + 1; c < work.cols(); ++c)
        if (work(r, c) % work(t, t) != 0) return r;
    return std::nullopt;
  }
};

}  // namespace

SmithForm snf(const IntMatrix& matrix) {
  Reducer red{matrix, IntMatrix::identity(matrix.rows()), IntMatrix::identity(matrix.cols())};
  std::size_t t = 0;
  const std::size_t limit = std::min(matrix.rows(), matrix.cols());
  while (t < limit && red.move_min_to_pivot(t)) {
    for (;;) {
      if (!red.clear_cross(t)) {
        red.pull_smallest_cross_entry(t);
        continue;
      }
      if (auto r = red.non_divisible_row(t)) {
        red.add_row(t, *r, 1);
        continue;
      }
      break;
    }
    if (red.work(t, t) < 0) {
      red.work.negate_row(t);
      red.left.negate_row(t);
    }
    ++t;
  }
  SmithForm out;
  out.rank = t;
  for (std::size_t k = 0; k < t; ++k) out.factors.push_back(red.work(k, k));
  out.diagonal = std::move(red.work);
  out.left = std::move(red.left);
  out.right = std::move(red.right);
  return out;
}

}  // namespace simploc::coeff
