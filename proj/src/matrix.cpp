#include "rre/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rre/rng.hpp"

namespace rre {

namespace {

// Sum of f(|entry|) with magnitudes accumulated in ascending sorted order.
// Sorting makes the result a function of the entry multiset alone, so
// permuted copies of a matrix report bit-identical norms.
template <typename Fn>
double sorted_accumulate(const std::vector<double>& values, Fn&& f) {
  std::vector<double> mags(values.size());
  std::transform(values.begin(), values.end(), mags.begin(),
                 [](double v) { return std::abs(v); });
  std::sort(mags.begin(), mags.end());
  double sum = 0.0;
  for (double m : mags) sum += f(m);
  return sum;
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double value)
    : rows_(rows), cols_(cols), values_(rows * cols, value) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw std::invalid_argument("Matrix: value count does not match dimensions");
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

bool Matrix::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double matrix_vector_norm(const Matrix& m, NormKind kind) {
  if (!m.all_finite()) throw std::invalid_argument("matrix_vector_norm: non-finite entry");
  switch (kind) {
    case NormKind::L1:
      return sorted_accumulate(m.values(), [](double v) { return v; });
    case NormKind::L2:
      return std::sqrt(sorted_accumulate(m.values(), [](double v) { return v * v; }));
    case NormKind::LInf: {
      double mx = 0.0;
      for (double v : m.values()) mx = std::max(mx, std::abs(v));
      return mx;
    }
  }
  throw std::invalid_argument("matrix_vector_norm: unknown norm kind");
}

double frobenius_norm(const Matrix& m) { return matrix_vector_norm(m, NormKind::L2); }

double max_abs_difference(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("max_abs_difference: shape mismatch");
  }
  double mx = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k) {
    mx = std::max(mx, std::abs(a.values()[k] - b.values()[k]));
  }
  return mx;
}

Permutation::Permutation(std::vector<std::size_t> mapping) : mapping_(std::move(mapping)) {
  std::vector<bool> seen(mapping_.size(), false);
  for (std::size_t v : mapping_) {
    if (v >= mapping_.size() || seen[v]) {
      throw std::invalid_argument("Permutation: mapping is not a bijection");
    }
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> m(n);
  std::iota(m.begin(), m.end(), std::size_t{0});
  return Permutation(std::move(m));
}

Permutation Permutation::random(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::size_t> m(n);
  std::iota(m.begin(), m.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.uniform_index(i));
    std::swap(m[i - 1], m[j]);
  }
  return Permutation(std::move(m));
}

Permutation Permutation::inverse() const {
  std::vector<std::size_t> inv(mapping_.size());
  for (std::size_t i = 0; i < mapping_.size(); ++i) inv[mapping_[i]] = i;
  return Permutation(std::move(inv));
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < mapping_.size(); ++i) {
    if (mapping_[i] != i) return false;
  }
  return true;
}

void AdjacencyMatrix::validate(bool allow_negative) const {
  if (rows_ == 0 || cols_ == 0) {
    throw std::invalid_argument("AdjacencyMatrix: dimensions must be at least 1x1");
  }
  auto check = [&](double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("AdjacencyMatrix: non-finite entry");
    if (!allow_negative && v < 0.0) {
      throw std::invalid_argument("AdjacencyMatrix: negative entry");
    }
  };
  if (layout_ == Layout::Dense) {
    for (double v : dense_) check(v);
  } else {
    for (const auto& e : entries_) check(e.value);
  }
}

AdjacencyMatrix AdjacencyMatrix::dense(std::size_t rows, std::size_t cols,
                                       std::vector<double> values) {
  return dense(Matrix(rows, cols, std::move(values)));
}

AdjacencyMatrix AdjacencyMatrix::dense(Matrix m) {
  AdjacencyMatrix a;
  a.layout_ = Layout::Dense;
  a.rows_ = m.rows();
  a.cols_ = m.cols();
  a.dense_ = std::move(m.values());
  a.validate(false);
  return a;
}

AdjacencyMatrix AdjacencyMatrix::dense_signed(Matrix m) {
  AdjacencyMatrix a;
  a.layout_ = Layout::Dense;
  a.rows_ = m.rows();
  a.cols_ = m.cols();
  a.dense_ = std::move(m.values());
  a.validate(true);
  return a;
}

AdjacencyMatrix AdjacencyMatrix::sparse(std::size_t rows, std::size_t cols,
                                        std::vector<SparseEntry> entries) {
  AdjacencyMatrix a;
  a.layout_ = Layout::Sparse;
  a.rows_ = rows;
  a.cols_ = cols;
  std::erase_if(entries, [](const SparseEntry& e) { return e.value == 0.0; });
  std::sort(entries.begin(), entries.end(), [](const SparseEntry& x, const SparseEntry& y) {
    return x.row != y.row ? x.row < y.row : x.col < y.col;
  });
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    if (e.row >= rows || e.col >= cols) {
      throw std::invalid_argument("AdjacencyMatrix: sparse entry out of range");
    }
    if (k > 0 && entries[k - 1].row == e.row && entries[k - 1].col == e.col) {
      throw std::invalid_argument("AdjacencyMatrix: duplicate sparse entry");
    }
  }
  a.entries_ = std::move(entries);
  a.row_start_.assign(rows + 1, 0);
  for (const auto& e : a.entries_) ++a.row_start_[e.row + 1];
  for (std::size_t i = 0; i < rows; ++i) a.row_start_[i + 1] += a.row_start_[i];
  a.validate(false);
  return a;
}

double AdjacencyMatrix::at(std::size_t i, std::size_t j) const {
  if (layout_ == Layout::Dense) return dense_[i * cols_ + j];
  auto begin = entries_.begin() + static_cast<std::ptrdiff_t>(row_start_[i]);
  auto end = entries_.begin() + static_cast<std::ptrdiff_t>(row_start_[i + 1]);
  auto it = std::lower_bound(begin, end, j,
                             [](const SparseEntry& e, std::size_t col) { return e.col < col; });
  return (it != end && it->col == j) ? it->value : 0.0;
}

std::size_t AdjacencyMatrix::nonzero_count() const {
  if (layout_ == Layout::Sparse) return entries_.size();
  return static_cast<std::size_t>(
      std::count_if(dense_.begin(), dense_.end(), [](double v) { return v != 0.0; }));
}

double AdjacencyMatrix::density() const {
  return static_cast<double>(nonzero_count()) / (static_cast<double>(rows_) * static_cast<double>(cols_));
}

double AdjacencyMatrix::min_entry() const {
  if (layout_ == Layout::Dense) {
    double mn = dense_[0];
    for (double v : dense_) mn = std::min(mn, v);
    return mn;
  }
  // Implicit zeros count unless every cell has an explicit entry.
  double mn = entries_.size() == rows_ * cols_ ? entries_[0].value : 0.0;
  for (const auto& e : entries_) mn = std::min(mn, e.value);
  return mn;
}

Matrix AdjacencyMatrix::to_matrix() const {
  Matrix m(rows_, cols_, 0.0);
  if (layout_ == Layout::Dense) {
    m.values() = dense_;
  } else {
    for (const auto& e : entries_) m(e.row, e.col) = e.value;
  }
  return m;
}

AdjacencyMatrix AdjacencyMatrix::to_layout(Layout target) const {
  if (target == layout_) return *this;
  AdjacencyMatrix out;
  if (target == Layout::Dense) {
    out = dense(to_matrix());
  } else {
    std::vector<SparseEntry> entries;
    for (std::size_t i = 0; i < rows_; ++i) {
      for_each_in_row(i, [&](std::size_t j, double v) { entries.push_back({i, j, v}); });
    }
    out = sparse(rows_, cols_, std::move(entries));
  }
  out.row_ids_ = row_ids_;
  out.col_ids_ = col_ids_;
  return out;
}

AdjacencyMatrix AdjacencyMatrix::transposed() const {
  AdjacencyMatrix out;
  if (layout_ == Layout::Dense) {
    out = dense(to_matrix().transposed());
  } else {
    std::vector<SparseEntry> entries;
    entries.reserve(entries_.size());
    for (const auto& e : entries_) entries.push_back({e.col, e.row, e.value});
    out = sparse(cols_, rows_, std::move(entries));
  }
  out.row_ids_ = col_ids_;
  out.col_ids_ = row_ids_;
  return out;
}

void AdjacencyMatrix::set_row_ids(std::vector<std::string> ids) {
  if (!ids.empty() && ids.size() != rows_) {
    throw std::invalid_argument("AdjacencyMatrix: row id count mismatch");
  }
  row_ids_ = std::move(ids);
}

void AdjacencyMatrix::set_col_ids(std::vector<std::string> ids) {
  if (!ids.empty() && ids.size() != cols_) {
    throw std::invalid_argument("AdjacencyMatrix: col id count mismatch");
  }
  col_ids_ = std::move(ids);
}

bool AdjacencyMatrix::same_entries(const AdjacencyMatrix& other, double tol) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      if (std::abs(at(i, j) - other.at(i, j)) > tol) return false;
    }
  }
  return true;
}

RowNormalized row_normalize(const AdjacencyMatrix& a) {
  RowNormalized result;
  result.matrix = a;
  std::vector<std::size_t> zero_rows;

  if (a.layout() == Layout::Dense) {
    Matrix m = a.to_matrix();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      double sum = 0.0;
      for (double v : m.row(i)) sum += v;
      if (sum > 0.0) {
        for (double& v : m.row(i)) v /= sum;
      } else {
        zero_rows.push_back(i);
      }
    }
    AdjacencyMatrix out = AdjacencyMatrix::dense(std::move(m));
    out.set_row_ids(a.row_ids());
    out.set_col_ids(a.col_ids());
    result.matrix = std::move(out);
  } else {
    std::vector<SparseEntry> entries;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      double sum = 0.0;
      a.for_each_in_row(i, [&](std::size_t, double v) { sum += v; });
      if (sum > 0.0) {
        a.for_each_in_row(i, [&](std::size_t j, double v) { entries.push_back({i, j, v / sum}); });
      } else {
        zero_rows.push_back(i);
      }
    }
    AdjacencyMatrix out = AdjacencyMatrix::sparse(a.rows(), a.cols(), std::move(entries));
    out.set_row_ids(a.row_ids());
    out.set_col_ids(a.col_ids());
    result.matrix = std::move(out);
  }
  result.zero_rows = std::move(zero_rows);
  return result;
}

Matrix apply_permutation(const Matrix& m, const Permutation& row_p, const Permutation& col_p) {
  if (row_p.size() != m.rows() || col_p.size() != m.cols()) {
    throw std::invalid_argument("apply_permutation: permutation size mismatch");
  }
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out(row_p(i), col_p(j)) = m(i, j);
  }
  return out;
}

AdjacencyMatrix apply_permutation(const AdjacencyMatrix& a, const Permutation& row_p,
                                  const Permutation& col_p) {
  if (row_p.size() != a.rows() || col_p.size() != a.cols()) {
    throw std::invalid_argument("apply_permutation: permutation size mismatch");
  }
  AdjacencyMatrix out;
  if (a.layout() == Layout::Dense) {
    out = AdjacencyMatrix::dense(apply_permutation(a.to_matrix(), row_p, col_p));
  } else {
    std::vector<SparseEntry> entries;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      a.for_each_in_row(i, [&](std::size_t j, double v) {
        entries.push_back({row_p(i), col_p(j), v});
      });
    }
    out = AdjacencyMatrix::sparse(a.rows(), a.cols(), std::move(entries));
  }
  if (a.has_row_ids()) {
    std::vector<std::string> ids(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) ids[row_p(i)] = a.row_ids()[i];
    out.set_row_ids(std::move(ids));
  }
  if (a.has_col_ids()) {
    std::vector<std::string> ids(a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) ids[col_p(j)] = a.col_ids()[j];
    out.set_col_ids(std::move(ids));
  }
  return out;
}

}  // namespace rre
