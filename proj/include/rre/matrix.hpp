#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rre {

enum class NormKind { L1, L2, LInf };

/// Dense row-major matrix of doubles. Used for similarity matrices and as the
/// dense backing of adjacency data. Plain value type, no view semantics.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double value = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }

  double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols_, cols_}; }
  std::span<double> row(std::size_t i) { return {values_.data() + i * cols_, cols_}; }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  Matrix transposed() const;
  bool all_finite() const;
  bool is_square() const { return rows_ == cols_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// Flat-vector norm over all entries. Accumulation runs over the entry
/// magnitudes in sorted order, so any rearrangement of the same entries (in
/// particular a permuted matrix) produces a bit-identical result.
double matrix_vector_norm(const Matrix& m, NormKind kind);

/// Same as matrix_vector_norm with NormKind::L2.
double frobenius_norm(const Matrix& m);

double max_abs_difference(const Matrix& a, const Matrix& b);

/// Bijection on [0, size). operator() maps a source index to its image.
class Permutation {
 public:
  explicit Permutation(std::vector<std::size_t> mapping);
  static Permutation identity(std::size_t n);
  static Permutation random(std::size_t n, std::uint64_t seed);

  std::size_t size() const { return mapping_.size(); }
  std::size_t operator()(std::size_t i) const { return mapping_[i]; }
  const std::vector<std::size_t>& mapping() const { return mapping_; }

  Permutation inverse() const;
  bool is_identity() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> mapping_;
};

enum class Layout { Dense, Sparse };

struct SparseEntry {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Nonnegative bipartite weight matrix, dense or coordinate-sparse.
///
/// Entries must be finite; negative entries are rejected unless the matrix is
/// built through a *_signed factory (used only for unclamped noise studies —
/// such matrices are accepted by the pairwise baselines but not by the
/// equivalence engine). Both layouts expose the same element access and
/// iterate rows in ascending column order, so downstream arithmetic is
/// bit-identical across layouts.
class AdjacencyMatrix {
 public:
  AdjacencyMatrix() = default;

  static AdjacencyMatrix dense(std::size_t rows, std::size_t cols, std::vector<double> values);
  static AdjacencyMatrix dense(Matrix m);
  static AdjacencyMatrix dense_signed(Matrix m);
  /// Entries may arrive in any order; exact zeros are dropped. Duplicate
  /// coordinates are an error.
  static AdjacencyMatrix sparse(std::size_t rows, std::size_t cols, std::vector<SparseEntry> entries);

  Layout layout() const { return layout_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double at(std::size_t i, std::size_t j) const;

  /// Calls fn(col, value) for each structurally nonzero entry of row i, in
  /// ascending column order. Dense rows skip exact zeros.
  template <typename Fn>
  void for_each_in_row(std::size_t i, Fn&& fn) const {
    if (layout_ == Layout::Dense) {
      const double* base = dense_.data() + i * cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (base[j] != 0.0) fn(j, base[j]);
      }
    } else {
      for (std::size_t k = row_start_[i]; k < row_start_[i + 1]; ++k) {
        fn(entries_[k].col, entries_[k].value);
      }
    }
  }

  std::size_t nonzero_count() const;
  double density() const;
  double min_entry() const;
  bool all_zero() const { return nonzero_count() == 0; }

  Matrix to_matrix() const;
  AdjacencyMatrix to_layout(Layout target) const;
  AdjacencyMatrix transposed() const;

  bool has_row_ids() const { return !row_ids_.empty(); }
  bool has_col_ids() const { return !col_ids_.empty(); }
  const std::vector<std::string>& row_ids() const { return row_ids_; }
  const std::vector<std::string>& col_ids() const { return col_ids_; }
  void set_row_ids(std::vector<std::string> ids);
  void set_col_ids(std::vector<std::string> ids);

  /// Element-wise equality across layouts.
  bool same_entries(const AdjacencyMatrix& other, double tol = 0.0) const;

 private:
  void validate(bool allow_negative) const;

  Layout layout_ = Layout::Dense;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> dense_;                // row-major, Dense only
  std::vector<SparseEntry> entries_;         // sorted by (row, col), Sparse only
  std::vector<std::size_t> row_start_;       // CSR offsets into entries_, Sparse only
  std::vector<std::string> row_ids_;
  std::vector<std::string> col_ids_;
};

struct RowNormalized {
  AdjacencyMatrix matrix;
  std::vector<std::size_t> zero_rows;  // rows left unchanged because their sum is 0
};

/// Divides every row with positive sum by that sum. Zero rows pass through
/// unchanged and are reported in zero_rows.
RowNormalized row_normalize(const AdjacencyMatrix& a);

/// out[row_p(i)][col_p(j)] = m[i][j].
Matrix apply_permutation(const Matrix& m, const Permutation& row_p, const Permutation& col_p);
AdjacencyMatrix apply_permutation(const AdjacencyMatrix& a, const Permutation& row_p,
                                  const Permutation& col_p);

}  // namespace rre
