#include "rre/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "rre/rng.hpp"

namespace rre {

namespace {

// Row-compressed copy of an adjacency matrix: per-row column indices and
// values in ascending column order. Built once per run, shared by every
// iteration.
struct CompressedRows {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<std::size_t> offsets;  // n_rows + 1
  std::vector<std::size_t> cols;
  std::vector<double> values;

  explicit CompressedRows(const AdjacencyMatrix& a)
      : n_rows(a.rows()), n_cols(a.cols()), offsets(a.rows() + 1, 0) {
    for (std::size_t i = 0; i < n_rows; ++i) {
      a.for_each_in_row(i, [&](std::size_t j, double v) {
        cols.push_back(j);
        values.push_back(v);
      });
      offsets[i + 1] = cols.size();
    }
  }
};

// Eq. out(i,j) = (1-alpha) a_i^T S a_j + alpha c_ij^T S c_ij over compressed
// rows. Accumulation order is fixed (ascending k, then ascending l), so the
// result is identical for dense and sparse inputs of the same data.
Matrix update_compressed(const CompressedRows& a, const Matrix& s_other, double alpha) {
  const std::size_t n = a.n_rows;
  const std::size_t m = a.n_cols;

  // t = A * S, accumulated row by row in ascending k.
  Matrix t(n, m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto trow = t.row(i);
    for (std::size_t k = a.offsets[i]; k < a.offsets[i + 1]; ++k) {
      const double v = a.values[k];
      const auto srow = s_other.row(a.cols[k]);
      for (std::size_t l = 0; l < m; ++l) trow[l] += v * srow[l];
    }
  }

  Matrix out(n, n, 0.0);
  std::vector<std::size_t> common_cols;
  std::vector<double> common_vals;

  for (std::size_t i = 0; i < n; ++i) {
    const auto trow = t.row(i);
    for (std::size_t j = i; j < n; ++j) {
      double first = 0.0;
      for (std::size_t k = a.offsets[j]; k < a.offsets[j + 1]; ++k) {
        first += trow[a.cols[k]] * a.values[k];
      }

      double quad = 0.0;
      if (alpha != 0.0) {
        common_cols.clear();
        common_vals.clear();
        std::size_t p = a.offsets[i], q = a.offsets[j];
        while (p < a.offsets[i + 1] && q < a.offsets[j + 1]) {
          if (a.cols[p] < a.cols[q]) {
            ++p;
          } else if (a.cols[q] < a.cols[p]) {
            ++q;
          } else {
            common_cols.push_back(a.cols[p]);
            common_vals.push_back(a.values[p] * a.values[q]);
            ++p;
            ++q;
          }
        }
        for (std::size_t k = 0; k < common_cols.size(); ++k) {
          const auto srow = s_other.row(common_cols[k]);
          double inner = 0.0;
          for (std::size_t l = 0; l < common_cols.size(); ++l) {
            inner += srow[common_cols[l]] * common_vals[l];
          }
          quad += common_vals[k] * inner;
        }
      }

      const double value = (1.0 - alpha) * first + alpha * quad;
      out(i, j) = value;
      out(j, i) = value;
    }
  }
  return out;
}

void scale_in_place(Matrix& m, double factor) {
  for (double& v : m.values()) v *= factor;
}

void rescale_diagonal(Matrix& s) {
  const std::size_t n = s.rows();
  std::vector<double> scale(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = s(i, i);
    scale[i] = d > 0.0 ? 1.0 / std::sqrt(d) : 0.0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) s(i, j) *= scale[i] * scale[j];
  }
  for (std::size_t i = 0; i < n; ++i) s(i, i) = scale[i] > 0.0 ? 1.0 : 0.0;
}

}  // namespace

void RunConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("RunConfig: alpha must lie in [0, 1]");
  }
  if (!(tolerance > 0.0)) throw std::invalid_argument("RunConfig: tolerance must be positive");
  if (max_iterations < 1) throw std::invalid_argument("RunConfig: max_iterations must be >= 1");
}

Matrix initialize_similarity(std::size_t dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("initialize_similarity: dim must be >= 1");
  Rng rng(seed);
  Matrix s(dim, dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    s(i, i) = 1.0;
    for (std::size_t j = i + 1; j < dim; ++j) {
      const double v = rng.uniform01();
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return s;
}

Matrix update_similarity(const AdjacencyMatrix& a, const Matrix& s_other, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("update_similarity: alpha must lie in [0, 1]");
  }
  if (!s_other.is_square() || s_other.rows() != a.cols()) {
    throw std::invalid_argument("update_similarity: S dimension must match column count");
  }
  if (!s_other.all_finite()) {
    throw std::invalid_argument("update_similarity: non-finite entry in S");
  }
  return update_compressed(CompressedRows(a), s_other, alpha);
}

bool stopping_rule(const ConvergenceTrace& trace, double tolerance) {
  if (trace.records.size() < 2) return false;
  const auto& prev = trace.records[trace.records.size() - 2];
  const auto& last = trace.records.back();
  return std::abs(last.s_norm - prev.s_norm) < tolerance &&
         std::abs(last.sp_norm - prev.sp_norm) < tolerance;
}

bool strict_stopping_rule(const ConvergenceTrace& trace, double tolerance) {
  if (trace.records.size() < 2) return false;
  const auto& last = trace.records.back();
  return last.s_delta < tolerance && last.sp_delta < tolerance;
}

SimilarityPair reflexive_similarity(const AdjacencyMatrix& a, const RunConfig& cfg) {
  return reflexive_similarity(a, cfg, initialize_similarity(a.rows(), cfg.seed));
}

SimilarityPair reflexive_similarity(const AdjacencyMatrix& a, const RunConfig& cfg,
                                    const Matrix& initial_s) {
  cfg.validate();
  if (a.all_zero()) {
    throw std::invalid_argument("reflexive_similarity: adjacency matrix is all zeros");
  }
  if (a.min_entry() < 0.0) {
    throw std::invalid_argument("reflexive_similarity: adjacency matrix has negative entries");
  }
  if (!initial_s.is_square() || initial_s.rows() != a.rows()) {
    throw std::invalid_argument("reflexive_similarity: initial S must be n x n");
  }
  if (!initial_s.all_finite()) {
    throw std::invalid_argument("reflexive_similarity: initial S has non-finite entries");
  }

  const CompressedRows row_side(row_normalize(a).matrix);
  const CompressedRows col_side(row_normalize(a.transposed()).matrix);

  Matrix s = initial_s;
  Matrix s_prime(a.cols(), a.cols(), 0.0);

  ConvergenceTrace trace;
  using clock = std::chrono::steady_clock;

  for (std::size_t iter = 1; iter <= cfg.max_iterations; ++iter) {
    const auto start = clock::now();

    Matrix sp_next = update_compressed(col_side, s, cfg.alpha);
    const double sp_norm = frobenius_norm(sp_next);
    const double sp_rescale = matrix_vector_norm(sp_next, cfg.norm);
    if (sp_rescale <= 0.0) {
      throw std::domain_error("reflexive_similarity: S' collapsed to zero");
    }
    scale_in_place(sp_next, 1.0 / sp_rescale);

    Matrix s_next = update_compressed(row_side, sp_next, cfg.alpha);
    const double s_norm = frobenius_norm(s_next);
    const double s_rescale = matrix_vector_norm(s_next, cfg.norm);
    if (s_rescale <= 0.0) {
      throw std::domain_error("reflexive_similarity: S collapsed to zero");
    }
    scale_in_place(s_next, 1.0 / s_rescale);

    TraceRecord rec;
    rec.iteration = iter;
    rec.s_norm = s_norm;
    rec.sp_norm = sp_norm;
    rec.combined_norm = std::hypot(s_norm, sp_norm);
    rec.s_delta = frobenius_norm([&] {
      Matrix d = s_next;
      for (std::size_t k = 0; k < d.values().size(); ++k) d.values()[k] -= s.values()[k];
      return d;
    }());
    rec.sp_delta = frobenius_norm([&] {
      Matrix d = sp_next;
      for (std::size_t k = 0; k < d.values().size(); ++k) d.values()[k] -= s_prime.values()[k];
      return d;
    }());
    rec.seconds = std::chrono::duration<double>(clock::now() - start).count();

    s = std::move(s_next);
    s_prime = std::move(sp_next);
    trace.records.push_back(rec);

    const bool stop = cfg.strict_convergence ? strict_stopping_rule(trace, cfg.tolerance)
                                             : stopping_rule(trace, cfg.tolerance);
    if (stop) {
      trace.converged = true;
      break;
    }
  }

  trace.iterations_used = trace.records.size();

  SimilarityPair result{std::move(s), std::move(s_prime), std::move(trace)};
  if (cfg.diagonal_rescale) {
    rescale_diagonal(result.s);
    rescale_diagonal(result.s_prime);
  }
  return result;
}

std::string to_string(NormKind kind) {
  switch (kind) {
    case NormKind::L1:
      return "l1";
    case NormKind::L2:
      return "l2";
    case NormKind::LInf:
      return "linf";
  }
  return "?";
}

NormKind norm_kind_from_string(const std::string& name) {
  if (name == "l1" || name == "L1") return NormKind::L1;
  if (name == "l2" || name == "L2") return NormKind::L2;
  if (name == "linf" || name == "LINF" || name == "Linf") return NormKind::LInf;
  throw std::invalid_argument("unknown norm kind: " + name);
}

}  // namespace rre
