#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rre/matrix.hpp"

namespace rre {

/// Parameters of one reflexive similarity run.
///
/// alpha weights the common-neighbor (transitivity) contribution: 0 is plain
/// bipartite regular equivalence, 1 uses common neighbors only. norm selects
/// the per-iteration rescaling of S and S'.
struct RunConfig {
  double alpha = 0.5;
  NormKind norm = NormKind::LInf;
  double tolerance = 1e-5;
  std::size_t max_iterations = 500;
  std::uint64_t seed = 0;
  bool diagonal_rescale = true;
  bool strict_convergence = false;  // stop on ||S_t - S_{t-1}||_F instead of norm deltas

  void validate() const;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// One full iteration of the engine (an S' update followed by an S update).
///
/// s_norm and sp_norm are Frobenius norms of the raw updates, measured before
/// the per-iteration rescaling; these are the growth factors of the coupled
/// power iteration and the quantities the stopping rule compares. Measuring
/// after the rescaling would make the L2 variant stop unconditionally at
/// iteration two, since the Frobenius norm of an L2-rescaled matrix is 1 by
/// construction. combined_norm is the Frobenius norm of the direct sum of the
/// two raw updates, sqrt(s_norm^2 + sp_norm^2) (the two matrices have
/// different shapes, so a literal sum is undefined). s_delta / sp_delta are
/// Frobenius distances between consecutive rescaled iterates (the first
/// record measures S against its initialization and S' against zero).
struct TraceRecord {
  std::size_t iteration = 0;  // 1-based
  double s_norm = 0.0;
  double sp_norm = 0.0;
  double combined_norm = 0.0;
  double s_delta = 0.0;
  double sp_delta = 0.0;
  double seconds = 0.0;
};

struct ConvergenceTrace {
  std::vector<TraceRecord> records;
  bool converged = false;
  std::size_t iterations_used = 0;
};

/// Coupled similarity matrices: s is n x n over rows, s_prime is m x m over
/// columns of the source adjacency matrix.
struct SimilarityPair {
  Matrix s;
  Matrix s_prime;
  ConvergenceTrace trace;
};

/// Random symmetric matrix with unit diagonal and off-diagonal entries iid
/// uniform on [0,1), drawn from mt19937_64 seeded with `seed` and mirrored
/// across the diagonal. Same seed, same matrix, on any platform.
Matrix initialize_similarity(std::size_t dim, std::uint64_t seed);

/// One similarity update: for each pair (i,j) of rows of `a`,
///
///   out(i,j) = (1-alpha) * a_i^T * s_other * a_j
///            + alpha    * c_ij^T * s_other * c_ij,   c_ij = a_i (*) a_j
///
/// where (*) is the element-wise product, so the second term runs over common
/// neighbors only. The column-mode update is this same operation applied to
/// the transpose of `a` (normalized along its own rows). The result is exactly
/// symmetric and not yet normalized.
Matrix update_similarity(const AdjacencyMatrix& a, const Matrix& s_other, double alpha);

/// True iff the last two records' s_norm and sp_norm each moved by less than
/// tolerance. Fewer than two records cannot have converged.
bool stopping_rule(const ConvergenceTrace& trace, double tolerance);

/// Strict variant: compares the Frobenius norm of successive iterate
/// differences (s_delta / sp_delta) against tolerance.
bool strict_stopping_rule(const ConvergenceTrace& trace, double tolerance);

/// Runs the coupled iteration until the stopping rule holds or max_iterations
/// is reached. S starts from initialize_similarity(n, cfg.seed); each full
/// iteration updates S' from S, rescales it to unit cfg.norm, then updates S
/// from the new S' and rescales. If cfg.diagonal_rescale, a final pass maps
/// S_ij to S_ij / sqrt(S_ii * S_jj) in both matrices. Identical inputs give
/// bit-identical outputs (wall-clock fields aside).
SimilarityPair reflexive_similarity(const AdjacencyMatrix& a, const RunConfig& cfg);

/// Same, starting from an explicit symmetric initial S (n x n).
SimilarityPair reflexive_similarity(const AdjacencyMatrix& a, const RunConfig& cfg,
                                    const Matrix& initial_s);

std::string to_string(NormKind kind);
NormKind norm_kind_from_string(const std::string& name);

}  // namespace rre
