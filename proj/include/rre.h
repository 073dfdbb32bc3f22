/*
 * rre: reflexive regular equivalence for bipartite data.
 *
 * C interface to the shared library. All heap objects are opaque handles
 * created and destroyed through these functions; every fallible call returns
 * an rre_status, and rre_last_error() describes the most recent failure on
 * the calling thread.
 */

#ifndef RRE_H
#define RRE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rre_status {
  RRE_OK = 0,
  RRE_ERR_INVALID_ARGUMENT = 1,
  RRE_ERR_IO = 2,
  RRE_ERR_INTERNAL = 3
} rre_status;

typedef enum rre_norm_kind { RRE_NORM_L1 = 0, RRE_NORM_L2 = 1, RRE_NORM_LINF = 2 } rre_norm_kind;

typedef enum rre_axis_mode { RRE_MODE_ROWS = 0, RRE_MODE_COLS = 1 } rre_axis_mode;

typedef enum rre_file_format { RRE_FORMAT_DENSE_CSV = 0, RRE_FORMAT_COORD = 1 } rre_file_format;

typedef enum rre_pairwise_metric {
  RRE_METRIC_JACCARD = 0,
  RRE_METRIC_COSINE = 1,
  RRE_METRIC_PEARSON = 2
} rre_pairwise_metric;

typedef struct rre_matrix rre_matrix;     /* adjacency or similarity matrix */
typedef struct rre_simpair rre_simpair;   /* coupled S / S' result of one run */
typedef struct rre_labels rre_labels;     /* class index per item */
typedef struct rre_curveset rre_curveset; /* tables produced by an experiment */

/* Message for the last failing call on this thread. Valid until the next
 * failing call on the same thread. */
const char* rre_last_error(void);

const char* rre_version(void);

/* ---- run configuration ------------------------------------------------- */

typedef struct rre_config {
  double alpha;              /* transitivity weight in [0, 1] */
  rre_norm_kind norm;        /* per-iteration rescaling of S and S' */
  double tolerance;          /* stopping threshold on norm deltas */
  uint32_t max_iterations;
  uint64_t seed;             /* seeds the random initialization */
  int diagonal_rescale;      /* final S_ij / sqrt(S_ii S_jj) pass */
  int strict_convergence;    /* stop on ||S_t - S_(t-1)||_F instead */
} rre_config;

/* alpha 0.5, linf, tolerance 1e-5, 500 iterations, seed 0, rescale on. */
void rre_config_init(rre_config* cfg);

/* ---- matrices ----------------------------------------------------------- */

rre_status rre_matrix_create(size_t rows, size_t cols, const double* row_major, rre_matrix** out);
rre_status rre_matrix_load(const char* path, rre_file_format format, rre_matrix** out);
rre_status rre_matrix_save(const rre_matrix* m, const char* path, rre_file_format format);
void rre_matrix_free(rre_matrix* m);

size_t rre_matrix_rows(const rre_matrix* m);
size_t rre_matrix_cols(const rre_matrix* m);
rre_status rre_matrix_get(const rre_matrix* m, size_t row, size_t col, double* out);
/* Copies all entries row-major; capacity must be at least rows * cols. */
rre_status rre_matrix_copy(const rre_matrix* m, double* out, size_t capacity);
/* Fraction of structurally nonzero entries. */
rre_status rre_matrix_density(const rre_matrix* m, double* out);

/* ---- equivalence engine -------------------------------------------------- */

/* Coupled iteration on a nonnegative bipartite matrix. On success *out holds
 * the row-mode and column-mode similarity matrices plus the convergence
 * trace; a run that hits max_iterations still succeeds and reports
 * rre_simpair_converged() == 0. */
rre_status rre_reflexive_similarity(const rre_matrix* a, const rre_config* cfg, rre_simpair** out);

const rre_matrix* rre_simpair_row_similarity(const rre_simpair* p);
const rre_matrix* rre_simpair_col_similarity(const rre_simpair* p);
int rre_simpair_converged(const rre_simpair* p);
size_t rre_simpair_iterations(const rre_simpair* p);
/* Writes the per-iteration trace as CSV. */
rre_status rre_simpair_save_trace(const rre_simpair* p, const char* path);
void rre_simpair_free(rre_simpair* p);

/* ---- pairwise baselines -------------------------------------------------- */

rre_status rre_pairwise_similarity(const rre_matrix* a, rre_pairwise_metric metric,
                                   rre_axis_mode mode, rre_matrix** out);

/* ---- synthetic data ------------------------------------------------------ */

/* Block structure description. assign_count == 0 selects the diagonal
 * assignment (requires equal block counts). */
typedef struct rre_block_spec {
  const size_t* row_block_sizes;
  size_t row_block_count;
  const size_t* col_block_sizes;
  size_t col_block_count;
  const size_t* assign_row_blocks;
  const size_t* assign_col_blocks;
  size_t assign_count;
  double fill_density; /* in (0, 1] */
  double fill_value;   /* > 0 */
} rre_block_spec;

rre_status rre_generate_blocks(const rre_block_spec* spec, uint64_t seed, rre_matrix** out_matrix,
                               rre_labels** out_row_labels, rre_labels** out_col_labels);

/* a_ij -> max(0, a_ij + N(0, sigma^2)); sigma = 0 copies the input. */
rre_status rre_add_noise(const rre_matrix* a, double sigma, uint64_t seed, rre_matrix** out);

/* ---- labels -------------------------------------------------------------- */

/* Loads "identifier,class" CSV rows. When matrix_or_null carries row
 * identifiers the labels are matched by identifier, otherwise positionally. */
rre_status rre_labels_load(const char* path, const rre_matrix* matrix_or_null, rre_labels** out);
size_t rre_labels_count(const rre_labels* l);
size_t rre_labels_classes(const rre_labels* l);
rre_status rre_labels_get(const rre_labels* l, size_t index, int* out_class);
void rre_labels_free(rre_labels* l);

/* ---- experiments ---------------------------------------------------------- */

/* Permutation-recovery table on noiseless instances of the spec: one mu
 * summary per reflexive norm variant (l1, l2, linf at cfg->alpha) and per
 * pairwise baseline. */
rre_status rre_eval_perm(const rre_block_spec* spec, const rre_config* cfg, size_t repetitions,
                         uint64_t seed, rre_curveset** out);

/* Noise sweep over (sigma, alpha, norm) grids with baselines, one curve per
 * method over sigma. */
rre_status rre_eval_noise(const rre_block_spec* spec, const double* sigmas, size_t sigma_count,
                          const double* alphas, size_t alpha_count, const rre_norm_kind* norms,
                          size_t norm_count, const rre_config* cfg, size_t repetitions,
                          uint64_t seed, rre_curveset** out);

/* Precision-at-rank curves on labeled data: reflexive runs per alpha, the
 * three pairwise baselines and a random-class null model. max_rank 0 means
 * no cap. */
rre_status rre_eval_precision(const rre_matrix* a, const rre_labels* labels, const double* alphas,
                              size_t alpha_count, const rre_config* cfg, size_t max_rank,
                              size_t null_repetitions, rre_curveset** out);

/* Iterations-to-convergence and seconds-per-iteration versus n, with linear
 * and quadratic fits. */
rre_status rre_eval_bench(const size_t* n_grid, size_t n_count, const double* alphas,
                          size_t alpha_count, const rre_config* cfg, size_t repetitions,
                          uint64_t seed, rre_curveset** out);

/* ---- experiment results ---------------------------------------------------- */

rre_status rre_curveset_save_json(const rre_curveset* cs, const char* path);
rre_status rre_curveset_save_csv(const rre_curveset* cs, const char* path);
size_t rre_curveset_count(const rre_curveset* cs);
rre_status rre_curveset_name(const rre_curveset* cs, size_t curve, const char** out);
rre_status rre_curveset_size(const rre_curveset* cs, size_t curve, size_t* out);
rre_status rre_curveset_point(const rre_curveset* cs, size_t curve, size_t index, double* x,
                              double* y, double* spread);
/* Number of engine runs inside the experiment that hit max_iterations. */
size_t rre_curveset_unconverged(const rre_curveset* cs);
void rre_curveset_free(rre_curveset* cs);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* RRE_H */
