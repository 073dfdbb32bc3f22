#include "rre.h"

#include <cstring>
#include <exception>
#include <string>

#include "rre/baselines.hpp"
#include "rre/dataio.hpp"
#include "rre/engine.hpp"
#include "rre/evaluation.hpp"
#include "rre/matrix.hpp"
#include "rre/synthgen.hpp"

struct rre_matrix {
  rre::AdjacencyMatrix m;
};

struct rre_simpair {
  rre::SimilarityPair pair;
  rre_matrix s;
  rre_matrix s_prime;
};

struct rre_labels {
  std::vector<int> classes;
  std::size_t n_classes = 0;
};

struct rre_curveset {
  rre::ResultSet rs;
};

namespace {

thread_local std::string g_last_error;

rre_status set_error(rre_status status, const char* what) {
  g_last_error = what != nullptr ? what : "unknown error";
  return status;
}

// Runs fn inside the exception-to-status boundary shared by every API call.
template <typename Fn>
rre_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const rre::IoError& e) {
    return set_error(RRE_ERR_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return set_error(RRE_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return set_error(RRE_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(RRE_ERR_INTERNAL, "unknown error");
  }
}

rre_status require(bool ok, const char* what) {
  return ok ? RRE_OK : set_error(RRE_ERR_INVALID_ARGUMENT, what);
}

rre::NormKind to_norm(rre_norm_kind kind) {
  switch (kind) {
    case RRE_NORM_L1:
      return rre::NormKind::L1;
    case RRE_NORM_L2:
      return rre::NormKind::L2;
    case RRE_NORM_LINF:
      return rre::NormKind::LInf;
  }
  throw std::invalid_argument("unknown norm kind");
}

rre::RunConfig to_config(const rre_config& cfg) {
  rre::RunConfig out;
  out.alpha = cfg.alpha;
  out.norm = to_norm(cfg.norm);
  out.tolerance = cfg.tolerance;
  out.max_iterations = cfg.max_iterations;
  out.seed = cfg.seed;
  out.diagonal_rescale = cfg.diagonal_rescale != 0;
  out.strict_convergence = cfg.strict_convergence != 0;
  return out;
}

rre::FileFormat to_format(rre_file_format format) {
  switch (format) {
    case RRE_FORMAT_DENSE_CSV:
      return rre::FileFormat::DenseCsv;
    case RRE_FORMAT_COORD:
      return rre::FileFormat::Coord;
  }
  throw std::invalid_argument("unknown file format");
}

rre::PairwiseMetric to_metric(rre_pairwise_metric metric) {
  switch (metric) {
    case RRE_METRIC_JACCARD:
      return rre::PairwiseMetric::Jaccard;
    case RRE_METRIC_COSINE:
      return rre::PairwiseMetric::Cosine;
    case RRE_METRIC_PEARSON:
      return rre::PairwiseMetric::Pearson;
  }
  throw std::invalid_argument("unknown pairwise metric");
}

rre::BlockSpec to_spec(const rre_block_spec& spec) {
  rre::BlockSpec out;
  out.row_block_sizes.assign(spec.row_block_sizes, spec.row_block_sizes + spec.row_block_count);
  out.col_block_sizes.assign(spec.col_block_sizes, spec.col_block_sizes + spec.col_block_count);
  for (std::size_t k = 0; k < spec.assign_count; ++k) {
    out.assignment.push_back({spec.assign_row_blocks[k], spec.assign_col_blocks[k]});
  }
  out.fill_density = spec.fill_density;
  out.fill_value = spec.fill_value;
  return out;
}

rre_labels* make_labels(std::vector<int> classes) {
  auto* l = new rre_labels;
  l->classes = std::move(classes);
  int mx = -1;
  for (int c : l->classes) mx = std::max(mx, c);
  l->n_classes = static_cast<std::size_t>(mx + 1);
  return l;
}

}  // namespace

extern "C" {

const char* rre_last_error(void) { return g_last_error.c_str(); }

const char* rre_version(void) { return "1.0.0"; }

void rre_config_init(rre_config* cfg) {
  if (cfg == nullptr) return;
  const rre::RunConfig defaults;
  cfg->alpha = defaults.alpha;
  cfg->norm = RRE_NORM_LINF;
  cfg->tolerance = defaults.tolerance;
  cfg->max_iterations = static_cast<uint32_t>(defaults.max_iterations);
  cfg->seed = defaults.seed;
  cfg->diagonal_rescale = defaults.diagonal_rescale ? 1 : 0;
  cfg->strict_convergence = defaults.strict_convergence ? 1 : 0;
}

rre_status rre_matrix_create(size_t rows, size_t cols, const double* row_major, rre_matrix** out) {
  if (rre_status s = require(row_major != nullptr && out != nullptr, "null argument"); s != RRE_OK)
    return s;
  return guarded([&] {
    std::vector<double> values(row_major, row_major + rows * cols);
    *out = new rre_matrix{rre::AdjacencyMatrix::dense(rows, cols, std::move(values))};
    return RRE_OK;
  });
}

rre_status rre_matrix_load(const char* path, rre_file_format format, rre_matrix** out) {
  if (rre_status s = require(path != nullptr && out != nullptr, "null argument"); s != RRE_OK)
    return s;
  return guarded([&] {
    *out = new rre_matrix{rre::load_matrix(path, to_format(format))};
    return RRE_OK;
  });
}

rre_status rre_matrix_save(const rre_matrix* m, const char* path, rre_file_format format) {
  if (rre_status s = require(m != nullptr && path != nullptr, "null argument"); s != RRE_OK)
    return s;
  return guarded([&] {
    rre::save_matrix(m->m, path, to_format(format));
    return RRE_OK;
  });
}

void rre_matrix_free(rre_matrix* m) { delete m; }

size_t rre_matrix_rows(const rre_matrix* m) { return m != nullptr ? m->m.rows() : 0; }

size_t rre_matrix_cols(const rre_matrix* m) { return m != nullptr ? m->m.cols() : 0; }

rre_status rre_matrix_get(const rre_matrix* m, size_t row, size_t col, double* out) {
  if (rre_status s = require(m != nullptr && out != nullptr, "null argument"); s != RRE_OK)
    return s;
  if (rre_status s = require(row < m->m.rows() && col < m->m.cols(), "index out of range");
      s != RRE_OK)
    return s;
  *out = m->m.at(row, col);
  return RRE_OK;
}

rre_status rre_matrix_copy(const rre_matrix* m, double* out, size_t capacity) {
  if (rre_status s = require(m != nullptr && out != nullptr, "null argument"); s != RRE_OK)
    return s;
  const std::size_t need = m->m.rows() * m->m.cols();
  if (rre_status s = require(capacity >= need, "buffer too small"); s != RRE_OK) return s;
  const rre::Matrix dense = m->m.to_matrix();
  std::memcpy(out, dense.values().data(), need * sizeof(double));
  return RRE_OK;
}

rre_status rre_matrix_density(const rre_matrix* m, double* out) {
  if (rre_status s = require(m != nullptr && out != nullptr, "null argument"); s != RRE_OK)
    return s;
  *out = m->m.density();
  return RRE_OK;
}

rre_status rre_reflexive_similarity(const rre_matrix* a, const rre_config* cfg, rre_simpair** out) {
  if (rre_status s = require(a != nullptr && cfg != nullptr && out != nullptr, "null argument");
      s != RRE_OK)
    return s;
  return guarded([&] {
    rre::SimilarityPair pair = rre::reflexive_similarity(a->m, to_config(*cfg));
    auto* result = new rre_simpair;
    result->s.m = rre::AdjacencyMatrix::dense_signed(pair.s);
    result->s_prime.m = rre::AdjacencyMatrix::dense_signed(pair.s_prime);
    result->pair = std::move(pair);
    *out = result;
    return RRE_OK;
  });
}

const rre_matrix* rre_simpair_row_similarity(const rre_simpair* p) {
  return p != nullptr ? &p->s : nullptr;
}

const rre_matrix* rre_simpair_col_similarity(const rre_simpair* p) {
  return p != nullptr ? &p->s_prime : nullptr;
}

int rre_simpair_converged(const rre_simpair* p) {
  return p != nullptr && p->pair.trace.converged ? 1 : 0;
}

size_t rre_simpair_iterations(const rre_simpair* p) {
  return p != nullptr ? p->pair.trace.iterations_used : 0;
}

rre_status rre_simpair_save_trace(const rre_simpair* p, const char* path) {
  if (rre_status s = require(p != nullptr && path != nullptr, "null argument"); s != RRE_OK)
    return s;
  return guarded([&] {
    rre::save_trace_csv(p->pair.trace, path);
    return RRE_OK;
  });
}

void rre_simpair_free(rre_simpair* p) { delete p; }

rre_status rre_pairwise_similarity(const rre_matrix* a, rre_pairwise_metric metric,
                                   rre_axis_mode mode, rre_matrix** out) {
  if (rre_status s = require(a != nullptr && out != nullptr, "null argument"); s != RRE_OK)
    return s;
  return guarded([&] {
    const rre::AxisMode axis = mode == RRE_MODE_ROWS ? rre::AxisMode::Rows : rre::AxisMode::Cols;
    rre::Matrix result = rre::pairwise_similarity(a->m, to_metric(metric), axis);
    *out = new rre_matrix{rre::AdjacencyMatrix::dense_signed(std::move(result))};
    return RRE_OK;
  });
}

rre_status rre_generate_blocks(const rre_block_spec* spec, uint64_t seed, rre_matrix** out_matrix,
                               rre_labels** out_row_labels, rre_labels** out_col_labels) {
  if (rre_status s = require(spec != nullptr && out_matrix != nullptr, "null argument");
      s != RRE_OK)
    return s;
  return guarded([&] {
    const rre::BlockSpec bs = to_spec(*spec);
    auto [a, gt] = rre::generate_blocks(bs, bs.total_rows(), bs.total_cols(), seed);
    *out_matrix = new rre_matrix{std::move(a)};
    if (out_row_labels != nullptr) *out_row_labels = make_labels(std::move(gt.row_labels));
    if (out_col_labels != nullptr) *out_col_labels = make_labels(std::move(gt.col_labels));
    return RRE_OK;
  });
}

rre_status rre_add_noise(const rre_matrix* a, double sigma, uint64_t seed, rre_matrix** out) {
  if (rre_status s = require(a != nullptr && out != nullptr, "null argument"); s != RRE_OK)
    return s;
  return guarded([&] {
    *out = new rre_matrix{rre::add_gaussian_noise(a->m, sigma, seed)};
    return RRE_OK;
  });
}

rre_status rre_labels_load(const char* path, const rre_matrix* matrix_or_null, rre_labels** out) {
  if (rre_status s = require(path != nullptr && out != nullptr, "null argument"); s != RRE_OK)
    return s;
  return guarded([&] {
    const rre::LabelAssignment assignment = rre::load_labels(path);
    std::vector<int> classes = matrix_or_null != nullptr
                                   ? rre::align_labels(assignment, matrix_or_null->m)
                                   : assignment.classes;
    *out = make_labels(std::move(classes));
    return RRE_OK;
  });
}

size_t rre_labels_count(const rre_labels* l) { return l != nullptr ? l->classes.size() : 0; }

size_t rre_labels_classes(const rre_labels* l) { return l != nullptr ? l->n_classes : 0; }

rre_status rre_labels_get(const rre_labels* l, size_t index, int* out_class) {
  if (rre_status s = require(l != nullptr && out_class != nullptr, "null argument"); s != RRE_OK)
    return s;
  if (rre_status s = require(index < l->classes.size(), "index out of range"); s != RRE_OK)
    return s;
  *out_class = l->classes[index];
  return RRE_OK;
}

void rre_labels_free(rre_labels* l) { delete l; }

rre_status rre_eval_perm(const rre_block_spec* spec, const rre_config* cfg, size_t repetitions,
                         uint64_t seed, rre_curveset** out) {
  if (rre_status s = require(spec != nullptr && cfg != nullptr && out != nullptr, "null argument");
      s != RRE_OK)
    return s;
  return guarded([&] {
    const rre::NormKind norms[] = {rre::NormKind::L1, rre::NormKind::L2, rre::NormKind::LInf};
    *out = new rre_curveset{
        rre::permutation_experiment(to_spec(*spec), to_config(*cfg), norms, repetitions, seed)};
    return RRE_OK;
  });
}

rre_status rre_eval_noise(const rre_block_spec* spec, const double* sigmas, size_t sigma_count,
                          const double* alphas, size_t alpha_count, const rre_norm_kind* norms,
                          size_t norm_count, const rre_config* cfg, size_t repetitions,
                          uint64_t seed, rre_curveset** out) {
  if (rre_status s = require(spec != nullptr && sigmas != nullptr && alphas != nullptr &&
                                 norms != nullptr && cfg != nullptr && out != nullptr,
                             "null argument");
      s != RRE_OK)
    return s;
  return guarded([&] {
    std::vector<rre::NormKind> norm_grid;
    for (std::size_t k = 0; k < norm_count; ++k) norm_grid.push_back(to_norm(norms[k]));
    *out = new rre_curveset{rre::noise_sweep(to_spec(*spec), {sigmas, sigma_count},
                                             {alphas, alpha_count}, norm_grid, to_config(*cfg),
                                             repetitions, seed)};
    return RRE_OK;
  });
}

rre_status rre_eval_precision(const rre_matrix* a, const rre_labels* labels, const double* alphas,
                              size_t alpha_count, const rre_config* cfg, size_t max_rank,
                              size_t null_repetitions, rre_curveset** out) {
  if (rre_status s = require(a != nullptr && labels != nullptr && alphas != nullptr &&
                                 cfg != nullptr && out != nullptr,
                             "null argument");
      s != RRE_OK)
    return s;
  return guarded([&] {
    *out = new rre_curveset{rre::precision_experiment(a->m, labels->classes,
                                                      {alphas, alpha_count}, to_config(*cfg),
                                                      max_rank, null_repetitions)};
    return RRE_OK;
  });
}

rre_status rre_eval_bench(const size_t* n_grid, size_t n_count, const double* alphas,
                          size_t alpha_count, const rre_config* cfg, size_t repetitions,
                          uint64_t seed, rre_curveset** out) {
  if (rre_status s = require(n_grid != nullptr && alphas != nullptr && cfg != nullptr &&
                                 out != nullptr,
                             "null argument");
      s != RRE_OK)
    return s;
  return guarded([&] {
    *out = new rre_curveset{rre::scaling_benchmark({n_grid, n_count}, {alphas, alpha_count},
                                                   to_config(*cfg), repetitions, seed)};
    return RRE_OK;
  });
}

rre_status rre_curveset_save_json(const rre_curveset* cs, const char* path) {
  if (rre_status s = require(cs != nullptr && path != nullptr, "null argument"); s != RRE_OK)
    return s;
  return guarded([&] {
    rre::save_results(cs->rs, path);
    return RRE_OK;
  });
}

rre_status rre_curveset_save_csv(const rre_curveset* cs, const char* path) {
  if (rre_status s = require(cs != nullptr && path != nullptr, "null argument"); s != RRE_OK)
    return s;
  return guarded([&] {
    rre::save_curves_csv(cs->rs, path);
    return RRE_OK;
  });
}

size_t rre_curveset_count(const rre_curveset* cs) {
  return cs != nullptr ? cs->rs.curves.size() : 0;
}

rre_status rre_curveset_name(const rre_curveset* cs, size_t curve, const char** out) {
  if (rre_status s = require(cs != nullptr && out != nullptr, "null argument"); s != RRE_OK)
    return s;
  if (rre_status s = require(curve < cs->rs.curves.size(), "curve index out of range");
      s != RRE_OK)
    return s;
  *out = cs->rs.curves[curve].name.c_str();
  return RRE_OK;
}

rre_status rre_curveset_size(const rre_curveset* cs, size_t curve, size_t* out) {
  if (rre_status s = require(cs != nullptr && out != nullptr, "null argument"); s != RRE_OK)
    return s;
  if (rre_status s = require(curve < cs->rs.curves.size(), "curve index out of range");
      s != RRE_OK)
    return s;
  *out = cs->rs.curves[curve].points.size();
  return RRE_OK;
}

rre_status rre_curveset_point(const rre_curveset* cs, size_t curve, size_t index, double* x,
                              double* y, double* spread) {
  if (rre_status s = require(cs != nullptr, "null argument"); s != RRE_OK) return s;
  if (rre_status s = require(curve < cs->rs.curves.size(), "curve index out of range");
      s != RRE_OK)
    return s;
  const auto& points = cs->rs.curves[curve].points;
  if (rre_status s = require(index < points.size(), "point index out of range"); s != RRE_OK)
    return s;
  if (x != nullptr) *x = points[index].x;
  if (y != nullptr) *y = points[index].y;
  if (spread != nullptr) *spread = points[index].spread;
  return RRE_OK;
}

size_t rre_curveset_unconverged(const rre_curveset* cs) {
  return cs != nullptr ? cs->rs.unconverged_runs : 0;
}

void rre_curveset_free(rre_curveset* cs) { delete cs; }

}  // extern "C"
