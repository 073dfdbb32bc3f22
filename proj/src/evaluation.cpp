#include "rre/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "rre/rng.hpp"

namespace rre {

namespace {

std::string format_alpha(double alpha) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", alpha);
  return buf;
}

std::string reflexive_name(NormKind norm, double alpha) {
  return "reflexive_" + to_string(norm) + "_a" + format_alpha(alpha);
}

struct MeanSpread {
  double mean = 0.0;
  double spread = 0.0;
};

MeanSpread mean_and_spread(std::span<const double> xs) {
  MeanSpread ms;
  if (xs.empty()) return ms;
  ms.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  if (xs.size() < 2) return ms;
  double ss = 0.0;
  for (double x : xs) ss += (x - ms.mean) * (x - ms.mean);
  const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  ms.spread = 2.0 * sd / std::sqrt(static_cast<double>(xs.size()));
  return ms;
}

Matrix unpermute_square(const Matrix& s_hat, const Permutation& p) {
  const Permutation inv = p.inverse();
  return apply_permutation(s_hat, inv, inv);
}

// Seed layout inside a sweep. Streams are mixed so that every (rep, sigma)
// cell gets its own noise and initialization seeds while all methods inside
// the cell share them.
std::uint64_t rep_seed(std::uint64_t seed, std::size_t rep) { return mix_seed(seed, 1000 + rep); }

}  // namespace

const EvalCurve* ResultSet::find_curve(const std::string& name) const {
  for (const auto& c : curves) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

double mu_score(const Matrix& s, const Matrix& s_hat, const Matrix& sp, const Matrix& sp_hat,
                MuDenominator denominator) {
  if (s.rows() != s_hat.rows() || s.cols() != s_hat.cols() || sp.rows() != sp_hat.rows() ||
      sp.cols() != sp_hat.cols() || !s.is_square() || !sp.is_square()) {
    throw std::invalid_argument("mu_score: dimension mismatch");
  }
  auto half = [&](const Matrix& ref, const Matrix& hat) {
    Matrix diff = ref;
    for (std::size_t k = 0; k < diff.values().size(); ++k) diff.values()[k] -= hat.values()[k];
    const double denom = denominator == MuDenominator::Entries
                             ? static_cast<double>(ref.rows()) * static_cast<double>(ref.rows())
                             : static_cast<double>(ref.rows());
    return 0.5 * frobenius_norm(diff) / denom;
  };
  return half(s, s_hat) + half(sp, sp_hat);
}

RecoveryInputs make_recovery_inputs(const AdjacencyMatrix& a, double sigma, std::uint64_t seed) {
  RecoveryInputs in;
  in.ref_input = sigma > 0.0 ? add_gaussian_noise(a, sigma, mix_seed(seed, 10)) : a;
  const AdjacencyMatrix hat_base =
      sigma > 0.0 ? add_gaussian_noise(a, sigma, mix_seed(seed, 11)) : a;
  in.row_perm = Permutation::random(a.rows(), mix_seed(seed, 12));
  in.col_perm = Permutation::random(a.cols(), mix_seed(seed, 13));
  in.hat_input = apply_permutation(hat_base, in.row_perm, in.col_perm);
  in.init_ref_seed = mix_seed(seed, 14);
  in.init_hat_seed = mix_seed(seed, 15);
  return in;
}

RecoveryRun recovery_run_reflexive(const RecoveryInputs& in, const RunConfig& cfg,
                                   bool consistent_init) {
  RunConfig ref_cfg = cfg;
  ref_cfg.diagonal_rescale = false;
  ref_cfg.seed = in.init_ref_seed;

  const Matrix s0 = initialize_similarity(in.ref_input.rows(), in.init_ref_seed);
  const SimilarityPair ref = reflexive_similarity(in.ref_input, ref_cfg, s0);

  RunConfig hat_cfg = ref_cfg;
  hat_cfg.seed = in.init_hat_seed;
  const SimilarityPair hat =
      consistent_init
          ? reflexive_similarity(in.hat_input, hat_cfg,
                                 apply_permutation(s0, in.row_perm, in.row_perm))
          : reflexive_similarity(in.hat_input, hat_cfg);

  RecoveryRun run;
  run.mu = mu_score(ref.s, unpermute_square(hat.s, in.row_perm), ref.s_prime,
                    unpermute_square(hat.s_prime, in.col_perm));
  run.iterations_ref = ref.trace.iterations_used;
  run.iterations_hat = hat.trace.iterations_used;
  run.converged_ref = ref.trace.converged;
  run.converged_hat = hat.trace.converged;
  return run;
}

double recovery_mu_baseline(const RecoveryInputs& in, PairwiseMetric metric,
                            double jaccard_threshold) {
  const Matrix s_ref = pairwise_similarity(in.ref_input, metric, AxisMode::Rows, jaccard_threshold);
  const Matrix sp_ref = pairwise_similarity(in.ref_input, metric, AxisMode::Cols, jaccard_threshold);
  const Matrix s_hat = pairwise_similarity(in.hat_input, metric, AxisMode::Rows, jaccard_threshold);
  const Matrix sp_hat = pairwise_similarity(in.hat_input, metric, AxisMode::Cols, jaccard_threshold);
  return mu_score(s_ref, unpermute_square(s_hat, in.row_perm), sp_ref,
                  unpermute_square(sp_hat, in.col_perm));
}

double permutation_recovery(const AdjacencyMatrix& a, const GroundTruth& gt, const RunConfig& cfg,
                            std::uint64_t seed) {
  if (gt.row_labels.size() != a.rows() || gt.col_labels.size() != a.cols()) {
    throw std::invalid_argument("permutation_recovery: ground truth does not match matrix");
  }
  return recovery_run_reflexive(make_recovery_inputs(a, 0.0, seed), cfg, false).mu;
}

double permutation_recovery_consistent(const AdjacencyMatrix& a, const GroundTruth& gt,
                                       const RunConfig& cfg, std::uint64_t seed) {
  if (gt.row_labels.size() != a.rows() || gt.col_labels.size() != a.cols()) {
    throw std::invalid_argument("permutation_recovery: ground truth does not match matrix");
  }
  return recovery_run_reflexive(make_recovery_inputs(a, 0.0, seed), cfg, true).mu;
}

double baseline_permutation_recovery(const AdjacencyMatrix& a, const GroundTruth& gt,
                                     PairwiseMetric metric, std::uint64_t seed) {
  if (gt.row_labels.size() != a.rows() || gt.col_labels.size() != a.cols()) {
    throw std::invalid_argument("baseline_permutation_recovery: ground truth mismatch");
  }
  return recovery_mu_baseline(make_recovery_inputs(a, 0.0, seed), metric);
}

EquivarianceCheck equivariance_check(const AdjacencyMatrix& a, const RunConfig& cfg,
                                     std::uint64_t seed) {
  const Permutation row_p = Permutation::random(a.rows(), mix_seed(seed, 20));
  const Permutation col_p = Permutation::random(a.cols(), mix_seed(seed, 21));
  const AdjacencyMatrix a_hat = apply_permutation(a, row_p, col_p);

  const Matrix s0 = initialize_similarity(a.rows(), cfg.seed);
  const Matrix s0_hat = apply_permutation(s0, row_p, row_p);

  const SimilarityPair ref = reflexive_similarity(a, cfg, s0);
  const SimilarityPair hat = reflexive_similarity(a_hat, cfg, s0_hat);

  const Matrix s_back = unpermute_square(hat.s, row_p);
  const Matrix sp_back = unpermute_square(hat.s_prime, col_p);

  EquivarianceCheck check;
  check.max_abs_diff_s = max_abs_difference(ref.s, s_back);
  check.max_abs_diff_sp = max_abs_difference(ref.s_prime, sp_back);
  check.mu = mu_score(ref.s, s_back, ref.s_prime, sp_back);
  return check;
}

namespace {

// Core of permutation_experiment and noise_sweep: evaluates every method on
// shared inputs per (rep, sigma) and aggregates per-sigma curves.
ResultSet sweep_impl(const std::string& experiment, const BlockSpec& spec,
                     std::span<const double> sigma_grid, std::span<const double> alpha_grid,
                     std::span<const NormKind> norm_grid, const RunConfig& base,
                     std::size_t repetitions, std::uint64_t seed) {
  if (sigma_grid.empty() || alpha_grid.empty() || norm_grid.empty()) {
    throw std::invalid_argument(experiment + ": grids must be nonempty");
  }
  if (repetitions < 1) throw std::invalid_argument(experiment + ": repetitions must be >= 1");
  for (std::size_t i = 1; i < sigma_grid.size(); ++i) {
    if (!(sigma_grid[i] > sigma_grid[i - 1])) {
      throw std::invalid_argument(experiment + ": sigma grid must be strictly increasing");
    }
  }
  base.validate();
  spec.validate();

  const auto t_start = std::chrono::steady_clock::now();

  ResultSet rs;
  rs.experiment = experiment;
  rs.base_config = base;
  rs.seed = seed;
  rs.repetitions = repetitions;
  rs.sigma_grid.assign(sigma_grid.begin(), sigma_grid.end());
  rs.alpha_grid.assign(alpha_grid.begin(), alpha_grid.end());
  rs.norm_grid.assign(norm_grid.begin(), norm_grid.end());
  rs.spec = spec;
  rs.spec_used = true;

  struct MethodDef {
    std::string name;
    bool reflexive = false;
    NormKind norm = NormKind::LInf;
    double alpha = 0.0;
    PairwiseMetric metric = PairwiseMetric::Jaccard;
  };
  std::vector<MethodDef> methods;
  for (NormKind norm : norm_grid) {
    for (double alpha : alpha_grid) {
      methods.push_back({reflexive_name(norm, alpha), true, norm, alpha, PairwiseMetric::Jaccard});
    }
  }
  for (PairwiseMetric metric :
       {PairwiseMetric::Jaccard, PairwiseMetric::Cosine, PairwiseMetric::Pearson}) {
    methods.push_back({to_string(metric), false, NormKind::LInf, 0.0, metric});
  }

  // mu values indexed [method][sigma][rep]
  std::vector<std::vector<std::vector<double>>> mu(
      methods.size(), std::vector<std::vector<double>>(sigma_grid.size()));

  for (std::size_t rep = 0; rep < repetitions; ++rep) {
    const std::uint64_t rs_seed = rep_seed(seed, rep);
    const auto [a, gt] = generate_blocks(spec, spec.total_rows(), spec.total_cols(),
                                         mix_seed(rs_seed, 1));
    (void)gt;
    for (std::size_t si = 0; si < sigma_grid.size(); ++si) {
      const RecoveryInputs inputs =
          make_recovery_inputs(a, sigma_grid[si], mix_seed(rs_seed, 2 + si));
      for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        const MethodDef& md = methods[mi];
        SampleRecord sample;
        sample.method = md.name;
        sample.sigma = sigma_grid[si];
        sample.rep = rep;
        if (md.reflexive) {
          RunConfig cfg = base;
          cfg.alpha = md.alpha;
          cfg.norm = md.norm;
          const RecoveryRun run = recovery_run_reflexive(inputs, cfg);
          sample.mu = run.mu;
          sample.iterations_ref = run.iterations_ref;
          sample.iterations_hat = run.iterations_hat;
          sample.converged_ref = run.converged_ref;
          sample.converged_hat = run.converged_hat;
          rs.unconverged_runs += !run.converged_ref + !run.converged_hat;
        } else {
          sample.mu = recovery_mu_baseline(inputs, md.metric, rs.jaccard_threshold);
        }
        mu[mi][si].push_back(sample.mu);
        rs.samples.push_back(std::move(sample));
      }
    }
  }

  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    EvalCurve curve;
    curve.name = methods[mi].name;
    curve.axis = "sigma";
    for (std::size_t si = 0; si < sigma_grid.size(); ++si) {
      const MeanSpread ms = mean_and_spread(mu[mi][si]);
      curve.points.push_back({sigma_grid[si], ms.mean, ms.spread});
    }
    rs.curves.push_back(std::move(curve));
  }

  rs.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return rs;
}

}  // namespace

ResultSet permutation_experiment(const BlockSpec& spec, const RunConfig& base,
                                 std::span<const NormKind> norms, std::size_t repetitions,
                                 std::uint64_t seed) {
  const double sigma0 = 0.0;
  const double alpha = base.alpha;
  ResultSet rs = sweep_impl("perm", spec, {&sigma0, 1}, {&alpha, 1}, norms, base, repetitions, seed);
  return rs;
}

ResultSet noise_sweep(const BlockSpec& spec, std::span<const double> sigma_grid,
                      std::span<const double> alpha_grid, std::span<const NormKind> norm_grid,
                      const RunConfig& base, std::size_t repetitions, std::uint64_t seed) {
  return sweep_impl("noise", spec, sigma_grid, alpha_grid, norm_grid, base, repetitions, seed);
}

std::vector<RankedPair> rank_pairs(const Matrix& s, bool include_self) {
  if (!s.is_square()) throw std::invalid_argument("rank_pairs: matrix must be square");
  const std::size_t n = s.rows();
  std::vector<RankedPair> pairs;
  pairs.reserve(include_self ? n * (n + 1) / 2 : n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = include_self ? i : i + 1; j < n; ++j) {
      pairs.push_back({i, j, s(i, j)});
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const RankedPair& a, const RankedPair& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  return pairs;
}

EvalCurve precision_at_rank(const Matrix& s, std::span<const int> labels, std::size_t max_rank,
                            bool include_self) {
  if (labels.empty()) throw std::invalid_argument("precision_at_rank: labels are empty");
  if (labels.size() != s.rows()) {
    throw std::invalid_argument("precision_at_rank: label count must match matrix dimension");
  }
  const std::vector<RankedPair> pairs = rank_pairs(s, include_self);

  EvalCurve curve;
  curve.name = "precision";
  curve.axis = "rank";
  std::size_t hits = 0;
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    if (pairs[r].similarity <= 0.0) break;  // zero similarity ends the ranking
    if (max_rank > 0 && r >= max_rank) break;
    hits += labels[pairs[r].i] == labels[pairs[r].j];
    curve.points.push_back({static_cast<double>(r + 1),
                            static_cast<double>(hits) / static_cast<double>(r + 1), 0.0});
  }
  return curve;
}

EvalCurve null_model_curve(std::span<const int> labels, std::size_t n_classes,
                           std::size_t repetitions, std::uint64_t seed, std::size_t max_rank) {
  if (labels.empty()) throw std::invalid_argument("null_model_curve: labels are empty");
  if (n_classes < 1) throw std::invalid_argument("null_model_curve: n_classes must be >= 1");
  if (repetitions < 1) throw std::invalid_argument("null_model_curve: repetitions must be >= 1");

  const std::size_t n = labels.size();
  std::size_t ranks = n * (n - 1) / 2;
  if (max_rank > 0) ranks = std::min(ranks, max_rank);

  std::vector<double> sum(ranks, 0.0), sum_sq(ranks, 0.0);
  std::vector<int> assigned(n);
  for (std::size_t rep = 0; rep < repetitions; ++rep) {
    Rng rng(mix_seed(seed, rep));
    for (auto& c : assigned) c = static_cast<int>(rng.uniform_index(n_classes));
    std::size_t hits = 0, r = 0;
    for (std::size_t i = 0; i < n && r < ranks; ++i) {
      for (std::size_t j = i + 1; j < n && r < ranks; ++j, ++r) {
        hits += assigned[i] == assigned[j];
        const double p = static_cast<double>(hits) / static_cast<double>(r + 1);
        sum[r] += p;
        sum_sq[r] += p * p;
      }
    }
  }

  EvalCurve curve;
  curve.name = "null_model";
  curve.axis = "rank";
  const double k = static_cast<double>(repetitions);
  for (std::size_t r = 0; r < ranks; ++r) {
    const double mean = sum[r] / k;
    double spread = 0.0;
    if (repetitions > 1) {
      const double var = std::max(0.0, (sum_sq[r] - k * mean * mean) / (k - 1.0));
      spread = 2.0 * std::sqrt(var / k);
    }
    curve.points.push_back({static_cast<double>(r + 1), mean, spread});
  }
  return curve;
}

ResultSet precision_experiment(const AdjacencyMatrix& a, std::span<const int> labels,
                               std::span<const double> alpha_grid, const RunConfig& base,
                               std::size_t max_rank, std::size_t null_repetitions) {
  if (labels.size() != a.rows()) {
    throw std::invalid_argument("precision_experiment: label count must match row count");
  }
  if (alpha_grid.empty()) throw std::invalid_argument("precision_experiment: empty alpha grid");
  base.validate();

  const auto t_start = std::chrono::steady_clock::now();

  ResultSet rs;
  rs.experiment = "precision";
  rs.base_config = base;
  rs.seed = base.seed;
  rs.repetitions = null_repetitions;
  rs.alpha_grid.assign(alpha_grid.begin(), alpha_grid.end());
  rs.norm_grid = {base.norm};

  int n_classes = 0;
  for (int c : labels) n_classes = std::max(n_classes, c + 1);

  for (double alpha : alpha_grid) {
    RunConfig cfg = base;
    cfg.alpha = alpha;
    const SimilarityPair pair = reflexive_similarity(a, cfg);
    EvalCurve curve = precision_at_rank(pair.s, labels, max_rank);
    curve.name = reflexive_name(cfg.norm, alpha);
    rs.curves.push_back(std::move(curve));

    SampleRecord sample;
    sample.method = reflexive_name(cfg.norm, alpha);
    sample.iterations_ref = pair.trace.iterations_used;
    sample.converged_ref = pair.trace.converged;
    rs.unconverged_runs += !pair.trace.converged;
    rs.samples.push_back(std::move(sample));
  }

  for (PairwiseMetric metric :
       {PairwiseMetric::Jaccard, PairwiseMetric::Cosine, PairwiseMetric::Pearson}) {
    const Matrix s = pairwise_similarity(a, metric, AxisMode::Rows, rs.jaccard_threshold);
    EvalCurve curve = precision_at_rank(s, labels, max_rank);
    curve.name = to_string(metric);
    rs.curves.push_back(std::move(curve));
  }

  rs.curves.push_back(null_model_curve(labels, static_cast<std::size_t>(std::max(1, n_classes)),
                                       null_repetitions, mix_seed(base.seed, 77), max_rank));

  rs.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return rs;
}

ResultSet scaling_benchmark(std::span<const std::size_t> n_grid, std::span<const double> alpha_grid,
                            const RunConfig& base, std::size_t repetitions, std::uint64_t seed) {
  if (n_grid.empty() || alpha_grid.empty()) {
    throw std::invalid_argument("scaling_benchmark: grids must be nonempty");
  }
  if (!std::is_sorted(n_grid.begin(), n_grid.end()) ||
      std::adjacent_find(n_grid.begin(), n_grid.end()) != n_grid.end()) {
    throw std::invalid_argument("scaling_benchmark: n grid must be strictly increasing");
  }
  if (repetitions < 1) throw std::invalid_argument("scaling_benchmark: repetitions must be >= 1");
  base.validate();

  const auto t_start = std::chrono::steady_clock::now();

  ResultSet rs;
  rs.experiment = "bench";
  rs.base_config = base;
  rs.seed = seed;
  rs.repetitions = repetitions;
  rs.alpha_grid.assign(alpha_grid.begin(), alpha_grid.end());
  rs.norm_grid = {base.norm};
  rs.n_grid.assign(n_grid.begin(), n_grid.end());

  // iters[alpha][n][rep], secs_per_iter[alpha][n][rep]
  std::vector<std::vector<std::vector<double>>> iters(
      alpha_grid.size(), std::vector<std::vector<double>>(n_grid.size()));
  auto secs = iters;

  for (std::size_t ni = 0; ni < n_grid.size(); ++ni) {
    const std::size_t n = n_grid[ni];
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
      const std::uint64_t cell_seed = mix_seed(rep_seed(seed, rep), ni);
      const BlockSpec spec = random_square_spec(n, mix_seed(cell_seed, 0));
      const auto [a, gt] = generate_blocks(spec, n, n, mix_seed(cell_seed, 1));
      (void)gt;
      for (std::size_t ai = 0; ai < alpha_grid.size(); ++ai) {
        RunConfig cfg = base;
        cfg.alpha = alpha_grid[ai];
        cfg.diagonal_rescale = false;
        cfg.seed = mix_seed(cell_seed, 2);
        const SimilarityPair pair = reflexive_similarity(a, cfg);

        double total = 0.0;
        for (const auto& rec : pair.trace.records) total += rec.seconds;
        const double per_iter = total / static_cast<double>(pair.trace.iterations_used);

        iters[ai][ni].push_back(static_cast<double>(pair.trace.iterations_used));
        secs[ai][ni].push_back(per_iter);
        rs.unconverged_runs += !pair.trace.converged;

        BenchSample sample;
        sample.n = n;
        sample.alpha = alpha_grid[ai];
        sample.rep = rep;
        sample.iterations = pair.trace.iterations_used;
        sample.seconds_total = total;
        sample.converged = pair.trace.converged;
        rs.bench_samples.push_back(sample);
      }
    }
  }

  std::vector<double> xs(n_grid.size());
  for (std::size_t ni = 0; ni < n_grid.size(); ++ni) xs[ni] = static_cast<double>(n_grid[ni]);

  std::vector<double> pooled_iters(n_grid.size(), 0.0), pooled_secs(n_grid.size(), 0.0);
  for (std::size_t ai = 0; ai < alpha_grid.size(); ++ai) {
    EvalCurve iter_curve, sec_curve;
    iter_curve.name = "iterations_a" + format_alpha(alpha_grid[ai]);
    iter_curve.axis = "n";
    sec_curve.name = "seconds_per_iteration_a" + format_alpha(alpha_grid[ai]);
    sec_curve.axis = "n";
    for (std::size_t ni = 0; ni < n_grid.size(); ++ni) {
      const MeanSpread mi = mean_and_spread(iters[ai][ni]);
      const MeanSpread msv = mean_and_spread(secs[ai][ni]);
      iter_curve.points.push_back({xs[ni], mi.mean, mi.spread});
      sec_curve.points.push_back({xs[ni], msv.mean, msv.spread});
      pooled_iters[ni] += mi.mean / static_cast<double>(alpha_grid.size());
      pooled_secs[ni] += msv.mean / static_cast<double>(alpha_grid.size());
    }
    rs.curves.push_back(std::move(iter_curve));
    rs.curves.push_back(std::move(sec_curve));
  }

  EvalCurve pooled_iter_curve{"iterations_mean", "n", {}};
  EvalCurve pooled_sec_curve{"seconds_per_iteration_mean", "n", {}};
  for (std::size_t ni = 0; ni < n_grid.size(); ++ni) {
    pooled_iter_curve.points.push_back({xs[ni], pooled_iters[ni], 0.0});
    pooled_sec_curve.points.push_back({xs[ni], pooled_secs[ni], 0.0});
  }
  rs.curves.push_back(pooled_iter_curve);
  rs.curves.push_back(pooled_sec_curve);

  if (n_grid.size() >= 3) {
    rs.fits.push_back(fit_polynomial("iterations_mean", xs, pooled_iters, 1));
    rs.fits.push_back(fit_polynomial("seconds_per_iteration_mean", xs, pooled_secs, 2));
  }

  rs.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return rs;
}

FitResult fit_polynomial(const std::string& curve, std::span<const double> xs,
                         std::span<const double> ys, int degree) {
  if (degree < 1 || degree > 2) throw std::invalid_argument("fit_polynomial: degree must be 1 or 2");
  if (xs.size() != ys.size() || xs.size() < static_cast<std::size_t>(degree + 1)) {
    throw std::invalid_argument("fit_polynomial: not enough points");
  }
  const std::size_t k = xs.size();
  const int terms = degree + 1;

  // Center and scale x for a well-conditioned normal system, then map the
  // coefficients back to the original units.
  double mx = 0.0;
  for (double x : xs) mx += x;
  mx /= static_cast<double>(k);
  double sx = 0.0;
  for (double x : xs) sx += (x - mx) * (x - mx);
  sx = std::sqrt(sx / static_cast<double>(k));
  if (sx == 0.0) throw std::invalid_argument("fit_polynomial: degenerate x values");

  std::vector<double> u(k);
  for (std::size_t i = 0; i < k; ++i) u[i] = (xs[i] - mx) / sx;

  long double ata[3][3] = {};
  long double atb[3] = {};
  for (std::size_t i = 0; i < k; ++i) {
    long double pw[3] = {1.0L, u[i], u[i] * u[i]};
    for (int r = 0; r < terms; ++r) {
      for (int c = 0; c < terms; ++c) ata[r][c] += pw[r] * pw[c];
      atb[r] += pw[r] * ys[i];
    }
  }

  // Gaussian elimination with partial pivoting on the (terms x terms) system.
  std::vector<int> idx(terms);
  std::iota(idx.begin(), idx.end(), 0);
  for (int col = 0; col < terms; ++col) {
    int pivot = col;
    for (int r = col + 1; r < terms; ++r) {
      if (std::abs(static_cast<double>(ata[r][col])) >
          std::abs(static_cast<double>(ata[pivot][col]))) {
        pivot = r;
      }
    }
    std::swap(ata[col], ata[pivot]);
    std::swap(atb[col], atb[pivot]);
    for (int r = col + 1; r < terms; ++r) {
      const long double f = ata[r][col] / ata[col][col];
      for (int c = col; c < terms; ++c) ata[r][c] -= f * ata[col][c];
      atb[r] -= f * atb[col];
    }
  }
  long double cu[3] = {};
  for (int r = terms - 1; r >= 0; --r) {
    long double acc = atb[r];
    for (int c = r + 1; c < terms; ++c) acc -= ata[r][c] * cu[c];
    cu[r] = acc / ata[r][r];
  }

  FitResult fit;
  fit.curve = curve;
  fit.kind = degree == 1 ? "linear" : "quadratic";

  // Expand c0 + c1*u + c2*u^2 with u = (x - mx)/sx into powers of x.
  const double c0 = static_cast<double>(cu[0]);
  const double c1 = static_cast<double>(cu[1]);
  const double c2 = degree == 2 ? static_cast<double>(cu[2]) : 0.0;
  if (degree == 1) {
    fit.coefficients = {c0 - c1 * mx / sx, c1 / sx};
  } else {
    fit.coefficients = {c0 - c1 * mx / sx + c2 * mx * mx / (sx * sx),
                        c1 / sx - 2.0 * c2 * mx / (sx * sx), c2 / (sx * sx)};
  }

  double my = 0.0;
  for (double y : ys) my += y;
  my /= static_cast<double>(k);
  double ss_tot = 0.0, ss_res = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double pred = c0 + c1 * u[i] + c2 * u[i] * u[i];
    ss_tot += (ys[i] - my) * (ys[i] - my);
    ss_res += (ys[i] - pred) * (ys[i] - pred);
  }
  fit.r_squared = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
  return fit;
}

}  // namespace rre
