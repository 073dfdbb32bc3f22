#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rre/baselines.hpp"
#include "rre/engine.hpp"
#include "rre/matrix.hpp"
#include "rre/synthgen.hpp"

namespace rre {

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
  double spread = 0.0;  // 2 x standard error of the mean across repetitions
  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

/// One named curve with strictly increasing x.
struct EvalCurve {
  std::string name;
  std::string axis;
  std::vector<CurvePoint> points;
  friend bool operator==(const EvalCurve&, const EvalCurve&) = default;
};

/// One recovery run inside a sweep: method, noise level, repetition index and
/// the resulting mu, plus convergence bookkeeping for the reflexive runs.
struct SampleRecord {
  std::string method;
  double sigma = 0.0;
  std::size_t rep = 0;
  double mu = 0.0;
  std::size_t iterations_ref = 0;
  std::size_t iterations_hat = 0;
  bool converged_ref = true;
  bool converged_hat = true;
  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

struct BenchSample {
  std::size_t n = 0;
  double alpha = 0.0;
  std::size_t rep = 0;
  std::size_t iterations = 0;
  double seconds_total = 0.0;
  bool converged = true;
  friend bool operator==(const BenchSample&, const BenchSample&) = default;
};

struct FitResult {
  std::string curve;
  std::string kind;                // "linear" or "quadratic"
  std::vector<double> coefficients;  // ascending powers of x
  double r_squared = 0.0;
  friend bool operator==(const FitResult&, const FitResult&) = default;
};

/// Everything one experiment produced: config echo, grids, curves, raw
/// samples and fits. dataio serializes this losslessly.
struct ResultSet {
  std::string experiment;
  RunConfig base_config;
  std::uint64_t seed = 0;
  std::size_t repetitions = 0;
  std::vector<double> sigma_grid;
  std::vector<double> alpha_grid;
  std::vector<NormKind> norm_grid;
  std::vector<std::size_t> n_grid;
  BlockSpec spec;
  bool spec_used = false;
  double jaccard_threshold = 0.0;
  std::string mu_denominator = "entries";
  std::vector<EvalCurve> curves;
  std::vector<SampleRecord> samples;
  std::vector<BenchSample> bench_samples;
  std::vector<FitResult> fits;
  std::size_t unconverged_runs = 0;
  double wall_seconds = 0.0;

  const EvalCurve* find_curve(const std::string& name) const;
  friend bool operator==(const ResultSet&, const ResultSet&) = default;
};

enum class MuDenominator { Entries, Dimension };

/// mu = 1/2 ||S - S_hat||_F / |S| + 1/2 ||S' - S_hat'||_F / |S'|, where |S| is
/// the entry count n^2 (or the dimension n with MuDenominator::Dimension).
/// Zero iff both pairs are identical.
double mu_score(const Matrix& s, const Matrix& s_hat, const Matrix& sp, const Matrix& sp_hat,
                MuDenominator denominator = MuDenominator::Entries);

/// Shared inputs of one recovery comparison. For sigma > 0 the reference and
/// permuted sides carry independent noise draws on the same base matrix, so a
/// method is scored on how stably it recovers structure, not on replaying
/// identical arithmetic.
struct RecoveryInputs {
  AdjacencyMatrix ref_input;
  AdjacencyMatrix hat_input;
  Permutation row_perm{std::vector<std::size_t>{}};
  Permutation col_perm{std::vector<std::size_t>{}};
  std::uint64_t init_ref_seed = 0;
  std::uint64_t init_hat_seed = 0;  // used only with independent initialization
};

RecoveryInputs make_recovery_inputs(const AdjacencyMatrix& a, double sigma, std::uint64_t seed);

struct RecoveryRun {
  double mu = 0.0;
  std::size_t iterations_ref = 0;
  std::size_t iterations_hat = 0;
  bool converged_ref = true;
  bool converged_hat = true;
};

/// Engine on both sides of the comparison; the permuted side's result is
/// mapped back to the reference ordering before scoring. Diagonal rescaling
/// is disabled: raw normalized matrices are compared.
///
/// With consistent_init (the sweep default) the permuted side starts from the
/// row-permuted copy of the reference initialization, so methods are compared
/// on how they handle the data, not on initialization luck; on exactly
/// block-structured noiseless inputs the iteration's limit retains an
/// initialization-dependent component, which would otherwise swamp the
/// noiseless comparison. With consistent_init = false both sides draw
/// independent random initializations.
RecoveryRun recovery_run_reflexive(const RecoveryInputs& in, const RunConfig& cfg,
                                   bool consistent_init = true);

/// Same comparison for a pairwise baseline (rows metric for S, columns metric
/// for S').
double recovery_mu_baseline(const RecoveryInputs& in, PairwiseMetric metric,
                            double jaccard_threshold = 0.0);

/// Runs the engine on A and on a freshly permuted copy with an independent
/// random initialization, maps the permuted results back to A's ordering and
/// returns their mu.
double permutation_recovery(const AdjacencyMatrix& a, const GroundTruth& gt, const RunConfig& cfg,
                            std::uint64_t seed);

/// Same, but with the initialization permuted consistently; mu then reflects
/// only accumulated rounding (the permutation-equivariance mechanism).
double permutation_recovery_consistent(const AdjacencyMatrix& a, const GroundTruth& gt,
                                       const RunConfig& cfg, std::uint64_t seed);

/// Same pipeline for a pairwise baseline metric.
double baseline_permutation_recovery(const AdjacencyMatrix& a, const GroundTruth& gt,
                                     PairwiseMetric metric, std::uint64_t seed);

struct EquivarianceCheck {
  double max_abs_diff_s = 0.0;
  double max_abs_diff_sp = 0.0;
  double mu = 0.0;
};

/// Permutation equivariance: runs the engine on A, then on a random
/// permutation of A with the initialization permuted consistently (rows of
/// the initial S follow A's row permutation), un-permutes and reports the
/// element-wise deviation and mu against the reference run.
EquivarianceCheck equivariance_check(const AdjacencyMatrix& a, const RunConfig& cfg,
                                     std::uint64_t seed);

/// Noiseless single-point sweep over the given norms at base.alpha, with the
/// three pairwise baselines: one mu summary per method over `repetitions`
/// instances of the spec, mirroring a bar-chart table.
ResultSet permutation_experiment(const BlockSpec& spec, const RunConfig& base,
                                 std::span<const NormKind> norms, std::size_t repetitions,
                                 std::uint64_t seed);

/// Full sweep: for every (sigma, alpha, norm) the engine runs on a noisy
/// instance and on an independently-noised permuted instance; pairwise
/// baselines see the same inputs. Every method is paired per (rep, sigma):
/// same base matrix, same noise draws, same permutation. Curves hold mean mu
/// over repetitions per sigma with spread = 2 s.e.
ResultSet noise_sweep(const BlockSpec& spec, std::span<const double> sigma_grid,
                      std::span<const double> alpha_grid, std::span<const NormKind> norm_grid,
                      const RunConfig& base, std::size_t repetitions, std::uint64_t seed);

/// All (i, j) pairs with i <= j (self-pairs optional), sorted by descending
/// similarity, ties broken by ascending (i, j).
struct RankedPair {
  std::size_t i = 0;
  std::size_t j = 0;
  double similarity = 0.0;
  friend bool operator==(const RankedPair&, const RankedPair&) = default;
};
std::vector<RankedPair> rank_pairs(const Matrix& s, bool include_self = true);

/// Precision at rank r = fraction of the top r pairs whose endpoints share a
/// class. The curve stops at max_rank (0 = no cap) or just before the first
/// pair with similarity <= 0, whichever comes first.
EvalCurve precision_at_rank(const Matrix& s, std::span<const int> labels, std::size_t max_rank,
                            bool include_self = true);

/// Expected precision when every item gets a uniformly random class:
/// mean running precision over the canonical (i < j) pair order across
/// repetitions. Self-pairs are excluded (they would match trivially).
EvalCurve null_model_curve(std::span<const int> labels, std::size_t n_classes,
                           std::size_t repetitions, std::uint64_t seed, std::size_t max_rank = 0);

/// Precision-at-rank study on labeled data: reflexive runs per alpha in
/// alpha_grid (cfg.norm, diagonal rescale as configured), the three pairwise
/// baselines, and the null model.
ResultSet precision_experiment(const AdjacencyMatrix& a, std::span<const int> labels,
                               std::span<const double> alpha_grid, const RunConfig& base,
                               std::size_t max_rank, std::size_t null_repetitions);

/// Iterations-to-convergence and seconds-per-iteration over square
/// block-random matrices of the given sizes, with a linear fit of iterations
/// vs n and a quadratic fit of seconds-per-iteration vs n on the pooled
/// means.
ResultSet scaling_benchmark(std::span<const std::size_t> n_grid, std::span<const double> alpha_grid,
                            const RunConfig& base, std::size_t repetitions, std::uint64_t seed);

/// Least-squares polynomial fit (degree 1 or 2) with R^2 on the given points.
FitResult fit_polynomial(const std::string& curve, std::span<const double> xs,
                         std::span<const double> ys, int degree);

}  // namespace rre
