#include "rre/evaluation.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "rre/rng.hpp"

using namespace rre;

namespace {

Matrix random_symmetric_positive(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Matrix s(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    s(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.01 + 0.98 * rng.uniform01();
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return s;
}

// Element-wise restatement of the mu formula, independent of the library's
// norm helpers.
double mu_by_hand(const Matrix& s, const Matrix& sh, const Matrix& sp, const Matrix& sph) {
  double acc1 = 0.0;
  for (std::size_t k = 0; k < s.values().size(); ++k) {
    const double d = s.values()[k] - sh.values()[k];
    acc1 += d * d;
  }
  double acc2 = 0.0;
  for (std::size_t k = 0; k < sp.values().size(); ++k) {
    const double d = sp.values()[k] - sph.values()[k];
    acc2 += d * d;
  }
  const double n2 = static_cast<double>(s.rows()) * static_cast<double>(s.rows());
  const double m2 = static_cast<double>(sp.rows()) * static_cast<double>(sp.rows());
  return 0.5 * std::sqrt(acc1) / n2 + 0.5 * std::sqrt(acc2) / m2;
}

}  // namespace

TEST_CASE("mu is zero on identical pairs") {
  const Matrix s = random_symmetric_positive(5, 1);
  const Matrix sp = random_symmetric_positive(7, 2);
  CHECK(mu_score(s, s, sp, sp) == 0.0);
}

TEST_CASE("a single-entry difference contributes delta over 2 n^2") {
  const Matrix s = random_symmetric_positive(6, 3);
  Matrix sh = s;
  sh(2, 4) += 0.125;
  const Matrix sp = random_symmetric_positive(4, 4);
  CHECK(mu_score(s, sh, sp, sp) == doctest::Approx(0.125 / (2.0 * 36.0)).epsilon(1e-12));
}

TEST_CASE("mu matches an independent element-wise evaluation") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Matrix s = random_symmetric_positive(5, seed);
    const Matrix sh = random_symmetric_positive(5, seed + 10);
    const Matrix sp = random_symmetric_positive(5, seed + 20);
    const Matrix sph = random_symmetric_positive(5, seed + 30);
    CHECK(mu_score(s, sh, sp, sph) == doctest::Approx(mu_by_hand(s, sh, sp, sph)).epsilon(1e-13));
    CHECK(mu_score(s, sh, sp, sph) == mu_score(sh, s, sph, sp));  // symmetric premetric
    CHECK(mu_score(s, sh, sp, sph) >= 0.0);
  }
}

TEST_CASE("mu dimension-denominator variant") {
  const Matrix s = random_symmetric_positive(4, 5);
  Matrix sh = s;
  sh(0, 1) += 0.5;
  const Matrix sp = random_symmetric_positive(4, 6);
  CHECK(mu_score(s, sh, sp, sp, MuDenominator::Dimension) ==
        doctest::Approx(0.5 / (2.0 * 4.0)).epsilon(1e-12));
}

TEST_CASE("mu rejects mismatched shapes") {
  const Matrix a4 = random_symmetric_positive(4, 0);
  const Matrix a5 = random_symmetric_positive(5, 0);
  CHECK_THROWS_AS(mu_score(a4, a5, a4, a4), std::invalid_argument);
}

TEST_CASE("identity permutation with identical seeds gives exactly zero mu") {
  const auto [a, gt] = generate_blocks(default_balanced_spec(0.5), 60, 80, 50);
  (void)gt;
  RecoveryInputs in;
  in.ref_input = a;
  in.hat_input = a;
  in.row_perm = Permutation::identity(a.rows());
  in.col_perm = Permutation::identity(a.cols());
  in.init_ref_seed = 9;
  in.init_hat_seed = 9;
  RunConfig cfg;
  cfg.alpha = 0.5;
  CHECK(recovery_run_reflexive(in, cfg).mu == 0.0);
  CHECK(recovery_mu_baseline(in, PairwiseMetric::Jaccard) == 0.0);
}

TEST_CASE("consistent initialization keeps recovery mu at rounding level") {
  const auto [a, gt] = generate_blocks(default_balanced_spec(0.5), 60, 80, 51);
  RunConfig cfg;
  cfg.alpha = 0.5;
  cfg.seed = 3;
  const double mu = permutation_recovery_consistent(a, gt, cfg, 123);
  CHECK(mu <= 1e-8);

  const EquivarianceCheck check = equivariance_check(a, cfg, 77);
  CHECK(check.max_abs_diff_s <= 1e-10);
  CHECK(check.max_abs_diff_sp <= 1e-10);
  CHECK(check.mu <= 1e-8);
}

TEST_CASE("independent initialization gives small but nonzero mu") {
  const auto [a, gt] = generate_blocks(default_balanced_spec(0.5), 60, 80, 52);
  RunConfig cfg;
  cfg.alpha = 0.0;
  const double mu = permutation_recovery(a, gt, cfg, 7);
  CHECK(mu > 0.0);
  CHECK(mu < 0.05);
}

TEST_CASE("pairwise baselines recover a noiseless permutation essentially exactly") {
  const auto [a, gt] = generate_blocks(default_balanced_spec(0.5), 60, 80, 53);
  for (PairwiseMetric metric :
       {PairwiseMetric::Jaccard, PairwiseMetric::Cosine, PairwiseMetric::Pearson}) {
    CHECK(baseline_permutation_recovery(a, gt, metric, 11) <= 1e-12);
  }
}

TEST_CASE("rank_pairs orders by similarity with lexicographic tie-break") {
  Matrix s(3, 3, 0.0);
  s(0, 0) = 1.0;
  s(1, 1) = 1.0;
  s(2, 2) = 1.0;
  s(0, 1) = s(1, 0) = 0.5;
  s(0, 2) = s(2, 0) = 0.5;
  s(1, 2) = s(2, 1) = 0.25;
  const auto pairs = rank_pairs(s, true);
  REQUIRE(pairs.size() == 6);
  CHECK(pairs[0] == RankedPair{0, 0, 1.0});
  CHECK(pairs[1] == RankedPair{1, 1, 1.0});
  CHECK(pairs[2] == RankedPair{2, 2, 1.0});
  CHECK(pairs[3] == RankedPair{0, 1, 0.5});
  CHECK(pairs[4] == RankedPair{0, 2, 0.5});
  CHECK(pairs[5] == RankedPair{1, 2, 0.25});

  CHECK(rank_pairs(s, false).size() == 3);
}

TEST_CASE("precision is 1 everywhere when all items share a class") {
  const Matrix s = random_symmetric_positive(6, 8);
  const std::vector<int> labels(6, 0);
  const EvalCurve curve = precision_at_rank(s, labels, 0);
  REQUIRE(curve.points.size() == 21);
  for (const auto& p : curve.points) CHECK(p.y == 1.0);
}

TEST_CASE("a unit diagonal puts self-pairs first at precision 1") {
  Matrix s = random_symmetric_positive(5, 9);
  for (std::size_t i = 0; i < 5; ++i) s(i, i) = 1.0;
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = i + 1; j < 5; ++j) {
      s(i, j) *= 0.9;  // strictly below the diagonal values
      s(j, i) = s(i, j);
    }
  }
  const std::vector<int> labels{0, 1, 0, 1, 2};
  const EvalCurve curve = precision_at_rank(s, labels, 0);
  for (std::size_t r = 0; r < 5; ++r) CHECK(curve.points[r].y == 1.0);
}

TEST_CASE("asymptotic precision equals the enumerated same-class fraction") {
  const Matrix s = random_symmetric_positive(8, 10);
  const std::vector<int> labels{0, 0, 0, 0, 1, 1, 1, 1};

  std::size_t same = 0, total = 0;
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = i; j < 8; ++j) {
      ++total;
      same += labels[i] == labels[j];
    }
  }
  const EvalCurve curve = precision_at_rank(s, labels, 0);
  REQUIRE(curve.points.size() == total);
  CHECK(curve.points.back().y ==
        doctest::Approx(static_cast<double>(same) / static_cast<double>(total)));
}

TEST_CASE("precision is invariant under strictly monotone transforms") {
  const Matrix s = random_symmetric_positive(7, 11);
  Matrix cubed = s;
  for (double& v : cubed.values()) v = v * v * v;
  const std::vector<int> labels{0, 1, 2, 0, 1, 2, 0};
  CHECK(precision_at_rank(s, labels, 0).points == precision_at_rank(cubed, labels, 0).points);
}

TEST_CASE("nonpositive similarities terminate the curve") {
  Matrix s(3, 3, 0.0);
  s(0, 0) = 1.0;
  s(1, 1) = 0.5;
  // remaining pairs are zero
  const std::vector<int> labels{0, 0, 1};
  const EvalCurve curve = precision_at_rank(s, labels, 0);
  CHECK(curve.points.size() == 2);
}

TEST_CASE("precision respects the rank cap and validates input") {
  const Matrix s = random_symmetric_positive(6, 12);
  const std::vector<int> labels{0, 1, 0, 1, 0, 1};
  CHECK(precision_at_rank(s, labels, 4).points.size() == 4);
  CHECK_THROWS_AS(precision_at_rank(s, std::vector<int>{}, 0), std::invalid_argument);
  CHECK_THROWS_AS(precision_at_rank(s, std::vector<int>{0, 1}, 0), std::invalid_argument);
}

TEST_CASE("null model with one class is exactly 1") {
  const std::vector<int> labels(5, 0);
  const EvalCurve curve = null_model_curve(labels, 1, 3, 42);
  for (const auto& p : curve.points) CHECK(p.y == 1.0);
}

TEST_CASE("null model with four classes hovers near one quarter") {
  const std::vector<int> labels(40, 0);
  const EvalCurve curve = null_model_curve(labels, 4, 50, 17);
  REQUIRE(curve.points.size() == 40 * 39 / 2);
  CHECK(curve.points.back().y == doctest::Approx(0.25).epsilon(0.2));
  for (std::size_t k = 1; k < curve.points.size(); ++k) {
    CHECK(curve.points[k].x > curve.points[k - 1].x);
    CHECK(curve.points[k].spread >= 0.0);
  }
}

TEST_CASE("polynomial fits recover exact coefficients") {
  std::vector<double> xs{10, 50, 100, 200, 300, 400, 500};
  std::vector<double> lin(xs.size()), quad(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    lin[i] = 3.0 + 0.02 * xs[i];
    quad[i] = 1.0 + 0.5 * xs[i] + 0.25 * xs[i] * xs[i];
  }
  const FitResult lf = fit_polynomial("lin", xs, lin, 1);
  CHECK(lf.coefficients[0] == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(lf.coefficients[1] == doctest::Approx(0.02).epsilon(1e-9));
  CHECK(lf.r_squared == doctest::Approx(1.0));

  const FitResult qf = fit_polynomial("quad", xs, quad, 2);
  CHECK(qf.coefficients[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(qf.coefficients[1] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(qf.coefficients[2] == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(qf.r_squared == doctest::Approx(1.0));

  std::vector<double> noisy = lin;
  noisy[3] += 2.0;
  CHECK(fit_polynomial("noisy", xs, noisy, 1).r_squared < 1.0);
}

TEST_CASE("noise sweep emits one curve per method and is deterministic") {
  BlockSpec spec;
  spec.row_block_sizes = {6, 8};
  spec.col_block_sizes = {7, 9};
  spec.fill_density = 0.6;
  const double sigmas[] = {0.2, 0.6};
  const double alphas[] = {0.0, 1.0};
  const NormKind norms[] = {NormKind::LInf};
  RunConfig base;
  base.max_iterations = 200;

  const ResultSet rs = noise_sweep(spec, sigmas, alphas, norms, base, 2, 99);
  REQUIRE(rs.curves.size() == 5);  // 2 reflexive + 3 baselines
  CHECK(rs.find_curve("reflexive_linf_a0") != nullptr);
  CHECK(rs.find_curve("reflexive_linf_a1") != nullptr);
  CHECK(rs.find_curve("jaccard") != nullptr);
  CHECK(rs.samples.size() == 2 * 2 * 5);
  for (const auto& c : rs.curves) {
    REQUIRE(c.points.size() == 2);
    CHECK(c.points[0].x == 0.2);
    CHECK(c.points[1].x == 0.6);
    for (const auto& p : c.points) CHECK(p.y > 0.0);
  }

  ResultSet again = noise_sweep(spec, sigmas, alphas, norms, base, 2, 99);
  again.wall_seconds = rs.wall_seconds;
  CHECK(again == rs);
}

TEST_CASE("permutation experiment reports near-zero mu for every method") {
  RunConfig base;
  base.alpha = 1.0;
  base.max_iterations = 200;
  const ResultSet rs = permutation_experiment(default_balanced_spec(0.5), base,
                                              std::vector<NormKind>{NormKind::L1, NormKind::L2,
                                                                    NormKind::LInf},
                                              3, 4);
  REQUIRE(rs.curves.size() == 6);
  for (const auto& c : rs.curves) {
    REQUIRE(c.points.size() == 1);
    CHECK(c.points[0].y <= 1e-8);
  }
}

TEST_CASE("scaling benchmark produces curves, fits and deterministic iteration counts") {
  const std::size_t ns[] = {10, 20, 30};
  const double alphas[] = {0.0};
  RunConfig base;
  base.max_iterations = 200;
  const ResultSet rs = scaling_benchmark(ns, alphas, base, 2, 31);
  CHECK(rs.find_curve("iterations_a0") != nullptr);
  CHECK(rs.find_curve("seconds_per_iteration_mean") != nullptr);
  REQUIRE(rs.fits.size() == 2);
  CHECK(rs.fits[0].kind == "linear");
  CHECK(rs.fits[1].kind == "quadratic");

  const ResultSet again = scaling_benchmark(ns, alphas, base, 2, 31);
  REQUIRE(again.bench_samples.size() == rs.bench_samples.size());
  for (std::size_t k = 0; k < rs.bench_samples.size(); ++k) {
    CHECK(again.bench_samples[k].iterations == rs.bench_samples[k].iterations);
  }
  const std::size_t bad_ns[] = {10, 10};
  CHECK_THROWS_AS(scaling_benchmark(bad_ns, alphas, base, 1, 0), std::invalid_argument);
}

TEST_CASE("precision experiment bundles reflexive, baseline and null curves") {
  const auto [a, gt] = generate_blocks(default_balanced_spec(0.8), 60, 80, 60);
  const double alphas[] = {0.0, 1.0};
  RunConfig base;
  base.max_iterations = 200;
  const ResultSet rs = precision_experiment(a, gt.row_labels, alphas, base, 50, 5);
  CHECK(rs.curves.size() == 6);  // 2 reflexive + 3 baselines + null
  CHECK(rs.find_curve("null_model") != nullptr);
  const EvalCurve* refl = rs.find_curve("reflexive_linf_a0");
  REQUIRE(refl != nullptr);
  REQUIRE(!refl->points.empty());
  // diagonal rescale on: top ranks are perfectly self-similar same-class pairs
  CHECK(refl->points[0].y == 1.0);
}
