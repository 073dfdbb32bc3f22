// Command-line front end. Every computation goes through the C API in rre.h;
// this file only maps flags onto library calls and file names.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rre.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotConverged = 2;

struct BlockSpecStorage {
  std::vector<size_t> row_sizes;
  std::vector<size_t> col_sizes;
  std::vector<size_t> assign_rows;
  std::vector<size_t> assign_cols;
  double density = 0.5;

  rre_block_spec view() const {
    rre_block_spec spec{};
    spec.row_block_sizes = row_sizes.data();
    spec.row_block_count = row_sizes.size();
    spec.col_block_sizes = col_sizes.data();
    spec.col_block_count = col_sizes.size();
    spec.assign_row_blocks = assign_rows.empty() ? nullptr : assign_rows.data();
    spec.assign_col_blocks = assign_cols.empty() ? nullptr : assign_cols.data();
    spec.assign_count = assign_rows.size();
    spec.fill_density = density;
    spec.fill_value = 1.0;
    return spec;
  }
};

BlockSpecStorage balanced_default() {
  BlockSpecStorage s;
  s.row_sizes = {12, 18, 14, 16};
  s.col_sizes = {16, 24, 18, 22};
  return s;
}

BlockSpecStorage unbalanced_default() {
  BlockSpecStorage s;
  s.row_sizes = {20, 20, 20};
  s.col_sizes = {16, 16, 16, 16, 16};
  s.assign_rows = {0, 0, 1, 1, 2};
  s.assign_cols = {0, 3, 1, 4, 2};
  return s;
}

std::vector<size_t> parse_size_list(const std::string& text) {
  std::vector<size_t> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) throw CLI::ValidationError("empty element in list '" + text + "'");
    out.push_back(std::stoull(cur));
    cur.clear();
  };
  for (char c : text) {
    if (c == ',') {
      flush();
    } else {
      cur += c;
    }
  }
  flush();
  return out;
}

// "r1,r2,.../c1,c2,...[:rb-cb,rb-cb,...]"; the assignment part is optional
// and defaults to diagonal.
BlockSpecStorage parse_blocks(const std::string& text, double density) {
  BlockSpecStorage s;
  s.density = density;
  std::string body = text;
  std::string assign;
  if (auto pos = body.find(':'); pos != std::string::npos) {
    assign = body.substr(pos + 1);
    body = body.substr(0, pos);
  }
  const auto slash = body.find('/');
  if (slash == std::string::npos) {
    s.row_sizes = parse_size_list(body);
    s.col_sizes = s.row_sizes;
  } else {
    s.row_sizes = parse_size_list(body.substr(0, slash));
    s.col_sizes = parse_size_list(body.substr(slash + 1));
  }
  if (!assign.empty()) {
    std::string cur;
    auto flush = [&] {
      const auto dash = cur.find('-');
      if (dash == std::string::npos) {
        throw CLI::ValidationError("assignment element '" + cur + "' must be rb-cb");
      }
      s.assign_rows.push_back(std::stoull(cur.substr(0, dash)));
      s.assign_cols.push_back(std::stoull(cur.substr(dash + 1)));
      cur.clear();
    };
    for (char c : assign) {
      if (c == ',') {
        flush();
      } else {
        cur += c;
      }
    }
    flush();
  }
  return s;
}

std::string output_dir_default() {
  const char* env = std::getenv("RRE_OUTPUT_DIR");
  return env != nullptr && env[0] != '\0' ? env : ".";
}

std::string join_path(const std::string& dir, const std::string& name) {
  if (dir.empty() || dir == ".") return name;
  return dir.back() == '/' ? dir + name : dir + "/" + name;
}

int fail_with_last_error(const char* context) {
  std::fprintf(stderr, "error: %s: %s\n", context, rre_last_error());
  return kExitUsage;
}

struct CommonFlags {
  std::string output_dir = output_dir_default();
  double alpha = 0.5;
  std::string norm = "linf";
  double tolerance = 1e-5;
  unsigned max_iter = 500;
  std::uint64_t seed = 0;
  bool no_diag_rescale = false;
  bool strict = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--output-dir", output_dir, "Directory for output files")
        ->capture_default_str();
    cmd->add_option("--alpha", alpha, "Transitivity weight in [0,1]")->capture_default_str();
    cmd->add_option("--norm", norm, "Normalization variant (l1|l2|linf)")
        ->check(CLI::IsMember({"l1", "l2", "linf"}))
        ->capture_default_str();
    cmd->add_option("--tol", tolerance, "Convergence tolerance")->capture_default_str();
    cmd->add_option("--max-iter", max_iter, "Maximum full iterations")->capture_default_str();
    cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
    cmd->add_flag("--no-diag-rescale", no_diag_rescale,
                  "Skip the final S_ij / sqrt(S_ii S_jj) pass");
    cmd->add_flag("--strict-convergence", strict,
                  "Stop on the norm of iterate differences instead of norm deltas");
  }

  rre_config config() const {
    rre_config cfg;
    rre_config_init(&cfg);
    cfg.alpha = alpha;
    cfg.norm = norm == "l1" ? RRE_NORM_L1 : norm == "l2" ? RRE_NORM_L2 : RRE_NORM_LINF;
    cfg.tolerance = tolerance;
    cfg.max_iterations = max_iter;
    cfg.seed = seed;
    cfg.diagonal_rescale = no_diag_rescale ? 0 : 1;
    cfg.strict_convergence = strict ? 1 : 0;
    return cfg;
  }
};

rre_file_format parse_format(const std::string& name) {
  return name == "coord" ? RRE_FORMAT_COORD : RRE_FORMAT_DENSE_CSV;
}

int write_curveset(rre_curveset* cs, const std::string& dir, const std::string& stem) {
  const std::string json_path = join_path(dir, stem + ".json");
  const std::string csv_path = join_path(dir, stem + ".csv");
  if (rre_curveset_save_json(cs, json_path.c_str()) != RRE_OK) {
    return fail_with_last_error("writing results");
  }
  if (rre_curveset_save_csv(cs, csv_path.c_str()) != RRE_OK) {
    return fail_with_last_error("writing results");
  }
  std::printf("wrote %s and %s\n", json_path.c_str(), csv_path.c_str());
  const size_t unconverged = rre_curveset_unconverged(cs);
  if (unconverged > 0) {
    std::fprintf(stderr, "warning: %zu run(s) stopped at the iteration cap\n", unconverged);
    return kExitNotConverged;
  }
  return kExitOk;
}

int run_similarity(const std::string& input, const std::string& format, const CommonFlags& flags) {
  rre_matrix* a = nullptr;
  if (rre_matrix_load(input.c_str(), parse_format(format), &a) != RRE_OK) {
    return fail_with_last_error("loading input");
  }

  const rre_config cfg = flags.config();
  rre_simpair* pair = nullptr;
  if (rre_reflexive_similarity(a, &cfg, &pair) != RRE_OK) {
    rre_matrix_free(a);
    return fail_with_last_error("similarity");
  }

  const std::string s_path = join_path(flags.output_dir, "S.csv");
  const std::string sp_path = join_path(flags.output_dir, "S_prime.csv");
  const std::string trace_path = join_path(flags.output_dir, "trace.csv");

  int code = kExitOk;
  if (rre_matrix_save(rre_simpair_row_similarity(pair), s_path.c_str(), RRE_FORMAT_DENSE_CSV) !=
          RRE_OK ||
      rre_matrix_save(rre_simpair_col_similarity(pair), sp_path.c_str(), RRE_FORMAT_DENSE_CSV) !=
          RRE_OK ||
      rre_simpair_save_trace(pair, trace_path.c_str()) != RRE_OK) {
    code = fail_with_last_error("writing outputs");
  } else {
    std::printf("wrote %s, %s, %s\n", s_path.c_str(), sp_path.c_str(), trace_path.c_str());
    std::printf("iterations=%zu converged=%d\n", rre_simpair_iterations(pair),
                rre_simpair_converged(pair));
    if (rre_simpair_converged(pair) == 0) code = kExitNotConverged;
  }

  rre_simpair_free(pair);
  rre_matrix_free(a);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reflexive regular equivalence for bipartite data"};
  app.require_subcommand(1);

  // similarity
  auto* sim = app.add_subcommand("similarity", "Compute S and S' for one matrix");
  std::string sim_input;
  std::string sim_format = "csv";
  CommonFlags sim_flags;
  sim->add_option("--input", sim_input, "Adjacency matrix file")->required();
  sim->add_option("--format", sim_format, "Input format (csv|coord)")
      ->check(CLI::IsMember({"csv", "coord"}))
      ->capture_default_str();
  sim_flags.add_to(sim);

  // eval with subcommands
  auto* eval = app.add_subcommand("eval", "Run an experiment and write result tables");
  eval->require_subcommand(1);

  struct EvalFlags {
    CommonFlags common;
    unsigned reps = 10;
    std::string blocks;
    double density = 0.5;
    std::vector<double> sigma_grid = {0.1, 0.2, 0.4, 0.6, 0.8, 1.0};
    std::vector<double> alpha_grid;
    std::vector<size_t> n_grid = {10, 50, 100, 200, 300, 400, 500};
    bool norm_given = false;
  };

  EvalFlags perm_flags, noise_flags, unbal_flags, prec_flags, bench_flags;

  auto add_spec_flags = [](CLI::App* cmd, EvalFlags& f) {
    f.common.add_to(cmd);
    cmd->add_option("--reps", f.reps, "Repetitions per grid point")->capture_default_str();
    cmd->add_option("--blocks", f.blocks,
                    "Block sizes r1,r2,.../c1,c2,...[:rb-cb,...]; default depends on the command");
    cmd->add_option("--density", f.density, "Bernoulli fill density inside blocks")
        ->capture_default_str();
  };

  auto* perm = eval->add_subcommand("perm", "Permutation recovery on noiseless block data");
  add_spec_flags(perm, perm_flags);

  auto* noise = eval->add_subcommand("noise", "mu versus noise level");
  add_spec_flags(noise, noise_flags);
  noise->add_option("--sigma-grid", noise_flags.sigma_grid, "Noise levels")->delimiter(',');
  noise->add_option("--alpha-grid", noise_flags.alpha_grid, "Alpha values (default 0,0.5,1)")
      ->delimiter(',');

  auto* unbal = eval->add_subcommand("unbalanced", "mu versus noise on unbalanced blocks");
  add_spec_flags(unbal, unbal_flags);
  unbal->add_option("--sigma-grid", unbal_flags.sigma_grid, "Noise levels")->delimiter(',');
  unbal->add_option("--alpha-grid", unbal_flags.alpha_grid, "Alpha values (default 0,0.5,1)")
      ->delimiter(',');

  auto* prec = eval->add_subcommand("precision", "Precision at rank on labeled data");
  std::string prec_input, prec_labels;
  std::string prec_format = "csv";
  unsigned null_reps = 10;
  size_t max_rank = 0;
  prec->add_option("--input", prec_input, "Adjacency matrix file")->required();
  prec->add_option("--format", prec_format, "Input format (csv|coord)")
      ->check(CLI::IsMember({"csv", "coord"}))
      ->capture_default_str();
  prec->add_option("--labels", prec_labels, "identifier,class CSV")->required();
  prec->add_option("--null-reps", null_reps, "Null model repetitions")->capture_default_str();
  prec->add_option("--max-rank", max_rank, "Rank cap (0 = all pairs)")->capture_default_str();
  prec_flags.common.add_to(prec);
  prec->add_option("--alpha-grid", prec_flags.alpha_grid,
                   "Alpha values (default 0,0.25,0.5,0.75,1)")
      ->delimiter(',');

  auto* bench = eval->add_subcommand("bench", "Convergence and runtime versus matrix size");
  bench_flags.reps = 10;
  bench_flags.common.add_to(bench);
  bench->add_option("--reps", bench_flags.reps, "Repetitions per size")->capture_default_str();
  bench->add_option("--n-grid", bench_flags.n_grid, "Square matrix sizes")->delimiter(',');
  bench->add_option("--alpha-grid", bench_flags.alpha_grid, "Alpha values (default 0,0.5,1)")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (sim->parsed()) return run_similarity(sim_input, sim_format, sim_flags);

  auto spec_for = [](const EvalFlags& f, bool unbalanced) {
    if (!f.blocks.empty()) return parse_blocks(f.blocks, f.density);
    BlockSpecStorage s = unbalanced ? unbalanced_default() : balanced_default();
    s.density = f.density;
    return s;
  };

  auto norm_grid_for = [](const CommonFlags& common, const CLI::App* cmd) {
    std::vector<rre_norm_kind> norms;
    if (cmd->count("--norm") > 0) {
      norms.push_back(common.config().norm);
    } else {
      norms = {RRE_NORM_L1, RRE_NORM_L2, RRE_NORM_LINF};
    }
    return norms;
  };

  if (perm->parsed()) {
    const BlockSpecStorage storage = spec_for(perm_flags, false);
    const rre_block_spec spec = storage.view();
    const rre_config cfg = perm_flags.common.config();
    rre_curveset* cs = nullptr;
    if (rre_eval_perm(&spec, &cfg, perm_flags.reps, perm_flags.common.seed, &cs) != RRE_OK) {
      return fail_with_last_error("eval perm");
    }
    const int code = write_curveset(cs, perm_flags.common.output_dir, "perm");
    rre_curveset_free(cs);
    return code;
  }

  auto run_noise_like = [&](EvalFlags& f, CLI::App* cmd, bool unbalanced, const char* stem) {
    const BlockSpecStorage storage = spec_for(f, unbalanced);
    const rre_block_spec spec = storage.view();
    const rre_config cfg = f.common.config();
    if (f.alpha_grid.empty()) f.alpha_grid = {0.0, 0.5, 1.0};
    const std::vector<rre_norm_kind> norms = norm_grid_for(f.common, cmd);
    rre_curveset* cs = nullptr;
    if (rre_eval_noise(&spec, f.sigma_grid.data(), f.sigma_grid.size(), f.alpha_grid.data(),
                       f.alpha_grid.size(), norms.data(), norms.size(), &cfg, f.reps,
                       f.common.seed, &cs) != RRE_OK) {
      return fail_with_last_error(stem);
    }
    const int code = write_curveset(cs, f.common.output_dir, stem);
    rre_curveset_free(cs);
    return code;
  };

  if (noise->parsed()) return run_noise_like(noise_flags, noise, false, "noise");
  if (unbal->parsed()) return run_noise_like(unbal_flags, unbal, true, "unbalanced");

  if (prec->parsed()) {
    rre_matrix* a = nullptr;
    if (rre_matrix_load(prec_input.c_str(), parse_format(prec_format), &a) != RRE_OK) {
      return fail_with_last_error("loading input");
    }
    rre_labels* labels = nullptr;
    if (rre_labels_load(prec_labels.c_str(), a, &labels) != RRE_OK) {
      rre_matrix_free(a);
      return fail_with_last_error("loading labels");
    }
    if (prec_flags.alpha_grid.empty()) prec_flags.alpha_grid = {0.0, 0.25, 0.5, 0.75, 1.0};
    const rre_config cfg = prec_flags.common.config();
    rre_curveset* cs = nullptr;
    if (rre_eval_precision(a, labels, prec_flags.alpha_grid.data(), prec_flags.alpha_grid.size(),
                           &cfg, max_rank, null_reps, &cs) != RRE_OK) {
      rre_labels_free(labels);
      rre_matrix_free(a);
      return fail_with_last_error("eval precision");
    }
    const int code = write_curveset(cs, prec_flags.common.output_dir, "precision");
    rre_curveset_free(cs);
    rre_labels_free(labels);
    rre_matrix_free(a);
    return code;
  }

  if (bench->parsed()) {
    if (bench_flags.alpha_grid.empty()) bench_flags.alpha_grid = {0.0, 0.5, 1.0};
    const rre_config cfg = bench_flags.common.config();
    rre_curveset* cs = nullptr;
    if (rre_eval_bench(bench_flags.n_grid.data(), bench_flags.n_grid.size(),
                       bench_flags.alpha_grid.data(), bench_flags.alpha_grid.size(), &cfg,
                       bench_flags.reps, bench_flags.common.seed, &cs) != RRE_OK) {
      return fail_with_last_error("eval bench");
    }
    const int code = write_curveset(cs, bench_flags.common.output_dir, "bench");
    rre_curveset_free(cs);
    return code;
  }

  return kExitUsage;
}
