// End-to-end checks of the command-line tool: exit codes, produced files, and
// agreement with direct library calls.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "rre.h"

namespace fs = std::filesystem;

namespace {

const char* cli_path() { return RRE_CLI_PATH; }

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("rre_cli_" + std::to_string(++counter) + "_" +
                                        std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args, const std::string& log) {
  const std::string cmd = std::string(cli_path()) + " " + args + " >" + log + " 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_block_matrix_csv(const std::string& path) {
  // 6x8, two clean blocks
  std::ofstream out(path);
  out << "1,1,1,1,0,0,0,0\n1,1,1,1,0,0,0,0\n1,1,1,1,0,0,0,0\n"
         "0,0,0,0,1,1,1,1\n0,0,0,0,1,1,1,1\n0,0,0,0,1,1,1,1\n";
}

}  // namespace

TEST_CASE("similarity happy path writes matrices and trace, exit 0") {
  TempDir dir;
  const std::string input = dir.file("A.csv");
  write_block_matrix_csv(input);
  const std::string log = dir.file("log.txt");

  const int code = run("similarity --input " + input + " --alpha 0.5 --norm linf --tol 1e-5 "
                           "--seed 7 --output-dir " + dir.path.string(),
                       log);
  CHECK(code == 0);
  REQUIRE(fs::exists(dir.file("S.csv")));
  REQUIRE(fs::exists(dir.file("S_prime.csv")));
  REQUIRE(fs::exists(dir.file("trace.csv")));

  // CLI output equals a direct library call with the same configuration
  rre_matrix* a = nullptr;
  REQUIRE(rre_matrix_load(input.c_str(), RRE_FORMAT_DENSE_CSV, &a) == RRE_OK);
  rre_config cfg;
  rre_config_init(&cfg);
  cfg.alpha = 0.5;
  cfg.seed = 7;
  rre_simpair* pair = nullptr;
  REQUIRE(rre_reflexive_similarity(a, &cfg, &pair) == RRE_OK);

  rre_matrix* s_file = nullptr;
  REQUIRE(rre_matrix_load(dir.file("S.csv").c_str(), RRE_FORMAT_DENSE_CSV, &s_file) == RRE_OK);
  const size_t n = rre_matrix_rows(s_file);
  REQUIRE(n == 6);
  std::vector<double> from_file(n * n), direct(n * n);
  REQUIRE(rre_matrix_copy(s_file, from_file.data(), from_file.size()) == RRE_OK);
  REQUIRE(rre_matrix_copy(rre_simpair_row_similarity(pair), direct.data(), direct.size()) ==
          RRE_OK);
  CHECK(from_file == direct);

  rre_matrix_free(s_file);
  rre_simpair_free(pair);
  rre_matrix_free(a);
}

TEST_CASE("alpha out of range exits 1 with a message") {
  TempDir dir;
  const std::string input = dir.file("A.csv");
  write_block_matrix_csv(input);
  const std::string log = dir.file("log.txt");
  const int code = run("similarity --input " + input + " --alpha 1.5 --output-dir " +
                           dir.path.string(),
                       log);
  CHECK(code == 1);
  CHECK(slurp(log).find("alpha") != std::string::npos);
}

TEST_CASE("missing input exits 1") {
  TempDir dir;
  const int code = run("similarity --input /nonexistent.csv --output-dir " + dir.path.string(),
                       dir.file("log.txt"));
  CHECK(code == 1);
}

TEST_CASE("iteration cap exits 2 but still writes matrices") {
  TempDir dir;
  const std::string input = dir.file("A.csv");
  write_block_matrix_csv(input);
  const int code = run("similarity --input " + input + " --max-iter 1 --output-dir " +
                           dir.path.string(),
                       dir.file("log.txt"));
  CHECK(code == 2);
  CHECK(fs::exists(dir.file("S.csv")));
  CHECK(fs::exists(dir.file("trace.csv")));
}

TEST_CASE("eval perm writes result documents and is reproducible") {
  TempDir d1, d2;
  const std::string args = "eval perm --reps 2 --seed 5 --alpha 1 --blocks 6,8/9,6 --density 0.5";
  CHECK(run(args + " --output-dir " + d1.path.string(), d1.file("log.txt")) == 0);
  CHECK(run(args + " --output-dir " + d2.path.string(), d2.file("log.txt")) == 0);
  REQUIRE(fs::exists(d1.file("perm.json")));
  REQUIRE(fs::exists(d1.file("perm.csv")));

  nlohmann::json j1, j2;
  std::ifstream(d1.file("perm.json")) >> j1;
  std::ifstream(d2.file("perm.json")) >> j2;
  j1.erase("wall_seconds");
  j2.erase("wall_seconds");
  CHECK(j1 == j2);
  CHECK(j1.at("curves").size() == 6);

  // csv tables identical across runs
  CHECK(slurp(d1.file("perm.csv")) == slurp(d2.file("perm.csv")));
}

TEST_CASE("eval noise honors grids and the single-norm restriction") {
  TempDir dir;
  const int code = run(
      "eval noise --reps 2 --seed 3 --blocks 6,8/9,6 --sigma-grid 0.2,0.6 --alpha-grid 0,1 "
      "--norm linf --output-dir " + dir.path.string(),
      dir.file("log.txt"));
  CHECK(code == 0);
  nlohmann::json j;
  std::ifstream(dir.file("noise.json")) >> j;
  CHECK(j.at("curves").size() == 5);  // 1 norm x 2 alphas + 3 baselines
  CHECK(j.at("grids").at("sigma") == nlohmann::json::array({0.2, 0.6}));
}

TEST_CASE("eval unbalanced uses the 3x5 default spec") {
  TempDir dir;
  const int code = run(
      "eval unbalanced --reps 1 --seed 2 --sigma-grid 0.2 --alpha-grid 1 --norm linf "
      "--output-dir " + dir.path.string(),
      dir.file("log.txt"));
  CHECK(code == 0);
  nlohmann::json j;
  std::ifstream(dir.file("unbalanced.json")) >> j;
  CHECK(j.at("spec").at("row_block_sizes").size() == 3);
  CHECK(j.at("spec").at("col_block_sizes").size() == 5);
}

TEST_CASE("eval precision consumes labels") {
  TempDir dir;
  const std::string input = dir.file("A.csv");
  write_block_matrix_csv(input);
  const std::string labels = dir.file("labels.csv");
  std::ofstream(labels) << "r0,a\nr1,a\nr2,a\nr3,b\nr4,b\nr5,b\n";
  const int code = run("eval precision --input " + input + " --labels " + labels +
                           " --alpha-grid 0,1 --null-reps 3 --output-dir " + dir.path.string(),
                       dir.file("log.txt"));
  CHECK(code == 0);
  nlohmann::json j;
  std::ifstream(dir.file("precision.json")) >> j;
  CHECK(j.at("curves").size() == 6);
}

TEST_CASE("eval bench writes fits") {
  TempDir dir;
  const int code = run("eval bench --n-grid 10,20,30 --alpha-grid 0 --reps 1 --seed 4 "
                           "--output-dir " + dir.path.string(),
                       dir.file("log.txt"));
  CHECK(code == 0);
  nlohmann::json j;
  std::ifstream(dir.file("bench.json")) >> j;
  CHECK(j.at("fits").size() == 2);
}

TEST_CASE("environment variable supplies the default output directory") {
  TempDir dir;
  const std::string input = dir.file("A.csv");
  write_block_matrix_csv(input);
  const std::string cmd = "RRE_OUTPUT_DIR=" + dir.path.string() + " " + cli_path() +
                          " similarity --input " + input + " > " + dir.file("log.txt") + " 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  CHECK(WEXITSTATUS(rc) == 0);
  CHECK(fs::exists(dir.file("S.csv")));
}

TEST_CASE("usage errors exit 1") {
  TempDir dir;
  CHECK(run("similarity", dir.file("l1.txt")) == 1);              // missing --input
  CHECK(run("eval", dir.file("l2.txt")) == 1);                    // missing subcommand
  CHECK(run("eval nosuch", dir.file("l3.txt")) == 1);             // unknown subcommand
  CHECK(run("similarity --input x --norm l7", dir.file("l4.txt")) == 1);
}

TEST_CASE("help exits 0") {
  TempDir dir;
  CHECK(run("--help", dir.file("log.txt")) == 0);
}
