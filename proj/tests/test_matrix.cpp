#include "rre/matrix.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "rre/rng.hpp"

using namespace rre;

namespace {

AdjacencyMatrix random_dense(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (double& v : m.values()) v = rng.uniform01();
  return AdjacencyMatrix::dense(std::move(m));
}

}  // namespace

TEST_CASE("row_normalize divides positive rows by their sums") {
  const auto a = AdjacencyMatrix::dense(2, 2, {2, 2, 0, 4});
  const auto result = row_normalize(a);
  CHECK(result.zero_rows.empty());
  CHECK(result.matrix.at(0, 0) == doctest::Approx(0.5));
  CHECK(result.matrix.at(0, 1) == doctest::Approx(0.5));
  CHECK(result.matrix.at(1, 0) == 0.0);
  CHECK(result.matrix.at(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("row_normalize reports zero rows and leaves them unchanged") {
  const auto a = AdjacencyMatrix::dense(2, 2, {0, 0, 1, 3});
  const auto result = row_normalize(a);
  REQUIRE(result.zero_rows.size() == 1);
  CHECK(result.zero_rows[0] == 0);
  CHECK(result.matrix.at(0, 0) == 0.0);
  CHECK(result.matrix.at(0, 1) == 0.0);
  CHECK(result.matrix.at(1, 0) == doctest::Approx(0.25));
  CHECK(result.matrix.at(1, 1) == doctest::Approx(0.75));
}

TEST_CASE("row_normalize keeps the identity fixed and is idempotent") {
  const auto eye = AdjacencyMatrix::dense(Matrix::identity(3));
  const auto once = row_normalize(eye);
  CHECK(once.matrix.to_matrix() == Matrix::identity(3));

  // rows whose sums are exactly representable stay bit-identical
  const auto dyadic = AdjacencyMatrix::dense(2, 3, {0.5, 0.25, 0.25, 0, 0.5, 0.5});
  CHECK(row_normalize(dyadic).matrix.to_matrix() == dyadic.to_matrix());

  const auto a = random_dense(5, 7, 11);
  const auto first = row_normalize(a);
  const auto second = row_normalize(first.matrix);
  CHECK(max_abs_difference(first.matrix.to_matrix(), second.matrix.to_matrix()) <= 1e-15);
}

TEST_CASE("flat-vector norms on [[3,4]]") {
  const Matrix m(1, 2, {3, 4});
  CHECK(matrix_vector_norm(m, NormKind::L2) == doctest::Approx(5.0));
  CHECK(matrix_vector_norm(m, NormKind::L1) == doctest::Approx(7.0));
  CHECK(matrix_vector_norm(m, NormKind::LInf) == doctest::Approx(4.0));
}

TEST_CASE("frobenius norm basics") {
  CHECK(frobenius_norm(Matrix(3, 3, 0.0)) == 0.0);
  CHECK(frobenius_norm(Matrix::identity(3)) == doctest::Approx(std::sqrt(3.0)));
  CHECK(frobenius_norm(Matrix(2, 2, {1, 2, 2, 1})) == doctest::Approx(std::sqrt(10.0)));
}

TEST_CASE("norm ordering LInf <= L2 <= L1") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    Matrix m(4, 6);
    for (double& v : m.values()) v = rng.gaussian(2.0);
    const double l1 = matrix_vector_norm(m, NormKind::L1);
    const double l2 = matrix_vector_norm(m, NormKind::L2);
    const double linf = matrix_vector_norm(m, NormKind::LInf);
    CHECK(linf <= l2 + 1e-15);
    CHECK(l2 <= l1 + 1e-12);
  }
}

TEST_CASE("norms reject non-finite entries") {
  Matrix m(1, 2, {1.0, std::numeric_limits<double>::infinity()});
  CHECK_THROWS_AS(matrix_vector_norm(m, NormKind::L1), std::invalid_argument);
}

TEST_CASE("permutation validation and inverse") {
  CHECK_THROWS_AS(Permutation({0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(Permutation({0, 2}), std::invalid_argument);
  const Permutation p({2, 0, 1});
  const Permutation inv = p.inverse();
  for (std::size_t i = 0; i < 3; ++i) CHECK(inv(p(i)) == i);
  CHECK(Permutation::identity(4).is_identity());
}

TEST_CASE("apply_permutation with identities is a no-op") {
  const Matrix m(2, 3, {1, 2, 3, 4, 5, 6});
  CHECK(apply_permutation(m, Permutation::identity(2), Permutation::identity(3)) == m);
}

TEST_CASE("swapping rows of the identity gives the exchange matrix") {
  const Matrix swapped =
      apply_permutation(Matrix::identity(2), Permutation({1, 0}), Permutation::identity(2));
  CHECK(swapped == Matrix(2, 2, {0, 1, 1, 0}));
}

TEST_CASE("apply then apply-inverse restores the matrix bit-exactly") {
  const auto a = random_dense(5, 7, 3);
  const Permutation rp = Permutation::random(5, 17);
  const Permutation cp = Permutation::random(7, 23);
  const Matrix m = a.to_matrix();
  const Matrix there = apply_permutation(m, rp, cp);
  const Matrix back = apply_permutation(there, rp.inverse(), cp.inverse());
  CHECK(back == m);
}

TEST_CASE("flat norms are exactly permutation invariant") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto a = random_dense(6, 9, seed);
    const Matrix m = a.to_matrix();
    const Matrix p = apply_permutation(m, Permutation::random(6, seed + 100),
                                       Permutation::random(9, seed + 200));
    CHECK(frobenius_norm(p) == frobenius_norm(m));
    CHECK(matrix_vector_norm(p, NormKind::L1) == matrix_vector_norm(m, NormKind::L1));
    CHECK(matrix_vector_norm(p, NormKind::LInf) == matrix_vector_norm(m, NormKind::LInf));
  }
}

TEST_CASE("sparse and dense layouts agree element-wise") {
  std::vector<SparseEntry> entries{{0, 1, 2.5}, {2, 0, 1.0}, {1, 1, 0.5}};
  const auto sp = AdjacencyMatrix::sparse(3, 2, entries);
  const auto dn = sp.to_layout(Layout::Dense);
  CHECK(dn.layout() == Layout::Dense);
  CHECK(sp.same_entries(dn));
  CHECK(sp.nonzero_count() == dn.nonzero_count());
  CHECK(sp.at(0, 1) == 2.5);
  CHECK(sp.at(0, 0) == 0.0);
  CHECK(dn.to_layout(Layout::Sparse).same_entries(sp));

  const auto round = row_normalize(sp).matrix;
  const auto round_dense = row_normalize(dn).matrix;
  CHECK(round.to_matrix() == round_dense.to_matrix());
}

TEST_CASE("sparse factory drops explicit zeros and rejects duplicates") {
  const auto sp = AdjacencyMatrix::sparse(2, 2, {{0, 0, 1.0}, {1, 1, 0.0}});
  CHECK(sp.nonzero_count() == 1);
  CHECK_THROWS_AS(AdjacencyMatrix::sparse(2, 2, {{0, 0, 1.0}, {0, 0, 2.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(AdjacencyMatrix::sparse(2, 2, {{0, 5, 1.0}}), std::invalid_argument);
}

TEST_CASE("adjacency invariants: finite and nonnegative") {
  CHECK_THROWS_AS(AdjacencyMatrix::dense(1, 2, {1.0, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(AdjacencyMatrix::dense(1, 1, {std::nan("")}), std::invalid_argument);
  CHECK_THROWS_AS(AdjacencyMatrix::dense(Matrix()), std::invalid_argument);
  const auto signed_ok = AdjacencyMatrix::dense_signed(Matrix(1, 2, {1.0, -0.5}));
  CHECK(signed_ok.min_entry() == -0.5);
}

TEST_CASE("transpose mirrors entries and identifiers") {
  auto a = AdjacencyMatrix::dense(2, 3, {1, 0, 2, 0, 3, 0});
  a.set_row_ids({"r0", "r1"});
  a.set_col_ids({"c0", "c1", "c2"});
  const auto t = a.transposed();
  CHECK(t.rows() == 3);
  CHECK(t.at(2, 0) == 2.0);
  CHECK(t.row_ids() == std::vector<std::string>{"c0", "c1", "c2"});
  CHECK(t.col_ids() == std::vector<std::string>{"r0", "r1"});
}

TEST_CASE("density counts structural nonzeros") {
  const auto a = AdjacencyMatrix::dense(2, 2, {1, 0, 0, 1});
  CHECK(a.density() == doctest::Approx(0.5));
}
