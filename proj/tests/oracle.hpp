// Test-only reference implementations, kept independent of the library's
// computation paths.
//
// brute_force_update evaluates the neighbor-set form of the similarity update
// directly: with C = N_i & N_j,
//
//   S_ij = (1-a) [ sum_{k in N_i \ C} sum_{l in N_j} S'_kl
//                + sum_{k in C}       sum_{l in N_j \ C} S'_kl ]
//                + sum_{k in C}       sum_{l in C} S'_kl
//
// over the neighbor sets of a binary matrix. naive_product chains plain
// triple-loop matrix products.

#pragma once

#include <vector>

#include "rre/matrix.hpp"

namespace rre::testing {

inline std::vector<std::size_t> neighbor_set(const Matrix& a, std::size_t row) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < a.cols(); ++k) {
    if (a(row, k) != 0.0) out.push_back(k);
  }
  return out;
}

inline Matrix brute_force_update(const Matrix& binary_a, const Matrix& s_other, double alpha) {
  const std::size_t n = binary_a.rows();
  Matrix out(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ni = neighbor_set(binary_a, i);
    for (std::size_t j = 0; j < n; ++j) {
      const auto nj = neighbor_set(binary_a, j);

      std::vector<std::size_t> common;
      for (std::size_t k : ni) {
        for (std::size_t l : nj) {
          if (k == l) common.push_back(k);
        }
      }
      auto in_common = [&](std::size_t v) {
        for (std::size_t c : common) {
          if (c == v) return true;
        }
        return false;
      };

      double bracket = 0.0;
      for (std::size_t k : ni) {
        if (in_common(k)) continue;
        for (std::size_t l : nj) bracket += s_other(k, l);
      }
      for (std::size_t k : common) {
        for (std::size_t l : nj) {
          if (in_common(l)) continue;
          bracket += s_other(k, l);
        }
      }
      double common_sum = 0.0;
      for (std::size_t k : common) {
        for (std::size_t l : common) common_sum += s_other(k, l);
      }
      out(i, j) = (1.0 - alpha) * bracket + common_sum;
    }
  }
  return out;
}

inline Matrix naive_product(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), b.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double sum = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) sum += a(i, k) * b(k, j);
      out(i, j) = sum;
    }
  }
  return out;
}

// a * s * a^T via naive products.
inline Matrix sandwich(const Matrix& a, const Matrix& s) {
  return naive_product(naive_product(a, s), a.transposed());
}

}  // namespace rre::testing
