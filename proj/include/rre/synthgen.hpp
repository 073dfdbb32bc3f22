#pragma once

#include <cstdint>
#include <vector>

#include "rre/matrix.hpp"

namespace rre {

/// One (row block, column block) pair that gets filled.
struct BlockAssignment {
  std::size_t row_block = 0;
  std::size_t col_block = 0;
  friend bool operator==(const BlockAssignment&, const BlockAssignment&) = default;
};

/// Block structure of a synthetic adjacency matrix. An empty assignment list
/// means diagonal assignment (block i -> block i), which requires equal block
/// counts in both modes. Cells inside an assigned block are set to fill_value
/// with probability fill_density, independently per cell.
struct BlockSpec {
  std::vector<std::size_t> row_block_sizes;
  std::vector<std::size_t> col_block_sizes;
  std::vector<BlockAssignment> assignment;
  double fill_density = 1.0;
  double fill_value = 1.0;

  std::size_t total_rows() const;
  std::size_t total_cols() const;
  void validate() const;
  friend bool operator==(const BlockSpec&, const BlockSpec&) = default;
};

/// Known structure carried alongside a generated matrix: the block index of
/// every row and column, plus the permutations applied so far (identity right
/// after generation).
struct GroundTruth {
  std::vector<int> row_labels;
  std::vector<int> col_labels;
  Permutation row_perm{std::vector<std::size_t>{}};
  Permutation col_perm{std::vector<std::size_t>{}};
};

/// Generates a block-structured matrix and its ground truth. n and m must
/// equal the spec's block-size sums.
std::pair<AdjacencyMatrix, GroundTruth> generate_blocks(const BlockSpec& spec, std::size_t n,
                                                        std::size_t m, std::uint64_t seed);

/// Applies independent uniform random row and column permutations; labels in
/// the returned ground truth follow their rows/columns, and the stored
/// permutations compose with whatever was already there, so the inverses
/// always lead back to the original ordering.
std::pair<AdjacencyMatrix, GroundTruth> permute_randomly(const AdjacencyMatrix& a,
                                                         const GroundTruth& gt,
                                                         std::uint64_t seed);

/// a_ij -> max(0, a_ij + e_ij) with e_ij ~ N(0, sigma^2), drawn row-major.
/// sigma = 0 returns the input unchanged. With clamp = false the raw noisy
/// values are kept (result may be negative; see AdjacencyMatrix::dense_signed).
AdjacencyMatrix add_gaussian_noise(const AdjacencyMatrix& a, double sigma, std::uint64_t seed,
                                   bool clamp = true);

/// 60 x 80, four diagonal blocks of varying sizes.
BlockSpec default_balanced_spec(double density = 0.5);

/// 60 x 80, three row blocks spread over five column blocks.
BlockSpec default_unbalanced_spec(double density = 0.5);

/// Square n x n spec with diagonal blocks of random sizes in
/// [min_block, max_block] (last block truncated to fit).
BlockSpec random_square_spec(std::size_t n, std::uint64_t seed, std::size_t min_block = 8,
                             std::size_t max_block = 40, double density = 0.5);

}  // namespace rre
