#include "rre/synthgen.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "rre/rng.hpp"

namespace rre {

std::size_t BlockSpec::total_rows() const {
  return std::accumulate(row_block_sizes.begin(), row_block_sizes.end(), std::size_t{0});
}

std::size_t BlockSpec::total_cols() const {
  return std::accumulate(col_block_sizes.begin(), col_block_sizes.end(), std::size_t{0});
}

void BlockSpec::validate() const {
  if (row_block_sizes.empty() || col_block_sizes.empty()) {
    throw std::invalid_argument("BlockSpec: block size lists must be nonempty");
  }
  for (std::size_t s : row_block_sizes) {
    if (s == 0) throw std::invalid_argument("BlockSpec: zero-sized row block");
  }
  for (std::size_t s : col_block_sizes) {
    if (s == 0) throw std::invalid_argument("BlockSpec: zero-sized col block");
  }
  if (!(fill_density > 0.0 && fill_density <= 1.0)) {
    throw std::invalid_argument("BlockSpec: fill_density must lie in (0, 1]");
  }
  if (!(fill_value > 0.0)) throw std::invalid_argument("BlockSpec: fill_value must be positive");
  if (assignment.empty()) {
    if (row_block_sizes.size() != col_block_sizes.size()) {
      throw std::invalid_argument(
          "BlockSpec: diagonal assignment needs equal block counts in both modes");
    }
  } else {
    for (const auto& as : assignment) {
      if (as.row_block >= row_block_sizes.size() || as.col_block >= col_block_sizes.size()) {
        throw std::invalid_argument("BlockSpec: assignment references an unknown block");
      }
    }
    for (std::size_t i = 0; i < assignment.size(); ++i) {
      for (std::size_t j = i + 1; j < assignment.size(); ++j) {
        if (assignment[i] == assignment[j]) {
          throw std::invalid_argument("BlockSpec: duplicate assignment");
        }
      }
    }
  }
}

namespace {

std::vector<std::size_t> block_offsets(const std::vector<std::size_t>& sizes) {
  std::vector<std::size_t> off(sizes.size() + 1, 0);
  for (std::size_t i = 0; i < sizes.size(); ++i) off[i + 1] = off[i] + sizes[i];
  return off;
}

std::vector<BlockAssignment> effective_assignment(const BlockSpec& spec) {
  if (!spec.assignment.empty()) return spec.assignment;
  std::vector<BlockAssignment> diag;
  for (std::size_t b = 0; b < spec.row_block_sizes.size(); ++b) diag.push_back({b, b});
  return diag;
}

}  // namespace

std::pair<AdjacencyMatrix, GroundTruth> generate_blocks(const BlockSpec& spec, std::size_t n,
                                                        std::size_t m, std::uint64_t seed) {
  spec.validate();
  if (spec.total_rows() != n || spec.total_cols() != m) {
    throw std::invalid_argument("generate_blocks: block sizes do not sum to the requested shape");
  }

  const auto row_off = block_offsets(spec.row_block_sizes);
  const auto col_off = block_offsets(spec.col_block_sizes);

  Matrix a(n, m, 0.0);
  Rng rng(seed);
  for (const auto& as : effective_assignment(spec)) {
    for (std::size_t i = row_off[as.row_block]; i < row_off[as.row_block + 1]; ++i) {
      for (std::size_t j = col_off[as.col_block]; j < col_off[as.col_block + 1]; ++j) {
        if (spec.fill_density >= 1.0 || rng.uniform01() < spec.fill_density) {
          a(i, j) = spec.fill_value;
        }
      }
    }
  }

  GroundTruth gt;
  gt.row_labels.resize(n);
  gt.col_labels.resize(m);
  for (std::size_t b = 0; b < spec.row_block_sizes.size(); ++b) {
    for (std::size_t i = row_off[b]; i < row_off[b + 1]; ++i) gt.row_labels[i] = static_cast<int>(b);
  }
  for (std::size_t b = 0; b < spec.col_block_sizes.size(); ++b) {
    for (std::size_t j = col_off[b]; j < col_off[b + 1]; ++j) gt.col_labels[j] = static_cast<int>(b);
  }
  gt.row_perm = Permutation::identity(n);
  gt.col_perm = Permutation::identity(m);
  return {AdjacencyMatrix::dense(std::move(a)), std::move(gt)};
}

std::pair<AdjacencyMatrix, GroundTruth> permute_randomly(const AdjacencyMatrix& a,
                                                         const GroundTruth& gt,
                                                         std::uint64_t seed) {
  if (gt.row_labels.size() != a.rows() || gt.col_labels.size() != a.cols()) {
    throw std::invalid_argument("permute_randomly: ground truth does not match matrix shape");
  }
  const Permutation row_p = Permutation::random(a.rows(), mix_seed(seed, 0));
  const Permutation col_p = Permutation::random(a.cols(), mix_seed(seed, 1));

  GroundTruth out;
  out.row_labels.resize(a.rows());
  out.col_labels.resize(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) out.row_labels[row_p(i)] = gt.row_labels[i];
  for (std::size_t j = 0; j < a.cols(); ++j) out.col_labels[col_p(j)] = gt.col_labels[j];

  // Compose with any permutation already applied: original index -> new slot.
  std::vector<std::size_t> row_total(a.rows()), col_total(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) row_total[i] = row_p(gt.row_perm(i));
  for (std::size_t j = 0; j < a.cols(); ++j) col_total[j] = col_p(gt.col_perm(j));
  out.row_perm = Permutation(std::move(row_total));
  out.col_perm = Permutation(std::move(col_total));

  return {apply_permutation(a, row_p, col_p), std::move(out)};
}

AdjacencyMatrix add_gaussian_noise(const AdjacencyMatrix& a, double sigma, std::uint64_t seed,
                                   bool clamp) {
  if (sigma < 0.0) throw std::invalid_argument("add_gaussian_noise: sigma must be >= 0");
  if (sigma == 0.0) return a;

  Rng rng(seed);
  Matrix m = a.to_matrix();
  for (double& v : m.values()) {
    const double noisy = v + rng.gaussian(sigma);
    v = clamp ? std::max(0.0, noisy) : noisy;
  }
  AdjacencyMatrix out =
      clamp ? AdjacencyMatrix::dense(std::move(m)) : AdjacencyMatrix::dense_signed(std::move(m));
  out.set_row_ids(a.row_ids());
  out.set_col_ids(a.col_ids());
  return out;
}

BlockSpec default_balanced_spec(double density) {
  BlockSpec spec;
  spec.row_block_sizes = {12, 18, 14, 16};
  spec.col_block_sizes = {16, 24, 18, 22};
  spec.fill_density = density;
  return spec;
}

BlockSpec default_unbalanced_spec(double density) {
  BlockSpec spec;
  spec.row_block_sizes = {20, 20, 20};
  spec.col_block_sizes = {16, 16, 16, 16, 16};
  // Each row block also fills one off-diagonal column block; one of the extra
  // blocks touches the diagonal band.
  spec.assignment = {{0, 0}, {0, 3}, {1, 1}, {1, 4}, {2, 2}};
  spec.fill_density = density;
  return spec;
}

BlockSpec random_square_spec(std::size_t n, std::uint64_t seed, std::size_t min_block,
                             std::size_t max_block, double density) {
  if (n == 0) throw std::invalid_argument("random_square_spec: n must be >= 1");
  if (min_block == 0 || max_block < min_block) {
    throw std::invalid_argument("random_square_spec: bad block size range");
  }
  Rng rng(seed);
  std::vector<std::size_t> sizes;
  std::size_t total = 0;
  while (total < n) {
    std::size_t s = min_block + static_cast<std::size_t>(rng.uniform_index(max_block - min_block + 1));
    s = std::min(s, n - total);
    sizes.push_back(s);
    total += s;
  }
  BlockSpec spec;
  spec.row_block_sizes = sizes;
  spec.col_block_sizes = sizes;
  spec.fill_density = density;
  return spec;
}

}  // namespace rre
