#include "rre/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace rre {

namespace {

Matrix vectors_for_mode(const AdjacencyMatrix& a, AxisMode mode) {
  return mode == AxisMode::Rows ? a.to_matrix() : a.to_matrix().transposed();
}

}  // namespace

Matrix jaccard_similarity(const AdjacencyMatrix& a, AxisMode mode, double threshold) {
  const Matrix v = vectors_for_mode(a, mode);
  const std::size_t n = v.rows();
  Matrix out(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ri = v.row(i);
    for (std::size_t j = i; j < n; ++j) {
      const auto rj = v.row(j);
      std::size_t both = 0, either = 0;
      for (std::size_t k = 0; k < v.cols(); ++k) {
        const bool bi = ri[k] > threshold;
        const bool bj = rj[k] > threshold;
        both += bi && bj;
        either += bi || bj;
      }
      const double value = either == 0 ? 0.0 : static_cast<double>(both) / static_cast<double>(either);
      out(i, j) = value;
      out(j, i) = value;
    }
  }
  return out;
}

Matrix cosine_similarity(const AdjacencyMatrix& a, AxisMode mode) {
  const Matrix v = vectors_for_mode(a, mode);
  const std::size_t n = v.rows();
  std::vector<double> norms(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double ss = 0.0;
    for (double x : v.row(i)) ss += x * x;
    norms[i] = std::sqrt(ss);
  }
  Matrix out(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ri = v.row(i);
    for (std::size_t j = i; j < n; ++j) {
      double value = 0.0;
      if (norms[i] > 0.0 && norms[j] > 0.0) {
        const auto rj = v.row(j);
        double dot = 0.0;
        for (std::size_t k = 0; k < v.cols(); ++k) dot += ri[k] * rj[k];
        value = dot / (norms[i] * norms[j]);
      }
      out(i, j) = value;
      out(j, i) = value;
    }
  }
  return out;
}

Matrix pearson_similarity(const AdjacencyMatrix& a, AxisMode mode) {
  const Matrix v = vectors_for_mode(a, mode);
  const std::size_t n = v.rows();
  const std::size_t d = v.cols();

  std::vector<double> means(n, 0.0), sds(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (double x : v.row(i)) sum += x;
    means[i] = sum / static_cast<double>(d);
    double ss = 0.0;
    for (double x : v.row(i)) ss += (x - means[i]) * (x - means[i]);
    sds[i] = std::sqrt(ss);
  }

  Matrix out(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ri = v.row(i);
    for (std::size_t j = i; j < n; ++j) {
      double value = 0.0;
      if (sds[i] > 0.0 && sds[j] > 0.0) {
        const auto rj = v.row(j);
        double cov = 0.0;
        for (std::size_t k = 0; k < d; ++k) cov += (ri[k] - means[i]) * (rj[k] - means[j]);
        value = cov / (sds[i] * sds[j]);
      }
      out(i, j) = value;
      out(j, i) = value;
    }
  }
  return out;
}

Matrix pairwise_similarity(const AdjacencyMatrix& a, PairwiseMetric metric, AxisMode mode,
                           double jaccard_threshold) {
  switch (metric) {
    case PairwiseMetric::Jaccard:
      return jaccard_similarity(a, mode, jaccard_threshold);
    case PairwiseMetric::Cosine:
      return cosine_similarity(a, mode);
    case PairwiseMetric::Pearson:
      return pearson_similarity(a, mode);
  }
  throw std::invalid_argument("pairwise_similarity: unknown metric");
}

const char* to_string(PairwiseMetric metric) {
  switch (metric) {
    case PairwiseMetric::Jaccard:
      return "jaccard";
    case PairwiseMetric::Cosine:
      return "cosine";
    case PairwiseMetric::Pearson:
      return "pearson";
  }
  return "?";
}

}  // namespace rre
