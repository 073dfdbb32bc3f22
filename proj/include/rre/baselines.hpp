#pragma once

#include "rre/matrix.hpp"

namespace rre {

enum class AxisMode { Rows, Cols };

enum class PairwiseMetric { Jaccard, Cosine, Pearson };

/// |N_i & N_j| / |N_i | N_j| over neighbor sets taken as entries strictly
/// above `threshold`. Two empty neighborhoods give 0, so a fully zero row has
/// a zero diagonal.
Matrix jaccard_similarity(const AdjacencyMatrix& a, AxisMode mode, double threshold = 0.0);

/// dot(a_i, a_j) / (|a_i| |a_j|); any zero vector gives 0.
Matrix cosine_similarity(const AdjacencyMatrix& a, AxisMode mode);

/// Sample Pearson correlation of the two vectors; a constant vector (zero
/// variance) gives 0.
Matrix pearson_similarity(const AdjacencyMatrix& a, AxisMode mode);

Matrix pairwise_similarity(const AdjacencyMatrix& a, PairwiseMetric metric, AxisMode mode,
                           double jaccard_threshold = 0.0);

const char* to_string(PairwiseMetric metric);

}  // namespace rre
