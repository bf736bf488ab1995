#pragma once

#include <cstdint>
#include <vector>

#include "denserec/embedding.hpp"
#include "denserec/matrix.hpp"

namespace denserec {

/// Truncated SVD of a document-term matrix. Row j of `components` is the
/// j-th right-singular vector (length = input column count); singular
/// values are non-negative and descending.
struct SvdModel {
  Matrix components;
  std::vector<double> singular_values;
  std::size_t rank = 0;
};

/// Top-`rank` singular triplets via Jacobi eigendecomposition of the
/// smaller Gram matrix. Deterministic; the seed only feeds the orthonormal
/// completion used when the input has lower numerical rank than requested.
SvdModel fit_svd(const EmbeddingMatrix& matrix, std::size_t rank, std::uint64_t seed);

/// Projects rows onto the retained right-singular vectors (output dim =
/// rank).
EmbeddingMatrix project_svd(const SvdModel& model, const EmbeddingMatrix& matrix);

}  // namespace denserec
