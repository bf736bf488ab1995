#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "denserec/embedding.hpp"
#include "denserec/matrix.hpp"

namespace denserec {

/// RBF-kernel PCA model. Projection of a point x onto component j is
/// sum_i alphas(i, j) * k~(x, x_i), where k~ applies the stored
/// double-centering statistics; alphas carry the 1/sqrt(eigenvalue)
/// scaling. Components whose eigenvalue falls at or below the drop
/// tolerance are discarded, so the effective dimension can be smaller than
/// requested.
struct KpcaModel {
  Matrix training_points;        // n x d
  double gamma = 0.0;            // RBF width, K_ij = exp(-gamma * |x_i - x_j|^2)
  Matrix alphas;                 // n x r
  std::vector<double> eigenvalues;  // r, strictly positive, descending
  std::vector<double> row_means;    // raw kernel row means
  double total_mean = 0.0;          // raw kernel grand mean
  std::size_t requested_components = 0;

  static constexpr double kEigenvalueDropTol = 1e-12;

  std::size_t components() const { return eigenvalues.size(); }
};

/// Fits kernel PCA on the embedding rows. When gamma is not given it
/// defaults to the median heuristic 1 / median(|x_i - x_j|^2) over a seeded
/// sample of at most 1e5 point pairs.
KpcaModel fit_kpca(const EmbeddingMatrix& matrix, std::size_t components,
                   std::optional<double> gamma, std::uint64_t seed);

EmbeddingMatrix project_kpca(const KpcaModel& model, const EmbeddingMatrix& matrix);

/// Linear 2D view for plotting: centers the rows and projects them onto
/// the top-2 principal components.
EmbeddingMatrix project_2d(const EmbeddingMatrix& matrix);

}  // namespace denserec
