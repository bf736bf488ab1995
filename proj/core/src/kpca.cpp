#include "denserec/kpca.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "denserec/rng.hpp"
#include "denserec/svd.hpp"

namespace denserec {

namespace {

double median_heuristic_gamma(const Matrix& points, std::uint64_t seed) {
  const std::size_t n = points.rows;
  const std::size_t total_pairs = n * (n - 1) / 2;
  constexpr std::size_t kMaxPairs = 100000;

  std::vector<double> d2;
  if (total_pairs <= kMaxPairs) {
    d2.reserve(total_pairs);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        d2.push_back(squared_distance(points.row(i), points.row(j), points.cols));
      }
    }
  } else {
    Rng rng(mix_seed(seed, 0x6d6564));
    d2.reserve(kMaxPairs);
    while (d2.size() < kMaxPairs) {
      const std::size_t i = rng.below(n);
      const std::size_t j = rng.below(n);
      if (i == j) continue;
      d2.push_back(squared_distance(points.row(i), points.row(j), points.cols));
    }
  }
  std::nth_element(d2.begin(), d2.begin() + d2.size() / 2, d2.end());
  const double median = d2[d2.size() / 2];
  if (median <= 0.0) throw std::runtime_error("fit_kpca: degenerate kernel (identical points)");
  return 1.0 / median;
}

}  // namespace

KpcaModel fit_kpca(const EmbeddingMatrix& matrix, std::size_t components,
                   std::optional<double> gamma, std::uint64_t seed) {
  const Matrix& x = matrix.vectors;
  const std::size_t n = x.rows;
  if (n < 2) throw std::invalid_argument("fit_kpca: need at least 2 points");
  if (components >= n) throw std::invalid_argument("fit_kpca: components must be < rows");
  if (!x.all_finite()) throw std::invalid_argument("fit_kpca: non-finite input");

  KpcaModel model;
  model.training_points = x;
  model.requested_components = components;
  model.gamma = gamma ? *gamma : median_heuristic_gamma(x, seed);
  if (model.gamma <= 0.0) throw std::invalid_argument("fit_kpca: gamma must be > 0");

  // raw kernel, evaluated once per pair and mirrored so K is exactly symmetric
  Matrix kernel(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    kernel(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double k = std::exp(-model.gamma * squared_distance(x.row(i), x.row(j), x.cols));
      kernel(i, j) = k;
      kernel(j, i) = k;
    }
  }

  model.row_means.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += kernel(i, j);
    model.row_means[i] = s / static_cast<double>(n);
  }
  model.total_mean = 0.0;
  for (double v : model.row_means) model.total_mean += v;
  model.total_mean /= static_cast<double>(n);

  Matrix centered(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v =
          kernel(i, j) - model.row_means[i] - model.row_means[j] + model.total_mean;
      centered(i, j) = v;
      centered(j, i) = v;
    }
  }

  const SymEigen eig = jacobi_eigen_sym(std::move(centered));

  std::size_t kept = 0;
  while (kept < components && eig.values[kept] > KpcaModel::kEigenvalueDropTol) ++kept;

  model.eigenvalues.assign(eig.values.begin(), eig.values.begin() + kept);
  model.alphas = Matrix(n, kept);
  for (std::size_t j = 0; j < kept; ++j) {
    const double scale = 1.0 / std::sqrt(eig.values[j]);
    const double* v = eig.vectors.row(j);
    for (std::size_t i = 0; i < n; ++i) model.alphas(i, j) = v[i] * scale;
  }
  return model;
}

EmbeddingMatrix project_kpca(const KpcaModel& model, const EmbeddingMatrix& matrix) {
  const Matrix& train = model.training_points;
  if (matrix.vectors.cols != train.cols) {
    throw std::invalid_argument("project_kpca: dimension mismatch with training points");
  }
  const std::size_t n = train.rows;
  const std::size_t r = model.components();

  EmbeddingMatrix out;
  out.doc_ids = matrix.doc_ids;
  out.vectors = Matrix(matrix.vectors.rows, r);

  std::vector<double> krow(n);
  for (std::size_t q = 0; q < matrix.vectors.rows; ++q) {
    const double* xq = matrix.vectors.row(q);
    double mean_q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      krow[i] = std::exp(-model.gamma * squared_distance(xq, train.row(i), train.cols));
      mean_q += krow[i];
    }
    mean_q /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      krow[i] = krow[i] - mean_q - model.row_means[i] + model.total_mean;
    }
    double* proj = out.vectors.row(q);
    for (std::size_t j = 0; j < r; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += model.alphas(i, j) * krow[i];
      proj[j] = s;
    }
  }
  return out;
}

EmbeddingMatrix project_2d(const EmbeddingMatrix& matrix) {
  if (matrix.vectors.rows < 2) throw std::invalid_argument("project_2d: need at least 2 rows");

  EmbeddingMatrix centered;
  centered.doc_ids = matrix.doc_ids;
  centered.vectors = matrix.vectors;
  const std::size_t n = centered.vectors.rows;
  const std::size_t d = centered.vectors.cols;
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += centered.vectors(i, j);
    mean /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) centered.vectors(i, j) -= mean;
  }

  const std::size_t rank = std::min<std::size_t>(2, std::min(n, d));
  const SvdModel svd = fit_svd(centered, rank, 0x32645f);
  EmbeddingMatrix out = project_svd(svd, centered);
  if (out.vectors.cols < 2) {
    // pad 1-column projections so the export is always (id, x, y)
    Matrix padded(out.vectors.rows, 2);
    for (std::size_t i = 0; i < out.vectors.rows; ++i) padded(i, 0) = out.vectors(i, 0);
    out.vectors = std::move(padded);
  }
  return out;
}

}  // namespace denserec
