#include "denserec/svd.hpp"

#include <cmath>
#include <stdexcept>

#include "denserec/rng.hpp"

namespace denserec {

namespace {

// Orthogonalize row `idx` of m against rows [0, idx) and normalize. Falls
// back to seeded random restarts if the vector is (numerically) in the span
// of the previous rows.
void orthonormal_fill(Matrix& m, std::size_t idx, Rng& rng) {
  const std::size_t n = m.cols;
  double* v = m.row(idx);
  for (int attempt = 0; attempt < 64; ++attempt) {
    for (std::size_t r = 0; r < idx; ++r) {
      const double* u = m.row(r);
      double dot = 0.0;
      for (std::size_t k = 0; k < n; ++k) dot += v[k] * u[k];
      for (std::size_t k = 0; k < n; ++k) v[k] -= dot * u[k];
    }
    double norm = 0.0;
    for (std::size_t k = 0; k < n; ++k) norm += v[k] * v[k];
    norm = std::sqrt(norm);
    if (norm > 1e-8) {
      for (std::size_t k = 0; k < n; ++k) v[k] /= norm;
      return;
    }
    for (std::size_t k = 0; k < n; ++k) v[k] = rng.uniform() - 0.5;
  }
  throw std::runtime_error("fit_svd: failed to complete orthonormal basis");
}

}  // namespace

SvdModel fit_svd(const EmbeddingMatrix& matrix, std::size_t rank, std::uint64_t seed) {
  const Matrix& a = matrix.vectors;
  const std::size_t n = a.rows;
  const std::size_t m = a.cols;
  if (rank > std::min(n, m)) {
    throw std::invalid_argument("fit_svd: rank exceeds min(rows, cols)");
  }
  if (!a.all_finite()) throw std::invalid_argument("fit_svd: non-finite input");

  SvdModel model;
  model.rank = rank;
  model.singular_values.resize(rank);
  model.components = Matrix(rank, m);
  if (rank == 0) return model;

  Rng rng(mix_seed(seed, 0x5bd1));

  if (m <= n) {
    // eigenvectors of A^T A are the right-singular vectors directly
    SymEigen eig = jacobi_eigen_sym(gram_ata(a));
    for (std::size_t i = 0; i < rank; ++i) {
      model.singular_values[i] = std::sqrt(std::max(eig.values[i], 0.0));
      const double* src = eig.vectors.row(i);
      std::copy(src, src + m, model.components.row(i));
    }
  } else {
    // smaller Gram side gives the left vectors; map back via V = A^T U / sigma
    SymEigen eig = jacobi_eigen_sym(gram_aat(a));
    const double sigma_max = std::sqrt(std::max(eig.values[0], 0.0));
    for (std::size_t i = 0; i < rank; ++i) {
      const double sigma = std::sqrt(std::max(eig.values[i], 0.0));
      model.singular_values[i] = sigma;
      double* v = model.components.row(i);
      if (sigma > 1e-12 * std::max(sigma_max, 1.0)) {
        const double* u = eig.vectors.row(i);
        for (std::size_t r = 0; r < n; ++r) {
          const double ur = u[r];
          if (ur == 0.0) continue;
          const double* ar = a.row(r);
          for (std::size_t k = 0; k < m; ++k) v[k] += ur * ar[k];
        }
        double norm = 0.0;
        for (std::size_t k = 0; k < m; ++k) norm += v[k] * v[k];
        norm = std::sqrt(norm);
        for (std::size_t k = 0; k < m; ++k) v[k] /= norm;
      } else {
        model.singular_values[i] = 0.0;
        for (std::size_t k = 0; k < m; ++k) v[k] = rng.uniform() - 0.5;
        orthonormal_fill(model.components, i, rng);
      }
    }
    // one modified Gram-Schmidt pass keeps the mapped-back vectors
    // orthonormal to working precision
    for (std::size_t i = 0; i < rank; ++i) orthonormal_fill(model.components, i, rng);
  }
  return model;
}

EmbeddingMatrix project_svd(const SvdModel& model, const EmbeddingMatrix& matrix) {
  if (matrix.vectors.cols != model.components.cols) {
    throw std::invalid_argument("project_svd: column count does not match model");
  }
  EmbeddingMatrix out;
  out.doc_ids = matrix.doc_ids;
  out.vectors = multiply_abt(matrix.vectors, model.components);
  return out;
}

}  // namespace denserec
