#pragma once

#include <cstddef>
#include <vector>

namespace denserec {

/// Dense row-major matrix of doubles. Small and deliberately dumb: the
/// corpora this library targets fit comfortably in memory, so everything
/// downstream (SVD, kernel PCA, GMM) works on dense storage.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major, rows * cols entries

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  double* row(std::size_t i) { return data.data() + i * cols; }
  const double* row(std::size_t i) const { return data.data() + i * cols; }

  bool all_finite() const;
};

/// Eigendecomposition of a symmetric matrix. `values` are sorted in
/// descending order; row i of `vectors` is the unit eigenvector for
/// `values[i]`. Signs are normalized so the entry of largest magnitude
/// in each eigenvector is positive.
struct SymEigen {
  std::vector<double> values;
  Matrix vectors;
};

/// Cyclic-by-row Jacobi eigensolver for symmetric matrices. Fully
/// deterministic: rotation order is fixed, convergence is reached when the
/// off-diagonal Frobenius norm drops below tol relative to the matrix norm.
SymEigen jacobi_eigen_sym(Matrix a, double tol = 1e-13, int max_sweeps = 64);

/// C = A * B^T where B is given in row-major form (rows of B are the
/// vectors being dotted against rows of A).
Matrix multiply_abt(const Matrix& a, const Matrix& b);

/// Gram matrix A^T * A (cols x cols).
Matrix gram_ata(const Matrix& a);

/// Gram matrix A * A^T (rows x rows).
Matrix gram_aat(const Matrix& a);

double squared_distance(const double* x, const double* y, std::size_t n);

}  // namespace denserec
