#include "denserec/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace denserec {

bool Matrix::all_finite() const {
  for (double v : data) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Matrix multiply_abt(const Matrix& a, const Matrix& b) {
  if (a.cols != b.cols) throw std::invalid_argument("multiply_abt: inner dimension mismatch");
  Matrix out(a.rows, b.rows);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* ai = a.row(i);
    for (std::size_t j = 0; j < b.rows; ++j) {
      const double* bj = b.row(j);
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols; ++k) s += ai[k] * bj[k];
      out(i, j) = s;
    }
  }
  return out;
}

Matrix gram_ata(const Matrix& a) {
  Matrix g(a.cols, a.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* ai = a.row(i);
    for (std::size_t j = 0; j < a.cols; ++j) {
      const double v = ai[j];
      if (v == 0.0) continue;
      double* gj = g.row(j);
      for (std::size_t k = j; k < a.cols; ++k) gj[k] += v * ai[k];
    }
  }
  for (std::size_t j = 0; j < a.cols; ++j)
    for (std::size_t k = 0; k < j; ++k) g(j, k) = g(k, j);
  return g;
}

Matrix gram_aat(const Matrix& a) {
  Matrix g(a.rows, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* ai = a.row(i);
    for (std::size_t j = i; j < a.rows; ++j) {
      const double* aj = a.row(j);
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols; ++k) s += ai[k] * aj[k];
      g(i, j) = s;
      g(j, i) = s;
    }
  }
  return g;
}

double squared_distance(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = x[k] - y[k];
    s += d * d;
  }
  return s;
}

namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = i + 1; j < a.cols; ++j) s += a(i, j) * a(i, j);
  return std::sqrt(2.0 * s);
}

void normalize_sign(Matrix& vectors) {
  for (std::size_t i = 0; i < vectors.rows; ++i) {
    double* v = vectors.row(i);
    std::size_t arg = 0;
    double best = 0.0;
    for (std::size_t j = 0; j < vectors.cols; ++j) {
      const double m = std::fabs(v[j]);
      if (m > best) {
        best = m;
        arg = j;
      }
    }
    if (v[arg] < 0.0)
      for (std::size_t j = 0; j < vectors.cols; ++j) v[j] = -v[j];
  }
}

}  // namespace

SymEigen jacobi_eigen_sym(Matrix a, double tol, int max_sweeps) {
  if (a.rows != a.cols) throw std::invalid_argument("jacobi_eigen_sym: matrix not square");
  const std::size_t n = a.rows;

  // vt rows are the eigenvector candidates (accumulated rotations, transposed)
  Matrix vt(n, n);
  for (std::size_t i = 0; i < n; ++i) vt(i, i) = 1.0;

  double frob = 0.0;
  for (double v : a.data) frob += v * v;
  frob = std::sqrt(frob);
  const double stop = tol * std::max(frob, 1e-300);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= stop) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::fabs(apq) <= 1e-300) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const double app = a(p, p);
        const double aqq = a(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0)
                             ? 1.0 / (theta + std::sqrt(theta * theta + 1.0))
                             : 1.0 / (theta - std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        double* ap = a.row(p);
        double* aq = a.row(q);
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = ap[k];
          const double akq = aq[k];
          ap[k] = c * akp - s * akq;
          aq[k] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;

        double* vp = vt.row(p);
        double* vq = vt.row(q);
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = vp[k];
          const double vkq = vq[k];
          vp[k] = c * vkp - s * vkq;
          vq[k] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  SymEigen result;
  result.values.resize(n);
  result.vectors = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    result.values[i] = a(order[i], order[i]);
    const double* src = vt.row(order[i]);
    std::copy(src, src + n, result.vectors.row(i));
  }
  normalize_sign(result.vectors);
  return result;
}

}  // namespace denserec
