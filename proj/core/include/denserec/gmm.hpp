#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "denserec/matrix.hpp"

namespace denserec {

enum class Covariance { Diagonal, Spherical };

struct GmmConfig {
  std::size_t k = 2;
  Covariance covariance = Covariance::Diagonal;
  double reg = 1e-6;        // variance floor added to every variance
  double tol = 1e-4;        // relative mean log-likelihood improvement
  std::size_t max_iter = 200;
  std::size_t n_init = 4;   // seeded restarts, best final likelihood wins
  std::uint64_t seed = 1;

  void validate() const;
};

/// Mixture of axis-aligned Gaussians: the estimated density of one user's
/// interest over the embedding space. Spherical models store the shared
/// variance broadcast across all dimensions.
struct GmmModel {
  std::vector<double> weights;   // k, sums to 1
  Matrix means;                  // k x d
  Matrix variances;              // k x d, every entry >= reg
  double train_loglik = 0.0;     // final mean log-likelihood on the fit data
  Covariance covariance = Covariance::Diagonal;

  std::size_t k() const { return weights.size(); }
  std::size_t dim() const { return means.cols; }
};

struct GmmFitDiagnostics {
  // mean log-likelihood after each E-step, one trace per restart
  std::vector<std::vector<double>> restart_loglik;
  std::size_t chosen_restart = 0;
};

/// EM fit with k-means++ initialization. Runs n_init restarts and returns
/// the one with the highest final mean log-likelihood.
GmmModel fit_gmm(const Matrix& points, const GmmConfig& config,
                 GmmFitDiagnostics* diagnostics = nullptr);

/// log p(x) under the mixture, evaluated with log-sum-exp.
double gmm_log_pdf(const GmmModel& model, std::span<const double> x);

/// Per-point responsibilities (rows sum to 1), exposed mainly so tests and
/// diagnostics can inspect the E-step.
Matrix gmm_responsibilities(const GmmModel& model, const Matrix& points);

/// `count` seeded draws; each selects a component by weight and samples
/// every coordinate from the component's Gaussian. Row-sequential, so the
/// first n rows of a longer run coincide with a shorter run.
Matrix gmm_sample(const GmmModel& model, std::size_t count, std::uint64_t seed);

/// Fits every candidate component count and returns the BIC minimizer.
std::size_t select_k(const Matrix& points, const std::vector<std::size_t>& candidates,
                     const GmmConfig& config);

/// JSON round-trip: {k, covariance, weights, means, variances, train_loglik}
/// with 17-significant-digit values.
std::string gmm_to_json(const GmmModel& model);
GmmModel gmm_from_json(const std::string& text);

}  // namespace denserec
