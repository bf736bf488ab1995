#include "denserec/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "denserec/embedding.hpp"
#include "denserec/rng.hpp"

namespace denserec {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;  // ln(2*pi)

double log_normal_diag(const double* x, const double* mean, const double* var,
                       std::size_t d) {
  double acc = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double diff = x[j] - mean[j];
    acc += std::log(var[j]) + diff * diff / var[j];
  }
  return -0.5 * (static_cast<double>(d) * kLog2Pi + acc);
}

double log_sum_exp(const double* v, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, v[i]);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::exp(v[i] - m);
  return m + std::log(s);
}

// k-means++ seeding: first center uniform, then squared-distance weighted.
std::vector<std::size_t> kmeanspp_centers(const Matrix& points, std::size_t k, Rng& rng) {
  const std::size_t n = points.rows;
  std::vector<std::size_t> centers;
  centers.push_back(rng.below(n));
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) {
    d2[i] = squared_distance(points.row(i), points.row(centers[0]), points.cols);
  }
  while (centers.size() < k) {
    double total = 0.0;
    for (double v : d2) total += v;
    std::size_t pick;
    if (total <= 0.0) {
      pick = rng.below(n);  // all mass on existing centers (duplicated points)
    } else {
      const double target = rng.uniform() * total;
      double cum = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        cum += d2[i];
        if (cum > target) {
          pick = i;
          break;
        }
      }
    }
    centers.push_back(pick);
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(points.row(i), points.row(pick), points.cols));
    }
  }
  return centers;
}

std::vector<double> per_dim_variance(const Matrix& points) {
  const std::size_t n = points.rows;
  const std::size_t d = points.cols;
  std::vector<double> mean(d, 0.0), var(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* x = points.row(i);
    for (std::size_t j = 0; j < d; ++j) mean[j] += x[j];
  }
  for (std::size_t j = 0; j < d; ++j) mean[j] /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* x = points.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = x[j] - mean[j];
      var[j] += diff * diff;
    }
  }
  for (std::size_t j = 0; j < d; ++j) var[j] /= static_cast<double>(n);
  return var;
}

void spherical_collapse(Matrix& variances) {
  // spherical = one value per component, broadcast across dimensions
  for (std::size_t c = 0; c < variances.rows; ++c) {
    double* row = variances.row(c);
    double avg = 0.0;
    for (std::size_t j = 0; j < variances.cols; ++j) avg += row[j];
    avg /= static_cast<double>(variances.cols);
    for (std::size_t j = 0; j < variances.cols; ++j) row[j] = avg;
  }
}

struct EmRun {
  GmmModel model;
  std::vector<double> loglik_trace;
};

EmRun run_em(const Matrix& points, const GmmConfig& config, std::uint64_t seed) {
  const std::size_t n = points.rows;
  const std::size_t d = points.cols;
  const std::size_t k = config.k;
  Rng rng(seed);

  GmmModel model;
  model.covariance = config.covariance;
  model.weights.assign(k, 1.0 / static_cast<double>(k));
  model.means = Matrix(k, d);
  model.variances = Matrix(k, d);

  const std::vector<std::size_t> centers = kmeanspp_centers(points, k, rng);
  for (std::size_t c = 0; c < k; ++c) {
    std::copy(points.row(centers[c]), points.row(centers[c]) + d, model.means.row(c));
  }
  std::vector<double> init_var = per_dim_variance(points);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t j = 0; j < d; ++j) model.variances(c, j) = init_var[j] + config.reg;
  }
  if (config.covariance == Covariance::Spherical) spherical_collapse(model.variances);

  EmRun run;
  Matrix resp(n, k);
  std::vector<double> log_terms(k);
  double prev_ll = -std::numeric_limits<double>::infinity();

  for (std::size_t iter = 0; iter < config.max_iter; ++iter) {
    // E-step (log space)
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double* x = points.row(i);
      for (std::size_t c = 0; c < k; ++c) {
        log_terms[c] = std::log(model.weights[c]) +
                       log_normal_diag(x, model.means.row(c), model.variances.row(c), d);
      }
      const double norm = log_sum_exp(log_terms.data(), k);
      ll += norm;
      for (std::size_t c = 0; c < k; ++c) resp(i, c) = std::exp(log_terms[c] - norm);
    }
    ll /= static_cast<double>(n);
    run.loglik_trace.push_back(ll);
    model.train_loglik = ll;

    const double improvement = ll - prev_ll;
    if (iter > 0 && improvement < config.tol * std::abs(prev_ll)) break;
    if (iter + 1 == config.max_iter) break;  // keep params in sync with train_loglik
    prev_ll = ll;

    // M-step
    for (std::size_t c = 0; c < k; ++c) {
      double nc = 0.0;
      for (std::size_t i = 0; i < n; ++i) nc += resp(i, c);
      if (nc < 1e-10) {
        // degenerate component: restart it on the point the current model
        // explains worst
        std::size_t worst = 0;
        double worst_ll = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
          const double* x = points.row(i);
          for (std::size_t cc = 0; cc < k; ++cc) {
            log_terms[cc] =
                std::log(model.weights[cc]) +
                log_normal_diag(x, model.means.row(cc), model.variances.row(cc), d);
          }
          const double point_ll = log_sum_exp(log_terms.data(), k);
          if (point_ll < worst_ll) {
            worst_ll = point_ll;
            worst = i;
          }
        }
        std::copy(points.row(worst), points.row(worst) + d, model.means.row(c));
        for (std::size_t j = 0; j < d; ++j) model.variances(c, j) = init_var[j] + config.reg;
        model.weights[c] = 1.0 / static_cast<double>(n);
        double wsum = 0.0;
        for (double w : model.weights) wsum += w;
        for (double& w : model.weights) w /= wsum;
        continue;
      }
      model.weights[c] = nc / static_cast<double>(n);
      double* mean = model.means.row(c);
      std::fill(mean, mean + d, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double r = resp(i, c);
        const double* x = points.row(i);
        for (std::size_t j = 0; j < d; ++j) mean[j] += r * x[j];
      }
      for (std::size_t j = 0; j < d; ++j) mean[j] /= nc;
      double* var = model.variances.row(c);
      std::fill(var, var + d, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double r = resp(i, c);
        const double* x = points.row(i);
        for (std::size_t j = 0; j < d; ++j) {
          const double diff = x[j] - mean[j];
          var[j] += r * diff * diff;
        }
      }
      for (std::size_t j = 0; j < d; ++j) var[j] = var[j] / nc + config.reg;
    }
    if (config.covariance == Covariance::Spherical) spherical_collapse(model.variances);
  }

  run.model = std::move(model);
  return run;
}

}  // namespace

void GmmConfig::validate() const {
  if (k < 1) throw std::invalid_argument("gmm: k must be >= 1");
  if (reg <= 0.0) throw std::invalid_argument("gmm: reg must be > 0");
  if (tol <= 0.0) throw std::invalid_argument("gmm: tol must be > 0");
  if (max_iter < 1) throw std::invalid_argument("gmm: max_iter must be >= 1");
  if (n_init < 1) throw std::invalid_argument("gmm: n_init must be >= 1");
}

GmmModel fit_gmm(const Matrix& points, const GmmConfig& config,
                 GmmFitDiagnostics* diagnostics) {
  config.validate();
  if (points.cols == 0) throw std::invalid_argument("fit_gmm: zero-dimensional points");
  if (points.rows < config.k) {
    throw std::invalid_argument("fit_gmm: need at least k points");
  }
  if (!points.all_finite()) throw std::invalid_argument("fit_gmm: non-finite input");

  GmmModel best;
  double best_ll = -std::numeric_limits<double>::infinity();
  std::size_t best_restart = 0;
  for (std::size_t restart = 0; restart < config.n_init; ++restart) {
    EmRun run = run_em(points, config, mix_seed(config.seed, restart));
    if (diagnostics) diagnostics->restart_loglik.push_back(run.loglik_trace);
    if (run.model.train_loglik > best_ll) {
      best_ll = run.model.train_loglik;
      best = std::move(run.model);
      best_restart = restart;
    }
  }
  if (diagnostics) diagnostics->chosen_restart = best_restart;
  return best;
}

double gmm_log_pdf(const GmmModel& model, std::span<const double> x) {
  if (x.size() != model.dim()) throw std::invalid_argument("gmm_log_pdf: dimension mismatch");
  std::vector<double> log_terms(model.k());
  for (std::size_t c = 0; c < model.k(); ++c) {
    log_terms[c] = std::log(model.weights[c]) +
                   log_normal_diag(x.data(), model.means.row(c), model.variances.row(c),
                                   model.dim());
  }
  return log_sum_exp(log_terms.data(), model.k());
}

Matrix gmm_responsibilities(const GmmModel& model, const Matrix& points) {
  if (points.cols != model.dim()) {
    throw std::invalid_argument("gmm_responsibilities: dimension mismatch");
  }
  Matrix resp(points.rows, model.k());
  std::vector<double> log_terms(model.k());
  for (std::size_t i = 0; i < points.rows; ++i) {
    const double* x = points.row(i);
    for (std::size_t c = 0; c < model.k(); ++c) {
      log_terms[c] = std::log(model.weights[c]) +
                     log_normal_diag(x, model.means.row(c), model.variances.row(c),
                                     model.dim());
    }
    const double norm = log_sum_exp(log_terms.data(), model.k());
    for (std::size_t c = 0; c < model.k(); ++c) resp(i, c) = std::exp(log_terms[c] - norm);
  }
  return resp;
}

Matrix gmm_sample(const GmmModel& model, std::size_t count, std::uint64_t seed) {
  Matrix samples(count, model.dim());
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const double u = rng.uniform();
    std::size_t c = model.k() - 1;
    double cum = 0.0;
    for (std::size_t cc = 0; cc < model.k(); ++cc) {
      cum += model.weights[cc];
      if (u < cum) {
        c = cc;
        break;
      }
    }
    double* out = samples.row(i);
    const double* mean = model.means.row(c);
    const double* var = model.variances.row(c);
    for (std::size_t j = 0; j < model.dim(); ++j) {
      out[j] = mean[j] + std::sqrt(var[j]) * rng.gaussian();
    }
  }
  return samples;
}

std::size_t select_k(const Matrix& points, const std::vector<std::size_t>& candidates,
                     const GmmConfig& config) {
  if (candidates.empty()) throw std::invalid_argument("select_k: no candidates");
  const double n = static_cast<double>(points.rows);
  const double d = static_cast<double>(points.cols);
  std::size_t best_k = candidates.front();
  double best_bic = std::numeric_limits<double>::infinity();
  for (std::size_t k : candidates) {
    GmmConfig c = config;
    c.k = k;
    const GmmModel model = fit_gmm(points, c);
    const double total_ll = model.train_loglik * n;
    const double params = (static_cast<double>(k) - 1.0) + static_cast<double>(k) * d * 2.0;
    const double bic = -2.0 * total_ll + params * std::log(n);
    if (bic < best_bic) {
      best_bic = bic;
      best_k = k;
    }
  }
  return best_k;
}

std::string gmm_to_json(const GmmModel& model) {
  std::ostringstream out;
  const char* cov = model.covariance == Covariance::Diagonal ? "diagonal" : "spherical";
  out << "{\"k\":" << model.k() << ",\"covariance\":\"" << cov << "\",\"weights\":[";
  for (std::size_t c = 0; c < model.k(); ++c) {
    if (c) out << ',';
    out << format_g17(model.weights[c]);
  }
  out << "],\"means\":[";
  for (std::size_t c = 0; c < model.k(); ++c) {
    if (c) out << ',';
    out << '[';
    for (std::size_t j = 0; j < model.dim(); ++j) {
      if (j) out << ',';
      out << format_g17(model.means(c, j));
    }
    out << ']';
  }
  out << "],\"variances\":[";
  for (std::size_t c = 0; c < model.k(); ++c) {
    if (c) out << ',';
    out << '[';
    for (std::size_t j = 0; j < model.dim(); ++j) {
      if (j) out << ',';
      out << format_g17(model.variances(c, j));
    }
    out << ']';
  }
  out << "],\"train_loglik\":" << format_g17(model.train_loglik) << "}";
  return out.str();
}

GmmModel gmm_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  GmmModel model;
  const std::string cov = j.at("covariance").get<std::string>();
  if (cov == "diagonal") {
    model.covariance = Covariance::Diagonal;
  } else if (cov == "spherical") {
    model.covariance = Covariance::Spherical;
  } else {
    throw std::runtime_error("gmm_from_json: unknown covariance type " + cov);
  }
  model.weights = j.at("weights").get<std::vector<double>>();
  const auto means = j.at("means").get<std::vector<std::vector<double>>>();
  const auto vars = j.at("variances").get<std::vector<std::vector<double>>>();
  const std::size_t k = j.at("k").get<std::size_t>();
  if (k != model.weights.size() || means.size() != k || vars.size() != k) {
    throw std::runtime_error("gmm_from_json: inconsistent component counts");
  }
  const std::size_t d = means.empty() ? 0 : means.front().size();
  model.means = Matrix(k, d);
  model.variances = Matrix(k, d);
  for (std::size_t c = 0; c < k; ++c) {
    if (means[c].size() != d || vars[c].size() != d) {
      throw std::runtime_error("gmm_from_json: ragged means/variances");
    }
    std::copy(means[c].begin(), means[c].end(), model.means.row(c));
    std::copy(vars[c].begin(), vars[c].end(), model.variances.row(c));
  }
  model.train_loglik = j.at("train_loglik").get<double>();
  return model;
}

}  // namespace denserec
