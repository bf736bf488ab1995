#include <doctest.h>

#include <cmath>
#include <numbers>

#include "denserec/gmm.hpp"
#include "denserec/rng.hpp"

using namespace denserec;

namespace {

Matrix gaussian_blob(std::size_t n, std::size_t d, const std::vector<double>& center,
                     double sigma, Rng& rng) {
  Matrix points(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      points(i, j) = center[j] + sigma * rng.gaussian();
    }
  }
  return points;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows + b.rows, a.cols);
  std::copy(a.data.begin(), a.data.end(), out.data.begin());
  std::copy(b.data.begin(), b.data.end(), out.data.begin() + a.data.size());
  return out;
}

// direct density evaluation without log-space tricks
double naive_log_pdf(const GmmModel& model, const std::vector<double>& x) {
  double density = 0.0;
  for (std::size_t c = 0; c < model.k(); ++c) {
    double comp = model.weights[c];
    for (std::size_t j = 0; j < model.dim(); ++j) {
      const double var = model.variances(c, j);
      const double diff = x[j] - model.means(c, j);
      comp *= std::exp(-0.5 * diff * diff / var) / std::sqrt(2.0 * std::numbers::pi * var);
    }
    density += comp;
  }
  return std::log(density);
}

GmmConfig quick_config(std::size_t k, std::uint64_t seed) {
  GmmConfig config;
  config.k = k;
  config.seed = seed;
  return config;
}

}  // namespace

TEST_CASE("k=1 fit equals the closed-form Gaussian MLE") {
  Rng rng(100);
  const Matrix points = gaussian_blob(50, 3, {1.0, -2.0, 0.5}, 1.3, rng);
  GmmConfig config = quick_config(1, 7);
  const GmmModel model = fit_gmm(points, config);

  for (std::size_t j = 0; j < 3; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < 50; ++i) mean += points(i, j);
    mean /= 50.0;
    double var = 0.0;
    for (std::size_t i = 0; i < 50; ++i) {
      var += (points(i, j) - mean) * (points(i, j) - mean);
    }
    var /= 50.0;  // biased MLE variance
    CHECK(std::fabs(model.means(0, j) - mean) < 1e-8);
    CHECK(std::fabs(model.variances(0, j) - (var + config.reg)) < 1e-8);
  }
  CHECK(model.weights[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("two well-separated blobs are recovered") {
  Rng rng(41);
  const Matrix blob_a = gaussian_blob(200, 2, {-10.0, 0.0}, 1.0, rng);
  const Matrix blob_b = gaussian_blob(200, 2, {10.0, 0.0}, 1.0, rng);
  const Matrix points = vstack(blob_a, blob_b);
  const GmmModel model = fit_gmm(points, quick_config(2, 3));

  const bool a_first = model.means(0, 0) < model.means(1, 0);
  const std::size_t low = a_first ? 0 : 1;
  const std::size_t high = a_first ? 1 : 0;
  CHECK(std::fabs(model.means(low, 0) - (-10.0)) < 0.3);
  CHECK(std::fabs(model.means(low, 1)) < 0.3);
  CHECK(std::fabs(model.means(high, 0) - 10.0) < 0.3);
  CHECK(std::fabs(model.means(high, 1)) < 0.3);
  CHECK(std::fabs(model.weights[0] - 0.5) < 0.05);
  CHECK(std::fabs(model.weights[1] - 0.5) < 0.05);
  CHECK(std::fabs(model.weights[0] + model.weights[1] - 1.0) < 1e-12);
}

TEST_CASE("EM mean log-likelihood never decreases") {
  Rng meta(2718);
  for (int dataset = 0; dataset < 20; ++dataset) {
    const std::size_t n = 20 + meta.below(60);
    const std::size_t d = 2 + meta.below(5);
    const std::size_t k = 1 + meta.below(4);
    Matrix points(n, d);
    for (double& v : points.data) v = meta.gaussian() * (1.0 + meta.uniform());

    GmmConfig config = quick_config(k, 1000 + dataset);
    config.n_init = 2;
    GmmFitDiagnostics diag;
    fit_gmm(points, config, &diag);
    for (const std::vector<double>& trace : diag.restart_loglik) {
      for (std::size_t i = 1; i < trace.size(); ++i) {
        CHECK(trace[i] >= trace[i - 1] - 1e-9 * std::fabs(trace[i - 1]));
      }
    }
  }
}

TEST_CASE("responsibilities sum to one per point") {
  Rng rng(5);
  const Matrix points = gaussian_blob(40, 4, {0, 0, 0, 0}, 2.0, rng);
  const GmmModel model = fit_gmm(points, quick_config(3, 9));
  const Matrix resp = gmm_responsibilities(model, points);
  for (std::size_t i = 0; i < resp.rows; ++i) {
    double sum = 0.0;
    for (std::size_t c = 0; c < resp.cols; ++c) {
      sum += resp(i, c);
      CHECK(resp(i, c) >= 0.0);
    }
    CHECK(std::fabs(sum - 1.0) < 1e-12);
  }
}

TEST_CASE("log_pdf of a standard normal at the origin") {
  GmmModel model;
  model.weights = {1.0};
  model.means = Matrix(1, 1, 0.0);
  model.variances = Matrix(1, 1, 1.0);
  const double x = 0.0;
  CHECK(gmm_log_pdf(model, {&x, 1}) ==
        doctest::Approx(-0.5 * std::log(2.0 * std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("log_pdf matches the naive density oracle") {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 1 + rng.below(3);
    const std::size_t d = 1 + rng.below(4);
    GmmModel model;
    model.means = Matrix(k, d);
    model.variances = Matrix(k, d);
    double wsum = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      model.weights.push_back(0.1 + rng.uniform());
      wsum += model.weights.back();
      for (std::size_t j = 0; j < d; ++j) {
        model.means(c, j) = rng.gaussian() * 2.0;
        model.variances(c, j) = 0.2 + rng.uniform();
      }
    }
    for (double& w : model.weights) w /= wsum;

    std::vector<double> x(d);
    for (double& v : x) v = rng.gaussian() * 2.0;
    CHECK(gmm_log_pdf(model, x) == doctest::Approx(naive_log_pdf(model, x)).epsilon(1e-10));
  }
}

TEST_CASE("symmetric mixtures have symmetric log densities") {
  GmmModel model;
  model.weights = {0.5, 0.5};
  model.means = Matrix(2, 2);
  model.means(0, 0) = 3.0;
  model.means(0, 1) = -1.0;
  model.means(1, 0) = -3.0;
  model.means(1, 1) = 1.0;
  model.variances = Matrix(2, 2, 0.8);
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> x{rng.gaussian() * 3.0, rng.gaussian() * 3.0};
    const std::vector<double> nx{-x[0], -x[1]};
    CHECK(gmm_log_pdf(model, x) == doctest::Approx(gmm_log_pdf(model, nx)).epsilon(1e-12));
  }
}

TEST_CASE("density integrates to one in 1d") {
  GmmModel model;
  model.weights = {0.3, 0.7};
  model.means = Matrix(2, 1);
  model.means(0, 0) = -2.0;
  model.means(1, 0) = 1.5;
  model.variances = Matrix(2, 1);
  model.variances(0, 0) = 0.5;
  model.variances(1, 0) = 2.0;

  const double sigma_max = std::sqrt(2.0);
  const double lo = -2.0 - 20.0 * sigma_max;
  const double hi = 1.5 + 20.0 * sigma_max;
  const std::size_t intervals = 40000;  // Simpson needs an even count
  const double h = (hi - lo) / static_cast<double>(intervals);
  double integral = 0.0;
  for (std::size_t i = 0; i <= intervals; ++i) {
    const double x = lo + h * static_cast<double>(i);
    const double fx = std::exp(gmm_log_pdf(model, {&x, 1}));
    const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    integral += w * fx;
  }
  integral *= h / 3.0;
  CHECK(std::fabs(integral - 1.0) < 1e-6);
}

TEST_CASE("sampling zero points yields an empty matrix") {
  GmmModel model;
  model.weights = {1.0};
  model.means = Matrix(1, 2, 0.0);
  model.variances = Matrix(1, 2, 1.0);
  const Matrix samples = gmm_sample(model, 0, 1);
  CHECK(samples.rows == 0);
}

TEST_CASE("sample statistics reproduce weights and means") {
  GmmModel model;
  model.weights = {0.3, 0.7};
  model.means = Matrix(2, 2);
  model.means(0, 0) = -4.0;
  model.means(0, 1) = 2.0;
  model.means(1, 0) = 5.0;
  model.means(1, 1) = -1.0;
  model.variances = Matrix(2, 2, 1.0);

  const std::size_t n = 100000;
  const Matrix samples = gmm_sample(model, n, 2024);
  std::size_t count_a = 0;
  double mean_a0 = 0.0, mean_a1 = 0.0, mean_b0 = 0.0, mean_b1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    // components are far apart; classify by the midpoint of the first axis
    if (samples(i, 0) < 0.5) {
      ++count_a;
      mean_a0 += samples(i, 0);
      mean_a1 += samples(i, 1);
    } else {
      mean_b0 += samples(i, 0);
      mean_b1 += samples(i, 1);
    }
  }
  const double freq_a = static_cast<double>(count_a) / static_cast<double>(n);
  CHECK(std::fabs(freq_a - 0.3) < 0.01);
  CHECK(std::fabs(mean_a0 / count_a - (-4.0)) < 0.05);
  CHECK(std::fabs(mean_a1 / count_a - 2.0) < 0.05);
  CHECK(std::fabs(mean_b0 / (n - count_a) - 5.0) < 0.05);
  CHECK(std::fabs(mean_b1 / (n - count_a) - (-1.0)) < 0.05);
}

TEST_CASE("floor-variance models sample tightly around their means") {
  const double reg = 1e-6;
  GmmModel model;
  model.weights = {0.5, 0.5};
  model.means = Matrix(2, 3);
  for (std::size_t j = 0; j < 3; ++j) {
    model.means(0, j) = 10.0;
    model.means(1, j) = -10.0;
  }
  model.variances = Matrix(2, 3, reg);
  const Matrix samples = gmm_sample(model, 2000, 55);
  const double bound = 6.0 * std::sqrt(reg);
  for (std::size_t i = 0; i < samples.rows; ++i) {
    const double center = samples(i, 0) > 0.0 ? 10.0 : -10.0;
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(std::fabs(samples(i, j) - center) <= bound);
    }
  }
}

TEST_CASE("sampling is deterministic and sequential in the seed") {
  GmmModel model;
  model.weights = {0.6, 0.4};
  model.means = Matrix(2, 2);
  model.means(1, 0) = 3.0;
  model.variances = Matrix(2, 2, 0.5);
  const Matrix a = gmm_sample(model, 5, 9);
  const Matrix b = gmm_sample(model, 9, 9);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 2; ++j) CHECK(a(i, j) == b(i, j));
  }
}

TEST_CASE("select_k prefers one component for a single blob") {
  Rng rng(8);
  const Matrix points = gaussian_blob(100, 2, {0.0, 0.0}, 1.0, rng);
  CHECK(select_k(points, {1, 2, 3}, quick_config(1, 4)) == 1);
}

TEST_CASE("select_k prefers two components for two distant blobs") {
  Rng rng(9);
  const Matrix points = vstack(gaussian_blob(100, 2, {-12.0, 0.0}, 1.0, rng),
                               gaussian_blob(100, 2, {12.0, 0.0}, 1.0, rng));
  CHECK(select_k(points, {1, 2, 3}, quick_config(1, 4)) == 2);
}

TEST_CASE("select_k with a single candidate returns it") {
  Rng rng(10);
  const Matrix points = gaussian_blob(30, 2, {0.0, 0.0}, 1.0, rng);
  CHECK(select_k(points, {1}, quick_config(1, 4)) == 1);
  CHECK_THROWS(select_k(points, {}, quick_config(1, 4)));
}

TEST_CASE("fit is equivariant under translation") {
  Rng rng(60);
  const Matrix points = vstack(gaussian_blob(60, 2, {-3.0, 1.0}, 0.8, rng),
                               gaussian_blob(60, 2, {4.0, -2.0}, 0.8, rng));
  Matrix shifted = points;
  const double t[2] = {100.0, -50.0};
  for (std::size_t i = 0; i < shifted.rows; ++i) {
    shifted(i, 0) += t[0];
    shifted(i, 1) += t[1];
  }
  const GmmModel base = fit_gmm(points, quick_config(2, 11));
  const GmmModel moved = fit_gmm(shifted, quick_config(2, 11));
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(std::fabs(moved.means(c, j) - (base.means(c, j) + t[j])) < 1e-6);
      CHECK(std::fabs(moved.variances(c, j) - base.variances(c, j)) < 1e-6);
    }
    CHECK(std::fabs(moved.weights[c] - base.weights[c]) < 1e-9);
  }
}

TEST_CASE("spherical covariance ties all dimensions together") {
  Rng rng(12);
  Matrix points = gaussian_blob(80, 3, {0.0, 0.0, 0.0}, 1.0, rng);
  for (std::size_t i = 0; i < points.rows; ++i) points(i, 2) *= 5.0;  // anisotropic
  GmmConfig config = quick_config(1, 2);
  config.covariance = Covariance::Spherical;
  const GmmModel model = fit_gmm(points, config);
  CHECK(model.variances(0, 0) == model.variances(0, 1));
  CHECK(model.variances(0, 1) == model.variances(0, 2));
}

TEST_CASE("every variance respects the floor") {
  Matrix points(5, 2);  // five copies of the same point collapse variance to the floor
  for (std::size_t i = 0; i < 5; ++i) {
    points(i, 0) = 2.0;
    points(i, 1) = -1.0;
  }
  GmmConfig config = quick_config(1, 3);
  const GmmModel model = fit_gmm(points, config);
  for (double v : model.variances.data) CHECK(v >= config.reg);
}

TEST_CASE("model JSON round-trips") {
  Rng rng(19);
  const Matrix points = gaussian_blob(30, 2, {1.0, 2.0}, 1.5, rng);
  const GmmModel model = fit_gmm(points, quick_config(2, 21));
  const GmmModel loaded = gmm_from_json(gmm_to_json(model));
  CHECK(loaded.weights == model.weights);
  CHECK(loaded.means.data == model.means.data);
  CHECK(loaded.variances.data == model.variances.data);
  CHECK(loaded.train_loglik == model.train_loglik);
  CHECK(loaded.covariance == model.covariance);
}

TEST_CASE("fit_gmm validates preconditions") {
  Matrix points(3, 2, 1.0);
  CHECK_THROWS(fit_gmm(points, quick_config(4, 1)));  // n < k
  Matrix empty_dim(3, 0);
  CHECK_THROWS(fit_gmm(empty_dim, quick_config(1, 1)));
  GmmConfig bad = quick_config(0, 1);
  CHECK_THROWS(bad.validate());
  bad = quick_config(1, 1);
  bad.reg = 0.0;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("restarts pick the best final likelihood") {
  Rng rng(70);
  const Matrix points = vstack(gaussian_blob(50, 2, {-6.0, 0.0}, 0.5, rng),
                               gaussian_blob(50, 2, {6.0, 0.0}, 0.5, rng));
  GmmConfig config = quick_config(2, 5);
  config.n_init = 4;
  GmmFitDiagnostics diag;
  const GmmModel model = fit_gmm(points, config, &diag);
  REQUIRE(diag.restart_loglik.size() == 4);
  for (const auto& trace : diag.restart_loglik) {
    CHECK(model.train_loglik >= trace.back() - 1e-12);
  }
  CHECK(diag.chosen_restart < 4);
}
