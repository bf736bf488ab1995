#include <doctest.h>

#include <cmath>

#include "denserec/rng.hpp"
#include "denserec/svd.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace denserec;

namespace {

EmbeddingMatrix random_embedding(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  EmbeddingMatrix emb;
  emb.vectors = Matrix(rows, cols);
  Rng rng(seed);
  for (double& v : emb.vectors.data) v = rng.gaussian();
  for (std::size_t i = 0; i < rows; ++i) emb.doc_ids.push_back("doc" + std::to_string(i));
  return emb;
}

Matrix reconstruct(const SvdModel& model, const EmbeddingMatrix& input) {
  const EmbeddingMatrix proj = project_svd(model, input);
  return multiply_abt(proj.vectors, [&] {
    // components^T as row-major rows: multiply_abt(proj, components^T) needs
    // the transpose, so build it explicitly
    Matrix ct(model.components.cols, model.components.rows);
    for (std::size_t i = 0; i < model.components.rows; ++i)
      for (std::size_t j = 0; j < model.components.cols; ++j)
        ct(j, i) = model.components(i, j);
    return ct;
  }());
}

}  // namespace

TEST_CASE("diagonal matrix has its diagonal as singular values") {
  EmbeddingMatrix emb;
  emb.doc_ids = {"a", "b", "c"};
  emb.vectors = Matrix(3, 3);
  emb.vectors(0, 0) = 3.0;
  emb.vectors(1, 1) = 2.0;
  emb.vectors(2, 2) = 1.0;

  const SvdModel model = fit_svd(emb, 2, 1);
  REQUIRE(model.singular_values.size() == 2);
  CHECK(model.singular_values[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(model.singular_values[1] == doctest::Approx(2.0).epsilon(1e-12));
  // components are the axis vectors up to sign; sign normalization makes
  // them exactly the positive axes
  CHECK(std::fabs(model.components(0, 0)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::fabs(model.components(1, 1)) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("full-rank decomposition reconstructs the input") {
  for (std::uint64_t seed : {11u, 12u}) {
    const EmbeddingMatrix emb = random_embedding(12, 7, seed);
    const SvdModel model = fit_svd(emb, 7, seed);
    const Matrix recon = reconstruct(model, emb);
    CHECK(testutil::frobenius_distance(recon, emb.vectors) < 1e-8);
  }
}

TEST_CASE("wide full-rank matrices reconstruct through the AAt route") {
  const EmbeddingMatrix emb = random_embedding(6, 15, 21);
  const SvdModel model = fit_svd(emb, 6, 21);
  const Matrix recon = reconstruct(model, emb);
  CHECK(testutil::frobenius_distance(recon, emb.vectors) < 1e-8);
}

TEST_CASE("rank-10 singular values match the brute-force Gram oracle") {
  const EmbeddingMatrix emb = random_embedding(50, 30, 77);
  const SvdModel model = fit_svd(emb, 10, 77);
  const std::vector<double> oracle = oracles::singular_values(emb.vectors);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(model.singular_values[i] == doctest::Approx(oracle[i]).epsilon(1e-6));
  }

  // truncation error equals the energy in the dropped singular values
  const Matrix recon = reconstruct(model, emb);
  double tail = 0.0;
  for (std::size_t i = 10; i < oracle.size(); ++i) tail += oracle[i] * oracle[i];
  CHECK(testutil::frobenius_distance(recon, emb.vectors) ==
        doctest::Approx(std::sqrt(tail)).epsilon(1e-6));
}

TEST_CASE("singular values are non-negative and non-increasing") {
  const EmbeddingMatrix emb = random_embedding(20, 14, 5);
  const SvdModel model = fit_svd(emb, 14, 5);
  for (std::size_t i = 0; i < model.singular_values.size(); ++i) {
    CHECK(model.singular_values[i] >= 0.0);
    if (i) CHECK(model.singular_values[i] <= model.singular_values[i - 1]);
  }
}

TEST_CASE("components are orthonormal") {
  for (auto [rows, cols] : {std::pair<std::size_t, std::size_t>{25, 10}, {10, 25}}) {
    const EmbeddingMatrix emb = random_embedding(rows, cols, 9);
    const SvdModel model = fit_svd(emb, std::min(rows, cols), 9);
    for (std::size_t i = 0; i < model.rank; ++i) {
      for (std::size_t j = i; j < model.rank; ++j) {
        double dot = 0.0;
        for (std::size_t k = 0; k < cols; ++k) dot += model.components(i, k) * model.components(j, k);
        CHECK(std::fabs(dot - (i == j ? 1.0 : 0.0)) < 1e-8);
      }
    }
  }
}

TEST_CASE("projection of the training matrix has gram diag(sigma^2)") {
  const EmbeddingMatrix emb = random_embedding(18, 9, 33);
  const SvdModel model = fit_svd(emb, 9, 33);
  const EmbeddingMatrix proj = project_svd(model, emb);
  const Matrix gram = gram_ata(proj.vectors);
  for (std::size_t i = 0; i < 9; ++i) {
    for (std::size_t j = 0; j < 9; ++j) {
      const double expected = i == j ? model.singular_values[i] * model.singular_values[i] : 0.0;
      CHECK(std::fabs(gram(i, j) - expected) < 1e-8);
    }
  }
}

TEST_CASE("projection preserves per-component inner products") {
  const EmbeddingMatrix emb = random_embedding(10, 6, 42);
  const SvdModel model = fit_svd(emb, 4, 42);
  const EmbeddingMatrix proj = project_svd(model, emb);
  for (std::size_t i = 0; i < emb.size(); ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < 6; ++k) dot += emb.vectors(i, k) * model.components(j, k);
      CHECK(proj.vectors(i, j) == doctest::Approx(dot).epsilon(1e-12));
    }
  }
}

TEST_CASE("zero rows project to zero") {
  EmbeddingMatrix emb = random_embedding(8, 5, 3);
  for (std::size_t k = 0; k < 5; ++k) emb.vectors(2, k) = 0.0;
  const SvdModel model = fit_svd(emb, 3, 3);
  const EmbeddingMatrix proj = project_svd(model, emb);
  for (std::size_t k = 0; k < 3; ++k) CHECK(proj.vectors(2, k) == 0.0);
}

TEST_CASE("rank-1 data keeps pairwise distances at r=1") {
  EmbeddingMatrix emb;
  emb.vectors = Matrix(6, 4);
  const double direction[4] = {0.5, -0.25, 1.0, 0.0};
  for (std::size_t i = 0; i < 6; ++i) {
    const double scale = static_cast<double>(i) - 2.0;
    for (std::size_t k = 0; k < 4; ++k) emb.vectors(i, k) = scale * direction[k];
    emb.doc_ids.push_back("r" + std::to_string(i));
  }
  const SvdModel model = fit_svd(emb, 1, 1);
  const EmbeddingMatrix proj = project_svd(model, emb);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = i + 1; j < 6; ++j) {
      const double before = testutil::euclidean(emb.vectors.row(i), emb.vectors.row(j), 4);
      const double after = testutil::euclidean(proj.vectors.row(i), proj.vectors.row(j), 1);
      CHECK(after == doctest::Approx(before).epsilon(1e-8));
    }
  }
}

TEST_CASE("row order only affects component signs") {
  const EmbeddingMatrix emb = random_embedding(9, 5, 13);
  EmbeddingMatrix reversed;
  reversed.vectors = Matrix(9, 5);
  for (std::size_t i = 0; i < 9; ++i) {
    reversed.doc_ids.push_back(emb.doc_ids[8 - i]);
    for (std::size_t k = 0; k < 5; ++k) reversed.vectors(i, k) = emb.vectors(8 - i, k);
  }
  const SvdModel a = fit_svd(emb, 5, 2);
  const SvdModel b = fit_svd(reversed, 5, 2);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(a.singular_values[i] == doctest::Approx(b.singular_values[i]).epsilon(1e-8));
    for (std::size_t k = 0; k < 5; ++k) {
      CHECK(std::fabs(std::fabs(a.components(i, k)) - std::fabs(b.components(i, k))) < 1e-7);
    }
  }
}

TEST_CASE("rank larger than min(rows, cols) is rejected") {
  const EmbeddingMatrix emb = random_embedding(5, 3, 1);
  CHECK_THROWS(fit_svd(emb, 4, 1));
}

TEST_CASE("projection with mismatched dimensions is rejected") {
  const EmbeddingMatrix emb = random_embedding(5, 3, 1);
  const SvdModel model = fit_svd(emb, 2, 1);
  const EmbeddingMatrix other = random_embedding(4, 7, 2);
  CHECK_THROWS(project_svd(model, other));
}
