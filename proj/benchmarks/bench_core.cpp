// Microbenchmarks for the numerical kernels that dominate pipeline runtime:
// the Jacobi eigensolver (SVD and kernel PCA both reduce to it), paragraph
// vector training steps, per-fold GMM fits, and nearest-neighbor snapping.

#include <benchmark/benchmark.h>

#include "denserec/corpus.hpp"
#include "denserec/gmm.hpp"
#include "denserec/matrix.hpp"
#include "denserec/pvec.hpp"
#include "denserec/recommend.hpp"
#include "denserec/rng.hpp"
#include "denserec/synth.hpp"
#include "denserec/tfidf.hpp"

using namespace denserec;

namespace {

Matrix random_sym(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Matrix a(n, 2 * n);
  for (double& v : a.data) v = rng.gaussian();
  return gram_aat(a);
}

void BM_JacobiEigen(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const Matrix g = random_sym(n, 42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(jacobi_eigen_sym(g));
  }
}
BENCHMARK(BM_JacobiEigen)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_TfIdfTransform(benchmark::State& state) {
  SynthConfig config;
  config.topics = 6;
  config.docs_per_topic = static_cast<std::size_t>(state.range(0)) / 6;
  config.users = 1;
  config.docs_per_user = 1;
  config.seed = 3;
  const Corpus corpus = build_corpus(synth_corpus(config).documents);
  const TfIdfModel model = fit_tfidf(corpus, 0.0, 1e9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(transform_tfidf(model, corpus));
  }
}
BENCHMARK(BM_TfIdfTransform)->Arg(120)->Arg(600)->Unit(benchmark::kMillisecond);

void BM_PvTrainStep(benchmark::State& state) {
  SynthConfig sc;
  sc.topics = 2;
  sc.docs_per_topic = 20;
  sc.users = 1;
  sc.docs_per_user = 1;
  sc.seed = 5;
  const Corpus corpus = build_corpus(synth_corpus(sc).documents);
  PvConfig config;
  config.dim = static_cast<std::size_t>(state.range(0));
  PvModel model = pv_init_model(corpus, config);
  Rng rng(17);
  std::size_t pos = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pv_train_step(model, pos % 40, pos % 100, rng, 0.025));
    ++pos;
  }
}
BENCHMARK(BM_PvTrainStep)->Arg(100)->Arg(300);

void BM_GmmFit(benchmark::State& state) {
  // shape of one cross-validation fold: ~48 training points in 100 dims
  Rng rng(9);
  Matrix points(48, static_cast<std::size_t>(state.range(0)));
  for (double& v : points.data) v = rng.gaussian();
  GmmConfig config;
  config.k = 2;
  config.seed = 11;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_gmm(points, config));
  }
}
BENCHMARK(BM_GmmFit)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_NearestDocument(benchmark::State& state) {
  const std::size_t docs = static_cast<std::size_t>(state.range(0));
  EmbeddingMatrix emb;
  emb.vectors = Matrix(docs, 100);
  Rng rng(21);
  for (double& v : emb.vectors.data) v = rng.gaussian();
  for (std::size_t i = 0; i < docs; ++i) emb.doc_ids.push_back("d" + std::to_string(i));
  std::vector<double> query(100);
  for (double& v : query) v = rng.gaussian();
  for (auto _ : state) {
    benchmark::DoNotOptimize(nearest_document(query, emb, {}));
  }
}
BENCHMARK(BM_NearestDocument)->Arg(600)->Arg(5000);

}  // namespace

BENCHMARK_MAIN();
