#include <doctest.h>

#include <cmath>
#include <limits>

#include "denserec/tfidf.hpp"

using namespace denserec;

namespace {

Corpus two_doc_corpus() {
  std::vector<Document> docs;
  docs.push_back({"d1", "a a b", {}});
  docs.push_back({"d2", "b c", {}});
  return build_corpus(std::move(docs));
}

}  // namespace

TEST_CASE("tf-idf weights match the stated formula by hand") {
  // N = 2. df(a)=1, df(b)=2, df(c)=1.
  // tf-idf(a, d1) = 2 * (ln 2 + 1), tf-idf(b, *) = 1 * (ln 1 + 1) = 1,
  // tf-idf(c, d2) = 1 * (ln 2 + 1).
  const Corpus corpus = two_doc_corpus();
  const TfIdfModel model = fit_tfidf(corpus, 0.0, std::numeric_limits<double>::infinity());
  const EmbeddingMatrix emb = transform_tfidf(model, corpus);

  REQUIRE(model.kept_terms.size() == 3);
  const std::size_t col_a = model.term_index.at("a");
  const std::size_t col_b = model.term_index.at("b");
  const std::size_t col_c = model.term_index.at("c");

  CHECK(emb.vectors(0, col_a) == doctest::Approx(2.0 * (std::log(2.0) + 1.0)).epsilon(1e-12));
  CHECK(emb.vectors(0, col_b) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(emb.vectors(0, col_c) == 0.0);
  CHECK(emb.vectors(1, col_a) == 0.0);
  CHECK(emb.vectors(1, col_b) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(emb.vectors(1, col_c) == doctest::Approx(std::log(2.0) + 1.0).epsilon(1e-12));
}

TEST_CASE("score_range (0, inf) keeps every term") {
  const Corpus corpus = two_doc_corpus();
  const TfIdfModel model = fit_tfidf(corpus, 0.0, std::numeric_limits<double>::infinity());
  CHECK(model.kept_terms.size() == corpus.vocab_tokens.size());
}

TEST_CASE("score_range (0.3, 10) keeps a, b, c on the toy corpus") {
  // max scores: a -> 3.386, b -> 1, c -> 1.693; all inside [0.3, 10].
  const Corpus corpus = two_doc_corpus();
  const TfIdfModel model = fit_tfidf(corpus, 0.3, 10.0);
  CHECK(model.kept_terms.size() == 3);
}

TEST_CASE("range filter uses the maximum score over documents, bounds inclusive") {
  const Corpus corpus = two_doc_corpus();
  // max score of b is exactly 1.0; an inclusive low bound of 1.0 keeps it
  const TfIdfModel keep_b = fit_tfidf(corpus, 1.0, 1.0);
  REQUIRE(keep_b.kept_terms.size() == 1);
  CHECK(keep_b.kept_terms[0] == "b");
  // terms whose max score exceeds the high bound are dropped entirely
  const TfIdfModel drop_a = fit_tfidf(corpus, 0.0, 2.0);
  CHECK(drop_a.term_index.count("a") == 0);
  CHECK(drop_a.term_index.count("b") == 1);
  CHECK(drop_a.term_index.count("c") == 1);
}

TEST_CASE("documents with no kept term become the zero row") {
  std::vector<Document> docs;
  docs.push_back({"d1", "a a a a", {}});
  docs.push_back({"d2", "b", {}});
  const Corpus corpus = build_corpus(std::move(docs));
  // keep only b: max score of a is 4*(ln2+1) = 6.77, of b is ln2+1 = 1.69
  const TfIdfModel model = fit_tfidf(corpus, 0.0, 2.0);
  REQUIRE(model.kept_terms == std::vector<std::string>{"b"});
  const EmbeddingMatrix emb = transform_tfidf(model, corpus);
  CHECK(emb.vectors(0, 0) == 0.0);
  CHECK(emb.vectors(1, 0) > 0.0);
}

TEST_CASE("duplicate documents get identical rows") {
  std::vector<Document> docs;
  docs.push_back({"d1", "x y x", {}});
  docs.push_back({"d2", "x y x", {}});
  docs.push_back({"d3", "y z", {}});
  const Corpus corpus = build_corpus(std::move(docs));
  const TfIdfModel model = fit_tfidf(corpus, 0.0, std::numeric_limits<double>::infinity());
  const EmbeddingMatrix emb = transform_tfidf(model, corpus);
  for (std::size_t j = 0; j < emb.dim(); ++j) {
    CHECK(emb.vectors(0, j) == emb.vectors(1, j));
  }
}

TEST_CASE("idf of every kept term is positive") {
  const Corpus corpus = two_doc_corpus();
  const TfIdfModel model = fit_tfidf(corpus, 0.0, std::numeric_limits<double>::infinity());
  for (double idf : model.idf) CHECK(idf > 0.0);
}

TEST_CASE("fit_tfidf rejects bad inputs") {
  CHECK_THROWS(fit_tfidf(Corpus{}, 0.0, 1.0));
  const Corpus corpus = two_doc_corpus();
  CHECK_THROWS(fit_tfidf(corpus, 5.0, 1.0));
}
