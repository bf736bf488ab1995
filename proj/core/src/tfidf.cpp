#include "denserec/tfidf.hpp"

#include <cmath>
#include <stdexcept>

namespace denserec {

namespace {

std::unordered_map<std::size_t, std::size_t> token_counts(const Document& doc,
                                                          const Corpus& corpus) {
  std::unordered_map<std::size_t, std::size_t> counts;
  for (const std::string& tok : doc.tokens) {
    auto it = corpus.vocabulary.find(tok);
    if (it != corpus.vocabulary.end()) ++counts[it->second];
  }
  return counts;
}

}  // namespace

TfIdfModel fit_tfidf(const Corpus& corpus, double score_low, double score_high) {
  if (corpus.documents.empty()) throw std::invalid_argument("fit_tfidf: empty corpus");
  if (score_low > score_high) throw std::invalid_argument("fit_tfidf: score_low > score_high");

  const double n_docs = static_cast<double>(corpus.size());
  const std::size_t vocab_size = corpus.vocab_tokens.size();

  std::vector<double> full_idf(vocab_size);
  for (std::size_t t = 0; t < vocab_size; ++t) {
    const double df = static_cast<double>(corpus.doc_freq.at(corpus.vocab_tokens[t]));
    full_idf[t] = std::log(n_docs / df) + 1.0;
  }

  // max tf per term over all documents
  std::vector<std::size_t> max_tf(vocab_size, 0);
  for (const Document& doc : corpus.documents) {
    for (const auto& [term, count] : token_counts(doc, corpus)) {
      if (count > max_tf[term]) max_tf[term] = count;
    }
  }

  TfIdfModel model;
  model.score_low = score_low;
  model.score_high = score_high;
  for (std::size_t t = 0; t < vocab_size; ++t) {
    const double max_score = static_cast<double>(max_tf[t]) * full_idf[t];
    if (max_score >= score_low && max_score <= score_high) {
      model.term_index.emplace(corpus.vocab_tokens[t], model.kept_terms.size());
      model.kept_terms.push_back(corpus.vocab_tokens[t]);
      model.idf.push_back(full_idf[t]);
    }
  }
  return model;
}

EmbeddingMatrix transform_tfidf(const TfIdfModel& model, const Corpus& corpus) {
  EmbeddingMatrix emb;
  emb.vectors = Matrix(corpus.size(), model.kept_terms.size());
  emb.doc_ids.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Document& doc = corpus.documents[i];
    emb.doc_ids.push_back(doc.id);
    double* row = emb.vectors.row(i);
    std::unordered_map<std::size_t, std::size_t> counts;
    for (const std::string& tok : doc.tokens) {
      auto it = model.term_index.find(tok);
      if (it != model.term_index.end()) ++counts[it->second];
    }
    for (const auto& [col, count] : counts) {
      row[col] = static_cast<double>(count) * model.idf[col];
    }
  }
  return emb;
}

}  // namespace denserec
