#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "denserec/corpus.hpp"
#include "denserec/embedding.hpp"

namespace denserec {

/// Term weighting model. tf is the raw in-document count, idf(t) =
/// ln(N / df(t)) + 1. A term survives the range filter iff its maximum
/// tf-idf score over all documents lies within [score_low, score_high]
/// inclusive.
struct TfIdfModel {
  std::vector<std::string> kept_terms;                     // column -> token
  std::unordered_map<std::string, std::size_t> term_index; // token -> column
  std::vector<double> idf;                                 // per kept term
  double score_low = 0.0;
  double score_high = 0.0;
};

TfIdfModel fit_tfidf(const Corpus& corpus, double score_low, double score_high);

/// One row per document, entry (d, t) = tf(t, d) * idf(t) for kept terms.
/// Documents containing no kept term map to the zero row.
EmbeddingMatrix transform_tfidf(const TfIdfModel& model, const Corpus& corpus);

}  // namespace denserec
