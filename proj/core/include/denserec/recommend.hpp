#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "denserec/embedding.hpp"
#include "denserec/gmm.hpp"

namespace denserec {

struct Recommendation {
  std::string doc_id;
  std::size_t sample_index = 0;
  double distance = 0.0;  // Euclidean distance from the sample to the document
};

/// Exhaustive scan for the non-excluded document nearest to the sample.
/// Ties resolve to the lexicographically smallest doc id. Throws when every
/// document is excluded.
std::pair<std::string, double> nearest_document(std::span<const double> sample,
                                                const EmbeddingMatrix& embeddings,
                                                const std::unordered_set<std::string>& excluded);

/// Draws n samples from the interest model and snaps each to its nearest
/// corpus document. Duplicates are kept: hit counting works per sample.
/// Under a fixed seed the result for n draws is a prefix of the result for
/// n + m draws.
std::vector<Recommendation> recommend(const GmmModel& model, const EmbeddingMatrix& embeddings,
                                      std::size_t n,
                                      const std::unordered_set<std::string>& excluded,
                                      std::uint64_t seed);

/// CSV rendering: header plus one `sample_index,doc_id,distance` row each.
std::string recommendations_to_csv(const std::vector<Recommendation>& recs);

}  // namespace denserec
