#include "denserec/recommend.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace denserec {

std::pair<std::string, double> nearest_document(std::span<const double> sample,
                                                const EmbeddingMatrix& embeddings,
                                                const std::unordered_set<std::string>& excluded) {
  if (sample.size() != embeddings.dim()) {
    throw std::invalid_argument("nearest_document: dimension mismatch");
  }
  const std::string* best_id = nullptr;
  double best_d2 = 0.0;
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    const std::string& id = embeddings.doc_ids[i];
    if (excluded.count(id)) continue;
    const double d2 = squared_distance(sample.data(), embeddings.vectors.row(i), sample.size());
    if (best_id == nullptr || d2 < best_d2 || (d2 == best_d2 && id < *best_id)) {
      best_id = &id;
      best_d2 = d2;
    }
  }
  if (best_id == nullptr) {
    throw std::runtime_error("nearest_document: every document is excluded");
  }
  return {*best_id, std::sqrt(best_d2)};
}

std::vector<Recommendation> recommend(const GmmModel& model, const EmbeddingMatrix& embeddings,
                                      std::size_t n,
                                      const std::unordered_set<std::string>& excluded,
                                      std::uint64_t seed) {
  if (model.dim() != embeddings.dim()) {
    throw std::invalid_argument("recommend: model and embedding dimensions differ");
  }
  const Matrix samples = gmm_sample(model, n, seed);
  std::vector<Recommendation> recs;
  recs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto [id, distance] =
        nearest_document({samples.row(i), samples.cols}, embeddings, excluded);
    recs.push_back({std::move(id), i, distance});
  }
  return recs;
}

std::string recommendations_to_csv(const std::vector<Recommendation>& recs) {
  std::ostringstream out;
  out << "sample_index,doc_id,distance\n";
  for (const Recommendation& r : recs) {
    out << r.sample_index << ',' << r.doc_id << ',' << format_g17(r.distance) << '\n';
  }
  return out.str();
}

}  // namespace denserec
