#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "denserec/matrix.hpp"

namespace denserec {

/// Fixed-length vector representation per document. Row i of `vectors`
/// belongs to doc_ids[i].
struct EmbeddingMatrix {
  std::vector<std::string> doc_ids;
  Matrix vectors;

  std::size_t size() const { return doc_ids.size(); }
  std::size_t dim() const { return vectors.cols; }
};

/// Row lookup by document id.
std::unordered_map<std::string, std::size_t> embedding_index(const EmbeddingMatrix& emb);

/// Writes an embedding file. Paths ending in ".csv" use the textual format
/// (header `id,v0,...,v{d-1}`, 17 significant digits); anything else uses
/// the binary EMB1 format: magic "EMB1", u32 row count, u32 dim, row-major
/// little-endian f64 values, then one id per line. EMB1 round-trips
/// bit-exactly.
void save_embeddings(const EmbeddingMatrix& emb, const std::string& path);

EmbeddingMatrix load_embeddings(const std::string& path);

/// Shortest-faithful decimal rendering used by all text outputs
/// (printf %.17g).
std::string format_g17(double v);

}  // namespace denserec
