#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "denserec/corpus.hpp"
#include "denserec/embedding.hpp"
#include "denserec/gmm.hpp"

namespace denserec {

struct EvalConfig {
  std::size_t folds = 5;
  GmmConfig gmm;
  std::uint64_t seed = 1;
  bool exclude_train = false;  // drop the fold's training docs from the candidate set
  std::string method = "GMM";  // report row label

  void validate() const;
};

struct FoldSplit {
  std::vector<std::string> train_ids;
  std::vector<std::string> validation_ids;
};

struct UserEvalResult {
  std::string user_id;
  std::size_t hits = 0;
  std::size_t trials = 0;
  bool skipped = false;
  std::string skip_reason;
};

struct EvalReport {
  std::string method;
  std::vector<UserEvalResult> per_user;  // evaluated users only
  std::vector<UserEvalResult> skipped;   // users that could not be evaluated
  std::size_t total_hits = 0;
  std::size_t total_trials = 0;
  double hit_rate = 0.0;
};

/// Seeded shuffle followed by `folds` contiguous validation blocks of size
/// floor(n/folds) or ceil(n/folds). Blocks are disjoint and cover the
/// profile, so every document validates exactly once.
std::vector<FoldSplit> kfold_split(const UserProfile& profile, std::size_t folds,
                                   std::uint64_t seed);

/// Cross-validates one user: per fold, fit a GMM on the training documents'
/// embeddings, draw |validation| samples, snap each to its nearest corpus
/// document, and count matches that land in the validation set.
UserEvalResult evaluate_user(const UserProfile& profile, const EmbeddingMatrix& embeddings,
                             const EvalConfig& config);

EvalReport evaluate_all(const std::vector<UserProfile>& profiles,
                        const EmbeddingMatrix& embeddings, const EvalConfig& config);

/// Expected hit rate if every trial drew a uniformly random corpus
/// document: sum over users and folds of |D_v| * (|D_v| / corpus_size),
/// normalized by the total trial count.
double random_baseline(const std::vector<UserProfile>& profiles, std::size_t corpus_size,
                       std::size_t folds);

/// "8.63 %" style rendering, two decimals.
std::string format_hit_rate(std::size_t hits, std::size_t trials);

/// Side-by-side table: Method | Hit rate | Hits.
std::string render_report_table(const std::vector<EvalReport>& reports);

/// Machine-readable report with the per-user breakdown.
std::string report_to_json(const EvalReport& report, double baseline);

}  // namespace denserec
