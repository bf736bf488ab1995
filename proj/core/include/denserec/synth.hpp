#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "denserec/corpus.hpp"

namespace denserec {

/// Seeded synthetic benchmark: topic-pure documents over disjoint topic
/// vocabularies plus a shared vocabulary, and users whose profiles draw
/// from a small set of assigned topics. Stands in for a real bookmark
/// crawl when exercising the full pipeline.
struct SynthConfig {
  std::size_t topics = 6;
  std::size_t docs_per_topic = 100;
  std::size_t users = 20;
  std::size_t docs_per_user = 60;
  std::size_t topics_per_user = 1;
  std::size_t tokens_per_doc = 120;
  double topic_token_share = 0.8;  // remaining tokens come from the shared vocabulary
  std::size_t topic_vocab_size = 200;
  std::size_t shared_vocab_size = 100;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SynthData {
  std::vector<Document> documents;   // ids "t<topic>d<index>"
  std::vector<UserProfile> profiles; // ids "u<index>"
};

SynthData synth_corpus(const SynthConfig& config);

/// Writes the generated corpus and profiles in the JSONL interchange
/// formats used by the loaders.
void write_synth_files(const SynthData& data, const std::string& corpus_path,
                       const std::string& profiles_path);

}  // namespace denserec
