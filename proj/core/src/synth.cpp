#include "denserec/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "denserec/rng.hpp"

namespace denserec {

namespace {

std::string padded(std::size_t v, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%0*zu", width, v);
  return buf;
}

}  // namespace

void SynthConfig::validate() const {
  if (topics < 1 || docs_per_topic < 1 || users < 1 || docs_per_user < 1 ||
      topics_per_user < 1 || tokens_per_doc < 1 || topic_vocab_size < 1 ||
      shared_vocab_size < 1) {
    throw std::invalid_argument("synth: all counts must be >= 1");
  }
  if (topics_per_user > topics) {
    throw std::invalid_argument("synth: topics_per_user exceeds topic count");
  }
  if (docs_per_user > docs_per_topic * topics_per_user) {
    throw std::invalid_argument("synth: docs_per_user exceeds available documents per user");
  }
  if (topic_token_share < 0.0 || topic_token_share > 1.0) {
    throw std::invalid_argument("synth: topic_token_share must lie in [0, 1]");
  }
}

SynthData synth_corpus(const SynthConfig& config) {
  config.validate();
  Rng rng(config.seed);
  SynthData data;

  for (std::size_t t = 0; t < config.topics; ++t) {
    for (std::size_t d = 0; d < config.docs_per_topic; ++d) {
      Document doc;
      doc.id = "t" + std::to_string(t) + "d" + padded(d, 3);
      std::string text;
      for (std::size_t i = 0; i < config.tokens_per_doc; ++i) {
        if (i) text.push_back(' ');
        if (rng.uniform() < config.topic_token_share) {
          text += "t" + std::to_string(t) + "w" + padded(rng.below(config.topic_vocab_size), 3);
        } else {
          text += "sw" + padded(rng.below(config.shared_vocab_size), 3);
        }
      }
      doc.raw_text = std::move(text);
      data.documents.push_back(std::move(doc));
    }
  }

  for (std::size_t u = 0; u < config.users; ++u) {
    UserProfile profile;
    profile.user_id = "u" + padded(u, 2);

    std::vector<std::size_t> all_topics(config.topics);
    for (std::size_t t = 0; t < config.topics; ++t) all_topics[t] = t;
    rng.shuffle(all_topics);
    all_topics.resize(config.topics_per_user);

    std::vector<std::size_t> pool;  // global document indices of the assigned topics
    for (std::size_t t : all_topics) {
      for (std::size_t d = 0; d < config.docs_per_topic; ++d) {
        pool.push_back(t * config.docs_per_topic + d);
      }
    }
    rng.shuffle(pool);
    pool.resize(config.docs_per_user);

    profile.doc_ids.reserve(pool.size());
    for (std::size_t idx : pool) profile.doc_ids.push_back(data.documents[idx].id);
    std::sort(profile.doc_ids.begin(), profile.doc_ids.end());
    data.profiles.push_back(std::move(profile));
  }
  return data;
}

void write_synth_files(const SynthData& data, const std::string& corpus_path,
                       const std::string& profiles_path) {
  std::ofstream corpus_out(corpus_path, std::ios::binary);
  if (!corpus_out) throw std::runtime_error("cannot open output file: " + corpus_path);
  for (const Document& doc : data.documents) {
    nlohmann::json j{{"id", doc.id}, {"text", doc.raw_text}};
    corpus_out << j.dump() << "\n";
  }
  if (!corpus_out) throw std::runtime_error("write failed: " + corpus_path);

  std::ofstream profiles_out(profiles_path, std::ios::binary);
  if (!profiles_out) throw std::runtime_error("cannot open output file: " + profiles_path);
  for (const UserProfile& profile : data.profiles) {
    nlohmann::json j{{"user_id", profile.user_id}, {"doc_ids", profile.doc_ids}};
    profiles_out << j.dump() << "\n";
  }
  if (!profiles_out) throw std::runtime_error("write failed: " + profiles_path);
}

}  // namespace denserec
