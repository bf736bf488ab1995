#include "denserec/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace denserec {

namespace {

bool is_token_char(unsigned char c) {
  if (c >= 0x80) return true;  // any non-ASCII byte belongs to a token
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

char lower_ascii(unsigned char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
}

}  // namespace

std::vector<std::string> tokenize(std::string_view raw_text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : raw_text) {
    if (is_token_char(c)) {
      current.push_back(lower_ascii(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::size_t count_unicode_chars(std::string_view utf8) {
  std::size_t n = 0;
  for (unsigned char c : utf8) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

Corpus build_corpus(std::vector<Document> documents) {
  Corpus corpus;
  corpus.documents = std::move(documents);
  for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
    Document& doc = corpus.documents[i];
    if (!corpus.id_index.emplace(doc.id, i).second) {
      throw std::runtime_error("duplicate document id: " + doc.id);
    }
    if (doc.tokens.empty()) doc.tokens = tokenize(doc.raw_text);
    std::set<std::string> seen;  // distinct tokens of this document
    for (const std::string& tok : doc.tokens) {
      if (corpus.vocabulary.emplace(tok, corpus.vocab_tokens.size()).second) {
        corpus.vocab_tokens.push_back(tok);
      }
      seen.insert(tok);
    }
    for (const std::string& tok : seen) ++corpus.doc_freq[tok];
  }
  return corpus;
}

Corpus load_corpus(const std::string& path, std::size_t min_chars) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);

  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": malformed corpus record: " + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j.contains("text") ||
        !j["id"].is_string() || !j["text"].is_string()) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": corpus record must be {\"id\": string, \"text\": string}");
    }
    Document doc;
    doc.id = j["id"].get<std::string>();
    doc.raw_text = j["text"].get<std::string>();
    if (count_unicode_chars(doc.raw_text) < min_chars) continue;
    docs.push_back(std::move(doc));
  }
  if (in.bad()) throw std::runtime_error("I/O error while reading " + path);
  return build_corpus(std::move(docs));
}

ProfileLoadResult load_profiles(const std::string& path, const Corpus& corpus,
                                std::size_t min_docs) {
  std::unordered_set<std::string> known;
  known.reserve(corpus.size());
  for (const Document& doc : corpus.documents) known.insert(doc.id);
  return load_profiles(path, known, min_docs);
}

ProfileLoadResult load_profiles(const std::string& path,
                                const std::unordered_set<std::string>& known_ids,
                                std::size_t min_docs) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open profiles file: " + path);

  ProfileLoadResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": malformed profile record: " + e.what());
    }
    if (!j.is_object() || !j.contains("user_id") || !j.contains("doc_ids") ||
        !j["user_id"].is_string() || !j["doc_ids"].is_array()) {
      throw std::runtime_error(
          path + ":" + std::to_string(line_no) +
          ": profile record must be {\"user_id\": string, \"doc_ids\": [string, ...]}");
    }
    UserProfile profile;
    profile.user_id = j["user_id"].get<std::string>();
    std::set<std::string> kept;
    for (const auto& id_json : j["doc_ids"]) {
      if (!id_json.is_string()) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": doc_ids entries must be strings");
      }
      std::string doc_id = id_json.get<std::string>();
      if (known_ids.count(doc_id)) {
        kept.insert(std::move(doc_id));
      } else {
        result.warnings.push_back({profile.user_id, std::move(doc_id)});
      }
    }
    if (kept.size() < std::max<std::size_t>(min_docs, 1)) continue;  // profiles are never empty
    profile.doc_ids.assign(kept.begin(), kept.end());
    result.profiles.push_back(std::move(profile));
  }
  if (in.bad()) throw std::runtime_error("I/O error while reading " + path);
  return result;
}

}  // namespace denserec
