#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace denserec {

struct Document {
  std::string id;
  std::string raw_text;
  std::vector<std::string> tokens;  // lowercase, in original word order
};

/// An immutable document collection plus its vocabulary. Construction is
/// single-threaded; afterwards the corpus is read-only and safe to share
/// across threads.
struct Corpus {
  std::vector<Document> documents;
  std::vector<std::string> vocab_tokens;                     // index -> token
  std::unordered_map<std::string, std::size_t> vocabulary;   // token -> dense index
  std::unordered_map<std::string, std::size_t> doc_freq;     // token -> #documents containing it
  std::unordered_map<std::string, std::size_t> id_index;     // document id -> position

  std::size_t size() const { return documents.size(); }
  bool contains(const std::string& doc_id) const { return id_index.count(doc_id) != 0; }
};

struct UserProfile {
  std::string user_id;
  std::vector<std::string> doc_ids;  // sorted, unique, all present in the corpus
};

struct ProfileWarning {
  std::string user_id;
  std::string doc_id;  // referenced id that is not in the corpus
};

struct ProfileLoadResult {
  std::vector<UserProfile> profiles;
  std::vector<ProfileWarning> warnings;
};

/// Splits text into maximal runs of token characters, lowercased. Token
/// characters are ASCII letters and digits plus any non-ASCII byte; every
/// other character separates tokens. No stemming, no stopword removal.
std::vector<std::string> tokenize(std::string_view raw_text);

/// Number of Unicode scalar values in a UTF-8 string (continuation bytes
/// are not counted).
std::size_t count_unicode_chars(std::string_view utf8);

/// Tokenizes the given documents and builds vocabulary and document
/// frequencies. Throws on duplicate document ids.
Corpus build_corpus(std::vector<Document> documents);

/// Reads a JSONL corpus file ({"id": ..., "text": ...} per line), drops
/// documents with fewer than min_chars Unicode characters of raw text, and
/// builds the corpus over the retained documents. Parse failures report the
/// offending line number.
Corpus load_corpus(const std::string& path, std::size_t min_chars);

/// Reads a JSONL profiles file ({"user_id": ..., "doc_ids": [...]} per
/// line). Ids not present in the corpus are dropped with a warning entry;
/// profiles left with fewer than min_docs documents are discarded.
ProfileLoadResult load_profiles(const std::string& path, const Corpus& corpus,
                                std::size_t min_docs);

/// Same, validating ids against an arbitrary id set (e.g. the rows of an
/// embedding file).
ProfileLoadResult load_profiles(const std::string& path,
                                const std::unordered_set<std::string>& known_ids,
                                std::size_t min_docs);

}  // namespace denserec
