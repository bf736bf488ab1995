#include "denserec/embedding.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace denserec {

namespace {

constexpr char kMagic[4] = {'E', 'M', 'B', '1'};

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f64_le(std::ostream& out, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64_le(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

void check_consistent(const EmbeddingMatrix& emb) {
  if (emb.doc_ids.size() != emb.vectors.rows) {
    throw std::runtime_error("embedding matrix: id count does not match row count");
  }
}

}  // namespace

std::unordered_map<std::string, std::size_t> embedding_index(const EmbeddingMatrix& emb) {
  std::unordered_map<std::string, std::size_t> index;
  index.reserve(emb.doc_ids.size());
  for (std::size_t i = 0; i < emb.doc_ids.size(); ++i) {
    if (!index.emplace(emb.doc_ids[i], i).second) {
      throw std::runtime_error("embedding matrix: duplicate document id " + emb.doc_ids[i]);
    }
  }
  return index;
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void save_embeddings(const EmbeddingMatrix& emb, const std::string& path) {
  check_consistent(emb);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);

  if (has_suffix(path, ".csv")) {
    out << "id";
    for (std::size_t j = 0; j < emb.dim(); ++j) out << ",v" << j;
    out << "\n";
    for (std::size_t i = 0; i < emb.size(); ++i) {
      out << emb.doc_ids[i];
      const double* row = emb.vectors.row(i);
      for (std::size_t j = 0; j < emb.dim(); ++j) out << ',' << format_g17(row[j]);
      out << "\n";
    }
  } else {
    out.write(kMagic, 4);
    put_u32(out, static_cast<std::uint32_t>(emb.size()));
    put_u32(out, static_cast<std::uint32_t>(emb.dim()));
    for (double v : emb.vectors.data) put_f64_le(out, v);
    for (const std::string& id : emb.doc_ids) out << id << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

EmbeddingMatrix load_embeddings(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open embedding file: " + path);

  EmbeddingMatrix emb;
  if (has_suffix(path, ".csv")) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty embedding file");
    std::size_t dim = 0;
    for (char c : line)
      if (c == ',') ++dim;
    std::vector<double> values;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::stringstream ss(line);
      std::string field;
      if (!std::getline(ss, field, ',')) throw std::runtime_error(path + ": bad csv row");
      emb.doc_ids.push_back(field);
      std::size_t got = 0;
      while (std::getline(ss, field, ',')) {
        values.push_back(std::stod(field));
        ++got;
      }
      if (got != dim) throw std::runtime_error(path + ": csv row has wrong column count");
    }
    emb.vectors = Matrix(emb.doc_ids.size(), dim);
    emb.vectors.data = std::move(values);
  } else {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
      throw std::runtime_error(path + ": not an EMB1 file");
    }
    const std::uint32_t rows = get_u32(in);
    const std::uint32_t dim = get_u32(in);
    emb.vectors = Matrix(rows, dim);
    for (double& v : emb.vectors.data) v = get_f64_le(in);
    if (!in) throw std::runtime_error(path + ": truncated EMB1 payload");
    std::string id;
    while (emb.doc_ids.size() < rows && std::getline(in, id)) emb.doc_ids.push_back(id);
    if (emb.doc_ids.size() != rows) throw std::runtime_error(path + ": missing ids in EMB1 file");
  }
  check_consistent(emb);
  if (!emb.vectors.all_finite()) throw std::runtime_error(path + ": non-finite embedding values");
  return emb;
}

}  // namespace denserec
