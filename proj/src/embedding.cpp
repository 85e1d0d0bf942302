#include "depembed/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace depembed {

namespace {

constexpr char kBinaryMagic[4] = {'D', 'E', 'V', 'B'};
constexpr std::uint32_t kBinaryVersion = 1;

[[noreturn]] void format_error(const std::string& path, std::size_t line_no, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

void append_float(std::string& out, float v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

float parse_float(const char* begin, const char* end, bool& ok) {
  float v = 0.0f;
  auto res = std::from_chars(begin, end, v);
  ok = res.ec == std::errc() && res.ptr == end;
  return v;
}

}  // namespace

void Embedding::add(const std::string& word, std::span<const float> vec) {
  if (vec.size() != dim_) throw std::invalid_argument("vector dimension mismatch for '" + word + "'");
  if (index_.count(word)) throw std::invalid_argument("duplicate word '" + word + "'");
  for (float v : vec)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite component for '" + word + "'");
  index_.emplace(word, words_.size());
  words_.push_back(word);
  data_.insert(data_.end(), vec.begin(), vec.end());
}

std::optional<std::size_t> Embedding::index_of(const std::string& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::span<const float>> Embedding::vector(const std::string& word) const {
  auto idx = index_of(word);
  if (!idx) return std::nullopt;
  return row(*idx);
}

Embedding load_word2vec_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embedding file: " + path);

  std::string line;
  if (!std::getline(in, line)) format_error(path, 1, "empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::size_t count = 0, dim = 0;
  {
    const char* b = line.data();
    const char* e = b + line.size();
    auto r1 = std::from_chars(b, e, count);
    if (r1.ec != std::errc() || r1.ptr == e || *r1.ptr != ' ')
      format_error(path, 1, "malformed header, expected \"N D\"");
    auto r2 = std::from_chars(r1.ptr + 1, e, dim);
    if (r2.ec != std::errc() || r2.ptr != e)
      format_error(path, 1, "malformed header, expected \"N D\"");
  }
  if (dim == 0) format_error(path, 1, "dimension must be positive");

  Embedding emb(dim);
  emb.reserve(count);
  std::vector<float> vec(dim);
  std::size_t duplicates = 0;

  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) format_error(path, i + 2, "unexpected end of file");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::size_t word_end = line.find(' ');
    if (word_end == std::string::npos || word_end == 0)
      format_error(path, i + 2, "expected \"word f1 ... fD\"");
    std::string word = line.substr(0, word_end);

    const char* p = line.data() + word_end;
    const char* end = line.data() + line.size();
    for (std::size_t d = 0; d < dim; ++d) {
      if (p >= end || *p != ' ')
        format_error(path, i + 2, "row has fewer than " + std::to_string(dim) + " components");
      ++p;
      const char* field_end = static_cast<const char*>(std::memchr(p, ' ', static_cast<std::size_t>(end - p)));
      if (field_end == nullptr) field_end = end;
      bool ok = false;
      vec[d] = parse_float(p, field_end, ok);
      if (!ok) format_error(path, i + 2, "bad float component " + std::to_string(d + 1));
      if (!std::isfinite(vec[d])) format_error(path, i + 2, "non-finite component");
      p = field_end;
    }
    if (p != end) format_error(path, i + 2, "row has more than " + std::to_string(dim) + " components");

    if (emb.contains(word)) {
      ++duplicates;
      continue;
    }
    emb.add(word, vec);
  }
  if (duplicates > 0)
    std::cerr << "warning: " << path << ": " << duplicates
              << " duplicate word(s), kept first occurrence\n";
  return emb;
}

void save_word2vec_text(const Embedding& emb, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write embedding file: " + path);

  std::string buf;
  buf.reserve(1 << 20);
  buf += std::to_string(emb.size());
  buf += ' ';
  buf += std::to_string(emb.dim());
  buf += '\n';
  for (std::size_t i = 0; i < emb.size(); ++i) {
    buf += emb.word_at(i);
    for (float v : emb.row(i)) {
      buf += ' ';
      append_float(buf, v);
    }
    buf += '\n';
    if (buf.size() > (1 << 20)) {
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
      buf.clear();
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

void save_embedding_binary(const Embedding& emb, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write embedding file: " + path);

  out.write(kBinaryMagic, 4);
  std::uint32_t version = kBinaryVersion;
  std::uint64_t count = emb.size();
  std::uint32_t dim = static_cast<std::uint32_t>(emb.dim());
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  out.write(reinterpret_cast<const char*>(&count), sizeof count);
  out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
  for (std::size_t i = 0; i < emb.size(); ++i) {
    const std::string& w = emb.word_at(i);
    std::uint32_t len = static_cast<std::uint32_t>(w.size());
    out.write(reinterpret_cast<const char*>(&len), sizeof len);
    out.write(w.data(), static_cast<std::streamsize>(w.size()));
    auto r = emb.row(i);
    out.write(reinterpret_cast<const char*>(r.data()),
              static_cast<std::streamsize>(r.size() * sizeof(float)));
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

Embedding load_embedding_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open embedding file: " + path);

  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kBinaryMagic, 4) != 0)
    throw std::runtime_error(path + ": not a binary embedding file");
  std::uint32_t version = 0, dim = 0;
  std::uint64_t count = 0;
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&count), sizeof count);
  in.read(reinterpret_cast<char*>(&dim), sizeof dim);
  if (!in || version != kBinaryVersion)
    throw std::runtime_error(path + ": unsupported binary embedding version");

  Embedding emb(dim);
  emb.reserve(count);
  std::string word;
  std::vector<float> vec(dim);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::uint32_t len = 0;
    in.read(reinterpret_cast<char*>(&len), sizeof len);
    word.resize(len);
    in.read(word.data(), len);
    in.read(reinterpret_cast<char*>(vec.data()), static_cast<std::streamsize>(dim * sizeof(float)));
    if (!in) throw std::runtime_error(path + ": truncated binary embedding");
    emb.add(word, vec);
  }
  return emb;
}

Embedding load_embedding_auto(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw std::runtime_error("cannot open embedding file: " + path);
  char magic[4] = {0, 0, 0, 0};
  probe.read(magic, 4);
  probe.close();
  if (std::memcmp(magic, kBinaryMagic, 4) == 0) return load_embedding_binary(path);
  return load_word2vec_text(path);
}

std::vector<std::string> common_vocab(const Embedding& a, const Embedding& b) {
  const Embedding& small = a.size() <= b.size() ? a : b;
  const Embedding& large = a.size() <= b.size() ? b : a;
  std::vector<std::string> out;
  for (const auto& w : small.words())
    if (large.contains(w)) out.push_back(w);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::vector<Neighbor> knn_impl(const Embedding& emb, std::span<const float> query,
                               std::size_t k, Metric metric, std::size_t exclude_index) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (query.size() != emb.dim()) throw std::invalid_argument("query dimension mismatch");

  double qnorm = 0.0;
  for (float v : query) qnorm += static_cast<double>(v) * v;
  qnorm = std::sqrt(qnorm);

  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(emb.size());
  for (std::size_t i = 0; i < emb.size(); ++i) {
    if (i == exclude_index) continue;
    auto r = emb.row(i);
    double s = 0.0;
    if (metric == Metric::kEuclidean) {
      for (std::size_t d = 0; d < r.size(); ++d) {
        double diff = static_cast<double>(r[d]) - query[d];
        s += diff * diff;
      }
      s = std::sqrt(s);
    } else {
      double dot = 0.0, rnorm = 0.0;
      for (std::size_t d = 0; d < r.size(); ++d) {
        dot += static_cast<double>(r[d]) * query[d];
        rnorm += static_cast<double>(r[d]) * r[d];
      }
      rnorm = std::sqrt(rnorm);
      s = (qnorm == 0.0 || rnorm == 0.0) ? 0.0 : dot / (qnorm * rnorm);
    }
    scored.emplace_back(s, i);
  }

  auto better = [&](const std::pair<double, std::size_t>& x, const std::pair<double, std::size_t>& y) {
    if (x.first != y.first)
      return metric == Metric::kEuclidean ? x.first < y.first : x.first > y.first;
    return emb.word_at(x.second) < emb.word_at(y.second);
  };
  std::size_t take = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(), better);

  std::vector<Neighbor> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back({emb.word_at(scored[i].second), scored[i].first});
  return out;
}

}  // namespace

std::vector<Neighbor> nearest_neighbors(const Embedding& emb, const std::string& query,
                                        std::size_t k, Metric metric) {
  auto idx = emb.index_of(query);
  if (!idx) throw std::invalid_argument("query word '" + query + "' not in vocabulary");
  return knn_impl(emb, emb.row(*idx), k, metric, *idx);
}

std::vector<Neighbor> nearest_neighbors(const Embedding& emb, std::span<const float> query,
                                        std::size_t k, Metric metric) {
  return knn_impl(emb, query, k, metric, static_cast<std::size_t>(-1));
}

}  // namespace depembed
