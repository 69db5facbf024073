#include "mipe/embedding.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "mipe/error.hpp"
#include "mipe/kernels.hpp"

namespace mipe::embedding {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(std::move(tok));
  return out;
}

bool is_uint(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

bool EmbeddingStore::add(const Token& word, std::span<const double> vec) {
  if (dim_ == 0) dim_ = vec.size();
  if (vec.size() != dim_) {
    throw Error("vector for '" + word + "' has " + std::to_string(vec.size()) +
                " values, expected " + std::to_string(dim_));
  }
  auto [it, inserted] =
      index_.emplace(word, static_cast<std::uint32_t>(norms_.size()));
  if (!inserted) return false;
  data_.insert(data_.end(), vec.begin(), vec.end());
  norms_.push_back(kernels::dot(vec, vec));
  return true;
}

std::optional<std::span<const double>> EmbeddingStore::lookup(
    const Token& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return std::span<const double>(data_.data() +
                                     static_cast<std::size_t>(it->second) * dim_,
                                 dim_);
}

bool EmbeddingStore::contains(const Token& word) const {
  return index_.count(word) > 0;
}

double EmbeddingStore::squared_norm_of(const Token& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) {
    throw Error("no vector stored for '" + word + "'");
  }
  return norms_[it->second];
}

EmbeddingStore EmbeddingStore::load(const std::string& path,
                                    std::ostream* warnings) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open embeddings file: " + path);

  EmbeddingStore store;
  std::string line;
  std::size_t line_no = 0;
  std::size_t declared_count = 0;
  bool have_header = false;

  const auto is_ws = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };

  std::vector<double> vec;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;

    if (line_no == 1) {
      const auto fields = split_ws(line);
      if (fields.size() == 2 && is_uint(fields[0]) && is_uint(fields[1])) {
        declared_count = std::stoull(fields[0]);
        store.dim_ = std::stoull(fields[1]);
        have_header = true;
        continue;
      }
      if (fields.empty()) continue;
    }

    // Parse in place; files at fastText scale make per-field splitting the
    // dominant cost.
    const char* p = line.c_str();
    while (is_ws(*p)) ++p;
    const char* word_begin = p;
    while (*p && !is_ws(*p)) ++p;
    const std::string word(word_begin, p);
    if (word.empty()) continue;

    const char* line_end = line.c_str() + line.size();
    vec.clear();
    for (;;) {
      while (is_ws(*p)) ++p;
      if (!*p) break;
      const char* num_begin = *p == '+' ? p + 1 : p;
      double v = 0.0;
      const auto [end, ec] = std::from_chars(num_begin, line_end, v);
      if (ec != std::errc() || num_begin == end || (*end && !is_ws(*end))) {
        const char* tok_end = p;
        while (*tok_end && !is_ws(*tok_end)) ++tok_end;
        throw Error(path + ":" + std::to_string(line_no) +
                    ": non-numeric value '" + std::string(p, tok_end) + "'");
      }
      vec.push_back(v);
      p = end;
    }

    if (vec.empty()) {
      throw Error(path + ":" + std::to_string(line_no) +
                  ": expected 'word v1 ... vn'");
    }
    if (store.dim_ != 0 && vec.size() != store.dim_) {
      throw Error(path + ":" + std::to_string(line_no) + ": expected " +
                  std::to_string(store.dim_) + " values, got " +
                  std::to_string(vec.size()));
    }
    if (!store.add(word, vec) && warnings) {
      *warnings << "warning: " << path << ":" << line_no
                << ": duplicate vector for '" << word
                << "', keeping the first\n";
    }
  }

  if (store.size() == 0) throw Error("no vectors in embeddings file: " + path);
  if (have_header && warnings && store.size() != declared_count) {
    *warnings << "warning: " << path << ": header declares " << declared_count
              << " vectors, file has " << store.size() << "\n";
  }
  return store;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error("cosine of vectors with different lengths");
  }
  const double na = kernels::dot(a, a);
  const double nb = kernels::dot(b, b);
  if (na == 0.0 || nb == 0.0) {
    throw Error("cosine of a zero vector is undefined");
  }
  return kernels::dot(a, b) / (std::sqrt(na) * std::sqrt(nb));
}

std::optional<CosineMatch> best_cosine_match(const Token& w,
                                             std::span<const Token> candidates,
                                             const EmbeddingStore& store) {
  auto wv = store.lookup(w);
  if (!wv || store.squared_norm_of(w) == 0.0) return std::nullopt;

  std::optional<CosineMatch> best;
  for (const Token& cand : candidates) {
    auto cv = store.lookup(cand);
    if (!cv || store.squared_norm_of(cand) == 0.0) continue;
    const double sim = cosine(*wv, *cv);
    if (!best || sim > best->similarity) best = CosineMatch{cand, sim};
  }
  return best;
}

}  // namespace mipe::embedding
