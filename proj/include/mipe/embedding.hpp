#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mipe/textnorm.hpp"

namespace mipe::embedding {

using textnorm::Token;

/// Immutable word-vector table shared across languages. Words from both
/// sides of the mixed text live in the same map; lookup of an absent word is
/// an empty optional, never a zero vector.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;
  explicit EmbeddingStore(std::size_t dim) : dim_(dim) {}

  /// Reads word2vec text format: an optional "count dim" header line, then
  /// one "word v1 ... v_dim" line per vector. Duplicate words keep the first
  /// occurrence and emit a warning to `warnings` when given. Malformed lines
  /// and header/dimension mismatches throw mipe::Error naming the line.
  static EmbeddingStore load(const std::string& path,
                             std::ostream* warnings = nullptr);

  /// Adds a vector; returns false (and keeps the first one) on duplicates.
  bool add(const Token& word, std::span<const double> vec);

  std::optional<std::span<const double>> lookup(const Token& word) const;
  bool contains(const Token& word) const;
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return index_.size(); }

  /// Cached squared norm of a stored word's vector.
  double squared_norm_of(const Token& word) const;

 private:
  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<double> data_;
  std::vector<double> norms_;  // squared norms, one per stored vector
};

/// Cosine similarity in [-1, 1]. Throws mipe::Error on length mismatch or a
/// zero-norm argument (undefined cosine).
double cosine(std::span<const double> a, std::span<const double> b);

struct CosineMatch {
  Token word;
  double similarity;
};

/// Highest-cosine candidate for `w` among those present in the store. Absent
/// words (including `w` itself) and zero-norm vectors are skipped; ties keep
/// the earliest candidate.
std::optional<CosineMatch> best_cosine_match(const Token& w,
                                             std::span<const Token> candidates,
                                             const EmbeddingStore& store);

}  // namespace mipe::embedding
