#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <unordered_map>

#include "mipe/textnorm.hpp"

namespace mipe::idf {

using textnorm::Token;

/// Inverse-document-frequency table over a sentence corpus. A document is
/// one corpus sentence; idf(w) = ln(n_docs / df(w)), floored at a small
/// positive epsilon so every stored value stays positive. Absent words fall
/// back to mu_miss, a deliberately high value marking rare, semantically
/// heavy words.
class IdfDictionary {
 public:
  static constexpr double kFloor = 1e-6;

  /// Builds from a stream of raw sentences, one per line, tokenized with the
  /// shared tokenizer. Throws mipe::Error on an empty corpus.
  static IdfDictionary build(std::istream& corpus, double mu_miss = 20.0);

  static IdfDictionary load(const std::string& path);
  void save(const std::string& path) const;

  /// Never fails: absent words yield mu_miss.
  double lookup(const Token& w) const;
  bool contains(const Token& w) const { return table_.count(w) > 0; }

  std::uint64_t doc_count() const { return n_docs_; }
  double mu_miss() const { return mu_miss_; }
  void set_mu_miss(double v) { mu_miss_ = v; }
  std::size_t size() const { return table_.size(); }

 private:
  std::unordered_map<std::string, double> table_;
  std::uint64_t n_docs_ = 0;
  double mu_miss_ = 20.0;
};

}  // namespace mipe::idf
