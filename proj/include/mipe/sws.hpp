#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mipe/embedding.hpp"
#include "mipe/phonetic.hpp"
#include "mipe/textnorm.hpp"

namespace mipe::sws {

using textnorm::Sentence;
using textnorm::Token;

struct SwsConfig {
  double sigma_thres = 2.0;          // phonetic-stage acceptance threshold
  double sigma_cos = 0.5;            // semantic-stage acceptance threshold
  double max_pds_for_variant = 1.0;  // cap used by word-presence checks
};

/// Two-stage similar-word search. Stage one picks the reference word with
/// the minimum phonetic dissimilarity and accepts it when that minimum is
/// strictly below sigma_thres. Stage two falls back to the best cosine match
/// in the embedding space, accepted strictly above sigma_cos. Ties keep the
/// earliest reference word; all failure paths return an empty optional.
std::optional<Token> search(const Token& w, std::span<const Token> ref_words,
                            const phonetic::PhoneticCostTable& costs,
                            const embedding::EmbeddingStore& store,
                            const SwsConfig& cfg);

/// All reference tokens in reading order: every token of refs[0], then of
/// refs[1], and so on.
std::vector<Token> flatten(std::span<const Sentence> refs);

/// Rewrites each candidate token to its similar reference word when one is
/// found, leaving unmatched tokens unchanged. Token count is preserved.
Sentence canonicalize_sentence(const Sentence& cand,
                               std::span<const Sentence> refs,
                               const phonetic::PhoneticCostTable& costs,
                               const embedding::EmbeddingStore& store,
                               const SwsConfig& cfg);

/// Optional cross-normalization of the reference set: each reference is
/// rewritten against the tokens of the other references. A lone reference is
/// returned unchanged.
std::vector<Sentence> canonicalize_references(
    std::span<const Sentence> refs, const phonetic::PhoneticCostTable& costs,
    const embedding::EmbeddingStore& store, const SwsConfig& cfg);

}  // namespace mipe::sws
