#include "mipe/sws.hpp"

#include <limits>

namespace mipe::sws {

std::optional<Token> search(const Token& w, std::span<const Token> ref_words,
                            const phonetic::PhoneticCostTable& costs,
                            const embedding::EmbeddingStore& store,
                            const SwsConfig& cfg) {
  double best_pds = std::numeric_limits<double>::infinity();
  const Token* best = nullptr;
  for (const Token& r : ref_words) {
    const double d = phonetic::pds(w, r, costs);
    if (d < best_pds) {
      best_pds = d;
      best = &r;
    }
  }
  if (best && best_pds < cfg.sigma_thres) return *best;

  auto match = embedding::best_cosine_match(w, ref_words, store);
  if (match && match->similarity > cfg.sigma_cos) return match->word;
  return std::nullopt;
}

std::vector<Token> flatten(std::span<const Sentence> refs) {
  std::vector<Token> out;
  for (const Sentence& r : refs) out.insert(out.end(), r.begin(), r.end());
  return out;
}

Sentence canonicalize_sentence(const Sentence& cand,
                               std::span<const Sentence> refs,
                               const phonetic::PhoneticCostTable& costs,
                               const embedding::EmbeddingStore& store,
                               const SwsConfig& cfg) {
  const std::vector<Token> ref_words = flatten(refs);
  Sentence out;
  out.reserve(cand.size());
  for (const Token& tok : cand) {
    auto replacement = search(tok, ref_words, costs, store, cfg);
    out.push_back(replacement ? *replacement : tok);
  }
  return out;
}

std::vector<Sentence> canonicalize_references(
    std::span<const Sentence> refs, const phonetic::PhoneticCostTable& costs,
    const embedding::EmbeddingStore& store, const SwsConfig& cfg) {
  std::vector<Sentence> out;
  out.reserve(refs.size());
  for (std::size_t i = 0; i < refs.size(); ++i) {
    std::vector<Sentence> others;
    others.reserve(refs.size() - 1);
    for (std::size_t j = 0; j < refs.size(); ++j) {
      if (j != i) others.push_back(refs[j]);
    }
    if (others.empty()) {
      out.push_back(refs[i]);
    } else {
      out.push_back(canonicalize_sentence(refs[i], others, costs, store, cfg));
    }
  }
  return out;
}

}  // namespace mipe::sws
