#include "mipe/scoring.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

namespace mipe::scoring {

namespace {

bool word_present(const Token& ref_word, const Sentence& cand,
                  const phonetic::PhoneticCostTable& costs,
                  const sws::SwsConfig& sws_cfg, const AdjustmentConfig& cfg,
                  const embedding::EmbeddingStore* store) {
  for (const Token& c : cand) {
    if (c == ref_word) return true;
    if (phonetic::pds(ref_word, c, costs) <= sws_cfg.max_pds_for_variant) {
      return true;
    }
  }
  if (cfg.mwp_embedding_stage && store) {
    auto match = embedding::best_cosine_match(ref_word, cand, *store);
    if (match && match->similarity > sws_cfg.sigma_cos) return true;
  }
  return false;
}

}  // namespace

MwpResult mwp(const Sentence& cand, std::span<const Sentence> refs,
              const idf::IdfDictionary& dict,
              const phonetic::PhoneticCostTable& costs,
              const sws::SwsConfig& sws_cfg, const AdjustmentConfig& cfg,
              const embedding::EmbeddingStore* store) {
  double best_penalty = std::numeric_limits<double>::infinity();
  double best_total = 0.0;
  for (const Sentence& ref : refs) {
    double penalty = 0.0;
    double total = 0.0;
    for (const Token& w : ref) {
      const double weight = dict.lookup(w);
      total += weight;
      if (!word_present(w, cand, costs, sws_cfg, cfg, store)) {
        penalty += weight;
      }
    }
    if (penalty < best_penalty) {
      best_penalty = penalty;
      best_total = total;
    }
  }

  MwpResult result;
  result.raw = best_penalty;
  result.scaled = best_total > 0.0 ? best_penalty / best_total : 0.0;
  if (!cfg.normalize_mwp) result.scaled = result.raw;
  return result;
}

std::vector<PhraseChunk> chunk_trigrams(const Sentence& s, bool sliding) {
  std::vector<PhraseChunk> chunks;
  if (s.empty()) return chunks;
  if (sliding) {
    if (s.size() <= 3) {
      chunks.push_back({std::vector<Token>(s.begin(), s.end())});
      return chunks;
    }
    for (std::size_t i = 0; i + 3 <= s.size(); ++i) {
      chunks.push_back({std::vector<Token>(s.begin() + i, s.begin() + i + 3)});
    }
    return chunks;
  }
  for (std::size_t i = 0; i < s.size(); i += 3) {
    const std::size_t end = std::min(i + 3, s.size());
    chunks.push_back({std::vector<Token>(s.begin() + i, s.begin() + end)});
  }
  return chunks;
}

double phrase_score(const Sentence& cand, std::span<const Sentence> refs,
                    const idf::IdfDictionary& dict, const AdjustmentConfig& cfg,
                    double mwp_raw) {
  const auto chunks = chunk_trigrams(cand, cfg.sliding_chunks);
  if (chunks.empty()) return 0.0;

  std::unordered_set<std::string> ref_words;
  for (const Sentence& ref : refs) ref_words.insert(ref.begin(), ref.end());

  double raw = 0.0;
  for (const PhraseChunk& chunk : chunks) {
    for (const Token& w : chunk.tokens) {
      const double weight = dict.lookup(w);
      raw += ref_words.count(w) ? weight : -weight;
    }
  }
  return raw / static_cast<double>(chunks.size()) / (mwp_raw + cfg.epsilon);
}

double clamp_phrase_score(double raw, const AdjustmentConfig& cfg) {
  return std::clamp(raw, -cfg.phrase_cap, cfg.phrase_cap);
}

}  // namespace mipe::scoring
