#pragma once

#include <span>
#include <vector>

#include "mipe/embedding.hpp"
#include "mipe/idf.hpp"
#include "mipe/phonetic.hpp"
#include "mipe/sws.hpp"
#include "mipe/textnorm.hpp"

namespace mipe::scoring {

using textnorm::Sentence;
using textnorm::Token;

struct AdjustmentConfig {
  double epsilon = 0.0001;  // divide-by-zero guard on the penalty divisor
  bool normalize_mwp = true;
  double phrase_cap = 1.0;  // clamp on the phrase-score contribution
  /// Also accept embedding-stage (cosine) matches as word presence in the
  /// missing-word check. Off by default: the presence check is a distance
  /// check, and a cosine stage has no distance to cap.
  bool mwp_embedding_stage = false;
  /// Overlapping stride-1 trigram windows instead of a disjoint partition.
  bool sliding_chunks = false;
};

struct MwpResult {
  double raw = 0.0;     // minimum summed idf of unmatched reference words
  double scaled = 0.0;  // raw divided by the chosen reference's idf mass
};

/// Missing-word penalty. For each reference, sums idf over its word
/// occurrences that have no candidate token within max_pds_for_variant
/// phonetic distance, then takes the minimum across references. The scaled
/// value divides by the total idf mass of the minimizing reference and lies
/// in [0, 1]. `store` is only consulted when cfg.mwp_embedding_stage is set.
MwpResult mwp(const Sentence& cand, std::span<const Sentence> refs,
              const idf::IdfDictionary& dict,
              const phonetic::PhoneticCostTable& costs,
              const sws::SwsConfig& sws_cfg, const AdjustmentConfig& cfg,
              const embedding::EmbeddingStore* store = nullptr);

struct PhraseChunk {
  std::vector<Token> tokens;  // 1 to 3 tokens
};

/// Splits a sentence into consecutive non-overlapping trigram chunks; the
/// final chunk holds the 1-2 leftover tokens. With sliding = true, returns
/// every stride-1 window of 3 tokens instead (the whole sentence when it is
/// shorter than 3).
std::vector<PhraseChunk> chunk_trigrams(const Sentence& s,
                                        bool sliding = false);

/// Paraphrase credit. Each candidate-chunk word adds its idf when it occurs
/// anywhere in the references and subtracts it otherwise; the total is
/// normalized by the candidate's chunk count and divided by
/// (mwp_raw + epsilon). Empty candidates score 0.
double phrase_score(const Sentence& cand, std::span<const Sentence> refs,
                    const idf::IdfDictionary& dict, const AdjustmentConfig& cfg,
                    double mwp_raw);

/// Clamps the phrase score into [-phrase_cap, +phrase_cap].
double clamp_phrase_score(double raw, const AdjustmentConfig& cfg);

}  // namespace mipe::scoring
