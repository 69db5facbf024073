#pragma once

#include <span>
#include <string>
#include <unordered_map>

#include "mipe/textnorm.hpp"

namespace mipe::metrics {

using textnorm::Sentence;
using textnorm::Token;

enum class Orientation { HigherBetter, LowerBetter };

struct MetricScore {
  std::string name;
  double value = 0.0;
  Orientation orientation = Orientation::HigherBetter;
};

/// Declared value range; hi may be +infinity for unbounded error counts.
struct MetricRange {
  double lo = 0.0;
  double hi = 1.0;
};

/// Additive smoothing floor for zero n-gram precisions in sentence BLEU.
inline constexpr double kBleuSmoothEps = 1e-9;

/// Sentence BLEU: geometric mean of clipped n-gram precisions for n = 1..4
/// (clip counts are the per-n-gram maximum over references) times a brevity
/// penalty against the closest reference length (ties prefer the shorter
/// reference). Orders the candidate is too short to form are dropped from the
/// mean; zero-match precisions are floored at kBleuSmoothEps. An empty
/// candidate scores 0.
MetricScore bleu(const Sentence& cand, std::span<const Sentence> refs);

/// Sentence NIST with information-weighted n-gram precision up to max_order.
/// Information weights come from n-gram counts pooled over this reference
/// set; matches are clipped by pooled reference counts. The brevity factor is
/// exp(beta * ln^2(min(1, len_cand / mean_ref_len))) with beta chosen so the
/// factor is 0.5 at a 2/3 length ratio.
MetricScore nist(const Sentence& cand, std::span<const Sentence> refs,
                 int max_order = 5);

/// Word error rate: min over references of edit-distance / reference length,
/// unit costs. Throws mipe::Error on an empty reference.
MetricScore wer(const Sentence& cand, std::span<const Sentence> refs);

/// Translation error rate: like WER but a whole block of contiguous words
/// may be moved for a single edit. Greedy search: repeatedly apply the block
/// shift that most reduces the remaining edit distance.
MetricScore ter(const Sentence& cand, std::span<const Sentence> refs);

// Single-reference values before the min, exposed for direct checks.
double wer_against(const Sentence& cand, const Sentence& ref);
double ter_against(const Sentence& cand, const Sentence& ref);

/// Token-level edit distance with unit insert/delete/substitute costs.
std::size_t edit_distance(const Sentence& a, const Sentence& b);

/// Scores computed outside and joined by instance id. File format: a header
/// "name <id> orientation <higher|lower> range <lo> <hi>", then one
/// "<instance_id><TAB><value>" line per instance.
struct ExternalScores {
  std::string name;
  Orientation orientation = Orientation::HigherBetter;
  MetricRange range;
  std::unordered_map<std::string, double> by_instance;

  static ExternalScores load(const std::string& path);

  /// Throws mipe::Error naming the instance when no score is present.
  double at(const std::string& instance_id) const;
};

}  // namespace mipe::metrics
