#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "mipe/embedding.hpp"
#include "mipe/harness.hpp"
#include "mipe/idf.hpp"
#include "mipe/metrics.hpp"
#include "mipe/phonetic.hpp"
#include "mipe/scoring.hpp"
#include "mipe/sws.hpp"
#include "mipe/textnorm.hpp"

namespace mipe::pipeline {

using textnorm::Sentence;

struct PipelineOptions {
  bool canonicalize_candidate = true;
  /// Also cross-normalize the references against each other before scoring.
  bool canonicalize_references = false;
  int nist_max_order = 5;
};

/// Everything a scoring run needs, loaded once and read-only afterwards.
struct Resources {
  phonetic::PhoneticCostTable costs;
  sws::SwsConfig sws;
  scoring::AdjustmentConfig adjustment;
  PipelineOptions options;
  idf::IdfDictionary idf;
  embedding::EmbeddingStore embeddings;
  /// Externally computed metrics, keyed by metric name.
  std::map<std::string, metrics::ExternalScores> external;
};

struct MipeResult {
  metrics::MetricScore raw;  // base metric on the canonicalized candidate
  Sentence canonicalized_candidate;
  double mwp_raw = 0.0;
  double mwp_scaled = 0.0;
  double phrase_score_raw = 0.0;
  double phrase_score_scaled = 0.0;
  metrics::MetricScore augmented;
};

const std::vector<std::string>& known_native_metrics();  // bleu nist wer ter

/// Value range used when clamping the augmented score.
metrics::MetricRange metric_range(const std::string& metric,
                                  const Resources& res);

/// Base metric by name on the given candidate. External metrics are looked
/// up by instance id; unknown names throw mipe::Error listing valid choices.
metrics::MetricScore base_metric(const Sentence& cand,
                                 std::span<const Sentence> refs,
                                 const std::string& metric, const Resources& res,
                                 const std::string& instance_id);

/// Full adjustment of one candidate under one metric: canonicalize, score,
/// subtract the scaled missing-word penalty, add the clamped phrase credit
/// (signs flipped for lower-is-better metrics), then clamp to the metric's
/// declared range.
MipeResult mipe_score(const Sentence& cand, std::span<const Sentence> refs,
                      const std::string& metric, const Resources& res,
                      const std::string& instance_id = "");

/// One result per requested metric; canonicalization and both adjustment
/// quantities are computed once and shared.
std::vector<MipeResult> evaluate_instance(const harness::EvalInstance& inst,
                                          std::span<const std::string> metric_names,
                                          const Resources& res);

/// Scores every instance under every metric and flattens the results into
/// report rows: the raw column holds the plain metric on the surface
/// candidate, the augmented column the adjusted score. Instances fan out
/// across `threads` workers; row order always follows the dataset.
std::vector<harness::InstanceScore> score_dataset(
    std::span<const harness::EvalInstance> instances,
    std::span<const std::string> metric_names, const Resources& res,
    unsigned threads = 1);

}  // namespace mipe::pipeline
