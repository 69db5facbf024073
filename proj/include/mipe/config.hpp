#pragma once

#include <optional>
#include <string>

#include "mipe/harness.hpp"
#include "mipe/phonetic.hpp"
#include "mipe/pipeline.hpp"
#include "mipe/scoring.hpp"
#include "mipe/sws.hpp"

namespace mipe::config {

/// All tunable parameters with their embedded defaults. A config file only
/// needs the keys it wants to change.
struct Config {
  phonetic::PhoneticCostTable costs;
  sws::SwsConfig sws;
  scoring::AdjustmentConfig adjustment;
  pipeline::PipelineOptions pipeline;
  harness::RatingAggregation aggregation = harness::RatingAggregation::Duplicate;
  /// When set, overrides the mu_miss stored in the loaded idf dictionary.
  std::optional<double> mu_miss;
};

Config default_config();

/// Reads a JSON config file with sections "phonetic", "sws", "adjustment",
/// "pipeline" and "report". Unknown keys are rejected so typos surface.
/// The result is validated; violations throw mipe::Error.
Config load_config(const std::string& path);

/// Checks cost orderings, threshold ranges, and pair-list sanity.
void validate(const Config& cfg);

}  // namespace mipe::config
