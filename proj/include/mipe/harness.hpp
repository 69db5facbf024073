#pragma once

#include <array>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mipe::harness {

/// One evaluation row: a generated candidate with its reference set, the
/// generating system's tag, and the human ratings it received.
struct EvalInstance {
  std::string id;
  std::string system;
  std::string candidate;
  std::vector<std::string> references;  // at least one
  std::vector<int> ratings;             // each in [1, 10]
};

/// JSON-lines dataset, one instance per line. Schema violations, ratings
/// outside [1, 10], empty reference lists, and duplicate ids all throw
/// mipe::Error with the offending line number.
std::vector<EvalInstance> load_dataset(const std::string& path);
std::vector<EvalInstance> parse_dataset(std::istream& in,
                                        const std::string& origin);

/// Sample Pearson correlation coefficient. Throws mipe::Error on length
/// mismatch, fewer than two points, or a constant list (undefined r).
double pearson(std::span<const double> xs, std::span<const double> ys);

/// Inclusive human-rating range over which metric/rating correlation is
/// computed.
struct Bucket {
  std::string label;
  int lo;
  int hi;
};

/// The three standard buckets: [2,10], [2,5], [6,10]. Rating 1 belongs to
/// none of them.
const std::array<Bucket, 3>& standard_buckets();

/// How an instance's multiple ratings enter the per-rating aggregation:
/// one observation per rating, or a single observation at the rounded mean.
enum class RatingAggregation { Duplicate, Mean };

enum class Variant { Raw, Augmented };
const char* variant_name(Variant v);

/// One instance-level result row for one metric. `raw` is the plain metric
/// on the surface candidate; `augmented` is the adjusted score; `mwp` and
/// `phrase_score` are the applied (scaled) adjustment quantities.
struct InstanceScore {
  std::string id;
  std::string system;
  std::string metric;
  double raw = 0.0;
  double augmented = 0.0;
  double mwp = 0.0;
  double phrase_score = 0.0;
};

/// Ratings carried alongside the score dump so aggregation can run without
/// the original dataset.
struct InstanceRatings {
  std::string id;
  std::string system;
  std::vector<int> ratings;
};

/// Per-rating mean scores for each instance satisfying the aggregation rule.
/// Keys: (system, metric, variant) -> rating -> mean.
using RatingMeans =
    std::map<std::tuple<std::string, std::string, Variant>, std::map<int, double>>;

/// Mean score at each rating level. With Duplicate aggregation an instance
/// rated [9, 8] contributes its score at level 9 and at level 8; with Mean it
/// contributes once at the rounded mean rating.
std::map<int, double> per_rating_means(std::span<const double> scores,
                                       std::span<const InstanceRatings> ratings,
                                       RatingAggregation aggregation);

/// Pearson r over (rating level, mean score) pairs inside the bucket.
/// Throws mipe::Error naming the bucket when fewer than two levels have data.
double bucket_correlation(const std::map<int, double>& means,
                          const Bucket& bucket);

struct ScoreReport {
  std::vector<InstanceScore> rows;
  std::vector<InstanceRatings> ratings;
  RatingAggregation aggregation = RatingAggregation::Duplicate;

  RatingMeans rating_means;
  /// (system, metric, variant, bucket label) -> r; empty when undefined
  /// (degenerate means or too few levels inside the bucket).
  std::map<std::tuple<std::string, std::string, Variant, std::string>,
           std::optional<double>>
      bucket_correlations;
  /// (system, metric) -> r between the raw and augmented mean series.
  std::map<std::pair<std::string, std::string>, std::optional<double>>
      variant_correlations;
};

/// Aggregates instance rows into rating means and bucket correlations.
/// Throws mipe::Error when rows are empty or a row has no matching ratings.
ScoreReport build_report(std::vector<InstanceScore> rows,
                         std::vector<InstanceRatings> ratings,
                         RatingAggregation aggregation);

// Score-stage artifacts: the instance dump and the ratings sidecar.
void write_instance_scores(std::span<const InstanceScore> rows,
                           const std::string& dir);
void write_ratings(std::span<const InstanceRatings> ratings,
                   const std::string& dir);
void write_ratings(std::span<const EvalInstance> instances,
                   const std::string& dir);
std::vector<InstanceScore> read_instance_scores(const std::string& dir);
std::vector<InstanceRatings> read_ratings(const std::string& dir);

/// Writes the instance dump, per-rating mean tables (CSV plus aligned text),
/// the bucket correlation table, and the raw/augmented series correlations
/// into out_dir. Re-running with identical inputs produces byte-identical
/// files. Throws mipe::Error on an empty report or unwritable directory.
void emit_report(const ScoreReport& report, const std::string& out_dir);

}  // namespace mipe::harness
