#include "mipe/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <mutex>
#include <thread>

#include "mipe/error.hpp"

namespace mipe::pipeline {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string valid_metric_names(const Resources& res) {
  std::string names;
  for (const auto& m : known_native_metrics()) {
    if (!names.empty()) names += ", ";
    names += m;
  }
  for (const auto& [name, scores] : res.external) {
    names += ", " + name;
  }
  return names;
}

double clamp_to_range(double v, const metrics::MetricRange& range) {
  return std::clamp(v, range.lo, range.hi);
}

struct Adjustments {
  Sentence canonical;
  std::vector<Sentence> refs;
  scoring::MwpResult mwp;
  double phrase_raw = 0.0;
  double phrase_scaled = 0.0;
};

Adjustments compute_adjustments(const Sentence& cand,
                                std::span<const Sentence> refs,
                                const Resources& res) {
  if (refs.empty()) throw Error("evaluation requires at least one reference");

  Adjustments adj;
  adj.refs.assign(refs.begin(), refs.end());
  if (res.options.canonicalize_references) {
    adj.refs = sws::canonicalize_references(adj.refs, res.costs, res.embeddings,
                                            res.sws);
  }
  adj.canonical = res.options.canonicalize_candidate
                      ? sws::canonicalize_sentence(cand, adj.refs, res.costs,
                                                   res.embeddings, res.sws)
                      : cand;
  adj.mwp =
      scoring::mwp(adj.canonical, adj.refs, res.idf, res.costs, res.sws,
                   res.adjustment,
                   res.adjustment.mwp_embedding_stage ? &res.embeddings : nullptr);
  adj.phrase_raw = scoring::phrase_score(adj.canonical, adj.refs, res.idf,
                                         res.adjustment, adj.mwp.raw);
  adj.phrase_scaled = scoring::clamp_phrase_score(adj.phrase_raw, res.adjustment);
  return adj;
}

MipeResult combine(const Adjustments& adj, metrics::MetricScore raw,
                   const metrics::MetricRange& range) {
  MipeResult result;
  result.raw = raw;
  result.canonicalized_candidate = adj.canonical;
  result.mwp_raw = adj.mwp.raw;
  result.mwp_scaled = adj.mwp.scaled;
  result.phrase_score_raw = adj.phrase_raw;
  result.phrase_score_scaled = adj.phrase_scaled;

  // Penalties worsen the score and the phrase credit improves it, in the
  // direction the metric considers better.
  double adjusted;
  if (raw.orientation == metrics::Orientation::HigherBetter) {
    adjusted = raw.value - adj.mwp.scaled + adj.phrase_scaled;
  } else {
    adjusted = raw.value + adj.mwp.scaled - adj.phrase_scaled;
  }
  result.augmented = raw;
  result.augmented.value = clamp_to_range(adjusted, range);
  return result;
}

}  // namespace

const std::vector<std::string>& known_native_metrics() {
  static const std::vector<std::string> names = {"bleu", "nist", "wer", "ter"};
  return names;
}

metrics::MetricRange metric_range(const std::string& metric,
                                  const Resources& res) {
  if (metric == "bleu") return {0.0, 1.0};
  if (metric == "nist" || metric == "wer" || metric == "ter") return {0.0, kInf};
  auto it = res.external.find(metric);
  if (it != res.external.end()) return it->second.range;
  throw Error("unknown metric '" + metric + "'; valid metrics: " +
              valid_metric_names(res));
}

metrics::MetricScore base_metric(const Sentence& cand,
                                 std::span<const Sentence> refs,
                                 const std::string& metric, const Resources& res,
                                 const std::string& instance_id) {
  if (metric == "bleu") return metrics::bleu(cand, refs);
  if (metric == "nist") return metrics::nist(cand, refs, res.options.nist_max_order);
  if (metric == "wer") return metrics::wer(cand, refs);
  if (metric == "ter") return metrics::ter(cand, refs);
  auto it = res.external.find(metric);
  if (it != res.external.end()) {
    return {it->second.name, it->second.at(instance_id),
            it->second.orientation};
  }
  throw Error("unknown metric '" + metric + "'; valid metrics: " +
              valid_metric_names(res));
}

MipeResult mipe_score(const Sentence& cand, std::span<const Sentence> refs,
                      const std::string& metric, const Resources& res,
                      const std::string& instance_id) {
  const Adjustments adj = compute_adjustments(cand, refs, res);
  auto raw = base_metric(adj.canonical, adj.refs, metric, res, instance_id);
  return combine(adj, std::move(raw), metric_range(metric, res));
}

std::vector<MipeResult> evaluate_instance(const harness::EvalInstance& inst,
                                          std::span<const std::string> metric_names,
                                          const Resources& res) {
  const Sentence cand = textnorm::tokenize(inst.candidate);
  std::vector<Sentence> refs;
  refs.reserve(inst.references.size());
  for (const auto& r : inst.references) refs.push_back(textnorm::tokenize(r));

  const Adjustments adj = compute_adjustments(cand, refs, res);

  std::vector<MipeResult> results;
  results.reserve(metric_names.size());
  for (const auto& metric : metric_names) {
    auto raw = base_metric(adj.canonical, adj.refs, metric, res, inst.id);
    results.push_back(combine(adj, std::move(raw), metric_range(metric, res)));
  }
  return results;
}

namespace {

// Atomic work queue; results land by index so output order never depends on
// scheduling.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned n = std::min<unsigned>(threads, static_cast<unsigned>(count));
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<harness::InstanceScore> score_dataset(
    std::span<const harness::EvalInstance> instances,
    std::span<const std::string> metric_names, const Resources& res,
    unsigned threads) {
  // Fail on bad metric names before any work starts.
  for (const auto& m : metric_names) metric_range(m, res);

  std::vector<std::vector<harness::InstanceScore>> per_instance(instances.size());
  parallel_for(instances.size(), threads, [&](std::size_t i) {
    const auto& inst = instances[i];
    const Sentence cand = textnorm::tokenize(inst.candidate);
    std::vector<Sentence> refs;
    refs.reserve(inst.references.size());
    for (const auto& r : inst.references) refs.push_back(textnorm::tokenize(r));

    const auto results = evaluate_instance(inst, metric_names, res);
    auto& rows = per_instance[i];
    rows.reserve(results.size());
    for (std::size_t k = 0; k < results.size(); ++k) {
      const auto surface = base_metric(cand, refs, metric_names[k], res, inst.id);
      rows.push_back({inst.id, inst.system, metric_names[k], surface.value,
                      results[k].augmented.value, results[k].mwp_scaled,
                      results[k].phrase_score_scaled});
    }
  });

  std::vector<harness::InstanceScore> rows;
  rows.reserve(instances.size() * metric_names.size());
  for (auto& list : per_instance) {
    for (auto& row : list) rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace mipe::pipeline
