#include "mipe/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "mipe/error.hpp"

namespace mipe::metrics {

namespace {

// N-grams are joined with a separator byte that cannot occur inside tokens.
constexpr char kSep = '\x1f';

using Counts = std::unordered_map<std::string, std::size_t>;

std::string join_ngram(const Sentence& s, std::size_t pos, std::size_t n) {
  std::string key;
  for (std::size_t k = 0; k < n; ++k) {
    if (k) key.push_back(kSep);
    key += s[pos + k];
  }
  return key;
}

Counts ngram_counts(const Sentence& s, std::size_t n) {
  Counts counts;
  if (s.size() >= n && n > 0) {
    for (std::size_t i = 0; i + n <= s.size(); ++i) {
      ++counts[join_ngram(s, i, n)];
    }
  }
  return counts;
}

void require_refs(std::span<const Sentence> refs, const char* metric) {
  if (refs.empty()) {
    throw Error(std::string(metric) + " requires at least one reference");
  }
}

}  // namespace

MetricScore bleu(const Sentence& cand, std::span<const Sentence> refs) {
  require_refs(refs, "bleu");
  MetricScore score{"bleu", 0.0, Orientation::HigherBetter};
  if (cand.empty()) return score;

  // Geometric mean over the orders the candidate can actually form
  // (effective order); precisions with zero matches are floored so the log
  // stays finite. A three-word candidate is judged on orders 1-3 only,
  // keeping short perfect matches at exactly 1.
  double log_sum = 0.0;
  int effective_orders = 0;
  for (std::size_t n = 1; n <= 4 && n <= cand.size(); ++n) {
    const Counts cand_counts = ngram_counts(cand, n);
    Counts clip;
    for (const Sentence& ref : refs) {
      for (const auto& [g, c] : ngram_counts(ref, n)) {
        clip[g] = std::max(clip[g], c);
      }
    }
    std::size_t matched = 0;
    for (const auto& [g, c] : cand_counts) {
      auto it = clip.find(g);
      if (it != clip.end()) matched += std::min(c, it->second);
    }
    const std::size_t total = cand.size() - n + 1;
    double p = static_cast<double>(matched) / static_cast<double>(total);
    if (p <= 0.0) p = kBleuSmoothEps;
    log_sum += std::log(p);
    ++effective_orders;
  }

  // Brevity penalty against the closest reference length, shorter on ties.
  const double c = static_cast<double>(cand.size());
  std::size_t closest = refs[0].size();
  for (const Sentence& ref : refs) {
    const auto diff = [&](std::size_t len) {
      return std::llabs(static_cast<long long>(len) -
                        static_cast<long long>(cand.size()));
    };
    if (diff(ref.size()) < diff(closest) ||
        (diff(ref.size()) == diff(closest) && ref.size() < closest)) {
      closest = ref.size();
    }
  }
  const double r = static_cast<double>(closest);
  const double bp = c >= r ? 1.0 : std::exp(1.0 - r / c);

  score.value = bp * std::exp(log_sum / effective_orders);
  return score;
}

MetricScore nist(const Sentence& cand, std::span<const Sentence> refs,
                 int max_order) {
  require_refs(refs, "nist");
  MetricScore score{"nist", 0.0, Orientation::HigherBetter};
  if (cand.empty() || max_order < 1) return score;

  // Counts pooled over the reference set, per order; order 0 holds the total
  // token count so unigram information has a denominator.
  std::vector<Counts> ref_counts(static_cast<std::size_t>(max_order) + 1);
  std::size_t total_ref_tokens = 0;
  double total_ref_len = 0.0;
  for (const Sentence& ref : refs) {
    total_ref_tokens += ref.size();
    total_ref_len += static_cast<double>(ref.size());
    for (int n = 1; n <= max_order; ++n) {
      for (const auto& [g, c] : ngram_counts(ref, static_cast<std::size_t>(n))) {
        ref_counts[static_cast<std::size_t>(n)][g] += c;
      }
    }
  }
  const double mean_ref_len = total_ref_len / static_cast<double>(refs.size());
  if (total_ref_tokens == 0 || mean_ref_len <= 0.0) return score;

  const auto info = [&](const std::string& g, std::size_t n) {
    const std::size_t g_count = ref_counts[n].at(g);
    std::size_t prefix_count;
    if (n == 1) {
      prefix_count = total_ref_tokens;
    } else {
      const auto cut = g.rfind(kSep);
      prefix_count = ref_counts[n - 1].at(g.substr(0, cut));
    }
    return std::log2(static_cast<double>(prefix_count) /
                     static_cast<double>(g_count));
  };

  double precision_sum = 0.0;
  for (int n = 1; n <= max_order; ++n) {
    const auto un = static_cast<std::size_t>(n);
    if (cand.size() < un) break;
    const std::size_t den = cand.size() - un + 1;
    double num = 0.0;
    for (const auto& [g, c] : ngram_counts(cand, un)) {
      auto it = ref_counts[un].find(g);
      if (it == ref_counts[un].end()) continue;
      num += info(g, un) * static_cast<double>(std::min(c, it->second));
    }
    precision_sum += num / static_cast<double>(den);
  }

  // Brevity factor: 0.5 when the candidate is 2/3 of the mean ref length.
  static const double beta =
      std::log(0.5) / (std::log(2.0 / 3.0) * std::log(2.0 / 3.0));
  const double ratio =
      std::min(1.0, static_cast<double>(cand.size()) / mean_ref_len);
  const double lr = std::log(ratio);
  score.value = precision_sum * std::exp(beta * lr * lr);
  return score;
}

std::size_t edit_distance(const Sentence& a, const Sentence& b) {
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  std::vector<std::size_t> prev(n + 1), cur(n + 1);
  for (std::size_t j = 0; j <= n; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= m; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= n; ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

double wer_against(const Sentence& cand, const Sentence& ref) {
  if (ref.empty()) throw Error("wer against an empty reference is undefined");
  return static_cast<double>(edit_distance(cand, ref)) /
         static_cast<double>(ref.size());
}

MetricScore wer(const Sentence& cand, std::span<const Sentence> refs) {
  require_refs(refs, "wer");
  double best = std::numeric_limits<double>::infinity();
  for (const Sentence& ref : refs) best = std::min(best, wer_against(cand, ref));
  return {"wer", best, Orientation::LowerBetter};
}

namespace {

constexpr std::size_t kMaxShiftSize = 10;
constexpr std::size_t kMaxShiftDist = 50;

// Marks hypothesis positions that an optimal unit-cost alignment pairs with
// an equal reference word. Blocks made purely of such positions are already
// placed and are not shift candidates.
std::vector<bool> aligned_matches(const Sentence& hyp, const Sentence& ref) {
  const std::size_t m = hyp.size();
  const std::size_t n = ref.size();
  std::vector<std::vector<std::size_t>> d(m + 1,
                                          std::vector<std::size_t>(n + 1));
  for (std::size_t i = 0; i <= m; ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= n; ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      const std::size_t sub = d[i - 1][j - 1] + (hyp[i - 1] == ref[j - 1] ? 0 : 1);
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, sub});
    }
  }
  std::vector<bool> matched(m, false);
  std::size_t i = m, j = n;
  while (i > 0 && j > 0) {
    const std::size_t sub = d[i - 1][j - 1] + (hyp[i - 1] == ref[j - 1] ? 0 : 1);
    if (d[i][j] == sub) {
      matched[i - 1] = hyp[i - 1] == ref[j - 1];
      --i;
      --j;
    } else if (d[i][j] == d[i - 1][j] + 1) {
      --i;
    } else {
      --j;
    }
  }
  return matched;
}

bool block_in_ref(const Sentence& hyp, std::size_t start, std::size_t len,
                  const Sentence& ref) {
  if (ref.size() < len) return false;
  for (std::size_t r = 0; r + len <= ref.size(); ++r) {
    bool same = true;
    for (std::size_t k = 0; k < len && same; ++k) {
      same = ref[r + k] == hyp[start + k];
    }
    if (same) return true;
  }
  return false;
}

Sentence apply_shift(const Sentence& hyp, std::size_t start, std::size_t len,
                     std::size_t dest) {
  Sentence rest;
  rest.reserve(hyp.size());
  rest.insert(rest.end(), hyp.begin(), hyp.begin() + start);
  rest.insert(rest.end(), hyp.begin() + start + len, hyp.end());
  Sentence out;
  out.reserve(hyp.size());
  out.insert(out.end(), rest.begin(), rest.begin() + dest);
  out.insert(out.end(), hyp.begin() + start, hyp.begin() + start + len);
  out.insert(out.end(), rest.begin() + dest, rest.end());
  return out;
}

}  // namespace

double ter_against(const Sentence& cand, const Sentence& ref) {
  if (ref.empty()) throw Error("ter against an empty reference is undefined");

  Sentence hyp = cand;
  std::size_t edits = edit_distance(hyp, ref);
  std::size_t shifts = 0;

  while (edits > 0 && !hyp.empty()) {
    const std::vector<bool> matched = aligned_matches(hyp, ref);

    std::size_t best_gain = 0;
    Sentence best_hyp;
    std::size_t best_edits = 0;
    for (std::size_t start = 0; start < hyp.size(); ++start) {
      const std::size_t max_len =
          std::min(kMaxShiftSize, hyp.size() - start);
      bool block_has_error = false;
      for (std::size_t len = 1; len <= max_len; ++len) {
        block_has_error = block_has_error || !matched[start + len - 1];
        if (!block_has_error) continue;  // correctly placed so far
        if (!block_in_ref(hyp, start, len, ref)) break;
        for (std::size_t dest = 0; dest + len <= hyp.size(); ++dest) {
          if (dest == start) continue;
          const std::size_t dist = dest > start ? dest - start : start - dest;
          if (dist > kMaxShiftDist) continue;
          const Sentence shifted = apply_shift(hyp, start, len, dest);
          const std::size_t e = edit_distance(shifted, ref);
          if (e < edits && edits - e > best_gain) {
            best_gain = edits - e;
            best_hyp = shifted;
            best_edits = e;
          }
        }
      }
    }
    if (best_gain == 0) break;
    hyp = std::move(best_hyp);
    edits = best_edits;
    ++shifts;
  }

  return static_cast<double>(shifts + edits) / static_cast<double>(ref.size());
}

MetricScore ter(const Sentence& cand, std::span<const Sentence> refs) {
  require_refs(refs, "ter");
  double best = std::numeric_limits<double>::infinity();
  for (const Sentence& ref : refs) best = std::min(best, ter_against(cand, ref));
  return {"ter", best, Orientation::LowerBetter};
}

ExternalScores ExternalScores::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open external scores file: " + path);

  std::string line;
  if (!std::getline(in, line)) {
    throw Error(path + ": missing header line");
  }
  ExternalScores scores;
  {
    std::istringstream hdr(line);
    std::string k_name, k_orient, orient, k_range;
    if (!(hdr >> k_name >> scores.name >> k_orient >> orient >> k_range >>
          scores.range.lo >> scores.range.hi) ||
        k_name != "name" || k_orient != "orientation" || k_range != "range" ||
        (orient != "higher" && orient != "lower")) {
      throw Error(path + ":1: malformed header, expected 'name <id> "
                         "orientation <higher|lower> range <lo> <hi>'");
    }
    scores.orientation = orient == "higher" ? Orientation::HigherBetter
                                            : Orientation::LowerBetter;
  }
  if (scores.range.lo >= scores.range.hi) {
    throw Error(path + ":1: empty declared range");
  }

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw Error(path + ":" + std::to_string(line_no) +
                  ": expected '<instance_id><TAB><value>'");
    }
    const std::string id = line.substr(0, tab);
    const std::string value = line.substr(tab + 1);
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end != value.c_str() + value.size() || value.empty()) {
      throw Error(path + ":" + std::to_string(line_no) + ": non-numeric value '" +
                  value + "'");
    }
    if (v < scores.range.lo || v > scores.range.hi) {
      throw Error(path + ":" + std::to_string(line_no) + ": value " + value +
                  " outside declared range");
    }
    if (!scores.by_instance.emplace(id, v).second) {
      throw Error(path + ":" + std::to_string(line_no) +
                  ": duplicate instance id '" + id + "'");
    }
  }
  return scores;
}

double ExternalScores::at(const std::string& instance_id) const {
  auto it = by_instance.find(instance_id);
  if (it == by_instance.end()) {
    throw Error("no external '" + name + "' score for instance '" +
                instance_id + "'");
  }
  return it->second;
}

}  // namespace mipe::metrics
