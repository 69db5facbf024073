#include "mipe/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "mipe/error.hpp"
#include "mipe/kernels.hpp"

namespace mipe::harness {

namespace {

using nlohmann::json;

std::string get_id(const json& j, std::size_t line_no) {
  if (!j.contains("id")) {
    throw Error("line " + std::to_string(line_no) + ": missing 'id'");
  }
  const json& v = j.at("id");
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw Error("line " + std::to_string(line_no) + ": 'id' must be a string");
}

std::string get_string(const json& j, const char* key, std::size_t line_no) {
  if (!j.contains(key) || !j.at(key).is_string()) {
    throw Error("line " + std::to_string(line_no) + ": missing string field '" +
                key + "'");
  }
  return j.at(key).get<std::string>();
}

}  // namespace

std::vector<EvalInstance> parse_dataset(std::istream& in,
                                        const std::string& origin) {
  std::vector<EvalInstance> out;
  std::set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(origin + ": line " + std::to_string(line_no) + ": " +
                  e.what());
    }
    if (!j.is_object()) {
      throw Error(origin + ": line " + std::to_string(line_no) +
                  ": expected a JSON object");
    }

    try {
      EvalInstance inst;
      inst.id = get_id(j, line_no);
      inst.system = get_string(j, "system", line_no);
      inst.candidate = get_string(j, "candidate", line_no);

      if (!j.contains("references") || !j.at("references").is_array() ||
          j.at("references").empty()) {
        throw Error("line " + std::to_string(line_no) +
                    ": 'references' must be a non-empty array");
      }
      for (const json& r : j.at("references")) {
        if (!r.is_string()) {
          throw Error("line " + std::to_string(line_no) +
                      ": references must be strings");
        }
        inst.references.push_back(r.get<std::string>());
      }

      if (!j.contains("ratings") || !j.at("ratings").is_array()) {
        throw Error("line " + std::to_string(line_no) +
                    ": 'ratings' must be an array");
      }
      for (const json& r : j.at("ratings")) {
        if (!r.is_number_integer()) {
          throw Error("line " + std::to_string(line_no) +
                      ": ratings must be integers");
        }
        const int v = r.get<int>();
        if (v < 1 || v > 10) {
          throw Error("line " + std::to_string(line_no) + ": rating " +
                      std::to_string(v) + " outside [1, 10]");
        }
        inst.ratings.push_back(v);
      }

      if (!seen_ids.insert(inst.id).second) {
        throw Error("line " + std::to_string(line_no) + ": duplicate id '" +
                    inst.id + "'");
      }
      out.push_back(std::move(inst));
    } catch (const Error& e) {
      throw Error(origin + ": " + e.what());
    }
  }
  return out;
}

std::vector<EvalInstance> load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset: " + path);
  return parse_dataset(in, path);
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw Error("pearson requires equally sized lists");
  }
  const std::size_t n = xs.size();
  if (n < 2) throw Error("pearson requires at least two points");

  const auto is_constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(),
                       [&](double x) { return x == v.front(); });
  };
  if (is_constant(xs) || is_constant(ys)) {
    throw Error("pearson of a constant list is undefined");
  }

  const double mx = kernels::sum(xs) / static_cast<double>(n);
  const double my = kernels::sum(ys) / static_cast<double>(n);
  std::vector<double> cx(n), cy(n);
  for (std::size_t i = 0; i < n; ++i) {
    cx[i] = xs[i] - mx;
    cy[i] = ys[i] - my;
  }
  const double sxy = kernels::dot(cx, cy);
  const double sxx = kernels::dot(cx, cx);
  const double syy = kernels::dot(cy, cy);
  // Roundoff can push the ratio a few ulps past 1.
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

const std::array<Bucket, 3>& standard_buckets() {
  static const std::array<Bucket, 3> buckets = {{
      {"bucket1", 2, 10},
      {"bucket2", 2, 5},
      {"bucket3", 6, 10},
  }};
  return buckets;
}

const char* variant_name(Variant v) {
  return v == Variant::Raw ? "raw" : "augmented";
}

std::map<int, double> per_rating_means(std::span<const double> scores,
                                       std::span<const InstanceRatings> ratings,
                                       RatingAggregation aggregation) {
  if (scores.size() != ratings.size()) {
    throw Error("per_rating_means: scores and ratings differ in length");
  }
  std::map<int, std::pair<double, std::size_t>> acc;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const auto& rs = ratings[i].ratings;
    if (rs.empty()) continue;
    if (aggregation == RatingAggregation::Duplicate) {
      for (int r : rs) {
        acc[r].first += scores[i];
        acc[r].second += 1;
      }
    } else {
      double mean = 0.0;
      for (int r : rs) mean += r;
      mean /= static_cast<double>(rs.size());
      const int level = static_cast<int>(std::llround(mean));
      acc[level].first += scores[i];
      acc[level].second += 1;
    }
  }
  std::map<int, double> means;
  for (const auto& [level, sum_count] : acc) {
    means[level] = sum_count.first / static_cast<double>(sum_count.second);
  }
  return means;
}

double bucket_correlation(const std::map<int, double>& means,
                          const Bucket& bucket) {
  std::vector<double> levels, values;
  for (const auto& [level, mean] : means) {
    if (level >= bucket.lo && level <= bucket.hi) {
      levels.push_back(static_cast<double>(level));
      values.push_back(mean);
    }
  }
  if (levels.size() < 2) {
    throw Error("bucket " + bucket.label +
                ": fewer than two rating levels with data");
  }
  return pearson(levels, values);
}

ScoreReport build_report(std::vector<InstanceScore> rows,
                         std::vector<InstanceRatings> ratings,
                         RatingAggregation aggregation) {
  if (rows.empty()) throw Error("no instance scores to report");

  std::unordered_map<std::string, const InstanceRatings*> by_id;
  for (const auto& r : ratings) by_id[r.id] = &r;

  ScoreReport report;
  report.aggregation = aggregation;

  // Group rows per (system, metric), keeping row order.
  std::map<std::pair<std::string, std::string>, std::vector<const InstanceScore*>>
      groups;
  for (const auto& row : rows) {
    auto it = by_id.find(row.id);
    if (it == by_id.end()) {
      throw Error("no ratings for scored instance '" + row.id + "'");
    }
    groups[{row.system, row.metric}].push_back(&row);
  }

  for (const auto& [key, group] : groups) {
    const auto& [system, metric] = key;
    std::vector<double> raw_scores, aug_scores;
    std::vector<InstanceRatings> group_ratings;
    for (const InstanceScore* row : group) {
      raw_scores.push_back(row->raw);
      aug_scores.push_back(row->augmented);
      group_ratings.push_back(*by_id.at(row->id));
    }
    const auto raw_means = per_rating_means(raw_scores, group_ratings, aggregation);
    const auto aug_means = per_rating_means(aug_scores, group_ratings, aggregation);
    report.rating_means[{system, metric, Variant::Raw}] = raw_means;
    report.rating_means[{system, metric, Variant::Augmented}] = aug_means;

    for (const Bucket& bucket : standard_buckets()) {
      for (Variant v : {Variant::Raw, Variant::Augmented}) {
        const auto& means = v == Variant::Raw ? raw_means : aug_means;
        std::optional<double> r;
        try {
          r = bucket_correlation(means, bucket);
        } catch (const Error&) {
          r = std::nullopt;  // degenerate bucket; rendered as n/a
        }
        report.bucket_correlations[{system, metric, v, bucket.label}] = r;
      }
    }

    // Raw-vs-augmented correlation over shared rating levels 2..10.
    std::vector<double> xs, ys;
    for (const auto& [level, mean] : raw_means) {
      if (level < 2) continue;
      auto it = aug_means.find(level);
      if (it != aug_means.end()) {
        xs.push_back(mean);
        ys.push_back(it->second);
      }
    }
    std::optional<double> vc;
    try {
      vc = pearson(xs, ys);
    } catch (const Error&) {
      vc = std::nullopt;
    }
    report.variant_correlations[{system, metric}] = vc;
  }

  report.rows = std::move(rows);
  report.ratings = std::move(ratings);
  return report;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

std::vector<std::string> csv_split(const std::string& line,
                                   const std::string& origin,
                                   std::size_t line_no) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) {
    throw Error(origin + ":" + std::to_string(line_no) + ": unterminated quote");
  }
  out.push_back(std::move(cur));
  return out;
}

std::string fmt(double v, const char* spec = "%.9g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

double parse_num(const std::string& s, const std::string& origin,
                 std::size_t line_no) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw Error(origin + ":" + std::to_string(line_no) + ": non-numeric value '" +
                s + "'");
  }
  return v;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw Error("cannot write " + p.string());
  return out;
}

}  // namespace

void write_instance_scores(std::span<const InstanceScore> rows,
                           const std::string& dir) {
  auto out = open_out(std::filesystem::path(dir) / "instance_scores.csv");
  out << "id,system,metric,raw,augmented,mwp,phrase_score\n";
  for (const auto& r : rows) {
    out << csv_field(r.id) << ',' << csv_field(r.system) << ','
        << csv_field(r.metric) << ',' << fmt(r.raw) << ',' << fmt(r.augmented)
        << ',' << fmt(r.mwp) << ',' << fmt(r.phrase_score) << '\n';
  }
}

void write_ratings(std::span<const InstanceRatings> ratings,
                   const std::string& dir) {
  auto out = open_out(std::filesystem::path(dir) / "ratings.csv");
  out << "id,system,rating\n";
  for (const auto& inst : ratings) {
    for (int r : inst.ratings) {
      out << csv_field(inst.id) << ',' << csv_field(inst.system) << ',' << r
          << '\n';
    }
  }
}

void write_ratings(std::span<const EvalInstance> instances,
                   const std::string& dir) {
  std::vector<InstanceRatings> ratings;
  ratings.reserve(instances.size());
  for (const auto& inst : instances) {
    ratings.push_back({inst.id, inst.system, inst.ratings});
  }
  write_ratings(std::span<const InstanceRatings>(ratings), dir);
}

std::vector<InstanceScore> read_instance_scores(const std::string& dir) {
  const auto path = std::filesystem::path(dir) / "instance_scores.csv";
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line) ||
      line != "id,system,metric,raw,augmented,mwp,phrase_score") {
    throw Error(path.string() + ": missing or unexpected header");
  }
  ++line_no;

  std::vector<InstanceScore> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto f = csv_split(line, path.string(), line_no);
    if (f.size() != 7) {
      throw Error(path.string() + ":" + std::to_string(line_no) +
                  ": expected 7 fields");
    }
    InstanceScore row;
    row.id = f[0];
    row.system = f[1];
    row.metric = f[2];
    row.raw = parse_num(f[3], path.string(), line_no);
    row.augmented = parse_num(f[4], path.string(), line_no);
    row.mwp = parse_num(f[5], path.string(), line_no);
    row.phrase_score = parse_num(f[6], path.string(), line_no);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<InstanceRatings> read_ratings(const std::string& dir) {
  const auto path = std::filesystem::path(dir) / "ratings.csv";
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line) || line != "id,system,rating") {
    throw Error(path.string() + ": missing or unexpected header");
  }
  ++line_no;

  std::vector<InstanceRatings> out;
  std::unordered_map<std::string, std::size_t> index;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto f = csv_split(line, path.string(), line_no);
    if (f.size() != 3) {
      throw Error(path.string() + ":" + std::to_string(line_no) +
                  ": expected 3 fields");
    }
    const int rating = static_cast<int>(parse_num(f[2], path.string(), line_no));
    auto [it, inserted] = index.emplace(f[0], out.size());
    if (inserted) out.push_back({f[0], f[1], {}});
    out[it->second].ratings.push_back(rating);
  }
  return out;
}

namespace {

void emit_rating_means(const ScoreReport& report, const std::filesystem::path& dir) {
  auto csv = open_out(dir / "rating_means.csv");
  csv << "system,metric,variant,rating,mean\n";
  for (const auto& [key, means] : report.rating_means) {
    const auto& [system, metric, variant] = key;
    for (const auto& [level, mean] : means) {
      csv << csv_field(system) << ',' << csv_field(metric) << ','
          << variant_name(variant) << ',' << level << ',' << fmt(mean) << '\n';
    }
  }

  // Aligned rendering, one block per system: rating rows 2..10, a raw column
  // group then an augmented column group.
  std::set<std::string> systems;
  std::set<std::string> metrics;
  for (const auto& [key, means] : report.rating_means) {
    systems.insert(std::get<0>(key));
    metrics.insert(std::get<1>(key));
  }
  auto txt = open_out(dir / "rating_means.txt");
  txt << "Mean metric scores by human rating level\n";
  txt << "aggregation: "
      << (report.aggregation == RatingAggregation::Duplicate
              ? "one observation per individual rating"
              : "one observation at the rounded mean rating")
      << "\n";
  for (const auto& system : systems) {
    txt << "\nsystem: " << system << "\n";
    txt << "rating";
    for (Variant v : {Variant::Raw, Variant::Augmented}) {
      for (const auto& metric : metrics) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), " %14s",
                      (metric + "." + (v == Variant::Raw ? "raw" : "aug")).c_str());
        txt << buf;
      }
      if (v == Variant::Raw) txt << "  |";
    }
    txt << "\n";
    for (int level = 2; level <= 10; ++level) {
      bool any = false;
      std::string row = fmt(static_cast<double>(level), "%6.0f");
      for (Variant v : {Variant::Raw, Variant::Augmented}) {
        for (const auto& metric : metrics) {
          auto it = report.rating_means.find({system, metric, v});
          if (it != report.rating_means.end() && it->second.count(level)) {
            row += fmt(it->second.at(level), " %14.3f");
            any = true;
          } else {
            row += "              -";
          }
        }
        if (v == Variant::Raw) row += "  |";
      }
      if (any) txt << row << "\n";
    }
  }
}

void emit_bucket_correlations(const ScoreReport& report,
                              const std::filesystem::path& dir) {
  auto csv = open_out(dir / "bucket_correlations.csv");
  csv << "system,metric,bucket,variant,r\n";
  for (const auto& [key, r] : report.bucket_correlations) {
    const auto& [system, metric, variant, bucket] = key;
    csv << csv_field(system) << ',' << csv_field(metric) << ',' << bucket << ','
        << variant_name(variant) << ',' << (r ? fmt(*r) : "n/a") << '\n';
  }

  std::set<std::string> systems;
  std::set<std::string> metrics;
  for (const auto& [key, r] : report.bucket_correlations) {
    systems.insert(std::get<0>(key));
    metrics.insert(std::get<1>(key));
  }
  auto txt = open_out(dir / "bucket_correlations.txt");
  txt << "Pearson correlation between rating levels and mean metric scores\n";
  for (const Bucket& b : standard_buckets()) {
    txt << b.label << ": ratings " << b.lo << "-" << b.hi << "\n";
  }
  for (const auto& system : systems) {
    txt << "\nsystem: " << system << "\n";
    txt << "metric  ";
    for (const Bucket& b : standard_buckets()) {
      for (const char* v : {"raw", "aug"}) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), " %12s", (b.label + "." + v).c_str());
        txt << buf;
      }
    }
    txt << "\n";
    for (const auto& metric : metrics) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%-8s", metric.c_str());
      txt << buf;
      for (const Bucket& b : standard_buckets()) {
        for (Variant v : {Variant::Raw, Variant::Augmented}) {
          auto it = report.bucket_correlations.find({system, metric, v, b.label});
          if (it != report.bucket_correlations.end() && it->second) {
            txt << fmt(*it->second, " %12.3f");
          } else {
            txt << "          n/a";
          }
        }
      }
      txt << "\n";
    }
  }
}

void emit_variant_correlations(const ScoreReport& report,
                               const std::filesystem::path& dir) {
  auto csv = open_out(dir / "variant_correlations.csv");
  csv << "system,metric,r\n";
  for (const auto& [key, r] : report.variant_correlations) {
    csv << csv_field(key.first) << ',' << csv_field(key.second) << ','
        << (r ? fmt(*r) : "n/a") << '\n';
  }
}

}  // namespace

void emit_report(const ScoreReport& report, const std::string& out_dir) {
  if (report.rows.empty()) throw Error("refusing to emit an empty report");

  std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory: " + out_dir);

  write_instance_scores(report.rows, out_dir);
  write_ratings(std::span<const InstanceRatings>(report.ratings), out_dir);
  emit_rating_means(report, dir);
  emit_bucket_correlations(report, dir);
  emit_variant_correlations(report, dir);
}

}  // namespace mipe::harness
