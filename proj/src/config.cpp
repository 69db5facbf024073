#include "mipe/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "mipe/error.hpp"

namespace mipe::config {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& section) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.count(key)) {
      throw Error("config: unknown key '" + key + "' in section '" + section +
                  "'");
    }
  }
}

double get_num(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number()) {
    throw Error(std::string("config: '") + key + "' must be a number");
  }
  return obj.at(key).get<double>();
}

bool get_bool(const json& obj, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_boolean()) {
    throw Error(std::string("config: '") + key + "' must be a boolean");
  }
  return obj.at(key).get<bool>();
}

std::string get_str(const json& obj, const char* key, std::string fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_string()) {
    throw Error(std::string("config: '") + key + "' must be a string");
  }
  return obj.at(key).get<std::string>();
}

void load_phonetic(const json& obj, phonetic::PhoneticCostTable* costs) {
  reject_unknown_keys(obj,
                      {"add_default", "del_default", "sub_default", "rho_sub",
                       "rho_add", "rho_del", "rho_sil", "similar_pairs",
                       "vowels_are_similar", "vowels", "silent_chars"},
                      "phonetic");
  costs->add_default = get_num(obj, "add_default", costs->add_default);
  costs->del_default = get_num(obj, "del_default", costs->del_default);
  costs->sub_default = get_num(obj, "sub_default", costs->sub_default);
  costs->rho_sub = get_num(obj, "rho_sub", costs->rho_sub);
  costs->rho_add = get_num(obj, "rho_add", costs->rho_add);
  costs->rho_del = get_num(obj, "rho_del", costs->rho_del);
  costs->rho_sil = get_num(obj, "rho_sil", costs->rho_sil);
  costs->vowels_are_similar =
      get_bool(obj, "vowels_are_similar", costs->vowels_are_similar);
  costs->vowels = get_str(obj, "vowels", costs->vowels);
  costs->silent_chars = get_str(obj, "silent_chars", costs->silent_chars);
  if (obj.contains("similar_pairs")) {
    if (!obj.at("similar_pairs").is_array()) {
      throw Error("config: 'similar_pairs' must be an array of two-letter "
                  "strings");
    }
    costs->similar_pairs.clear();
    for (const json& p : obj.at("similar_pairs")) {
      if (!p.is_string() || p.get<std::string>().size() != 2) {
        throw Error("config: each similar pair must be a two-letter string");
      }
      const std::string s = p.get<std::string>();
      costs->similar_pairs.emplace_back(s[0], s[1]);
    }
  }
}

void load_sws(const json& obj, sws::SwsConfig* cfg) {
  reject_unknown_keys(obj, {"sigma_thres", "sigma_cos", "max_pds_for_variant"},
                      "sws");
  cfg->sigma_thres = get_num(obj, "sigma_thres", cfg->sigma_thres);
  cfg->sigma_cos = get_num(obj, "sigma_cos", cfg->sigma_cos);
  cfg->max_pds_for_variant =
      get_num(obj, "max_pds_for_variant", cfg->max_pds_for_variant);
}

void load_adjustment(const json& obj, scoring::AdjustmentConfig* cfg) {
  reject_unknown_keys(obj,
                      {"epsilon", "normalize_mwp", "phrase_cap",
                       "mwp_embedding_stage", "sliding_chunks"},
                      "adjustment");
  cfg->epsilon = get_num(obj, "epsilon", cfg->epsilon);
  cfg->normalize_mwp = get_bool(obj, "normalize_mwp", cfg->normalize_mwp);
  cfg->phrase_cap = get_num(obj, "phrase_cap", cfg->phrase_cap);
  cfg->mwp_embedding_stage =
      get_bool(obj, "mwp_embedding_stage", cfg->mwp_embedding_stage);
  cfg->sliding_chunks = get_bool(obj, "sliding_chunks", cfg->sliding_chunks);
}

void load_pipeline(const json& obj, pipeline::PipelineOptions* opts) {
  reject_unknown_keys(
      obj, {"canonicalize_candidate", "canonicalize_references", "nist_max_order"},
      "pipeline");
  opts->canonicalize_candidate =
      get_bool(obj, "canonicalize_candidate", opts->canonicalize_candidate);
  opts->canonicalize_references =
      get_bool(obj, "canonicalize_references", opts->canonicalize_references);
  opts->nist_max_order = static_cast<int>(
      get_num(obj, "nist_max_order", opts->nist_max_order));
}

}  // namespace

Config default_config() { return Config{}; }

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);

  json root;
  try {
    root = json::parse(in);
  } catch (const json::exception& e) {
    throw Error("config " + path + ": " + e.what());
  }
  if (!root.is_object()) throw Error("config " + path + ": expected an object");
  reject_unknown_keys(
      root, {"phonetic", "sws", "adjustment", "pipeline", "report", "mu_miss"},
      "(top level)");

  Config cfg;
  if (root.contains("phonetic")) load_phonetic(root.at("phonetic"), &cfg.costs);
  if (root.contains("sws")) load_sws(root.at("sws"), &cfg.sws);
  if (root.contains("adjustment")) {
    load_adjustment(root.at("adjustment"), &cfg.adjustment);
  }
  if (root.contains("pipeline")) load_pipeline(root.at("pipeline"), &cfg.pipeline);
  if (root.contains("report")) {
    const json& rep = root.at("report");
    reject_unknown_keys(rep, {"rating_aggregation"}, "report");
    const std::string mode = get_str(rep, "rating_aggregation", "duplicate");
    if (mode == "duplicate") {
      cfg.aggregation = harness::RatingAggregation::Duplicate;
    } else if (mode == "mean") {
      cfg.aggregation = harness::RatingAggregation::Mean;
    } else {
      throw Error("config: rating_aggregation must be 'duplicate' or 'mean'");
    }
  }
  if (root.contains("mu_miss")) cfg.mu_miss = get_num(root, "mu_miss", 20.0);

  validate(cfg);
  return cfg;
}

void validate(const Config& cfg) {
  const auto& c = cfg.costs;
  if (c.add_default < 0 || c.del_default < 0 || c.sub_default < 0 ||
      c.rho_sub < 0 || c.rho_add < 0 || c.rho_del < 0 || c.rho_sil < 0) {
    throw Error("config: edit costs must be non-negative");
  }
  if (!(c.rho_add > c.rho_del)) {
    throw Error("config: rho_add must exceed rho_del (vowel omission is the "
                "more likely variation)");
  }
  if (!(c.rho_sub < c.sub_default) || c.rho_add > c.add_default ||
      c.rho_del > c.del_default || c.rho_sil > c.add_default) {
    throw Error("config: discounted costs must not exceed the defaults");
  }
  for (const auto& [a, b] : c.similar_pairs) {
    if (a == b) {
      throw Error(std::string("config: similar pair '") + a + a +
                  "' is reflexive");
    }
  }
  if (!(cfg.sws.sigma_thres > 0)) {
    throw Error("config: sigma_thres must be positive");
  }
  if (!(cfg.sws.sigma_cos > 0 && cfg.sws.sigma_cos <= 1)) {
    throw Error("config: sigma_cos must lie in (0, 1]");
  }
  if (cfg.sws.max_pds_for_variant > cfg.sws.sigma_thres) {
    throw Error("config: max_pds_for_variant must not exceed sigma_thres");
  }
  if (!(cfg.adjustment.epsilon > 0)) {
    throw Error("config: epsilon must be positive");
  }
  if (!(cfg.adjustment.phrase_cap > 0)) {
    throw Error("config: phrase_cap must be positive");
  }
  if (cfg.pipeline.nist_max_order < 1) {
    throw Error("config: nist_max_order must be at least 1");
  }
  if (cfg.mu_miss && !(*cfg.mu_miss > 0)) {
    throw Error("config: mu_miss must be positive");
  }
}

}  // namespace mipe::config
