#include "mipe/pipeline.hpp"

#include <cmath>
#include <sstream>

#include <doctest.h>

#include "mipe/error.hpp"

using namespace mipe::pipeline;
using mipe::harness::EvalInstance;
using mipe::textnorm::Sentence;

namespace {

std::vector<double> vec(std::initializer_list<double> xs) { return xs; }

Resources fixture_resources() {
  Resources res;
  std::istringstream corpus(
      "koi dusra human being yeh kahe\n"
      "kya aapko samaj aaya\n"
      "market khula hai\n"
      "a b c d\n");
  res.idf = mipe::idf::IdfDictionary::build(corpus);

  res.embeddings = mipe::embedding::EmbeddingStore(3);
  res.embeddings.add("market", vec({1.0, 0.0, 0.0}));
  res.embeddings.add("bazaar", vec({0.6, 0.8, 0.0}));
  res.embeddings.add("khula", vec({0.0, 0.0, 1.0}));
  return res;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("perfect candidate saturates a bounded higher-better metric") {
  const auto res = fixture_resources();
  const Sentence cand = {"koi", "dusra", "human"};
  const std::vector<Sentence> refs = {cand};
  const auto r = mipe_score(cand, refs, "bleu", res);
  CHECK(r.raw.value == doctest::Approx(1.0));
  CHECK(r.mwp_raw == 0.0);
  CHECK(r.mwp_scaled == 0.0);
  CHECK(r.phrase_score_scaled == 1.0);  // guard-divided credit hits the cap
  CHECK(r.augmented.value == 1.0);      // clamped into [0, 1]
  CHECK(r.augmented.orientation == r.raw.orientation);
}

TEST_CASE("perfect candidate reaches the best error score") {
  const auto res = fixture_resources();
  const Sentence cand = {"koi", "dusra", "human"};
  const std::vector<Sentence> refs = {cand};
  const auto r = mipe_score(cand, refs, "wer", res);
  CHECK(r.raw.value == 0.0);
  CHECK(r.augmented.value == 0.0);  // 0 + 0 - 1 floored at 0
}

TEST_CASE("error metrics move in the opposite direction") {
  const auto res = fixture_resources();
  const Sentence cand = {"koi", "zzz9"};
  const std::vector<Sentence> refs = {{"koi", "dusra", "human"}};
  const auto r = mipe_score(cand, refs, "wer", res);
  // Two reference words are missing, so the scaled penalty is positive and
  // the phrase credit is negative: both push the error score up.
  CHECK(r.mwp_scaled > 0.0);
  CHECK(r.phrase_score_scaled < 0.0);
  CHECK(r.augmented.value ==
        doctest::Approx(r.raw.value + r.mwp_scaled - r.phrase_score_scaled));
  CHECK(r.augmented.value >= 0.0);
}

TEST_CASE("augmented never leaves the declared range") {
  const auto res = fixture_resources();
  const std::vector<Sentence> refs = {{"a", "b", "c", "d"}};
  for (const Sentence& cand :
       {Sentence{"a", "b", "c", "d"}, Sentence{"zzz9"}, Sentence{"a"}}) {
    const auto r = mipe_score(cand, refs, "bleu", res);
    CHECK(r.augmented.value >= 0.0);
    CHECK(r.augmented.value <= 1.0);
    const auto w = mipe_score(cand, refs, "wer", res);
    CHECK(w.augmented.value >= 0.0);
  }
}

TEST_CASE("canonicalization happens before the metric") {
  const auto res = fixture_resources();
  // "bazaar" is semantically matched to "market"; the raw metric then sees
  // the rewritten candidate.
  const std::vector<Sentence> refs = {{"market", "khula"}};
  const auto r = mipe_score({"bazaar", "khula"}, refs, "bleu", res);
  CHECK(r.canonicalized_candidate == Sentence{"market", "khula"});
  CHECK(r.raw.value == doctest::Approx(1.0));
  CHECK(r.augmented.value == 1.0);
}

TEST_CASE("canonicalization can be turned off") {
  auto res = fixture_resources();
  res.options.canonicalize_candidate = false;
  const std::vector<Sentence> refs = {{"market", "khula"}};
  const auto r = mipe_score({"bazaar", "khula"}, refs, "bleu", res);
  CHECK(r.canonicalized_candidate == Sentence{"bazaar", "khula"});
  CHECK(r.raw.value < 1.0);
}

TEST_CASE("evaluate_instance shares the adjustment quantities") {
  const auto res = fixture_resources();
  EvalInstance inst;
  inst.id = "1";
  inst.system = "sysA";
  inst.candidate = "koee dusra human";
  inst.references = {"koi dusra human being"};
  inst.ratings = {9, 8};

  const std::vector<std::string> names = {"bleu", "wer", "nist", "ter"};
  const auto results = evaluate_instance(inst, names, res);
  REQUIRE(results.size() == 4);
  for (const auto& r : results) {
    CHECK(r.mwp_raw == results[0].mwp_raw);
    CHECK(r.phrase_score_raw == results[0].phrase_score_raw);
    CHECK(r.canonicalized_candidate == results[0].canonicalized_candidate);
  }
  CHECK(results[0].raw.name == "bleu");
  CHECK(results[1].raw.name == "wer");
}

TEST_CASE("evaluate_instance with an empty metric list") {
  const auto res = fixture_resources();
  EvalInstance inst;
  inst.id = "1";
  inst.system = "s";
  inst.candidate = "a b";
  inst.references = {"a b"};
  CHECK(evaluate_instance(inst, {}, res).empty());
}

TEST_CASE("unknown metric names list the valid ones") {
  const auto res = fixture_resources();
  const std::vector<Sentence> refs = {{"a"}};
  CHECK_THROWS_WITH_AS(mipe_score({"a"}, refs, "rouge", res),
                       doctest::Contains("bleu"), mipe::Error);
}

TEST_CASE("external metrics join by instance id") {
  auto res = fixture_resources();
  mipe::metrics::ExternalScores ext;
  ext.name = "bs";
  ext.orientation = mipe::metrics::Orientation::HigherBetter;
  ext.range = {0.0, 1.0};
  ext.by_instance["42"] = 0.851;
  res.external["bs"] = ext;

  const std::vector<Sentence> refs = {{"koi", "dusra"}};
  const auto r = mipe_score({"koi", "dusra"}, refs, "bs", res, "42");
  CHECK(r.raw.value == doctest::Approx(0.851));
  CHECK(r.augmented.value == 1.0);  // 0.851 - 0 + 1 clamped to the range top

  CHECK_THROWS_WITH_AS(mipe_score({"koi"}, refs, "bs", res, "43"),
                       doctest::Contains("43"), mipe::Error);
}

TEST_CASE("results are bit-identical across runs") {
  const auto res = fixture_resources();
  EvalInstance inst;
  inst.id = "1";
  inst.system = "s";
  inst.candidate = "koee doosra human ye kahe";
  inst.references = {"koi dusra human being yeh kahe", "kya aapko samaj aaya"};

  const std::vector<std::string> names = {"bleu", "nist", "wer", "ter"};
  const auto a = evaluate_instance(inst, names, res);
  const auto b = evaluate_instance(inst, names, res);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].raw.value == b[i].raw.value);
    CHECK(a[i].augmented.value == b[i].augmented.value);
    CHECK(a[i].mwp_raw == b[i].mwp_raw);
    CHECK(a[i].mwp_scaled == b[i].mwp_scaled);
    CHECK(a[i].phrase_score_raw == b[i].phrase_score_raw);
    CHECK(a[i].phrase_score_scaled == b[i].phrase_score_scaled);
  }
}

TEST_CASE("lowering the scaled penalty never hurts a higher-better score") {
  // Same candidate, references extended so more words match: the penalty
  // drops and the augmented value must not drop.
  const auto res = fixture_resources();
  const Sentence cand = {"koi", "dusra"};
  const std::vector<Sentence> worse_refs = {{"koi", "dusra", "zzz9", "qqq9"}};
  const std::vector<Sentence> better_refs = {{"koi", "dusra"}};
  const auto worse = mipe_score(cand, worse_refs, "bleu", res);
  const auto better = mipe_score(cand, better_refs, "bleu", res);
  CHECK(worse.mwp_scaled > better.mwp_scaled);
  CHECK(better.augmented.value >= worse.augmented.value);
}

TEST_CASE("refs are required") {
  const auto res = fixture_resources();
  CHECK_THROWS_AS(mipe_score({"a"}, {}, "bleu", res), mipe::Error);
}

TEST_CASE("reference cross-normalization unlocks n-gram matches") {
  auto res = fixture_resources();
  res.costs.rho_sub = 0.5;  // brings kanekt and connect within reach
  const std::vector<Sentence> refs = {{"kanekt", "mirch"}, {"connect", "pyaz"}};
  const Sentence cand = {"connect", "mirch"};

  // The second tokens must stay put for the construction to mean anything.
  REQUIRE(mipe::phonetic::pds("mirch", "pyaz", res.costs) >= res.sws.sigma_thres);
  REQUIRE(mipe::phonetic::pds("mirch", "connect", res.costs) >=
          res.sws.sigma_thres);
  REQUIRE(mipe::phonetic::pds("pyaz", "kanekt", res.costs) >= res.sws.sigma_thres);

  const auto off = mipe_score(cand, refs, "bleu", res);
  res.options.canonicalize_references = true;
  const auto on = mipe_score(cand, refs, "bleu", res);
  // With the references unified, the first one becomes [connect, mirch] and
  // the candidate matches it outright.
  CHECK(off.raw.value < 1.0);
  CHECK(on.raw.value == doctest::Approx(1.0));
}

}  // TEST_SUITE
