#include "mipe/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <doctest.h>

#include "mipe/error.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace mipe::metrics;
using mipe::textnorm::Sentence;
using mipe::textnorm::Token;

namespace {

Sentence random_sentence(std::mt19937& rng, const std::vector<Token>& vocab,
                         std::size_t min_len, std::size_t max_len) {
  Sentence s;
  const std::size_t n = min_len + rng() % (max_len - min_len + 1);
  for (std::size_t i = 0; i < n; ++i) s.push_back(vocab[rng() % vocab.size()]);
  return s;
}

const std::vector<Token> kVocab = {"the", "cat", "sat", "on", "mat", "a"};

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("bleu endpoints") {
  const Sentence ref = {"the", "cat", "sat"};
  const std::vector<Sentence> refs = {ref};
  CHECK(bleu(ref, refs).value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(bleu({}, refs).value == 0.0);

  const Sentence disjoint = {"dog", "runs", "fast"};
  CHECK(bleu(disjoint, refs).value <= kBleuSmoothEps * 1.000001);
  CHECK(bleu(disjoint, refs).orientation == Orientation::HigherBetter);
}

TEST_CASE("bleu hand computation with a brevity penalty") {
  // Unigram 3/3, bigram 2/2, trigram 1/1; the candidate is three words
  // against a four-word reference, so only the brevity penalty bites.
  const std::vector<Sentence> refs = {{"the", "cat", "sat", "down"}};
  const double want = std::exp(1.0 - 4.0 / 3.0);
  CHECK(bleu({"the", "cat", "sat"}, refs).value ==
        doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("bleu clips against the best reference") {
  // Unigram "a" is clipped at 2 thanks to the second reference; with a
  // single-reference clip the precision would halve.
  const std::vector<Sentence> refs = {{"a"}, {"a", "a", "c"}};
  const Sentence cand = {"a", "a", "b"};
  const double p1 = 2.0 / 3.0;
  const double p2 = 1.0 / 2.0;  // "a a" matches, "a b" does not
  const double p3 = kBleuSmoothEps;
  const double want = std::cbrt(p1 * p2 * p3);
  CHECK(bleu(cand, refs).value == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("native metrics ignore reference order") {
  std::mt19937 rng(57);
  for (int it = 0; it < 200; ++it) {
    const Sentence cand = random_sentence(rng, kVocab, 1, 6);
    std::vector<Sentence> refs;
    const std::size_t n = 1 + rng() % 3;
    for (std::size_t i = 0; i < n; ++i) {
      refs.push_back(random_sentence(rng, kVocab, 1, 6));
    }
    std::vector<Sentence> shuffled = refs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(bleu(cand, refs).value == bleu(cand, shuffled).value);
    CHECK(nist(cand, refs).value == nist(cand, shuffled).value);
    CHECK(wer(cand, refs).value == wer(cand, shuffled).value);
    CHECK(ter(cand, refs).value == ter(cand, shuffled).value);
  }
}

TEST_CASE("nist self-score of a three-token sentence") {
  const Sentence s = {"kya", "aapko", "samaj"};
  // All words distinct: unigram information log2(3) each, zero beyond.
  CHECK(nist(s, std::vector<Sentence>{s}).value ==
        doctest::Approx(std::log2(3.0)).epsilon(1e-12));
}

TEST_CASE("nist self-score with a repeated word") {
  const Sentence s = {"a", "b", "a"};
  // Unigrams: (2*log2(3/2) + log2(3))/3. Bigrams: "a b" carries
  // log2(count(a)/count(ab)) = 1 bit, "b a" carries log2(1/1) = 0, averaged
  // over two candidate bigrams. The trigram adds nothing.
  const double want =
      (2.0 * std::log2(1.5) + std::log2(3.0)) / 3.0 + (1.0 + 0.0) / 2.0;
  CHECK(nist(s, std::vector<Sentence>{s}).value ==
        doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("nist is zero without overlap and for empty candidates") {
  const std::vector<Sentence> refs = {{"a", "b", "c"}};
  CHECK(nist({"x", "y"}, refs).value == 0.0);
  CHECK(nist({}, refs).value == 0.0);
}

TEST_CASE("duplicating a reference changes nothing for a perfect candidate") {
  const Sentence s = {"koi", "dusra", "human", "being"};
  const std::vector<Sentence> once = {s};
  const std::vector<Sentence> twice = {s, s};
  CHECK(nist(s, once).value == doctest::Approx(nist(s, twice).value));
  CHECK(bleu(s, once).value == doctest::Approx(bleu(s, twice).value));
}

TEST_CASE("nist brevity factor halves at two-thirds length") {
  // Candidate matches a prefix of the reference at 2/3 of its length.
  const Sentence ref = {"a", "b", "c", "d", "e", "f"};
  const Sentence cand = {"a", "b", "c", "d"};
  const auto full = nist(ref, std::vector<Sentence>{ref});
  const auto part = nist(cand, std::vector<Sentence>{ref});
  CHECK(part.value > 0.0);
  // Only the ratio structure is asserted here; exact equality of the
  // precision masses does not hold between the two candidates.
  const double beta = std::log(0.5) / std::pow(std::log(2.0 / 3.0), 2);
  const double factor = std::exp(beta * std::pow(std::log(4.0 / 6.0), 2));
  CHECK(factor == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(part.value < full.value);
}

TEST_CASE("wer basics") {
  const std::vector<Sentence> refs = {{"a", "x", "c"}};
  CHECK(wer({"a", "x", "c"}, refs).value == 0.0);
  CHECK(wer({"a", "b", "c"}, refs).value == doctest::Approx(1.0 / 3.0));
  CHECK(wer({"a", "b", "c"}, refs).orientation == Orientation::LowerBetter);

  const std::vector<Sentence> multi = {{"a", "b"}, {"a", "b", "c", "d"}};
  CHECK(wer({"a", "b"}, multi).value == 0.0);
}

TEST_CASE("wer rejects empty references") {
  const std::vector<Sentence> refs = {{}};
  CHECK_THROWS_AS(wer({"a"}, refs), mipe::Error);
  CHECK_THROWS_AS(ter({"a"}, refs), mipe::Error);
}

TEST_CASE("wer matches the edit-script enumeration oracle") {
  std::mt19937 rng(71);
  for (int it = 0; it < 500; ++it) {
    const Sentence cand = random_sentence(rng, kVocab, 0, 6);
    const Sentence ref = random_sentence(rng, kVocab, 1, 6);
    const auto want = oracles::enumerate_word_edits(cand, ref, 0, 0);
    CHECK(edit_distance(cand, ref) == want);
    CHECK(wer_against(cand, ref) ==
          doctest::Approx(static_cast<double>(want) / ref.size()));
  }
}

TEST_CASE("ter counts one shift for a rotated candidate") {
  const std::vector<Sentence> refs = {{"a", "b", "c"}};
  CHECK(ter({"a", "b", "c"}, refs).value == 0.0);
  CHECK(ter({"c", "a", "b"}, refs).value == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("ter does not shift when no shift helps") {
  const std::vector<Sentence> refs = {{"a", "x", "c"}};
  CHECK(ter({"a", "b", "c"}, refs).value == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("ter shift must match a reference block") {
  // "b a" reversed needs two edits; the single-word blocks both occur in the
  // reference, so one shift fixes it.
  const std::vector<Sentence> refs = {{"b", "a"}};
  CHECK(ter({"a", "b"}, refs).value == doctest::Approx(1.0 / 2.0));
  // A block absent from the reference cannot move: "q" is not in the
  // reference, and shifting "a" cannot reduce the two remaining edits.
  const std::vector<Sentence> refs2 = {{"x", "a", "y"}};
  CHECK(ter({"a", "q"}, refs2).value == wer({"a", "q"}, refs2).value);
}

TEST_CASE("ter never exceeds wer per reference") {
  std::mt19937 rng(83);
  for (int it = 0; it < 500; ++it) {
    const Sentence cand = random_sentence(rng, kVocab, 0, 8);
    const Sentence ref = random_sentence(rng, kVocab, 1, 8);
    CHECK(ter_against(cand, ref) <= wer_against(cand, ref) + 1e-12);
  }
}

TEST_CASE("greedy ter is bracketed by the exact shift search and wer") {
  // The exact bound explores every two-shift sequence; greedy can match it
  // but never beat it, and never does worse than plain edits.
  std::mt19937 rng(89);
  for (int it = 0; it < 200; ++it) {
    const Sentence cand = random_sentence(rng, kVocab, 1, 5);
    const Sentence ref = random_sentence(rng, kVocab, 1, 5);
    const double exact =
        static_cast<double>(oracles::exact_shift_edit_cost(cand, ref, 2)) /
        static_cast<double>(ref.size());
    const double greedy = ter_against(cand, ref);
    CHECK(greedy >= exact - 1e-12);
    CHECK(greedy <= wer_against(cand, ref) + 1e-12);
  }
  // On a pure rotation the greedy result is exactly optimal.
  const Sentence ref = {"a", "b", "c", "d"};
  const Sentence rotated = {"c", "d", "a", "b"};
  const double exact =
      static_cast<double>(oracles::exact_shift_edit_cost(rotated, ref, 2)) / 4.0;
  CHECK(ter_against(rotated, ref) == doctest::Approx(exact));
  CHECK(ter_against(rotated, ref) == doctest::Approx(1.0 / 4.0));
}

TEST_CASE("external scores load and lookup") {
  testutil::TempDir tmp;
  const auto path = tmp.file(
      "bs.tsv", "name bs orientation higher range 0 1\n42\t0.851\n7\t0.9\n");
  const auto ext = ExternalScores::load(path);
  CHECK(ext.name == "bs");
  CHECK(ext.orientation == Orientation::HigherBetter);
  CHECK(ext.range.lo == 0.0);
  CHECK(ext.range.hi == 1.0);
  CHECK(ext.at("42") == doctest::Approx(0.851));
  CHECK_THROWS_WITH_AS(ext.at("99"), doctest::Contains("99"), mipe::Error);
}

TEST_CASE("external score file contracts") {
  testutil::TempDir tmp;
  const auto dup = tmp.file(
      "dup.tsv", "name bs orientation higher range 0 1\n1\t0.5\n1\t0.6\n");
  CHECK_THROWS_WITH_AS(ExternalScores::load(dup), doctest::Contains("duplicate"),
                       mipe::Error);
  const auto range = tmp.file(
      "range.tsv", "name bs orientation higher range 0 1\n1\t1.2\n");
  CHECK_THROWS_WITH_AS(ExternalScores::load(range), doctest::Contains("range"),
                       mipe::Error);
  const auto header = tmp.file("hdr.tsv", "something else\n1\t0.5\n");
  CHECK_THROWS_AS(ExternalScores::load(header), mipe::Error);
  const auto value = tmp.file(
      "val.tsv", "name wer2 orientation lower range 0 10\n1\tx\n");
  CHECK_THROWS_AS(ExternalScores::load(value), mipe::Error);
}

}  // TEST_SUITE
