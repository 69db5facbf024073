#include "mipe/textnorm.hpp"

#include <random>

#include <doctest.h>

using namespace mipe::textnorm;

TEST_SUITE("textnorm") {

TEST_CASE("tokenize splits on whitespace and punctuation") {
  CHECK(tokenize("kya aapko samaj aaya?") ==
        Sentence{"kya", "aapko", "samaj", "aaya"});
  CHECK(tokenize("Do you understand this?") ==
        Sentence{"do", "you", "understand", "this"});
  CHECK(tokenize("") == Sentence{});
  CHECK(tokenize("...!?") == Sentence{});
  CHECK(tokenize("a,b;;c") == Sentence{"a", "b", "c"});
}

TEST_CASE("tokenize keeps digits and lowercases") {
  CHECK(tokenize("Room 101") == Sentence{"room", "101"});
  CHECK(tokenize("42") == Sentence{"42"});
}

TEST_CASE("tokenize passes non-ascii bytes through") {
  const Sentence s = tokenize("\xe0\xa4\x95\xe0\xa5\x8d\xe0\xa4\xaf\xe0\xa4\xbe hello");
  REQUIRE(s.size() == 2);
  CHECK(s[1] == "hello");
}

TEST_CASE("detokenize round trip") {
  std::mt19937 rng(7);
  const std::vector<std::string> vocab = {"kya", "aapko", "42", "samajh", "x"};
  for (int it = 0; it < 200; ++it) {
    Sentence s;
    const std::size_t len = rng() % 6;
    for (std::size_t i = 0; i < len; ++i) s.push_back(vocab[rng() % vocab.size()]);
    CHECK(tokenize(detokenize(s)) == s);
  }
}

TEST_CASE("collapse_repeats") {
  CHECK(collapse_repeats("koee") == "koe");
  CHECK(collapse_repeats("abc") == "abc");
  CHECK(collapse_repeats("aaabbba") == "aba");
  CHECK(collapse_repeats("x") == "x");
}

TEST_CASE("collapse_repeats is idempotent and never grows") {
  std::mt19937 rng(11);
  for (int it = 0; it < 500; ++it) {
    std::string w;
    const std::size_t len = 1 + rng() % 8;
    for (std::size_t i = 0; i < len; ++i) {
      w.push_back(static_cast<char>('a' + rng() % 3));
    }
    const auto once = collapse_repeats(w);
    CHECK(collapse_repeats(once) == once);
    CHECK(once.size() <= w.size());
  }
}

}  // TEST_SUITE
