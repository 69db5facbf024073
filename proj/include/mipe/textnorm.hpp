#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mipe::textnorm {

using Token = std::string;
using Sentence = std::vector<Token>;

/// Splits raw text into lowercased word tokens. A token is a maximal run of
/// letters or digits; whitespace and punctuation only separate and are
/// dropped. Bytes outside ASCII are treated as word characters and kept
/// untouched, so non-Latin script survives as opaque tokens.
Sentence tokenize(std::string_view text);

/// Joins tokens with single spaces. tokenize(detokenize(s)) == s for any
/// sentence produced by tokenize.
std::string detokenize(const Sentence& s);

/// Collapses every maximal run of one repeated character to a single
/// occurrence: "koee" -> "koe", "aaabbba" -> "aba".
Token collapse_repeats(const Token& w);

}  // namespace mipe::textnorm
