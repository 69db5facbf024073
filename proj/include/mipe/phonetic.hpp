#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mipe/textnorm.hpp"

namespace mipe::phonetic {

using textnorm::Token;

/// Edit costs for the phonetically weighted distance. Substitutions between
/// similar-sounding characters, vowel insertions/deletions, and
/// insertions/deletions of silent characters are all discounted relative to
/// the default operation costs. Characters outside the configured sets simply
/// take the default costs.
struct PhoneticCostTable {
  double add_default = 1.0;
  double del_default = 1.0;
  double sub_default = 2.0;
  double rho_sub = 0.75;  // similar-sounding substitution
  double rho_add = 0.75;  // vowel insertion
  double rho_del = 0.25;  // vowel deletion
  double rho_sil = 0.75;  // silent-character insertion or deletion

  /// Unordered character pairs judged similar-sounding.
  std::vector<std::pair<char, char>> similar_pairs = default_similar_pairs();
  /// When set, every vowel-vowel pair is also treated as similar-sounding.
  bool vowels_are_similar = true;
  std::string vowels = "aeiou";
  std::string silent_chars = "he";

  static std::vector<std::pair<char, char>> default_similar_pairs();

  bool is_vowel(char c) const;
  bool is_silent(char c) const;
  bool similar(char a, char b) const;

  double sub_cost(char a, char b) const;  // 0 when a == b
  double ins_cost(char c) const;
  double del_cost(char c) const;
};

/// Minimum total cost of editing collapse_repeats(w1) into
/// collapse_repeats(w2). Insertions add characters of w2, deletions remove
/// characters of w1; the asymmetric vowel costs make this directed.
double pds_directed(const Token& w1, const Token& w2,
                    const PhoneticCostTable& costs);

/// Phonetic dissimilarity: min of the two directed costs, so the final score
/// does not depend on argument order.
double pds(const Token& w1, const Token& w2, const PhoneticCostTable& costs);

}  // namespace mipe::phonetic
