#include "mipe/phonetic.hpp"

#include <algorithm>
#include <vector>

namespace mipe::phonetic {

std::vector<std::pair<char, char>> PhoneticCostTable::default_similar_pairs() {
  return {{'c', 'k'}, {'k', 'q'}, {'c', 's'}, {'s', 'z'}, {'j', 'z'},
          {'g', 'j'}, {'b', 'p'}, {'v', 'w'}, {'f', 'v'}};
}

bool PhoneticCostTable::is_vowel(char c) const {
  return vowels.find(c) != std::string::npos;
}

bool PhoneticCostTable::is_silent(char c) const {
  return silent_chars.find(c) != std::string::npos;
}

bool PhoneticCostTable::similar(char a, char b) const {
  if (a == b) return false;
  if (vowels_are_similar && is_vowel(a) && is_vowel(b)) return true;
  for (const auto& [x, y] : similar_pairs) {
    if ((x == a && y == b) || (x == b && y == a)) return true;
  }
  return false;
}

double PhoneticCostTable::sub_cost(char a, char b) const {
  if (a == b) return 0.0;
  return similar(a, b) ? rho_sub : sub_default;
}

double PhoneticCostTable::ins_cost(char c) const {
  if (is_vowel(c)) return rho_add;
  if (is_silent(c)) return rho_sil;
  return add_default;
}

double PhoneticCostTable::del_cost(char c) const {
  if (is_vowel(c)) return rho_del;
  if (is_silent(c)) return rho_sil;
  return del_default;
}

double pds_directed(const Token& w1, const Token& w2,
                    const PhoneticCostTable& costs) {
  const Token a = textnorm::collapse_repeats(w1);
  const Token b = textnorm::collapse_repeats(w2);
  const std::size_t m = a.size();
  const std::size_t n = b.size();

  // Two-row DP over the cost lattice: prev[j] is the cost of editing the
  // first i-1 characters of a into the first j characters of b.
  std::vector<double> prev(n + 1), cur(n + 1);
  prev[0] = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    prev[j] = prev[j - 1] + costs.ins_cost(b[j - 1]);
  }
  for (std::size_t i = 1; i <= m; ++i) {
    cur[0] = prev[0] + costs.del_cost(a[i - 1]);
    for (std::size_t j = 1; j <= n; ++j) {
      const double del = prev[j] + costs.del_cost(a[i - 1]);
      const double ins = cur[j - 1] + costs.ins_cost(b[j - 1]);
      const double sub = prev[j - 1] + costs.sub_cost(a[i - 1], b[j - 1]);
      cur[j] = std::min({del, ins, sub});
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

double pds(const Token& w1, const Token& w2, const PhoneticCostTable& costs) {
  return std::min(pds_directed(w1, w2, costs), pds_directed(w2, w1, costs));
}

}  // namespace mipe::phonetic
