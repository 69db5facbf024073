#include "mipe/textnorm.hpp"

#include <cctype>

namespace mipe::textnorm {

namespace {

bool is_word_byte(unsigned char c) {
  // Non-ASCII bytes (UTF-8 continuations and lead bytes) count as word
  // characters so that tokens in other scripts pass through intact.
  return c >= 0x80 || std::isalnum(c);
}

}  // namespace

Sentence tokenize(std::string_view text) {
  Sentence out;
  Token cur;
  for (unsigned char c : text) {
    if (is_word_byte(c)) {
      cur.push_back(c < 0x80 ? static_cast<char>(std::tolower(c))
                             : static_cast<char>(c));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string detokenize(const Sentence& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += s[i];
  }
  return out;
}

Token collapse_repeats(const Token& w) {
  Token out;
  out.reserve(w.size());
  for (char c : w) {
    if (out.empty() || out.back() != c) out.push_back(c);
  }
  return out;
}

}  // namespace mipe::textnorm
