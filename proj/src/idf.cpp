#include "mipe/idf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "mipe/error.hpp"

namespace mipe::idf {

IdfDictionary IdfDictionary::build(std::istream& corpus, double mu_miss) {
  if (!(mu_miss > 0.0)) throw Error("mu_miss must be positive");
  IdfDictionary dict;
  dict.mu_miss_ = mu_miss;

  std::unordered_map<std::string, std::uint64_t> df;
  std::string line;
  std::vector<Token> toks;
  while (std::getline(corpus, line)) {
    ++dict.n_docs_;
    toks = textnorm::tokenize(line);
    std::sort(toks.begin(), toks.end());
    toks.erase(std::unique(toks.begin(), toks.end()), toks.end());
    for (auto& t : toks) ++df[t];
  }
  if (dict.n_docs_ == 0) throw Error("idf corpus is empty");

  const double n = static_cast<double>(dict.n_docs_);
  dict.table_.reserve(df.size());
  for (const auto& [word, count] : df) {
    dict.table_[word] =
        std::max(std::log(n / static_cast<double>(count)), kFloor);
  }
  return dict;
}

double IdfDictionary::lookup(const Token& w) const {
  auto it = table_.find(w);
  return it == table_.end() ? mu_miss_ : it->second;
}

void IdfDictionary::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write idf dictionary: " + path);

  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", mu_miss_);
  out << "n_docs " << n_docs_ << " mu_miss " << buf << "\n";

  // Sorted for reproducible output.
  std::vector<const std::pair<const std::string, double>*> entries;
  entries.reserve(table_.size());
  for (const auto& e : table_) entries.push_back(&e);
  std::sort(entries.begin(), entries.end(),
            [](const auto* a, const auto* b) { return a->first < b->first; });
  for (const auto* e : entries) {
    std::snprintf(buf, sizeof(buf), "%.17g", e->second);
    out << e->first << '\t' << buf << '\n';
  }
  if (!out) throw Error("error writing idf dictionary: " + path);
}

IdfDictionary IdfDictionary::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open idf dictionary: " + path);

  std::string line;
  if (!std::getline(in, line)) {
    throw Error(path + ": missing 'n_docs ... mu_miss ...' header");
  }
  IdfDictionary dict;
  {
    std::istringstream hdr(line);
    std::string k1, k2;
    if (!(hdr >> k1 >> dict.n_docs_ >> k2 >> dict.mu_miss_) || k1 != "n_docs" ||
        k2 != "mu_miss") {
      throw Error(path + ":1: malformed header, expected "
                         "'n_docs <int> mu_miss <float>'");
    }
    if (!(dict.mu_miss_ > 0.0)) {
      throw Error(path + ":1: mu_miss must be positive");
    }
  }

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw Error(path + ":" + std::to_string(line_no) +
                  ": expected 'word<TAB>idf'");
    }
    const std::string word = line.substr(0, tab);
    const std::string value = line.substr(tab + 1);
    char* end = nullptr;
    const double idf = std::strtod(value.c_str(), &end);
    if (end != value.c_str() + value.size() || value.empty()) {
      throw Error(path + ":" + std::to_string(line_no) +
                  ": non-numeric idf value '" + value + "'");
    }
    if (idf <= 0.0) {
      throw Error(path + ":" + std::to_string(line_no) +
                  ": idf values must be positive");
    }
    if (!dict.table_.emplace(word, idf).second) {
      throw Error(path + ":" + std::to_string(line_no) + ": duplicate word '" +
                  word + "'");
    }
  }
  return dict;
}

}  // namespace mipe::idf
