#include "alignkit/similarity.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace alignkit {

namespace {

bool is_separator(char c) {
  switch (c) {
    case '_': case '-': case '.': case ',': case '/': case '(': case ')':
    case ' ': case '\t': case '\n': case '\r':
      return true;
    default:
      return false;
  }
}

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }

bool is_stopword(const std::string& token) {
  static const std::array<std::string_view, 4> kStopwords = {"of", "the", "and", "or"};
  return std::find(kStopwords.begin(), kStopwords.end(), token) != kStopwords.end();
}

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

}  // namespace

std::vector<std::string> normalize(std::string_view name, bool remove_stopwords) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (current.empty()) return;
    std::transform(current.begin(), current.end(), current.begin(),
                   [](char c) { return is_upper(c) ? static_cast<char>(c - 'A' + 'a') : c; });
    if (!(remove_stopwords && is_stopword(current))) tokens.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < name.size(); ++i) {
    char c = name[i];
    if (is_separator(c)) {
      flush();
      continue;
    }
    if (is_upper(c) && !current.empty()) {
      char prev = name[i - 1];
      bool next_lower = i + 1 < name.size() && is_lower(name[i + 1]);
      if (is_lower(prev) || (is_upper(prev) && next_lower)) flush();
    }
    current.push_back(c);
  }
  flush();
  return tokens;
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t above = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diagonal + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diagonal = above;
    }
  }
  return row[b.size()];
}

double edit_similarity_tokens(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::string x = join(a);
  std::string y = join(b);
  std::size_t longest = std::max(x.size(), y.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(x, y)) / static_cast<double>(longest);
}

double token_jaccard_tokens(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::set<std::string> x(a.begin(), a.end());
  std::set<std::string> y(b.begin(), b.end());
  if (x.empty() && y.empty()) return 1.0;
  std::size_t common = 0;
  for (const auto& t : x) common += y.count(t);
  return static_cast<double>(common) / static_cast<double>(x.size() + y.size() - common);
}

double exact_name_tokens(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  return a == b ? 1.0 : 0.0;
}

double edit_similarity(std::string_view a, std::string_view b, bool remove_stopwords) {
  return edit_similarity_tokens(normalize(a, remove_stopwords), normalize(b, remove_stopwords));
}

double token_jaccard(std::string_view a, std::string_view b, bool remove_stopwords) {
  return token_jaccard_tokens(normalize(a, remove_stopwords), normalize(b, remove_stopwords));
}

double exact_name(std::string_view a, std::string_view b, bool remove_stopwords) {
  return exact_name_tokens(normalize(a, remove_stopwords), normalize(b, remove_stopwords));
}

}  // namespace alignkit
