#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace alignkit {

/// Tokens of an entity name. Splits on '_', '-', '.', ',', '/', whitespace,
/// parentheses and camel-case transitions ("NorthernAfrica", "SARChina"),
/// lowercases ASCII, drops empty tokens and, when asked, the stopwords
/// "of", "the", "and", "or".
std::vector<std::string> normalize(std::string_view name, bool remove_stopwords = false);

/// Byte-level Levenshtein distance.
std::size_t levenshtein(std::string_view a, std::string_view b);

/// 1 - lev(a', b') / max(|a'|, |b'|) where x' is the normalized tokens joined
/// by a single space; 1.0 when both are empty.
double edit_similarity(std::string_view a, std::string_view b, bool remove_stopwords = false);

/// Jaccard index of the normalized token sets; 1.0 when both are empty.
double token_jaccard(std::string_view a, std::string_view b, bool remove_stopwords = false);

/// 1.0 when the normalized token sequences are equal, else 0.0.
double exact_name(std::string_view a, std::string_view b, bool remove_stopwords = false);

/// Token-level forms of the three measures, for callers that cache tokens.
double edit_similarity_tokens(const std::vector<std::string>& a, const std::vector<std::string>& b);
double token_jaccard_tokens(const std::vector<std::string>& a, const std::vector<std::string>& b);
double exact_name_tokens(const std::vector<std::string>& a, const std::vector<std::string>& b);

}  // namespace alignkit
