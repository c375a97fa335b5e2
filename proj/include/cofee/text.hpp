#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cofee {

// Character offsets are Unicode code points; end is exclusive.
struct Token {
  int index = 0;
  int char_start = 0;
  int char_end = 0;

  bool operator==(const Token&) const = default;
};

struct TokenizerProfile {
  // ZWNJ between word characters stays inside the word (Persian half-space).
  bool zwnj_joins = true;
  // "8,500" and "3.5" stay one token.
  bool digit_separators_join = true;
  // "covid-19", "well-known" stay one token.
  bool hyphen_joins = true;
  // "don't", "O'Brien" stay one token.
  bool apostrophe_joins = true;

  static TokenizerProfile for_language(std::string_view language_tag);
};

// Deterministic segmentation: maximal word runs plus one token per other
// non-space character. Invalid UTF-8 bytes decode to U+FFFD.
std::vector<Token> tokenize(std::string_view text,
                            const TokenizerProfile& profile = TokenizerProfile{});

std::u32string to_utf32(std::string_view utf8);
std::string to_utf8(std::u32string_view text);

// Substring by code-point offsets, end exclusive.
std::string substring(std::string_view utf8, int char_start, int char_end);

// Text of every token, in order.
std::vector<std::string> token_texts(std::string_view text, const std::vector<Token>& tokens);

// Comparison form used by the lexicon: NFKC, lowercase, NFKC again.
std::string normalize_token(std::string_view token);

// Tokenizes and joins normalized tokens with single spaces.
std::string normalize_phrase(std::string_view phrase,
                             const TokenizerProfile& profile = TokenizerProfile{});

}  // namespace cofee
