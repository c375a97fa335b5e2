#include "cofee/text.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "cofee/error.hpp"

namespace cofee {
namespace {

constexpr char32_t kZwnj = 0x200C;
constexpr char32_t kZwj = 0x200D;

bool is_word_char(char32_t c) {
  auto mask = U_GET_GC_MASK(static_cast<UChar32>(c));
  return (mask & (U_GC_L_MASK | U_GC_M_MASK | U_GC_N_MASK | U_GC_PC_MASK)) != 0;
}

bool is_letter(char32_t c) { return (U_GET_GC_MASK(c) & U_GC_L_MASK) != 0; }

bool is_letter_or_number(char32_t c) {
  return (U_GET_GC_MASK(c) & (U_GC_L_MASK | U_GC_N_MASK)) != 0;
}

bool is_digit(char32_t c) { return u_isdigit(static_cast<UChar32>(c)); }

// Whitespace, controls and stray format characters (BOM, bidi marks) separate tokens.
bool is_separator(char32_t c) {
  if (u_isUWhiteSpace(static_cast<UChar32>(c))) return true;
  auto mask = U_GET_GC_MASK(static_cast<UChar32>(c));
  return (mask & (U_GC_CC_MASK | U_GC_CF_MASK)) != 0;
}

bool is_hyphen(char32_t c) { return c == U'-' || c == 0x2010 || c == 0x2011; }
bool is_apostrophe(char32_t c) { return c == U'\'' || c == 0x2019; }
bool is_digit_separator(char32_t c) {
  return c == U',' || c == U'.' || c == 0x066B || c == 0x066C;
}

// Whether c, sitting between prev and next, continues the current word.
bool joins(char32_t prev, char32_t c, char32_t next, const TokenizerProfile& p) {
  if (c == kZwnj || c == kZwj) return p.zwnj_joins && is_word_char(prev) && is_word_char(next);
  if (is_hyphen(c)) return p.hyphen_joins && is_letter_or_number(prev) && is_letter_or_number(next);
  if (is_apostrophe(c)) return p.apostrophe_joins && is_letter(prev) && is_letter(next);
  if (is_digit_separator(c)) return p.digit_separators_join && is_digit(prev) && is_digit(next);
  return false;
}

const icu::Normalizer2& nfkc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFKCInstance(status);
  if (U_FAILURE(status)) throw Error(std::string("ICU NFKC unavailable: ") + u_errorName(status));
  return *n;
}

}  // namespace

TokenizerProfile TokenizerProfile::for_language(std::string_view) {
  // Persian and English currently share one rule set; the hook exists so a
  // language can opt out of individual joining rules.
  return TokenizerProfile{};
}

std::u32string to_utf32(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  int32_t length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT_OR_FFFD(s, i, length, c);
    out.push_back(static_cast<char32_t>(c));
  }
  return out;
}

std::string to_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    UChar32 cp = (c > 0x10FFFF || (c >= 0xD800 && c <= 0xDFFF)) ? 0xFFFD : c;
    U8_APPEND_UNSAFE(buf, n, cp);
    out.append(reinterpret_cast<const char*>(buf), n);
  }
  return out;
}

std::vector<Token> tokenize(std::string_view text, const TokenizerProfile& profile) {
  std::u32string cps = to_utf32(text);
  std::vector<Token> tokens;
  const int n = static_cast<int>(cps.size());
  int i = 0;
  while (i < n) {
    char32_t c = cps[i];
    if (!is_word_char(c)) {
      if (!is_separator(c)) {
        tokens.push_back({static_cast<int>(tokens.size()), i, i + 1});
      }
      ++i;
      continue;
    }
    int start = i++;
    while (i < n) {
      if (is_word_char(cps[i])) {
        ++i;
      } else if (i + 1 < n && joins(cps[i - 1], cps[i], cps[i + 1], profile)) {
        i += 2;
      } else {
        break;
      }
    }
    tokens.push_back({static_cast<int>(tokens.size()), start, i});
  }
  return tokens;
}

std::string substring(std::string_view utf8, int char_start, int char_end) {
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  int32_t length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  int cp = 0;
  int32_t byte_start = length;
  while (i < length && cp < char_start) {
    U8_FWD_1(s, i, length);
    ++cp;
  }
  if (cp == char_start) byte_start = i;
  while (i < length && cp < char_end) {
    U8_FWD_1(s, i, length);
    ++cp;
  }
  if (byte_start >= i) return {};
  // Re-encode so invalid bytes come back as U+FFFD, matching to_utf32.
  return to_utf8(to_utf32(utf8.substr(byte_start, i - byte_start)));
}

std::vector<std::string> token_texts(std::string_view text, const std::vector<Token>& tokens) {
  std::u32string cps = to_utf32(text);
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    out.push_back(to_utf8(std::u32string_view(cps).substr(t.char_start,
                                                          t.char_end - t.char_start)));
  }
  return out;
}

std::string normalize_token(std::string_view token) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2& n = nfkc();
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(token.data(), static_cast<int32_t>(token.size())));
  icu::UnicodeString once = n.normalize(s, status);
  once.toLower(icu::Locale::getRoot());
  icu::UnicodeString twice = n.normalize(once, status);
  if (U_FAILURE(status)) throw Error(std::string("normalization failed: ") + u_errorName(status));
  std::string out;
  twice.toUTF8String(out);
  return out;
}

std::string normalize_phrase(std::string_view phrase, const TokenizerProfile& profile) {
  std::string out;
  for (const auto& t : token_texts(phrase, tokenize(phrase, profile))) {
    if (!out.empty()) out += ' ';
    out += normalize_token(t);
  }
  return out;
}

}  // namespace cofee
