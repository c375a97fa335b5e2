#include <doctest.h>

#include <json.hpp>
#include <random>

#include "cofee/text.hpp"
#include "support/fixtures.hpp"

using namespace cofee;

TEST_CASE("tokenizer fixture") {
  auto cases = nlohmann::json::parse(fixtures::read("tokenizer_cases.json"));
  REQUIRE(cases.size() == 30);
  for (const auto& c : cases) {
    const std::string text = c["text"];
    CAPTURE(text);
    auto tokens = tokenize(text);
    CHECK(token_texts(text, tokens) == c["tokens"].get<std::vector<std::string>>());
    for (std::size_t i = 0; i < tokens.size(); ++i) CHECK(tokens[i].index == static_cast<int>(i));
    if (c.contains("offsets")) {
      std::vector<std::pair<int, int>> got;
      for (const auto& t : tokens) got.emplace_back(t.char_start, t.char_end);
      CHECK(got == c["offsets"].get<std::vector<std::pair<int, int>>>());
    }
  }
}

TEST_CASE("joining rules can be switched off") {
  TokenizerProfile p;
  p.digit_separators_join = false;
  CHECK(token_texts("8,500", tokenize("8,500", p)) == std::vector<std::string>{"8", ",", "500"});
  p = {};
  p.hyphen_joins = false;
  CHECK(token_texts("covid-19", tokenize("covid-19", p)) ==
        std::vector<std::string>{"covid", "-", "19"});
  p = {};
  p.apostrophe_joins = false;
  CHECK(token_texts("don't", tokenize("don't", p)) == std::vector<std::string>{"don", "'", "t"});
  p = {};
  p.zwnj_joins = false;
  const std::string word = "می‌خواهد";
  CHECK(tokenize(word, p).size() == 2);
}

TEST_CASE("tokens are ordered, disjoint and hold no separators") {
  std::mt19937 rng(11);
  const std::vector<std::string> pieces = {"a", "Z", "7", " ", ",", ".", "-", "'", "‌",
                                           "۵", "ب", "\t", "!", "’", "é"};
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    int n = static_cast<int>(rng() % 16);
    for (int i = 0; i < n; ++i) text += pieces[rng() % pieces.size()];
    CAPTURE(text);
    auto tokens = tokenize(text);
    const int len = static_cast<int>(to_utf32(text).size());
    int prev_end = 0;
    for (const auto& t : tokens) {
      CHECK(t.char_start < t.char_end);
      CHECK(t.char_start >= prev_end);
      CHECK(t.char_end <= len);
      prev_end = t.char_end;
      auto s = substring(text, t.char_start, t.char_end);
      CHECK(s.find(' ') == std::string::npos);
      CHECK(s.find('\t') == std::string::npos);
    }
    CHECK(tokenize(text) == tokens);
  }
}

TEST_CASE("utf-8 helpers") {
  CHECK(to_utf32("aé\U0001F525") == std::u32string{U'a', U'é', U'\U0001F525'});
  CHECK(to_utf8(to_utf32("سلام")) == "سلام");
  CHECK(to_utf32("a\xffz") == std::u32string{U'a', U'�', U'z'});
  CHECK(substring("killed 115 people.", 7, 10) == "115");
  CHECK(substring("سلام", 1, 3) == "لا");
}

TEST_CASE("normalization") {
  CHECK(normalize_token("Quake") == "quake");
  CHECK(normalize_token("ＱＵＡＫＥ") == "quake");
  CHECK(normalize_token("café") == "café");
  CHECK(normalize_phrase("  Initial   PUBLIC offering ") == "initial public offering");
  CHECK(normalize_phrase("") == "");
}
