#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "lexatt/corpus.hpp"

using namespace lexatt;

namespace {

std::vector<std::string> all(const Sentence& s) {
  std::vector<std::string> out;
  for (const auto& t : s.tokens()) out.push_back(t.surface);
  return out;
}

using Words = std::vector<std::string>;

}  // namespace

TEST_CASE("tokenizing the trace sentence") {
  auto out = tokenize("These people also want more government money for education .");
  REQUIRE(out.size() == 1);
  CHECK(all(out[0]) == Words{"*", "these", "people", "also", "want", "more", "government", "money", "for",
                             "education", ".", "*"});
  CHECK(out[0][10].kind == TokenKind::punctuation);
  CHECK(out[0][0].is_boundary());
}

TEST_CASE("empty input gives no sentences") {
  CHECK(tokenize("").empty());
  CHECK(tokenize("  \n\t ").empty());
}

TEST_CASE("terminators end sentences") {
  auto out = tokenize("A b. C d.");
  REQUIRE(out.size() == 2);
  CHECK(all(out[0]) == Words{"*", "a", "b", ".", "*"});
  CHECK(all(out[1]) == Words{"*", "c", "d", ".", "*"});
  auto marks = tokenize("Really?! yes");
  REQUIRE(marks.size() == 2);
  CHECK(all(marks[0]) == Words{"*", "really", "?", "*"});
  CHECK(all(marks[1]) == Words{"*", "yes", "*"});
}

TEST_CASE("non-terminal punctuation is stripped unless kept") {
  auto out = tokenize("\"Hello,\" she said (twice).");
  REQUIRE(out.size() == 1);
  CHECK(all(out[0]) == Words{"*", "hello", "she", "said", "twice", ".", "*"});
  TokenizeOptions keep;
  keep.keep_punctuation = true;
  auto kept = tokenize("\"Hello,\" she said.", keep);
  REQUIRE(kept.size() == 1);
  CHECK(all(kept[0]) == Words{"*", "\"", "hello", ",\"", "she", "said", ".", "*"});
  CHECK(all(tokenize("Route 66 opened in 1926.")[0]) == Words{"*", "route", "66", "opened", "in", "1926", ".", "*"});
}

TEST_CASE("lowercasing covers Latin-1 capitals") {
  auto out = tokenize("\xC3\x89t\xC3\xA9 \xC3\x80 PARIS");
  REQUIRE(out.size() == 1);
  CHECK(all(out[0]) == Words{"*", "\xC3\xA9t\xC3\xA9", "\xC3\xA0", "paris", "*"});
}

TEST_CASE("long sentences are split at the cap") {
  TokenizeOptions opt;
  opt.max_tokens = 5;
  auto out = tokenize("a b c d e f g", opt);
  REQUIRE(out.size() == 3);
  CHECK(all(out[0]) == Words{"*", "a", "b", "c", "*"});
  CHECK(all(out[1]) == Words{"*", "d", "e", "f", "*"});
  CHECK(all(out[2]) == Words{"*", "g", "*"});
  for (const auto& s : out) CHECK(s.size() <= 5);
  opt.max_tokens = 2;
  CHECK_THROWS_AS(Tokenizer{opt}, std::invalid_argument);
}

TEST_CASE("malformed UTF-8 names the byte offset") {
  try {
    tokenize("ok fine \xFF bad");
    FAIL("expected DecodeError");
  } catch (const DecodeError& e) {
    CHECK(e.offset() == 8);
  }
  try {
    tokenize("ab \xC3");
    FAIL("expected DecodeError");
  } catch (const DecodeError& e) {
    CHECK(e.offset() == 3);
  }
  CHECK_THROWS_AS(tokenize("x\xE2\x28\xA1"), DecodeError);
  CHECK_NOTHROW(tokenize("caf\xC3\xA9 \xE2\x82\xAC \xF0\x9F\x98\x80"));
}

TEST_CASE("tokenization does not depend on chunking") {
  const std::string text = "The cat sat. On the MAT! Did it? yes,\n it did  .  \xC3\x89t\xC3\xA9 ends";
  auto whole = tokenize(text);
  for (std::size_t chunk = 1; chunk <= 7; ++chunk) {
    std::vector<Sentence> got;
    Tokenizer t;
    auto sink = [&](Sentence&& s) { got.push_back(std::move(s)); };
    for (std::size_t k = 0; k < text.size(); k += chunk) t.feed(std::string_view(text).substr(k, chunk), sink);
    t.finish(sink);
    CHECK(got == whole);
  }
  std::istringstream in(text);
  std::vector<Sentence> streamed;
  tokenize_stream(in, [&](Sentence&& s) { streamed.push_back(std::move(s)); });
  CHECK(streamed == whole);
}

TEST_CASE("tokenized sentences are well formed") {
  for (const auto& s : tokenize("One two. THREE four five! six? Seven")) {
    CHECK(s[0].is_boundary());
    CHECK(s[s.size() - 1].is_boundary());
    for (std::size_t k = 1; k + 1 < s.size(); ++k) {
      CHECK_FALSE(s[k].is_boundary());
      for (char c : s[k].surface) CHECK_FALSE((c >= 'A' && c <= 'Z'));
    }
  }
}

TEST_CASE("sentence construction rejects bad interior tokens") {
  CHECK_THROWS_AS(Sentence({Token::boundary()}), std::invalid_argument);
  CHECK_THROWS_AS(Sentence({Token{"", TokenKind::word}}), std::invalid_argument);
  CHECK_THROWS_AS(Sentence({Token{"a b", TokenKind::word}}), std::invalid_argument);
  CHECK(Sentence().size() == 2);
  CHECK(Sentence().to_string() == "* *");
}

TEST_CASE("gold files round trip") {
  const std::string text =
      "# comment\n"
      "the dog barked .\n"
      "F C C F\n"
      "0-1 1-2 2-3\n"
      "\n"
      "\n"
      "hello\n"
      "C\n"
      "\n";
  std::istringstream in(text);
  auto gold = read_gold(in);
  REQUIRE(gold.size() == 2);
  CHECK(gold[0].tokens == Words{"the", "dog", "barked", "."});
  CHECK(gold[0].content == std::vector<bool>{false, true, true, false});
  CHECK(gold[0].links == std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}, {2, 3}});
  CHECK(gold[1].links.empty());
  CHECK(all(gold[0].sentence()) == Words{"*", "the", "dog", "barked", ".", "*"});

  std::ostringstream out;
  write_gold(out, gold);
  std::istringstream back(out.str());
  CHECK(read_gold(back) == gold);
}

TEST_CASE("gold file errors carry line numbers") {
  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      read_gold(in);
    } catch (const GoldFormatError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("a b\nC C\n0-1\n") == 0);
  CHECK(line_of("a b\nC X\n0-1\n") == 2);
  CHECK(line_of("a b\nC\n0-1\n") == 1);
  CHECK(line_of("a b\nC C\n0-2\n") == 1);
  CHECK(line_of("a b\nC C\n1-0\n") == 1);
  CHECK(line_of("a b\nC C\n0_1\n") == 3);
  CHECK(line_of("a b c d\nC C C C\n0-2 1-3\n") == 1);
  CHECK(line_of("a b c\nC C C\n0-1 1-2 0-2\n") == 1);
  CHECK(line_of("a b\nC C\n0-1\nnot blank\n") == 4);
  CHECK(line_of("\n\na b\nC C\n") == 4);
}

TEST_CASE("synthetic generation is deterministic") {
  SynthConfig c;
  c.templates = default_templates();
  c.sentence_count = 500;
  c.seed = 9;
  auto a = generate_synthetic(c);
  auto b = generate_synthetic(c);
  CHECK(a.sentences == b.sentences);
  CHECK(a.gold == b.gold);
  c.seed = 10;
  CHECK_FALSE(generate_synthetic(c).sentences == a.sentences);

  for (std::size_t k = 0; k < a.gold.size(); ++k) {
    CHECK_NOTHROW(a.gold[k].validate());
    CHECK(a.gold[k].sentence() == a.sentences[k]);
    CHECK(a.gold[k].tokens.back() == ".");
    CHECK_FALSE(a.gold[k].content.back());
  }
  std::ostringstream out;
  write_gold(out, a.gold);
  std::istringstream in(out.str());
  CHECK(read_gold(in) == a.gold);
}

TEST_CASE("synthetic generation edge cases and errors") {
  SynthConfig c;
  c.templates = default_templates();
  c.sentence_count = 0;
  auto empty = generate_synthetic(c);
  CHECK(empty.sentences.empty());
  CHECK(empty.gold.empty());

  c.vocab_size = 3;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.vocab_size = 1000;
  c.affinity = 1.5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.affinity = 0.5;
  c.templates = {{{{"n", true}, {"v", true}, {"n", false}}, {{0, 1}}}};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);  // inconsistent flags
  c.templates = {{{{"n", true}, {"v", true}, {"n", true}}, {{0, 3}}}};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);  // link out of range
  c.templates = {{{{"N", true}}, {}}};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.templates.clear();
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("synthetic word frequencies follow Zipf's law") {
  SynthConfig c;
  c.templates = default_templates();
  c.vocab_size = 1000;
  c.sentence_count = 100000;
  auto corpus = generate_synthetic(c);
  std::map<std::string, double> freq;
  for (const auto& s : corpus.sentences) {
    for (const auto& w : s.words()) {
      if (w != ".") freq[w] += 1.0;
    }
  }
  std::vector<double> counts;
  for (const auto& [w, n] : freq) counts.push_back(n);
  std::sort(counts.rbegin(), counts.rend());
  // least-squares slope of log frequency on log rank
  double sx = 0;
  double sy = 0;
  double sxx = 0;
  double sxy = 0;
  auto n = static_cast<double>(counts.size());
  for (std::size_t r = 0; r < counts.size(); ++r) {
    double x = std::log(static_cast<double>(r + 1));
    double y = std::log(counts[r]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  MESSAGE("rank-frequency slope " << slope);
  CHECK(slope == doctest::Approx(-1.0).epsilon(0.15));
}
