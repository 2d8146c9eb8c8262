// Tokenization of raw text into boundary-marked sentences, and a synthetic
// Zipf corpus generator with known gold links.

#ifndef LEXATT_CORPUS_HPP
#define LEXATT_CORPUS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lexatt {

enum class TokenKind { word, punctuation, boundary };

struct Token {
  std::string surface;
  TokenKind kind = TokenKind::word;

  static Token boundary() { return {std::string(kBoundarySurface), TokenKind::boundary}; }
  bool is_boundary() const { return kind == TokenKind::boundary; }

  static constexpr std::string_view kBoundarySurface = "*";

  friend bool operator==(const Token&, const Token&) = default;
};

// A token sequence framed by boundary tokens: [* w1 ... wk *].
class Sentence {
 public:
  Sentence();  // [* *]

  // Wraps already-tokenized interior tokens. Throws std::invalid_argument
  // when an interior token is a boundary or has an empty/whitespace surface.
  explicit Sentence(std::vector<Token> interior);
  static Sentence from_words(std::span<const std::string> words);

  std::size_t size() const { return tokens_.size(); }
  const Token& operator[](std::size_t i) const { return tokens_[i]; }
  std::span<const Token> tokens() const { return tokens_; }
  std::size_t interior_size() const { return tokens_.size() - 2; }

  // Interior surfaces, boundaries excluded.
  std::vector<std::string> words() const;
  std::string to_string() const;

  friend bool operator==(const Sentence&, const Sentence&) = default;

 private:
  std::vector<Token> tokens_;
};

struct TokenizeOptions {
  bool keep_punctuation = false;
  // Includes both boundary tokens.
  std::size_t max_tokens = 64;
};

// Invalid UTF-8 in the input. offset is the byte offset of the first bad byte.
class DecodeError : public std::runtime_error {
 public:
  DecodeError(std::size_t offset, const std::string& what)
      : std::runtime_error(what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Incremental tokenizer; input may be fed in arbitrary chunks.
class Tokenizer {
 public:
  using Sink = std::function<void(Sentence&&)>;

  explicit Tokenizer(TokenizeOptions options = {});

  void feed(std::string_view chunk, const Sink& sink);
  // Flushes the pending word and any unterminated sentence.
  void finish(const Sink& sink);

 private:
  void end_word(const Sink& sink);
  void push_token(Token token, const Sink& sink);
  void end_sentence(const Sink& sink);

  TokenizeOptions options_;
  std::string word_;
  std::size_t word_offset_ = 0;
  std::size_t offset_ = 0;
  std::vector<Token> pending_;
};

std::vector<Sentence> tokenize(std::string_view text, const TokenizeOptions& options = {});

// Streams sentences from `in` in fixed-size chunks.
void tokenize_stream(std::istream& in, const Tokenizer::Sink& sink,
                     const TokenizeOptions& options = {});

// ---------------------------------------------------------------------------
// Gold annotations

struct GoldSentence {
  std::vector<std::string> tokens;
  std::vector<bool> content;  // one flag per token
  std::vector<std::pair<std::size_t, std::size_t>> links;  // i < j, token indices

  // Checks flag count, index ranges, i < j, planarity and acyclicity.
  // Throws std::invalid_argument describing the first violation.
  void validate() const;
  Sentence sentence() const;

  friend bool operator==(const GoldSentence&, const GoldSentence&) = default;
};

class GoldFormatError : public std::runtime_error {
 public:
  GoldFormatError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

std::vector<GoldSentence> read_gold(std::istream& in);
void write_gold(std::ostream& out, std::span<const GoldSentence> gold);

// ---------------------------------------------------------------------------
// Synthetic corpora

struct TemplateSlot {
  std::string label;  // word class; lowercase alphanumeric
  bool content = true;
};

struct SentenceTemplate {
  std::vector<TemplateSlot> slots;
  std::vector<std::pair<std::size_t, std::size_t>> links;  // slot index pairs
};

struct SynthConfig {
  std::size_t vocab_size = 1000;
  std::vector<SentenceTemplate> templates;
  std::size_t sentence_count = 0;
  std::uint64_t seed = 1;
  // Probability that a content dependent's word is coupled to its content
  // governor's word rather than drawn independently. Class marginals stay
  // Zipf either way.
  double affinity = 0.8;
  // The same for links with a function word at either end.
  double function_affinity = 0.3;

  // Throws std::invalid_argument on an unusable configuration.
  void validate() const;
};

struct SynthCorpus {
  std::vector<Sentence> sentences;
  std::vector<GoldSentence> gold;
};

// The default template set: nine word classes, five of them function words.
std::vector<SentenceTemplate> default_templates();

SynthCorpus generate_synthetic(const SynthConfig& config);

}  // namespace lexatt

#endif  // LEXATT_CORPUS_HPP
