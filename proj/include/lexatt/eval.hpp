// Scoring of predicted linkages against hand-linked gold sentences, the
// random and positive-attraction reference points, and learning curves.

#ifndef LEXATT_EVAL_HPP
#define LEXATT_EVAL_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lexatt/corpus.hpp"
#include "lexatt/linkage.hpp"
#include "lexatt/memory.hpp"

namespace lexatt {

struct Score {
  double precision = 1.0;  // correct / predicted, 1 when nothing predicted
  double recall = 1.0;     // correct / gold, 1 when there is no gold link
  std::size_t predicted = 0;
  std::size_t gold = 0;
  std::size_t correct = 0;

  static Score from_counts(std::size_t predicted, std::size_t gold, std::size_t correct);
  nlohmann::json to_json() const;
};

class ScoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// `predicted[k]` covers gold[k].sentence(), boundaries included. Links
// touching a boundary are dropped; the rest shift down by one. With
// content_only, links count only when both endpoints are content words.
// Throws ScoreError on a count or length mismatch.
Score score(std::span<const Linkage> predicted, std::span<const GoldSentence> gold, bool content_only = true);

// Fraction of gold content-word links whose pair has positive attraction
// in `model`, in either order. 1 when there are no such links.
double positive_mi_ceiling(std::span<const GoldSentence> gold, const PairTable& model);

// Approximation linker driven by uniform attractions in [-1, 1], drawn once
// per ordered word pair for the whole run.
Score random_baseline(std::span<const GoldSentence> gold, std::uint64_t seed, bool content_only = true);

struct ParseOptions {
  bool optimal = false;
  std::size_t jobs = 1;
};

// Parses every sentence against a frozen table; output order follows input.
std::vector<Linkage> parse_all(const PairTable& table, std::span<const Sentence> sentences,
                               const ParseOptions& options = {});

// Drops sentences with a word outside the `limit` most frequent words of
// `table`. A limit of 0 keeps everything.
std::vector<GoldSentence> restrict_vocabulary(std::span<const GoldSentence> gold, const PairTable& table,
                                              std::size_t limit);

struct CurveOptions {
  UpdateProcedure procedure = UpdateProcedure::feedback;
  std::vector<std::uint64_t> checkpoints;  // word counts
  std::size_t vocab_limit = 0;
  std::uint64_t min_pair_count = 1;
  bool content_only = true;
  std::size_t jobs = 1;
  std::function<void(const std::string&)> notice;
};

struct CurvePoint {
  std::uint64_t words = 0;  // words actually trained on at evaluation
  std::uint64_t checkpoint = 0;
  std::size_t test_sentences = 0;
  Score score;
};

struct LearningCurve {
  std::vector<CurvePoint> points;
  bool truncated = false;  // some checkpoints lay beyond the corpus
  PairTable table;         // state after the last evaluated checkpoint
};

// Trains on `corpus` in order, pausing at each checkpoint (the first
// sentence boundary at or past it) to parse and score `gold`.
LearningCurve learning_curve(std::span<const Sentence> corpus, std::span<const GoldSentence> gold,
                             const CurveOptions& options);

std::string curve_to_csv(const LearningCurve& curve);

}  // namespace lexatt

#endif  // LEXATT_EVAL_HPP
