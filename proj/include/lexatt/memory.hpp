// Lexical-attraction memory: ordered pair counts with left/right window
// totals, mutual-information queries and the three update procedures.

#ifndef LEXATT_MEMORY_HPP
#define LEXATT_MEMORY_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lexatt/corpus.hpp"
#include "lexatt/linkage.hpp"
#include "lexatt/processor.hpp"
#include "lexatt/structures.hpp"

namespace lexatt {

using WordId = std::uint32_t;

enum class UpdateProcedure { adjacent, all_pairs, feedback };

std::string_view to_string(UpdateProcedure procedure);
// Accepts "adjacent", "all-pairs" and "feedback".
std::optional<UpdateProcedure> parse_procedure(std::string_view name);

class ModelFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PairTable : public InformationModel {
 public:
  struct WordStats {
    std::string surface;
    std::uint64_t word_count = 0;   // occurrences in the text
    std::uint64_t left_total = 0;   // n(x,*)
    std::uint64_t right_total = 0;  // n(*,y)
  };

  static constexpr std::string_view kMagic = "LEXATT 1";

  WordId intern(std::string_view surface);
  std::optional<WordId> find(std::string_view surface) const;
  const WordStats& word(WordId id) const { return words_[id]; }
  std::size_t vocabulary_size() const { return words_.size(); }
  std::size_t distinct_pairs() const { return pairs_.size(); }

  void record_pair(WordId left, WordId right);
  void record_pair(std::string_view left, std::string_view right);
  void count_word(WordId id);
  void count_word(std::string_view surface);

  std::uint64_t observations() const { return observations_; }
  std::uint64_t total_words() const { return total_words_; }
  std::uint64_t pair_count(WordId left, WordId right) const;
  std::uint64_t pair_count(std::string_view left, std::string_view right) const;

  // Pairs seen fewer than this many times have absent attraction.
  void set_min_pair_count(std::uint64_t count) { min_pair_count_ = count == 0 ? 1 : count; }
  std::uint64_t min_pair_count() const { return min_pair_count_; }

  // log2(n(x,y) N / (n(x,*) n(*,y))) for x to the left of y.
  std::optional<double> mutual_information(WordId left, WordId right) const;
  std::optional<double> mutual_information(std::string_view left, std::string_view right) const;
  // -log2(word_count / total_words).
  std::optional<double> unigram_information(std::string_view surface) const;

  std::optional<double> word_information(std::string_view word) const override {
    return unigram_information(word);
  }
  std::optional<double> pair_information(std::string_view left, std::string_view right) const override {
    return mutual_information(left, right);
  }

  template <typename Visit>
  void for_each_pair(Visit&& visit) const {
    for (const auto& [key, count] : pairs_) {
      visit(static_cast<WordId>(key >> 32), static_cast<WordId>(key & 0xffffffffU), count);
    }
  }

  // Ids of the `limit` most frequent words (by word_count; ties by id).
  std::vector<WordId> most_frequent(std::size_t limit) const;

  // Versioned text format; pairs are written sorted by (left, right) so
  // output is deterministic.
  void save(std::ostream& out) const;
  // Throws ModelFormatError on a bad header, truncation or inconsistent counts.
  static PairTable load(std::istream& in);

  friend bool operator==(const PairTable& a, const PairTable& b) {
    return a.words_.size() == b.words_.size() && a.observations_ == b.observations_ &&
           a.total_words_ == b.total_words_ && a.pairs_ == b.pairs_ && a.same_words(b);
  }

 private:
  static std::uint64_t key(WordId left, WordId right) {
    return (static_cast<std::uint64_t>(left) << 32) | right;
  }
  bool same_words(const PairTable& other) const;

  std::vector<WordStats> words_;
  std::unordered_map<std::string, WordId> ids_;
  std::unordered_map<std::uint64_t, std::uint64_t> pairs_;
  std::uint64_t observations_ = 0;
  std::uint64_t total_words_ = 0;
  std::uint64_t min_pair_count_ = 1;
};

// Pair probabilities of one sentence's tokens under a table:
// joint = n(x,y)/N and marginal = (n(w,*) + n(*,w)) / 2N.
class TableProbabilities : public PairProbabilities {
 public:
  TableProbabilities(const PairTable& table, const Sentence& sentence);
  std::size_t length() const override { return ids_.size(); }
  double marginal(std::size_t position) const override;
  double joint(std::size_t left, std::size_t right) const override;

 private:
  const PairTable& table_;
  std::vector<std::optional<WordId>> ids_;
};

// Attraction between the tokens of `sentence` under `table`, resolved
// through word ids looked up once. `table` must outlive the oracle.
AttractionOracle attraction_oracle(const PairTable& table, const Sentence& sentence);

void update_adjacent(PairTable& table, const Sentence& sentence);
void update_all_pairs(PairTable& table, const Sentence& sentence);
// Runs the approximation linker against `table` and records the pairs it
// attends to (see feedback_attends() in processor.hpp) once the sentence is
// linked. Returns the linkage.
Linkage update_feedback(PairTable& table, const Sentence& sentence);
void update(PairTable& table, const Sentence& sentence, UpdateProcedure procedure);

}  // namespace lexatt

#endif  // LEXATT_MEMORY_HPP
