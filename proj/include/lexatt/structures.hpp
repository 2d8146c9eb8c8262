// Combinatorics and information accounting for planar dependency
// structures.

#ifndef LEXATT_STRUCTURES_HPP
#define LEXATT_STRUCTURES_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lexatt/corpus.hpp"
#include "lexatt/linkage.hpp"

namespace lexatt {

using BigInt = boost::multiprecision::cpp_int;

// Number of planar dependency structures over n words plus one head.
struct StructureCount {
  std::size_t n = 0;
  BigInt value;
};

// C(3n, n) / (2n + 1), exact.
StructureCount count_structures(std::size_t n);

// log2 of a positive big integer, accurate to double precision.
double log2_big(const BigInt& value);

// log2 f(m - 1): bits to encode one of the uniformly likely structures over
// m tokens. Zero for m <= 1.
double structure_bits(std::size_t tokens);

class EnumerationTooLarge : public std::runtime_error {
 public:
  EnumerationTooLarge(std::size_t n, BigInt count)
      : std::runtime_error("refusing to enumerate n=" + std::to_string(n) + ": would produce " +
                           count.str() + " structures"),
        count_(std::move(count)) {}
  const BigInt& count() const { return count_; }

 private:
  BigInt count_;
};

inline constexpr std::size_t kMaxEnumeration = 10;

// Visits every planar spanning tree over tokens 0..n exactly once, built by
// the nearest-child / right-subtree / remainder span decomposition.
void for_each_structure(std::size_t n, const std::function<void(const Linkage&)>& visit);

// Every planar spanning tree over tokens 0..n, each exactly once. Throws
// EnumerationTooLarge for n > kMaxEnumeration.
std::vector<Linkage> enumerate_structures(std::size_t n);

// No two links (a,b), (c,d) with a < c < b < d.
bool is_planar(const Linkage& linkage);
bool is_acyclic(const Linkage& linkage);
bool is_spanning_tree(const Linkage& linkage);

// Probabilities over the token positions of one sentence. Conditionals are
// derived as joint / marginal(governor).
class PairProbabilities {
 public:
  virtual ~PairProbabilities() = default;
  virtual std::size_t length() const = 0;
  virtual double marginal(std::size_t position) const = 0;
  // Joint probability of the tokens at `left` < `right` in that order.
  virtual double joint(std::size_t left, std::size_t right) const = 0;
};

// -log2 P(S) = -log2 P(L) - log2 P(w_root) - sum log2 P(dependent | governor),
// with links directed away from `root` and P(L) uniform over planar
// structures. Returns +infinity when a link has zero joint probability.
// Throws std::invalid_argument unless `linkage` is a spanning tree.
double joint_neg_log_prob(const Linkage& linkage, std::size_t root, const PairProbabilities& model);

// Word-level information queries, in bits. Absent means the model has no
// evidence for the word or pair.
class InformationModel {
 public:
  virtual ~InformationModel() = default;
  virtual std::optional<double> word_information(std::string_view word) const = 0;
  virtual std::optional<double> pair_information(std::string_view left, std::string_view right) const = 0;
};

struct InfoBreakdown {
  double word_bits = 0.0;
  double structure_bits = 0.0;
  double mutual_info_bits = 0.0;
  double total_bits = 0.0;

  // The encoding of the words alone, structure choice excluded.
  double total_without_structure() const { return total_bits - structure_bits; }
  // word + structure - mutual information, evaluated directly.
  double identity_residual() const { return total_bits - (word_bits + structure_bits - mutual_info_bits); }
};

class UnseenWordError : public std::runtime_error {
 public:
  explicit UnseenWordError(std::vector<std::string> words);
  const std::vector<std::string>& words() const { return words_; }

 private:
  std::vector<std::string> words_;
};

// Information accounting over the sentence's interior tokens. Links that
// touch a boundary are not part of the encoding. total_bits is accumulated
// word by word: each component root costs its unigram information, every
// other word its information given its governor.
// Throws UnseenWordError listing unseen words, std::invalid_argument for a
// link whose pair has no attraction in the model or for a non-forest.
InfoBreakdown info_breakdown(const Sentence& sentence, const Linkage& linkage, const InformationModel& model);

}  // namespace lexatt

#endif  // LEXATT_STRUCTURES_HPP
