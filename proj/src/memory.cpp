#include "lexatt/memory.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "lexatt/processor.hpp"

namespace lexatt {

std::string_view to_string(UpdateProcedure procedure) {
  switch (procedure) {
    case UpdateProcedure::adjacent: return "adjacent";
    case UpdateProcedure::all_pairs: return "all-pairs";
    case UpdateProcedure::feedback: return "feedback";
  }
  return "?";
}

std::optional<UpdateProcedure> parse_procedure(std::string_view name) {
  if (name == "adjacent") return UpdateProcedure::adjacent;
  if (name == "all-pairs") return UpdateProcedure::all_pairs;
  if (name == "feedback") return UpdateProcedure::feedback;
  return std::nullopt;
}

WordId PairTable::intern(std::string_view surface) {
  auto it = ids_.find(std::string(surface));
  if (it != ids_.end()) return it->second;
  auto id = static_cast<WordId>(words_.size());
  words_.push_back({std::string(surface), 0, 0, 0});
  ids_.emplace(std::string(surface), id);
  return id;
}

std::optional<WordId> PairTable::find(std::string_view surface) const {
  auto it = ids_.find(std::string(surface));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

void PairTable::record_pair(WordId left, WordId right) {
  ++pairs_[key(left, right)];
  ++words_[left].left_total;
  ++words_[right].right_total;
  ++observations_;
}

void PairTable::record_pair(std::string_view left, std::string_view right) {
  auto x = intern(left);
  auto y = intern(right);
  record_pair(x, y);
}

void PairTable::count_word(WordId id) {
  ++words_[id].word_count;
  ++total_words_;
}

void PairTable::count_word(std::string_view surface) { count_word(intern(surface)); }

std::uint64_t PairTable::pair_count(WordId left, WordId right) const {
  auto it = pairs_.find(key(left, right));
  return it == pairs_.end() ? 0 : it->second;
}

std::uint64_t PairTable::pair_count(std::string_view left, std::string_view right) const {
  auto x = find(left);
  auto y = find(right);
  return x && y ? pair_count(*x, *y) : 0;
}

std::optional<double> PairTable::mutual_information(WordId left, WordId right) const {
  auto n_xy = pair_count(left, right);
  if (n_xy == 0 || n_xy < min_pair_count_) return std::nullopt;
  auto n_x = words_[left].left_total;
  auto n_y = words_[right].right_total;
  if (n_x == 0 || n_y == 0) return std::nullopt;
  // Ratio formed in long double: n(x,y) N and n(x,*) n(*,y) can exceed 2^53.
  long double ratio = static_cast<long double>(n_xy) * static_cast<long double>(observations_) /
                      (static_cast<long double>(n_x) * static_cast<long double>(n_y));
  return static_cast<double>(std::log2(ratio));
}

std::optional<double> PairTable::mutual_information(std::string_view left, std::string_view right) const {
  auto x = find(left);
  auto y = find(right);
  if (!x || !y) return std::nullopt;
  return mutual_information(*x, *y);
}

std::optional<double> PairTable::unigram_information(std::string_view surface) const {
  auto id = find(surface);
  if (!id || total_words_ == 0 || words_[*id].word_count == 0) return std::nullopt;
  return -std::log2(static_cast<double>(words_[*id].word_count) / static_cast<double>(total_words_));
}

std::vector<WordId> PairTable::most_frequent(std::size_t limit) const {
  std::vector<WordId> ids(words_.size());
  for (WordId k = 0; k < ids.size(); ++k) ids[k] = k;
  auto by_count = [this](WordId a, WordId b) {
    return words_[a].word_count != words_[b].word_count ? words_[a].word_count > words_[b].word_count : a < b;
  };
  if (limit < ids.size()) {
    std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(limit), ids.end(), by_count);
    ids.resize(limit);
  } else {
    std::sort(ids.begin(), ids.end(), by_count);
  }
  return ids;
}

bool PairTable::same_words(const PairTable& other) const {
  for (std::size_t k = 0; k < words_.size(); ++k) {
    const auto& a = words_[k];
    const auto& b = other.words_[k];
    if (a.surface != b.surface || a.word_count != b.word_count || a.left_total != b.left_total ||
        a.right_total != b.right_total) {
      return false;
    }
  }
  return true;
}

void PairTable::save(std::ostream& out) const {
  out << kMagic << '\n';
  out << "N " << observations_ << " TOTAL_WORDS " << total_words_ << '\n';
  for (std::size_t k = 0; k < words_.size(); ++k) {
    const auto& w = words_[k];
    out << "W " << k << ' ' << w.surface << ' ' << w.word_count << ' ' << w.left_total << ' ' << w.right_total
        << '\n';
  }
  std::vector<std::pair<std::uint64_t, std::uint64_t>> sorted(pairs_.begin(), pairs_.end());
  std::sort(sorted.begin(), sorted.end());
  for (const auto& [k, count] : sorted) {
    out << "P " << (k >> 32) << ' ' << (k & 0xffffffffU) << ' ' << count << '\n';
  }
}

PairTable PairTable::load(std::istream& in) {
  PairTable table;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& what) -> ModelFormatError {
    return ModelFormatError("model line " + std::to_string(lineno) + ": " + what);
  };

  ++lineno;
  if (!std::getline(in, line) || line != kMagic) {
    throw fail("expected header '" + std::string(kMagic) + "'");
  }
  ++lineno;
  if (!std::getline(in, line)) throw fail("truncated: missing totals line");
  {
    std::istringstream fields(line);
    std::string n_tag;
    std::string tw_tag;
    if (!(fields >> n_tag >> table.observations_ >> tw_tag >> table.total_words_) || n_tag != "N" ||
        tw_tag != "TOTAL_WORDS") {
      throw fail("expected 'N <observations> TOTAL_WORDS <count>'");
    }
  }

  std::uint64_t pair_sum = 0;
  std::uint64_t word_sum = 0;
  bool in_pairs = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string tag;
    fields >> tag;
    if (tag == "W") {
      if (in_pairs) throw fail("word record after pair records");
      std::size_t id = 0;
      WordStats w;
      if (!(fields >> id >> w.surface >> w.word_count >> w.left_total >> w.right_total)) {
        throw fail("malformed word record");
      }
      if (id != table.words_.size()) throw fail("word ids must be dense and in order");
      if (table.ids_.count(w.surface)) throw fail("duplicate word '" + w.surface + "'");
      table.ids_.emplace(w.surface, static_cast<WordId>(id));
      word_sum += w.word_count;
      table.words_.push_back(std::move(w));
    } else if (tag == "P") {
      in_pairs = true;
      std::size_t left = 0;
      std::size_t right = 0;
      std::uint64_t count = 0;
      if (!(fields >> left >> right >> count)) throw fail("malformed pair record");
      if (left >= table.words_.size() || right >= table.words_.size()) throw fail("pair id out of range");
      if (count == 0) throw fail("zero pair count");
      if (!table.pairs_.emplace(key(static_cast<WordId>(left), static_cast<WordId>(right)), count).second) {
        throw fail("duplicate pair record");
      }
      pair_sum += count;
    } else {
      throw fail("unknown record tag '" + tag + "'");
    }
  }

  std::uint64_t left_sum = 0;
  std::uint64_t right_sum = 0;
  for (const auto& w : table.words_) {
    left_sum += w.left_total;
    right_sum += w.right_total;
  }
  if (pair_sum != table.observations_ || left_sum != table.observations_ || right_sum != table.observations_) {
    throw ModelFormatError("inconsistent counts: N=" + std::to_string(table.observations_) +
                           ", pair sum=" + std::to_string(pair_sum) + ", left sum=" + std::to_string(left_sum) +
                           ", right sum=" + std::to_string(right_sum) + " (truncated file?)");
  }
  if (word_sum != table.total_words_) {
    throw ModelFormatError("inconsistent counts: TOTAL_WORDS=" + std::to_string(table.total_words_) +
                           ", word sum=" + std::to_string(word_sum));
  }
  return table;
}

TableProbabilities::TableProbabilities(const PairTable& table, const Sentence& sentence) : table_(table) {
  for (const auto& t : sentence.tokens()) ids_.push_back(table.find(t.surface));
}

double TableProbabilities::marginal(std::size_t position) const {
  auto id = ids_.at(position);
  if (!id || table_.observations() == 0) return 0.0;
  const auto& w = table_.word(*id);
  return static_cast<double>(w.left_total + w.right_total) / (2.0 * static_cast<double>(table_.observations()));
}

double TableProbabilities::joint(std::size_t left, std::size_t right) const {
  auto x = ids_.at(left);
  auto y = ids_.at(right);
  if (!x || !y || table_.observations() == 0) return 0.0;
  return static_cast<double>(table_.pair_count(*x, *y)) / static_cast<double>(table_.observations());
}

namespace {

std::vector<WordId> intern_sentence(PairTable& table, const Sentence& sentence) {
  std::vector<WordId> ids;
  ids.reserve(sentence.size());
  for (const auto& t : sentence.tokens()) {
    auto id = table.intern(t.surface);
    if (!t.is_boundary()) table.count_word(id);
    ids.push_back(id);
  }
  return ids;
}

}  // namespace

AttractionOracle attraction_oracle(const PairTable& table, const Sentence& sentence) {
  std::vector<std::optional<WordId>> ids;
  ids.reserve(sentence.size());
  for (const auto& t : sentence.tokens()) ids.push_back(table.find(t.surface));
  return [&table, ids = std::move(ids)](std::size_t left, std::size_t right) -> Attraction {
    if (!ids[left] || !ids[right]) return std::nullopt;
    return table.mutual_information(*ids[left], *ids[right]);
  };
}

// A sentence with no interior tokens is not recorded by the adjacent and
// feedback procedures.
void update_adjacent(PairTable& table, const Sentence& sentence) {
  if (sentence.interior_size() == 0) return;
  auto ids = intern_sentence(table, sentence);
  for (std::size_t k = 0; k + 1 < ids.size(); ++k) table.record_pair(ids[k], ids[k + 1]);
}

void update_all_pairs(PairTable& table, const Sentence& sentence) {
  auto ids = intern_sentence(table, sentence);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) table.record_pair(ids[i], ids[j]);
  }
}

Linkage update_feedback(PairTable& table, const Sentence& sentence) {
  if (sentence.interior_size() == 0) return Linkage(sentence.size());
  auto ids = intern_sentence(table, sentence);
  auto oracle = [&](std::size_t left, std::size_t right) -> Attraction {
    return table.mutual_information(ids[left], ids[right]);
  };
  // Attended pairs are committed after the pass so that a sentence never
  // reads its own counts.
  std::vector<std::pair<WordId, WordId>> attended;
  auto observe = [&](const Linkage& current, std::size_t left, std::size_t right) {
    if (feedback_attends(current, left, right)) attended.emplace_back(ids[left], ids[right]);
  };
  auto linkage = link_sentence(sentence.size(), oracle, observe);
  for (auto [x, y] : attended) table.record_pair(x, y);
  return linkage;
}

void update(PairTable& table, const Sentence& sentence, UpdateProcedure procedure) {
  switch (procedure) {
    case UpdateProcedure::adjacent: update_adjacent(table, sentence); break;
    case UpdateProcedure::all_pairs: update_all_pairs(table, sentence); break;
    case UpdateProcedure::feedback: update_feedback(table, sentence); break;
  }
}

}  // namespace lexatt
