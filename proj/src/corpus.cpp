#include "lexatt/corpus.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_map>

#include "lexatt/linkage.hpp"
#include "lexatt/structures.hpp"

namespace lexatt {

namespace {

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_ascii_punct(unsigned char c) {
  return (c >= 0x21 && c <= 0x2f) || (c >= 0x3a && c <= 0x40) || (c >= 0x5b && c <= 0x60) ||
         (c >= 0x7b && c <= 0x7e);
}

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

bool has_space(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return is_space(static_cast<unsigned char>(c)); });
}

// ASCII plus the Latin-1 supplement capitals (U+00C0..U+00DE, except U+00D7).
std::string lowercase(std::string_view s) {
  std::string out(s);
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto c = static_cast<unsigned char>(out[i]);
    if (c >= 'A' && c <= 'Z') {
      out[i] = static_cast<char>(c + 32);
    } else if (c == 0xC3 && i + 1 < out.size()) {
      auto d = static_cast<unsigned char>(out[i + 1]);
      if (d >= 0x80 && d <= 0x9E && d != 0x97) out[i + 1] = static_cast<char>(d + 0x20);
      ++i;
    }
  }
  return out;
}

// Length of the UTF-8 sequence starting at `lead`, or 0 if `lead` cannot start one.
int utf8_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if (lead >= 0xC2 && lead <= 0xDF) return 2;
  if (lead >= 0xE0 && lead <= 0xEF) return 3;
  if (lead >= 0xF0 && lead <= 0xF4) return 4;
  return 0;
}

bool valid_second(unsigned char lead, unsigned char c) {
  switch (lead) {
    case 0xE0: return c >= 0xA0 && c <= 0xBF;
    case 0xED: return c >= 0x80 && c <= 0x9F;
    case 0xF0: return c >= 0x90 && c <= 0xBF;
    case 0xF4: return c >= 0x80 && c <= 0x8F;
    default: return c >= 0x80 && c <= 0xBF;
  }
}

// Validates `word` whose first byte sits at input offset `base`.
void check_utf8(std::string_view word, std::size_t base) {
  std::size_t i = 0;
  while (i < word.size()) {
    auto lead = static_cast<unsigned char>(word[i]);
    int len = utf8_length(lead);
    if (len == 0) {
      throw DecodeError(base + i, "invalid UTF-8 lead byte at offset " + std::to_string(base + i));
    }
    for (int k = 1; k < len; ++k) {
      if (i + k >= word.size()) {
        throw DecodeError(base + i, "truncated UTF-8 sequence at offset " + std::to_string(base + i));
      }
      auto c = static_cast<unsigned char>(word[i + k]);
      bool ok = k == 1 ? valid_second(lead, c) : (c >= 0x80 && c <= 0xBF);
      if (!ok) {
        throw DecodeError(base + i + k,
                          "invalid UTF-8 continuation byte at offset " + std::to_string(base + i + k));
      }
    }
    i += static_cast<std::size_t>(len);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Sentence

Sentence::Sentence() : tokens_{Token::boundary(), Token::boundary()} {}

Sentence::Sentence(std::vector<Token> interior) {
  tokens_.reserve(interior.size() + 2);
  tokens_.push_back(Token::boundary());
  for (auto& t : interior) {
    if (t.is_boundary()) throw std::invalid_argument("interior boundary token");
    if (t.surface.empty() || has_space(t.surface)) {
      throw std::invalid_argument("token surface must be non-empty without whitespace: '" +
                                  t.surface + "'");
    }
    tokens_.push_back(std::move(t));
  }
  tokens_.push_back(Token::boundary());
}

Sentence Sentence::from_words(std::span<const std::string> words) {
  std::vector<Token> interior;
  interior.reserve(words.size());
  for (const auto& w : words) {
    bool punct = !w.empty() && std::all_of(w.begin(), w.end(), [](char c) {
      return is_ascii_punct(static_cast<unsigned char>(c));
    });
    interior.push_back({w, punct ? TokenKind::punctuation : TokenKind::word});
  }
  return Sentence(std::move(interior));
}

std::vector<std::string> Sentence::words() const {
  std::vector<std::string> out;
  out.reserve(interior_size());
  for (std::size_t i = 1; i + 1 < tokens_.size(); ++i) out.push_back(tokens_[i].surface);
  return out;
}

std::string Sentence::to_string() const {
  std::string out;
  for (const auto& t : tokens_) {
    if (!out.empty()) out += ' ';
    out += t.surface;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tokenizer

Tokenizer::Tokenizer(TokenizeOptions options) : options_(options) {
  if (options_.max_tokens < 3) throw std::invalid_argument("max_tokens must be at least 3");
}

void Tokenizer::feed(std::string_view chunk, const Sink& sink) {
  for (char c : chunk) {
    if (is_space(static_cast<unsigned char>(c))) {
      end_word(sink);
    } else {
      if (word_.empty()) word_offset_ = offset_;
      word_ += c;
    }
    ++offset_;
  }
}

void Tokenizer::finish(const Sink& sink) {
  end_word(sink);
  end_sentence(sink);
}

void Tokenizer::end_word(const Sink& sink) {
  if (word_.empty()) return;
  check_utf8(word_, word_offset_);
  std::string word = lowercase(word_);
  word_.clear();

  auto punct = [](char c) { return is_ascii_punct(static_cast<unsigned char>(c)); };
  std::size_t begin = 0;
  while (begin < word.size() && punct(word[begin])) ++begin;
  std::size_t end = word.size();
  while (end > begin && punct(word[end - 1])) --end;

  std::string_view view(word);
  std::string_view leading = view.substr(0, begin);
  std::string_view core = view.substr(begin, end - begin);
  std::string_view trailing = view.substr(end);
  if (core.empty()) {
    // All punctuation: split the run so that a terminator still ends the sentence.
    leading = {};
    trailing = view;
  }

  std::string rest;
  char terminator = 0;
  for (char c : trailing) {
    if (terminator == 0 && is_terminator(c)) {
      terminator = c;
    } else if (!is_terminator(c)) {
      rest += c;
    }
  }

  if (options_.keep_punctuation && !leading.empty()) {
    push_token({std::string(leading), TokenKind::punctuation}, sink);
  }
  if (!core.empty()) push_token({std::string(core), TokenKind::word}, sink);
  if (options_.keep_punctuation && !rest.empty()) {
    push_token({rest, TokenKind::punctuation}, sink);
  }
  if (terminator != 0) {
    push_token({std::string(1, terminator), TokenKind::punctuation}, sink);
    end_sentence(sink);
  }
}

void Tokenizer::push_token(Token token, const Sink& sink) {
  if (pending_.size() + 2 >= options_.max_tokens) end_sentence(sink);
  pending_.push_back(std::move(token));
}

void Tokenizer::end_sentence(const Sink& sink) {
  if (pending_.empty()) return;
  sink(Sentence(std::move(pending_)));
  pending_.clear();
}

std::vector<Sentence> tokenize(std::string_view text, const TokenizeOptions& options) {
  std::vector<Sentence> out;
  Tokenizer tokenizer(options);
  auto sink = [&out](Sentence&& s) { out.push_back(std::move(s)); };
  tokenizer.feed(text, sink);
  tokenizer.finish(sink);
  return out;
}

void tokenize_stream(std::istream& in, const Tokenizer::Sink& sink, const TokenizeOptions& options) {
  Tokenizer tokenizer(options);
  std::array<char, 1 << 16> buffer{};
  while (in) {
    in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    auto got = static_cast<std::size_t>(in.gcount());
    if (got == 0) break;
    tokenizer.feed(std::string_view(buffer.data(), got), sink);
  }
  tokenizer.finish(sink);
}

// ---------------------------------------------------------------------------
// Gold files

void GoldSentence::validate() const {
  if (content.size() != tokens.size()) {
    throw std::invalid_argument("flag count " + std::to_string(content.size()) +
                                " does not match token count " + std::to_string(tokens.size()));
  }
  Linkage linkage(tokens.size());
  for (auto [i, j] : links) {
    if (i >= j) {
      throw std::invalid_argument("link " + std::to_string(i) + "-" + std::to_string(j) +
                                  " must have i < j");
    }
    if (j >= tokens.size()) {
      throw std::invalid_argument("link " + std::to_string(i) + "-" + std::to_string(j) +
                                  " out of range");
    }
    if (linkage.contains(i, j)) {
      throw std::invalid_argument("duplicate link " + std::to_string(i) + "-" + std::to_string(j));
    }
    linkage.add({i, j, 0.0});
  }
  if (!is_planar(linkage)) throw std::invalid_argument("gold links cross");
  if (!is_acyclic(linkage)) throw std::invalid_argument("gold links contain a cycle");
}

Sentence GoldSentence::sentence() const { return Sentence::from_words(tokens); }

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string item;
  while (in >> item) out.push_back(item);
  return out;
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](char c) { return is_space(static_cast<unsigned char>(c)); });
}

}  // namespace

std::vector<GoldSentence> read_gold(std::istream& in) {
  std::vector<GoldSentence> out;
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::pair<std::size_t, std::string>> record;

  auto flush = [&]() {
    if (record.empty()) return;
    if (record.size() < 3) {
      throw GoldFormatError(record.back().first, "incomplete record (expected 3 lines)");
    }
    GoldSentence g;
    g.tokens = split_ws(record[0].second);
    if (g.tokens.empty()) throw GoldFormatError(record[0].first, "empty token line");
    for (const auto& f : split_ws(record[1].second)) {
      if (f == "C") {
        g.content.push_back(true);
      } else if (f == "F") {
        g.content.push_back(false);
      } else {
        throw GoldFormatError(record[1].first, "flag must be C or F, got '" + f + "'");
      }
    }
    for (const auto& l : split_ws(record[2].second)) {
      auto dash = l.find('-');
      std::size_t i = 0;
      std::size_t j = 0;
      try {
        if (dash == std::string::npos) throw std::invalid_argument(l);
        std::size_t used = 0;
        i = std::stoul(l.substr(0, dash), &used);
        if (used != dash) throw std::invalid_argument(l);
        j = std::stoul(l.substr(dash + 1), &used);
        if (used != l.size() - dash - 1) throw std::invalid_argument(l);
      } catch (const std::exception&) {
        throw GoldFormatError(record[2].first, "malformed link '" + l + "'");
      }
      g.links.emplace_back(i, j);
    }
    try {
      g.validate();
    } catch (const std::invalid_argument& e) {
      throw GoldFormatError(record[0].first, e.what());
    }
    out.push_back(std::move(g));
    record.clear();
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line[0] == '#') continue;
    if (record.size() == 3) {
      if (!blank(line)) throw GoldFormatError(lineno, "expected blank separator line");
      flush();
      continue;
    }
    if (record.empty() && blank(line)) continue;
    record.emplace_back(lineno, line);
  }
  flush();
  return out;
}

void write_gold(std::ostream& out, std::span<const GoldSentence> gold) {
  for (const auto& g : gold) {
    for (std::size_t i = 0; i < g.tokens.size(); ++i) out << (i ? " " : "") << g.tokens[i];
    out << '\n';
    for (std::size_t i = 0; i < g.content.size(); ++i) out << (i ? " " : "") << (g.content[i] ? 'C' : 'F');
    out << '\n';
    for (std::size_t i = 0; i < g.links.size(); ++i) {
      out << (i ? " " : "") << g.links[i].first << '-' << g.links[i].second;
    }
    out << "\n\n";
  }
}

// ---------------------------------------------------------------------------
// Synthetic generator

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct WordClass {
  std::string label;
  bool content = true;
  std::vector<std::size_t> ranks;  // 1-based global ranks
  std::vector<double> cumulative;  // running sum of 1/rank

  // Inverse CDF: u uniform in [0, 1) gives rank r with probability prop. to 1/r.
  std::size_t sample(double u) const {
    u *= cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    auto k = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
        it - cumulative.begin(), static_cast<std::ptrdiff_t>(ranks.size()) - 1));
    return ranks[k];
  }
};

// Slot generation order for a template: each slot after its governor.
struct TemplatePlan {
  std::vector<std::size_t> order;
  std::vector<std::ptrdiff_t> parent;  // -1 for component roots
  std::vector<std::size_t> cls;        // class index per slot
};

bool valid_label(const std::string& label) {
  return !label.empty() && std::all_of(label.begin(), label.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
  });
}

}  // namespace

void SynthConfig::validate() const {
  if (vocab_size == 0) throw std::invalid_argument("vocab_size must be positive");
  if (templates.empty()) throw std::invalid_argument("template set is empty");
  if (!(affinity >= 0.0 && affinity <= 1.0)) throw std::invalid_argument("affinity must lie in [0, 1]");
  if (!(function_affinity >= 0.0 && function_affinity <= 1.0)) {
    throw std::invalid_argument("function_affinity must lie in [0, 1]");
  }
  std::map<std::string, bool> labels;
  for (std::size_t t = 0; t < templates.size(); ++t) {
    const auto& tpl = templates[t];
    if (tpl.slots.empty()) throw std::invalid_argument("template " + std::to_string(t) + " has no slots");
    for (const auto& slot : tpl.slots) {
      if (!valid_label(slot.label)) {
        throw std::invalid_argument("slot label must be lowercase alphanumeric: '" + slot.label + "'");
      }
      auto [it, inserted] = labels.emplace(slot.label, slot.content);
      if (!inserted && it->second != slot.content) {
        throw std::invalid_argument("slot label '" + slot.label + "' has inconsistent content flags");
      }
    }
    GoldSentence shape;
    shape.tokens.assign(tpl.slots.size(), "x");
    shape.content.assign(tpl.slots.size(), true);
    for (auto [i, j] : tpl.links) shape.links.emplace_back(std::min(i, j), std::max(i, j));
    try {
      shape.validate();
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("template " + std::to_string(t) + ": " + e.what());
    }
  }
  if (vocab_size < labels.size()) {
    throw std::invalid_argument("vocab_size " + std::to_string(vocab_size) + " is smaller than the " +
                                std::to_string(labels.size()) + " distinct slots");
  }
}

std::vector<SentenceTemplate> default_templates() {
  // Pattern letters are word classes; d, p, c, o and x (determiner,
  // preposition, conjunction, pronoun, auxiliary) are function words.
  // A preposition heads its object and a conjunction heads the second
  // conjunct. parent[k] is the governor slot of slot k, -1 for the root.
  struct Clause {
    std::string pattern;
    std::vector<int> parent;
  };
  const std::vector<Clause> clauses{
      {"danxvdnpdan", {2, 2, 4, 4, -1, 6, 4, 4, 10, 10, 7}},
      {"oxrvdnpdncvo", {3, 3, 3, -1, 5, 3, 5, 8, 6, 3, 9, 10}},
      {"pdnovdan", {4, 2, 0, 4, -1, 7, 7, 4}},
      {"dnpdanvrcvdn", {1, 6, 1, 5, 5, 2, -1, 6, 6, 8, 11, 9}},
      {"ovdaanpn", {1, -1, 5, 5, 5, 1, 5, 6}},
      {"dnxrvpdncdn", {1, 4, 4, 4, -1, 4, 7, 5, 7, 10, 8}},
      {"danvdnpo", {2, 2, 3, -1, 5, 3, 3, 6}},
      {"nvnpdancnvr", {1, -1, 1, 2, 6, 6, 3, 1, 9, 7, 9}},
  };
  std::vector<SentenceTemplate> out;
  for (const auto& c : clauses) {
    SentenceTemplate t;
    for (char ch : c.pattern) {
      bool function = std::string_view("dpcox").find(ch) != std::string_view::npos;
      t.slots.push_back({std::string(1, ch), !function});
    }
    for (std::size_t k = 0; k < c.parent.size(); ++k) {
      if (c.parent[k] < 0) continue;
      auto g = static_cast<std::size_t>(c.parent[k]);
      t.links.emplace_back(std::min(k, g), std::max(k, g));
    }
    out.push_back(std::move(t));
  }
  return out;
}

SynthCorpus generate_synthetic(const SynthConfig& config) {
  config.validate();

  std::vector<WordClass> classes;
  std::map<std::string, std::size_t> class_index;
  for (const auto& tpl : config.templates) {
    for (const auto& slot : tpl.slots) {
      if (class_index.emplace(slot.label, classes.size()).second) {
        classes.push_back({slot.label, slot.content, {}, {}});
      }
    }
  }
  // Interleave global ranks across classes so every class spans the Zipf curve.
  for (std::size_t rank = 1; rank <= config.vocab_size; ++rank) {
    auto& cls = classes[(rank - 1) % classes.size()];
    cls.ranks.push_back(rank);
    double prev = cls.cumulative.empty() ? 0.0 : cls.cumulative.back();
    cls.cumulative.push_back(prev + 1.0 / static_cast<double>(rank));
  }
  std::vector<std::string> surfaces(config.vocab_size + 1);
  for (const auto& cls : classes) {
    for (auto r : cls.ranks) surfaces[r] = cls.label + std::to_string(r);
  }

  std::vector<TemplatePlan> plans;
  for (const auto& tpl : config.templates) {
    TemplatePlan plan;
    std::size_t n = tpl.slots.size();
    std::vector<std::vector<std::size_t>> adj(n);
    for (auto [i, j] : tpl.links) {
      adj[i].push_back(j);
      adj[j].push_back(i);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    plan.parent.assign(n, -1);
    plan.cls.resize(n);
    for (std::size_t s = 0; s < n; ++s) plan.cls[s] = class_index.at(tpl.slots[s].label);
    std::vector<bool> seen(n, false);
    // Visit components in order of their first content slot, rooting each there.
    std::vector<std::size_t> roots_order(n);
    std::iota(roots_order.begin(), roots_order.end(), 0);
    std::stable_partition(roots_order.begin(), roots_order.end(),
                          [&](std::size_t s) { return tpl.slots[s].content; });
    for (auto root : roots_order) {
      if (seen[root]) continue;
      seen[root] = true;
      std::size_t head = plan.order.size();
      plan.order.push_back(root);
      while (head < plan.order.size()) {
        auto u = plan.order[head++];
        for (auto v : adj[u]) {
          if (seen[v]) continue;
          seen[v] = true;
          plan.parent[v] = static_cast<std::ptrdiff_t>(u);
          plan.order.push_back(v);
        }
      }
    }
    plans.push_back(std::move(plan));
  }

  // A coupled dependent reuses its governor's uniform draw, rotated by a
  // seeded offset per class pair. Rotation preserves the uniform measure, so
  // each class keeps its exact Zipf marginal, and a governor word's quantile
  // interval lands on a contiguous band of only a few dependent words.
  auto rotate = [&](std::size_t head_cls, std::size_t cls, double u) {
    std::mt19937_64 local(splitmix64(config.seed ^ splitmix64(head_cls * classes.size() + cls + 1)));
    double shifted = u + unit(local);
    return shifted >= 1.0 ? shifted - 1.0 : shifted;
  };

  std::mt19937_64 rng(splitmix64(config.seed));
  SynthCorpus corpus;
  corpus.sentences.reserve(config.sentence_count);
  corpus.gold.reserve(config.sentence_count);
  for (std::size_t s = 0; s < config.sentence_count; ++s) {
    auto t = static_cast<std::size_t>(unit(rng) * static_cast<double>(config.templates.size()));
    t = std::min(t, config.templates.size() - 1);
    const auto& tpl = config.templates[t];
    const auto& plan = plans[t];
    std::vector<std::size_t> ranks(tpl.slots.size(), 0);
    std::vector<double> draws(tpl.slots.size(), 0.0);
    for (auto slot : plan.order) {
      auto cls = plan.cls[slot];
      auto parent = plan.parent[slot];
      double coupling = 0.0;
      if (parent >= 0) {
        bool content_pair = tpl.slots[slot].content && tpl.slots[static_cast<std::size_t>(parent)].content;
        coupling = content_pair ? config.affinity : config.function_affinity;
      }
      if (coupling > 0.0 && unit(rng) < coupling) {
        auto head = static_cast<std::size_t>(parent);
        draws[slot] = rotate(plan.cls[head], cls, draws[head]);
      } else {
        draws[slot] = unit(rng);
      }
      ranks[slot] = classes[cls].sample(draws[slot]);
    }

    GoldSentence g;
    std::vector<Token> interior;
    for (std::size_t k = 0; k < tpl.slots.size(); ++k) {
      g.tokens.push_back(surfaces[ranks[k]]);
      g.content.push_back(tpl.slots[k].content);
      interior.push_back({surfaces[ranks[k]], TokenKind::word});
    }
    g.tokens.emplace_back(".");
    g.content.push_back(false);
    interior.push_back({".", TokenKind::punctuation});
    for (auto [i, j] : tpl.links) g.links.emplace_back(std::min(i, j), std::max(i, j));
    std::sort(g.links.begin(), g.links.end());
    corpus.sentences.emplace_back(std::move(interior));
    corpus.gold.push_back(std::move(g));
  }
  return corpus;
}

}  // namespace lexatt
