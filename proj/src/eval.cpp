#include "lexatt/eval.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "lexatt/processor.hpp"

namespace lexatt {

Score Score::from_counts(std::size_t predicted, std::size_t gold, std::size_t correct) {
  Score s;
  s.predicted = predicted;
  s.gold = gold;
  s.correct = correct;
  s.precision = predicted == 0 ? 1.0 : static_cast<double>(correct) / static_cast<double>(predicted);
  s.recall = gold == 0 ? 1.0 : static_cast<double>(correct) / static_cast<double>(gold);
  return s;
}

nlohmann::json Score::to_json() const {
  return {{"precision", precision}, {"recall", recall}, {"predicted", predicted}, {"gold", gold},
          {"correct", correct}};
}

Score score(std::span<const Linkage> predicted, std::span<const GoldSentence> gold, bool content_only) {
  if (predicted.size() != gold.size()) {
    throw ScoreError("got " + std::to_string(predicted.size()) + " linkages for " + std::to_string(gold.size()) +
                     " gold sentences");
  }
  std::size_t n_pred = 0;
  std::size_t n_gold = 0;
  std::size_t n_correct = 0;
  for (std::size_t k = 0; k < gold.size(); ++k) {
    const auto& g = gold[k];
    const auto& p = predicted[k];
    if (p.length() != g.tokens.size() + 2) {
      throw ScoreError("sentence " + std::to_string(k) + ": linkage over " + std::to_string(p.length()) +
                       " tokens, gold has " + std::to_string(g.tokens.size()) + " (+2 boundaries)");
    }
    auto keep = [&](std::size_t i, std::size_t j) { return !content_only || (g.content[i] && g.content[j]); };

    std::set<std::pair<std::size_t, std::size_t>> gold_links;
    for (auto [i, j] : g.links) {
      if (keep(i, j)) gold_links.emplace(i, j);
    }
    n_gold += gold_links.size();
    for (const auto& l : p.links()) {
      if (l.left == 0 || l.right + 1 == p.length()) continue;
      std::size_t i = l.left - 1;
      std::size_t j = l.right - 1;
      if (!keep(i, j)) continue;
      ++n_pred;
      if (gold_links.count({i, j})) ++n_correct;
    }
  }
  return Score::from_counts(n_pred, n_gold, n_correct);
}

double positive_mi_ceiling(std::span<const GoldSentence> gold, const PairTable& model) {
  std::size_t total = 0;
  std::size_t positive = 0;
  for (const auto& g : gold) {
    for (auto [i, j] : g.links) {
      if (!g.content[i] || !g.content[j]) continue;
      ++total;
      auto forward = model.mutual_information(g.tokens[i], g.tokens[j]);
      auto backward = model.mutual_information(g.tokens[j], g.tokens[i]);
      if ((forward && *forward > 0.0) || (backward && *backward > 0.0)) ++positive;
    }
  }
  return total == 0 ? 1.0 : static_cast<double>(positive) / static_cast<double>(total);
}

Score random_baseline(std::span<const GoldSentence> gold, std::uint64_t seed, bool content_only) {
  std::mt19937_64 rng(seed);
  std::map<std::pair<std::string, std::string>, double> drawn;
  std::vector<Linkage> predicted;
  predicted.reserve(gold.size());
  for (const auto& g : gold) {
    Sentence s = g.sentence();
    auto oracle = [&](std::size_t left, std::size_t right) -> Attraction {
      auto key = std::make_pair(s[left].surface, s[right].surface);
      auto it = drawn.find(key);
      if (it == drawn.end()) {
        double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        it = drawn.emplace(std::move(key), 2.0 * u - 1.0).first;
      }
      return it->second;
    };
    predicted.push_back(link_sentence(s.size(), oracle));
  }
  return score(predicted, gold, content_only);
}

std::vector<Linkage> parse_all(const PairTable& table, std::span<const Sentence> sentences,
                               const ParseOptions& options) {
  std::vector<Linkage> out(sentences.size());
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t k = first; k < sentences.size(); k += stride) {
      auto oracle = attraction_oracle(table, sentences[k]);
      out[k] = options.optimal ? optimal_linkage(sentences[k].size(), oracle)
                               : link_sentence(sentences[k].size(), oracle);
    }
  };
  std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, sentences.size()));
  if (jobs == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < jobs; ++t) threads.emplace_back(work, t, jobs);
    for (auto& th : threads) th.join();
  }
  return out;
}

std::vector<GoldSentence> restrict_vocabulary(std::span<const GoldSentence> gold, const PairTable& table,
                                              std::size_t limit) {
  if (limit == 0) return {gold.begin(), gold.end()};
  std::unordered_set<std::string> vocab;
  for (auto id : table.most_frequent(limit)) vocab.insert(table.word(id).surface);
  std::vector<GoldSentence> out;
  for (const auto& g : gold) {
    bool ok = std::all_of(g.tokens.begin(), g.tokens.end(), [&](const std::string& w) { return vocab.count(w) > 0; });
    if (ok) out.push_back(g);
  }
  return out;
}

LearningCurve learning_curve(std::span<const Sentence> corpus, std::span<const GoldSentence> gold,
                             const CurveOptions& options) {
  LearningCurve curve;
  curve.table.set_min_pair_count(options.min_pair_count);
  std::vector<std::uint64_t> checkpoints = options.checkpoints;
  std::sort(checkpoints.begin(), checkpoints.end());

  auto evaluate = [&](std::uint64_t checkpoint) {
    auto test = restrict_vocabulary(gold, curve.table, options.vocab_limit);
    std::vector<Sentence> sentences;
    sentences.reserve(test.size());
    for (const auto& g : test) sentences.push_back(g.sentence());
    auto predicted = parse_all(curve.table, sentences, {false, options.jobs});
    curve.points.push_back({curve.table.total_words(), checkpoint, test.size(),
                            score(predicted, test, options.content_only)});
  };

  std::size_t next = 0;
  for (const auto& sentence : corpus) {
    while (next < checkpoints.size() && curve.table.total_words() >= checkpoints[next]) evaluate(checkpoints[next++]);
    if (next == checkpoints.size()) break;
    update(curve.table, sentence, options.procedure);
  }
  while (next < checkpoints.size() && curve.table.total_words() >= checkpoints[next]) evaluate(checkpoints[next++]);
  if (next < checkpoints.size()) {
    curve.truncated = true;
    if (options.notice) {
      options.notice("corpus has " + std::to_string(curve.table.total_words()) + " words; dropped " +
                     std::to_string(checkpoints.size() - next) + " checkpoint(s) beyond it");
    }
  }
  return curve;
}

std::string curve_to_csv(const LearningCurve& curve) {
  std::ostringstream out;
  out << "words,precision,recall\n";
  for (const auto& p : curve.points) out << p.words << ',' << p.score.precision << ',' << p.score.recall << '\n';
  return out.str();
}

}  // namespace lexatt
