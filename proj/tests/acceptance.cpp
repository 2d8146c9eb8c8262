// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lexatt/corpus.hpp"
#include "lexatt/eval.hpp"
#include "lexatt/linkage.hpp"
#include "lexatt/memory.hpp"
#include "lexatt/processor.hpp"
#include "lexatt/structures.hpp"
#include "oracles.hpp"
#include "trace_fixture.hpp"

using namespace lexatt;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

using Edges = std::vector<std::pair<std::size_t, std::size_t>>;

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1e", x);
  return buf;
}

Edges edges_of(const Linkage& l) {
  Edges out;
  for (const auto& link : l.links()) out.emplace_back(link.left, link.right);
  return out;
}

Outcome counting() {
  Outcome o;
  const int first[] = {1, 1, 3, 12, 55, 273, 1428};
  for (std::size_t n = 0; n < 7; ++n) o.require(count_structures(n).value == first[n], "f(" + std::to_string(n) + ")");
  auto f = oracle::count_by_recurrence(20);
  for (std::size_t n = 0; n <= 20; ++n) {
    o.require(count_structures(n).value == f[n], "closed form vs recurrence at n=" + std::to_string(n));
  }
  return o;
}

Outcome enumeration() {
  Outcome o;
  auto f = oracle::count_by_recurrence(8);
  for (std::size_t n = 0; n <= 8; ++n) {
    auto all = enumerate_structures(n);
    o.require(all.size() == count_structures(n).value, "count mismatch at n=" + std::to_string(n));
    o.require(count_structures(n).value == f[n], "recurrence mismatch at n=" + std::to_string(n));
    std::set<Edges> distinct;
    for (const auto& l : all) {
      o.require(is_planar(l) && is_acyclic(l) && is_spanning_tree(l), "bad structure at n=" + std::to_string(n));
      distinct.insert(edges_of(l));
    }
    o.require(distinct.size() == all.size(), "duplicate structure at n=" + std::to_string(n));
  }
  o.detail = "n=8 gives " + std::to_string(enumerate_structures(8).size());
  return o;
}

Outcome optimal_parser() {
  Outcome o;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-4.0, 8.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 4 + rng() % 5;
    std::vector<std::vector<double>> w(n, std::vector<double>(n));
    for (auto& row : w) {
      for (auto& x : row) x = u(rng);
    }
    AttractionOracle mi = [&](std::size_t i, std::size_t j) -> Attraction { return w[i][j]; };
    auto l = optimal_linkage(n, mi);
    double best = oracle::brute_force_best(n, [&](std::size_t i, std::size_t j) { return w[i][j]; });
    worst = std::max(worst, std::abs(l.total_attraction() - best));
    o.require(is_spanning_tree(l) && is_planar(l), "optimal output is not a planar tree");
  }
  o.require(worst <= 1e-9, "max deviation " + sci(worst));
  if (o.ok) o.detail = "max deviation " + sci(worst);
  return o;
}

Outcome head_invariance() {
  Outcome o;
  std::mt19937_64 rng(41);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t words = 1 + rng() % 8;
    std::vector<std::string> w;
    for (std::size_t k = 0; k < words; ++k) w.push_back("v" + std::to_string(rng() % 6));
    auto s = Sentence::from_words(w);
    auto all = enumerate_structures(s.size() - 1);
    const auto& tree = all[rng() % all.size()];

    PairTable table;
    std::vector<std::string> vocab{"*"};
    for (int k = 0; k < 6; ++k) vocab.push_back("v" + std::to_string(k));
    auto records = 50 + rng() % 500;
    for (std::uint64_t k = 0; k < records; ++k) table.record_pair(vocab[rng() % vocab.size()], vocab[rng() % vocab.size()]);
    for (const auto& link : tree.links()) table.record_pair(s[link.left].surface, s[link.right].surface);

    TableProbabilities p(table, s);
    double first = joint_neg_log_prob(tree, 0, p);
    for (std::size_t root = 1; root < s.size(); ++root) {
      worst = std::max(worst, std::abs(joint_neg_log_prob(tree, root, p) - first));
    }
  }
  o.require(worst <= 1e-9, "max deviation " + sci(worst));
  if (o.ok) o.detail = "max deviation " + sci(worst);
  return o;
}

Outcome entropy_identity() {
  Outcome o;
  std::mt19937_64 rng(51);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    PairTable table;
    std::size_t vocab = 3 + rng() % 10;
    auto sentences = 5 + rng() % 40;
    for (std::uint64_t k = 0; k < sentences; ++k) {
      std::vector<std::string> w;
      auto len = 1 + rng() % 10;
      for (std::uint64_t i = 0; i < len; ++i) w.push_back("u" + std::to_string(rng() % vocab));
      update(table, Sentence::from_words(w), static_cast<UpdateProcedure>(rng() % 3));
    }
    std::vector<std::string> w;
    auto len = 1 + rng() % 12;
    for (std::uint64_t i = 0; i < len; ++i) {
      WordId id = 0;
      do {
        id = static_cast<WordId>(rng() % table.vocabulary_size());
      } while (table.word(id).word_count == 0);
      w.push_back(table.word(id).surface);
    }
    auto s = Sentence::from_words(w);
    auto linkage = link_sentence(s.size(), attraction_oracle(table, s));
    auto info = info_breakdown(s, linkage, table);
    worst = std::max(worst, std::abs(info.identity_residual()));
  }
  o.require(worst <= 1e-9, "max residual " + sci(worst));
  double rate = 0.0;
  for (std::size_t n = 1; n <= 64; ++n) rate = std::max(rate, log2_big(count_structures(n).value) / static_cast<double>(n));
  o.require(rate <= 2.75, "coding rate " + std::to_string(rate));
  if (o.ok) o.detail = "max residual " + sci(worst) + ", max rate " + std::to_string(rate);
  return o;
}

Outcome trace_replay() {
  Outcome o;
  auto result = link_sentence(trace::kTokens.size(), trace::oracle());
  std::set<std::pair<std::size_t, std::size_t>> got;
  for (const auto& link : result.links()) got.emplace(link.left, link.right);
  o.require(got == trace::final_links(), "final linkage differs");
  return o;
}

Outcome linker_fuzz() {
  Outcome o;
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 10000; ++trial) {
    std::size_t n = rng() % 40;
    oracle::RandomOracle table(n, rng, 0.3, trial % 2 == 0);
    auto l = link_sentence(n, table.oracle());
    o.require(is_planar(l), "crossing links");
    o.require(is_acyclic(l), "cycle");
    for (const auto& link : l.links()) o.require(link.attraction > 0.0, "non-positive link");
  }
  return o;
}

Outcome bootstrapping() {
  Outcome o;
  constexpr std::uint64_t kWords = 2000000;
  constexpr std::size_t kHeldOut = 200;
  SynthConfig config;
  config.vocab_size = 1000;
  config.templates = default_templates();
  config.seed = 1;
  // Templates average about ten words; generate with margin and cut at the
  // checkpoint.
  config.sentence_count = kWords / 7 + kHeldOut;
  auto corpus = generate_synthetic(config);
  std::vector<Sentence> train(corpus.sentences.begin(), corpus.sentences.end() - kHeldOut);
  std::vector<GoldSentence> gold(corpus.gold.end() - kHeldOut, corpus.gold.end());

  double rand_p = 0.0;
  double rand_r = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto r = random_baseline(gold, seed);
    rand_p += r.precision / 10.0;
    rand_r += r.recall / 10.0;
  }
  auto run = [&](UpdateProcedure procedure) {
    CurveOptions options;
    options.procedure = procedure;
    options.checkpoints = {kWords};
    auto curve = learning_curve(train, gold, options);
    return curve.truncated ? Score{0.0, 0.0} : curve.points.back().score;
  };
  auto adjacent_run = std::async(std::launch::async, run, UpdateProcedure::adjacent);
  auto feedback = run(UpdateProcedure::feedback);
  auto adjacent = adjacent_run.get();

  char line[256];
  std::snprintf(line, sizeof line, "random %.3f/%.3f, adjacent %.3f/%.3f, feedback %.3f/%.3f (precision/recall)",
                rand_p, rand_r, adjacent.precision, adjacent.recall, feedback.precision, feedback.recall);
  o.detail = line;
  bool margins = feedback.precision - rand_p >= 0.20 && feedback.recall - rand_r >= 0.20;
  bool ranking = feedback.recall >= adjacent.recall;
  if (!margins || !ranking) {
    o.ok = false;
    o.detail += margins ? "; feedback recall below adjacent" : "; margin over random below 20 points";
  }
  return o;
}

Outcome mi_units() {
  Outcome o;
  PairTable hand;
  for (int k = 0; k < 8; ++k) hand.record_pair("x", "y");
  for (int k = 0; k < 8; ++k) hand.record_pair("x", "z");
  for (int k = 0; k < 24; ++k) hand.record_pair("w", "y");
  for (int k = 0; k < 984; ++k) hand.record_pair("u", "v");
  o.require(hand.mutual_information("x", "y") == 4.0, "hand case is not 4.0 bits");

  PairTable indep;
  for (int k = 0; k < 2; ++k) indep.record_pair("x", "y");
  for (int k = 0; k < 2; ++k) indep.record_pair("x", "q");
  for (int k = 0; k < 6; ++k) indep.record_pair("r", "y");
  for (int k = 0; k < 6; ++k) indep.record_pair("r", "s");
  o.require(indep.mutual_information("x", "y") == 0.0, "independence is not 0 bits");

  o.require(!hand.mutual_information("y", "x"), "unseen pair has a value");
  auto s = Sentence::from_words(std::vector<std::string>{"y", "x"});
  auto l = link_sentence(s.size(), attraction_oracle(hand, s));
  o.require(!l.contains(1, 2), "unseen pair was linked");
  return o;
}

Outcome round_trips() {
  Outcome o;
  SynthConfig config;
  config.templates = default_templates();
  config.sentence_count = 3000;
  config.seed = 5;
  auto corpus = generate_synthetic(config);
  PairTable table;
  for (const auto& s : corpus.sentences) update(table, s, UpdateProcedure::feedback);
  std::ostringstream saved;
  table.save(saved);
  std::istringstream in(saved.str());
  auto loaded = PairTable::load(in);
  o.require(loaded == table, "model counts differ after load");
  std::ostringstream resaved;
  loaded.save(resaved);
  o.require(resaved.str() == saved.str(), "re-saved model differs");

  std::ostringstream gold_out;
  write_gold(gold_out, corpus.gold);
  std::istringstream gold_in(gold_out.str());
  o.require(read_gold(gold_in) == corpus.gold, "gold file differs after reading back");

  for (std::size_t k = 0; k < 200; ++k) {
    const auto& s = corpus.sentences[k];
    auto l = link_sentence(s.size(), attraction_oracle(table, s));
    auto tokens = s.words();
    std::vector<std::string> all{"*"};
    all.insert(all.end(), tokens.begin(), tokens.end());
    all.push_back("*");
    auto doc = nlohmann::json::parse(linkage_to_json(all, l).dump());
    auto back = linkage_from_json(doc);
    o.require(back.tokens == all && back.linkage == l, "linkage JSON differs");
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;  // 0 for no limit
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "structure counting", 1.0, counting},
      {2, "enumeration cross-check", 30.0, enumeration},
      {3, "exact parser against brute force", 120.0, optimal_parser},
      {4, "root choice invariance", 0.0, head_invariance},
      {5, "information identity and coding rate", 0.0, entropy_identity},
      {6, "trace replay", 0.0, trace_replay},
      {7, "linker invariants under fuzz", 60.0, linker_fuzz},
      {8, "bootstrapping on a synthetic corpus", 600.0, bootstrapping},
      {9, "mutual information units", 0.0, mi_units},
      {10, "round-trip fidelity", 0.0, round_trips},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.ok = false;
      out.detail = std::string("exception: ") + e.what();
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0.0 && seconds > c.limit_seconds) {
      out.ok = false;
      out.detail += (out.detail.empty() ? "" : "; ") + std::string("over the time limit");
    }
    std::printf("%s %2d %s (%.2fs)%s%s\n", out.ok ? "PASS" : "FAIL", c.id, c.name, seconds,
                out.detail.empty() ? "" : ": ", out.detail.c_str());
    std::fflush(stdout);
    if (!out.ok) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
