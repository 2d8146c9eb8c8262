#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lexatt/corpus.hpp"
#include "lexatt/eval.hpp"
#include "lexatt/linkage.hpp"
#include "lexatt/memory.hpp"
#include "lexatt/processor.hpp"
#include "lexatt/structures.hpp"

using namespace lexatt;
using nlohmann::json;

namespace {

// Bad input data, as opposed to a bad command line.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string model;
  std::string input = "-";
  std::string output = "-";
  std::string corpus;
  std::string gold;
  std::string gold_out;
  std::string predicted;
  std::string procedure = "feedback";
  std::string format = "text";
  std::string checkpoints;
  std::string baseline;
  std::uint64_t min_pair_count = 1;
  std::uint64_t seed = 1;
  std::uint64_t progress = 100000;
  std::size_t max_tokens = 64;
  std::size_t vocab_limit = 0;
  std::size_t jobs = 1;
  std::size_t sentences = 1000;
  std::size_t vocab = 1000;
  std::size_t n = 0;
  std::string structures_action;
  double affinity = 0.8;
  double function_affinity = 0.3;
  bool optimal = false;
  bool content_only = true;
  bool ceiling = false;
  bool keep_punctuation = false;
  bool quiet = false;
};

std::vector<std::uint64_t> parse_checkpoints(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    unsigned long long value = 0;
    try {
      value = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || item[0] == '-') throw CLI::ValidationError("--checkpoints", "not a word count: " + item);
    out.push_back(value);
  }
  return out;
}

class Input {
 public:
  explicit Input(const std::string& path) {
    if (path == "-") return;
    file_ = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!*file_) throw DataError("cannot read " + path);
  }
  std::istream& stream() { return file_ ? *file_ : std::cin; }

 private:
  std::unique_ptr<std::ifstream> file_;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw DataError("cannot write " + path);
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void close(const std::string& path) {
    stream().flush();
    if (!stream()) throw DataError("write failed on " + path);
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::vector<Sentence> read_sentences(const Config& c) {
  Input in(c.input);
  TokenizeOptions opt;
  opt.keep_punctuation = c.keep_punctuation;
  opt.max_tokens = c.max_tokens;
  std::vector<Sentence> out;
  tokenize_stream(in.stream(), [&](Sentence&& s) { out.push_back(std::move(s)); }, opt);
  return out;
}

std::vector<GoldSentence> load_gold(const std::string& path) {
  Input in(path);
  try {
    return read_gold(in.stream());
  } catch (const GoldFormatError& e) {
    throw DataError(path + ": " + e.what());
  }
}

PairTable load_model(const Config& c) {
  Input in(c.model);
  try {
    auto table = PairTable::load(in.stream());
    table.set_min_pair_count(c.min_pair_count);
    return table;
  } catch (const ModelFormatError& e) {
    throw DataError(c.model + ": " + e.what());
  }
}

std::vector<std::string> tokens_of(const Sentence& s) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < s.size(); ++k) out.push_back(s[k].surface);
  return out;
}

void log(const Config& c, const std::string& line) {
  if (!c.quiet) std::cerr << line << '\n';
}

std::string table_summary(const PairTable& t) {
  return std::to_string(t.total_words()) + " words, " + std::to_string(t.vocabulary_size()) + " types, " +
         std::to_string(t.distinct_pairs()) + " distinct pairs, " + std::to_string(t.observations()) +
         " pair observations";
}

int cmd_train(const Config& c) {
  auto procedure = parse_procedure(c.procedure);
  auto checkpoints = parse_checkpoints(c.checkpoints);
  std::sort(checkpoints.begin(), checkpoints.end());
  Input in(c.input);
  Output out(c.model);  // opened first so an unwritable path fails before training

  PairTable table;
  table.set_min_pair_count(c.min_pair_count);
  TokenizeOptions opt;
  opt.keep_punctuation = c.keep_punctuation;
  opt.max_tokens = c.max_tokens;
  std::uint64_t next_progress = c.progress;
  std::size_t next_checkpoint = 0;
  tokenize_stream(
      in.stream(),
      [&](Sentence&& s) {
        update(table, s, *procedure);
        while (c.progress > 0 && table.total_words() >= next_progress) {
          log(c, "progress: " + table_summary(table));
          next_progress += c.progress;
        }
        while (next_checkpoint < checkpoints.size() && table.total_words() >= checkpoints[next_checkpoint]) {
          log(c, "checkpoint " + std::to_string(checkpoints[next_checkpoint++]) + ": " + table_summary(table));
        }
      },
      opt);
  table.save(out.stream());
  out.close(c.model);
  log(c, "trained (" + c.procedure + "): " + table_summary(table));
  return 0;
}

json linkage_json(const Sentence& s, const Linkage& l) { return linkage_to_json(tokens_of(s), l); }

int cmd_parse(const Config& c) {
  auto table = load_model(c);
  auto sentences = read_sentences(c);
  if (c.optimal) log(c, "note: optimal parsing scores absent pairs as -1e6 bits so that a spanning tree always exists");
  auto linkages = parse_all(table, sentences, {c.optimal, c.jobs});
  Output out(c.output);
  auto& os = out.stream();
  for (std::size_t k = 0; k < sentences.size(); ++k) {
    const auto& s = sentences[k];
    const auto& l = linkages[k];
    if (c.format == "json") {
      os << linkage_json(s, l).dump() << '\n';
      continue;
    }
    auto tokens = tokens_of(s);
    auto art = render_arcs(tokens, l);
    if (art) {
      os << *art;
    } else {
      os << linkage_json(s, l).dump() << '\n';
    }
    for (const auto& link : l.links()) {
      char mi[32];
      std::snprintf(mi, sizeof mi, "%.4f", link.attraction);
      os << "  " << link.left << '-' << link.right << ' ' << tokens[link.left] << ' ' << tokens[link.right] << ' '
         << mi << '\n';
    }
    os << '\n';
  }
  out.close(c.output);
  return 0;
}

void print_score(const Config& c, std::ostream& os, const Score& s, const std::string& label) {
  if (c.format == "json") {
    auto doc = s.to_json();
    doc["kind"] = label;
    os << doc.dump() << '\n';
  } else if (c.format == "csv") {
    os << "kind,precision,recall,correct,predicted,gold\n"
       << label << ',' << s.precision << ',' << s.recall << ',' << s.correct << ',' << s.predicted << ',' << s.gold
       << '\n';
  } else {
    char line[160];
    std::snprintf(line, sizeof line, "%s: precision %.4f recall %.4f (%zu correct, %zu predicted, %zu gold)",
                  label.c_str(), s.precision, s.recall, s.correct, s.predicted, s.gold);
    os << line << '\n';
  }
}

int cmd_eval(const Config& c) {
  auto gold = load_gold(c.gold);
  Output out(c.output);
  auto& os = out.stream();

  if (!c.corpus.empty()) {
    auto checkpoints = parse_checkpoints(c.checkpoints);
    if (checkpoints.empty()) throw CLI::ValidationError("--checkpoints", "a learning curve needs checkpoints");
    Config cc = c;
    cc.input = c.corpus;
    auto corpus = read_sentences(cc);
    CurveOptions opt;
    opt.procedure = *parse_procedure(c.procedure);
    opt.checkpoints = checkpoints;
    opt.vocab_limit = c.vocab_limit;
    opt.min_pair_count = c.min_pair_count;
    opt.content_only = c.content_only;
    opt.jobs = c.jobs;
    opt.notice = [&](const std::string& msg) { log(c, "notice: " + msg); };
    auto curve = learning_curve(corpus, gold, opt);
    if (c.format == "json") {
      json points = json::array();
      for (const auto& p : curve.points) {
        auto doc = p.score.to_json();
        doc["words"] = p.words;
        doc["checkpoint"] = p.checkpoint;
        doc["test_sentences"] = p.test_sentences;
        points.push_back(doc);
      }
      os << json{{"procedure", c.procedure}, {"truncated", curve.truncated}, {"points", points}}.dump() << '\n';
    } else {
      os << curve_to_csv(curve);
    }
    out.close(c.output);
    return 0;
  }

  if (c.baseline == "random") {
    print_score(c, os, random_baseline(gold, c.seed, c.content_only), "random");
    out.close(c.output);
    return 0;
  }

  if (!c.predicted.empty()) {
    auto predicted = load_gold(c.predicted);
    std::vector<Linkage> linkages;
    for (const auto& p : predicted) {
      Linkage l(p.tokens.size() + 2);
      for (auto [i, j] : p.links) l.add({i + 1, j + 1, 0.0});
      linkages.push_back(std::move(l));
    }
    for (std::size_t k = 0; k < std::min(predicted.size(), gold.size()); ++k) {
      if (predicted[k].tokens != gold[k].tokens) throw DataError("sentence " + std::to_string(k) + ": tokens differ from gold");
    }
    try {
      print_score(c, os, score(linkages, gold, c.content_only), "predicted");
    } catch (const ScoreError& e) {
      throw DataError(e.what());
    }
    out.close(c.output);
    return 0;
  }

  if (c.model.empty()) throw CLI::ValidationError("eval", "give --model, --predicted, --baseline random or --corpus");
  auto table = load_model(c);
  auto test = restrict_vocabulary(gold, table, c.vocab_limit);
  if (test.size() != gold.size()) {
    log(c, "note: " + std::to_string(test.size()) + " of " + std::to_string(gold.size()) +
               " gold sentences within the vocabulary limit");
  }
  if (c.ceiling) {
    double ceiling = positive_mi_ceiling(test, table);
    if (c.format == "json") {
      os << json{{"kind", "ceiling"}, {"recall", ceiling}}.dump() << '\n';
    } else if (c.format == "csv") {
      os << "kind,recall\nceiling," << ceiling << '\n';
    } else {
      char line[80];
      std::snprintf(line, sizeof line, "ceiling: recall %.4f", ceiling);
      os << line << '\n';
    }
    out.close(c.output);
    return 0;
  }
  std::vector<Sentence> sentences;
  for (const auto& g : test) sentences.push_back(g.sentence());
  if (c.optimal) log(c, "note: optimal parsing scores absent pairs as -1e6 bits so that a spanning tree always exists");
  auto linkages = parse_all(table, sentences, {c.optimal, c.jobs});
  print_score(c, os, score(linkages, test, c.content_only), c.optimal ? "optimal" : "greedy");
  out.close(c.output);
  return 0;
}

int cmd_structures(const Config& c) {
  Output out(c.output);
  auto& os = out.stream();
  if (c.structures_action == "count") {
    auto count = count_structures(c.n);
    if (c.format == "json") {
      os << json{{"n", c.n}, {"count", count.value.str()}}.dump() << '\n';
    } else if (c.format == "csv") {
      os << "n,count\n" << c.n << ',' << count.value << '\n';
    } else {
      os << count.value << '\n';
    }
  } else {
    if (c.n > kMaxEnumeration) throw EnumerationTooLarge(c.n, count_structures(c.n).value);
    std::vector<std::string> tokens;
    tokens.push_back("*");
    for (std::size_t k = 1; k <= c.n; ++k) tokens.push_back("w" + std::to_string(k));
    for_each_structure(c.n, [&](const Linkage& l) {
      if (c.format == "text") {
        auto art = render_arcs(tokens, l);
        os << (art ? *art : linkage_to_json(tokens, l).dump() + "\n") << '\n';
      } else {
        os << linkage_to_json(tokens, l).dump() << '\n';
      }
    });
  }
  out.close(c.output);
  return 0;
}

int cmd_info(const Config& c) {
  auto table = load_model(c);
  auto sentences = read_sentences(c);
  auto linkages = parse_all(table, sentences, {c.optimal, c.jobs});
  Output out(c.output);
  auto& os = out.stream();
  if (c.format == "csv") os << "sentence,word_bits,structure_bits,mutual_info_bits,total_bits,residual\n";
  for (std::size_t k = 0; k < sentences.size(); ++k) {
    const auto& s = sentences[k];
    try {
      auto info = info_breakdown(s, linkages[k], table);
      if (c.format == "json") {
        os << json{{"sentence", k},
                   {"text", s.to_string()},
                   {"word_bits", info.word_bits},
                   {"structure_bits", info.structure_bits},
                   {"mutual_info_bits", info.mutual_info_bits},
                   {"total_bits", info.total_bits},
                   {"residual", info.identity_residual()}}
                  .dump()
           << '\n';
      } else if (c.format == "csv") {
        os << k << ',' << info.word_bits << ',' << info.structure_bits << ',' << info.mutual_info_bits << ','
           << info.total_bits << ',' << info.identity_residual() << '\n';
      } else {
        char line[256];
        std::snprintf(line, sizeof line,
                      "words %.3f + structure %.3f - mutual information %.3f = total %.3f bits (residual %.2g)",
                      info.word_bits, info.structure_bits, info.mutual_info_bits, info.total_bits,
                      info.identity_residual());
        os << s.to_string() << '\n' << "  " << line << '\n';
      }
    } catch (const std::exception& e) {
      if (c.format == "json") {
        os << json{{"sentence", k}, {"text", s.to_string()}, {"error", e.what()}}.dump() << '\n';
      } else if (c.format == "csv") {
        os << k << ",,,,,\n";
      } else {
        os << s.to_string() << "\n  error: " << e.what() << '\n';
      }
    }
  }
  out.close(c.output);
  return 0;
}

int cmd_generate(const Config& c) {
  SynthConfig sc;
  sc.vocab_size = c.vocab;
  sc.templates = default_templates();
  sc.sentence_count = c.sentences;
  sc.seed = c.seed;
  sc.affinity = c.affinity;
  sc.function_affinity = c.function_affinity;
  try {
    sc.validate();
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError("generate", e.what());
  }
  Output text(c.output);
  std::optional<Output> gold;
  if (!c.gold_out.empty()) gold.emplace(c.gold_out);
  auto corpus = generate_synthetic(sc);
  for (const auto& s : corpus.sentences) {
    auto w = s.words();
    for (std::size_t k = 0; k < w.size(); ++k) text.stream() << (k ? " " : "") << w[k];
    text.stream() << '\n';
  }
  text.close(c.output);
  if (gold) {
    write_gold(gold->stream(), corpus.gold);
    gold->close(c.gold_out);
  }
  log(c, "generated " + std::to_string(corpus.sentences.size()) + " sentences");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn lexical attraction from raw text and link words into dependency structures."};
  app.require_subcommand(1);
  app.set_version_flag("--version", "lexatt 1.0");
  Config c;

  auto procedures = CLI::IsMember({"adjacent", "all-pairs", "feedback"});
  auto formats = CLI::IsMember({"text", "json", "csv"});
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", c.format, "Output format: text, json or csv")->check(formats)->capture_default_str();
    sub->add_option("-o,--output", c.output, "Output file, - for stdout")->capture_default_str();
    sub->add_flag("-q,--quiet", c.quiet, "No progress or notes on stderr");
  };
  auto add_tokenizer = [&](CLI::App* sub) {
    sub->add_option("--max-tokens", c.max_tokens, "Sentence cap in tokens, boundaries included")
        ->check(CLI::Range(3, 100000))
        ->capture_default_str();
    sub->add_flag("--keep-punctuation", c.keep_punctuation, "Keep non-terminal punctuation as tokens");
  };

  auto* train = app.add_subcommand("train", "Train a pair-count model on a text corpus");
  train->add_option("-i,--input,--corpus", c.input, "Corpus text, - for stdin")->capture_default_str();
  train->add_option("-m,--model", c.model, "Model file to write")->required();
  train->add_option("-p,--procedure", c.procedure, "Update procedure")->check(procedures)->capture_default_str();
  train->add_option("--min-pair-count", c.min_pair_count, "Pairs seen fewer times have no attraction during training")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train->add_option("--checkpoints", c.checkpoints, "Word counts at which to log table sizes, e.g. 1000,10000");
  train->add_option("--progress", c.progress, "Log every this many words, 0 for never")->capture_default_str();
  train->add_flag("-q,--quiet", c.quiet, "No progress on stderr");
  add_tokenizer(train);

  auto* parse = app.add_subcommand("parse", "Link the words of each input sentence");
  parse->add_option("-m,--model", c.model, "Model file")->required()->check(CLI::ExistingFile);
  parse->add_option("-i,--input", c.input, "Text to parse, - for stdin")->capture_default_str();
  parse->add_flag("--optimal", c.optimal, "Exact maximum spanning planar tree instead of the greedy linker");
  parse->add_option("--min-pair-count", c.min_pair_count, "Minimum pair count for an attraction value")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  parse->add_option("-j,--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  add_common(parse);
  add_tokenizer(parse);

  auto* eval = app.add_subcommand("eval", "Score parses, baselines or a learning curve against gold links");
  eval->add_option("-g,--gold", c.gold, "Gold file")->required()->check(CLI::ExistingFile);
  eval->add_option("-m,--model", c.model, "Model to parse the gold sentences with")->check(CLI::ExistingFile);
  eval->add_option("--predicted", c.predicted, "Score links from a file in gold format instead")
      ->check(CLI::ExistingFile);
  eval->add_option("--baseline", c.baseline, "Score a baseline instead of a model")->check(CLI::IsMember({"random"}));
  eval->add_flag("--ceiling", c.ceiling, "Report the share of gold content links with positive attraction");
  eval->add_option("--corpus", c.corpus, "Train on this corpus and report a learning curve")->check(CLI::ExistingFile);
  eval->add_option("--checkpoints", c.checkpoints, "Word counts for the learning curve, e.g. 0,10000,100000");
  eval->add_option("-p,--procedure", c.procedure, "Update procedure for the learning curve")
      ->check(procedures)
      ->capture_default_str();
  eval->add_flag("--optimal", c.optimal, "Parse with the exact parser");
  eval->add_flag("--content-only,!--all-links", c.content_only,
                 "Count only links between content words (default) or every interior link");
  eval->add_option("--vocab-limit", c.vocab_limit, "Keep gold sentences within the model's most frequent words")
      ->capture_default_str();
  eval->add_option("--min-pair-count", c.min_pair_count, "Minimum pair count for an attraction value")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  eval->add_option("--seed", c.seed, "Seed for the random baseline")->capture_default_str();
  eval->add_option("-j,--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  add_common(eval);
  add_tokenizer(eval);

  auto* structures = app.add_subcommand("structures", "Count or enumerate planar dependency structures");
  structures->add_option("action", c.structures_action, "count or enumerate")
      ->required()
      ->check(CLI::IsMember({"count", "enumerate"}));
  structures->add_option("n", c.n, "Number of words")->required();
  add_common(structures);

  auto* info = app.add_subcommand("info", "Information breakdown of each sentence under a model");
  info->add_option("-m,--model", c.model, "Model file")->required()->check(CLI::ExistingFile);
  info->add_option("-i,--input", c.input, "Text, - for stdin")->capture_default_str();
  info->add_flag("--optimal", c.optimal, "Link with the exact parser");
  info->add_option("--min-pair-count", c.min_pair_count, "Minimum pair count for an attraction value")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  info->add_option("-j,--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  add_common(info);
  add_tokenizer(info);

  auto* generate = app.add_subcommand("generate", "Write a synthetic Zipf corpus and its gold links");
  generate->add_option("-n,--sentences", c.sentences, "Number of sentences")->capture_default_str();
  generate->add_option("--vocab", c.vocab, "Vocabulary size")->capture_default_str();
  generate->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  generate->add_option("--affinity", c.affinity, "Coupling probability between linked content words")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  generate->add_option("--function-affinity", c.function_affinity,
                       "Coupling probability for links touching a function word")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  generate->add_option("-o,--output", c.output, "Corpus text file, - for stdout")->capture_default_str();
  generate->add_option("--gold", c.gold_out, "Gold file to write");
  generate->add_flag("-q,--quiet", c.quiet, "No summary on stderr");

  try {
    app.parse(argc, argv);
    if (train->parsed()) return cmd_train(c);
    if (parse->parsed()) return cmd_parse(c);
    if (eval->parsed()) return cmd_eval(c);
    if (structures->parsed()) return cmd_structures(c);
    if (info->parsed()) return cmd_info(c);
    if (generate->parsed()) return cmd_generate(c);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    std::cerr << "run with --help for usage\n";
    return 1;
  } catch (const EnumerationTooLarge& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const DecodeError& e) {
    std::cerr << "error: input is not valid UTF-8 at byte " << e.offset() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
