#include "lexatt/structures.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace lexatt {

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

std::vector<std::vector<std::size_t>> adjacency(const Linkage& linkage) {
  std::vector<std::vector<std::size_t>> adj(linkage.length());
  for (const auto& l : linkage.links()) {
    adj[l.left].push_back(l.right);
    adj[l.right].push_back(l.left);
  }
  return adj;
}

}  // namespace

StructureCount count_structures(std::size_t n) {
  BigInt binom = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    binom *= 2 * n + k;
    binom /= k;
  }
  return {n, binom / (2 * n + 1)};
}

double log2_big(const BigInt& value) {
  if (value <= 0) throw std::invalid_argument("log2 of a non-positive integer");
  auto top = boost::multiprecision::msb(value);
  if (top < 53) return std::log2(value.convert_to<double>());
  auto shift = top - 52;
  BigInt head = value >> shift;
  return std::log2(head.convert_to<double>()) + static_cast<double>(shift);
}

double structure_bits(std::size_t tokens) {
  if (tokens <= 1) return 0.0;
  return log2_big(count_structures(tokens - 1).value);
}

namespace {

struct Span {
  std::size_t a;
  std::size_t b;  // inclusive; a > b means empty
  std::size_t head;
};

// Expands pending spans depth-first; each complete assignment is one structure.
void expand(std::vector<Span>& pending, std::vector<Link>& links, std::size_t length,
            const std::function<void(const Linkage&)>& visit) {
  if (pending.empty()) {
    Linkage out(length);
    for (const auto& l : links) out.add(l);
    visit(out);
    return;
  }
  Span span = pending.back();
  pending.pop_back();
  if (span.a > span.b) {
    expand(pending, links, length, visit);
  } else if (span.head < span.a) {
    // i: the governor's nearest child in the span; [i+1, j] its right subtree.
    for (std::size_t i = span.a; i <= span.b; ++i) {
      for (std::size_t j = i; j <= span.b; ++j) {
        links.push_back({span.head, i, 0.0});
        pending.push_back({j + 1, span.b, span.head});
        pending.push_back({i + 1, j, i});
        pending.push_back({span.a, i - 1, i});
        expand(pending, links, length, visit);
        pending.resize(pending.size() - 3);
        links.pop_back();
      }
    }
  } else {
    for (std::size_t i = span.b + 1; i-- > span.a;) {
      for (std::size_t j = i + 1; j-- > span.a;) {
        links.push_back({i, span.head, 0.0});
        pending.push_back({span.a, j - 1, span.head});
        pending.push_back({j, i - 1, i});
        pending.push_back({i + 1, span.b, i});
        expand(pending, links, length, visit);
        pending.resize(pending.size() - 3);
        links.pop_back();
      }
    }
  }
  pending.push_back(span);
}

}  // namespace

void for_each_structure(std::size_t n, const std::function<void(const Linkage&)>& visit) {
  std::vector<Span> pending{{1, n, 0}};
  std::vector<Link> links;
  expand(pending, links, n + 1, visit);
}

std::vector<Linkage> enumerate_structures(std::size_t n) {
  if (n > kMaxEnumeration) throw EnumerationTooLarge(n, count_structures(n).value);
  std::vector<Linkage> out;
  out.reserve(count_structures(n).value.convert_to<std::size_t>());
  for_each_structure(n, [&out](const Linkage& l) { out.push_back(l); });
  return out;
}

bool is_planar(const Linkage& linkage) {
  auto links = linkage.links();
  for (std::size_t x = 0; x < links.size(); ++x) {
    for (std::size_t y = 0; y < links.size(); ++y) {
      const auto& p = links[x];
      const auto& q = links[y];
      if (p.left < q.left && q.left < p.right && p.right < q.right) return false;
    }
  }
  return true;
}

bool is_acyclic(const Linkage& linkage) {
  DisjointSets sets(linkage.length());
  for (const auto& l : linkage.links()) {
    if (!sets.unite(l.left, l.right)) return false;
  }
  return true;
}

bool is_spanning_tree(const Linkage& linkage) {
  if (linkage.length() == 0) return false;
  return linkage.size() + 1 == linkage.length() && is_acyclic(linkage);
}

double joint_neg_log_prob(const Linkage& linkage, std::size_t root, const PairProbabilities& model) {
  if (model.length() != linkage.length()) {
    throw std::invalid_argument("model covers " + std::to_string(model.length()) + " tokens, linkage " +
                                std::to_string(linkage.length()));
  }
  if (!is_spanning_tree(linkage)) throw std::invalid_argument("linkage is not a spanning tree");
  if (root >= linkage.length()) throw std::invalid_argument("root out of range");

  constexpr double kInf = std::numeric_limits<double>::infinity();
  double bits = structure_bits(linkage.length());
  double p_root = model.marginal(root);
  if (p_root <= 0.0) return kInf;
  bits -= std::log2(p_root);

  auto adj = adjacency(linkage);
  std::vector<bool> seen(linkage.length(), false);
  std::vector<std::size_t> queue{root};
  seen[root] = true;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    auto gov = queue[head];
    for (auto dep : adj[gov]) {
      if (seen[dep]) continue;
      seen[dep] = true;
      queue.push_back(dep);
      double joint = model.joint(std::min(gov, dep), std::max(gov, dep));
      double p_gov = model.marginal(gov);
      if (joint <= 0.0 || p_gov <= 0.0) return kInf;
      bits -= std::log2(joint / p_gov);
    }
  }
  return bits;
}

UnseenWordError::UnseenWordError(std::vector<std::string> words)
    : std::runtime_error([&] {
        std::string msg = "unseen words:";
        for (const auto& w : words) msg += " " + w;
        return msg;
      }()),
      words_(std::move(words)) {}

InfoBreakdown info_breakdown(const Sentence& sentence, const Linkage& linkage, const InformationModel& model) {
  if (linkage.length() != sentence.size()) {
    throw std::invalid_argument("linkage length does not match sentence");
  }
  std::size_t last = sentence.size() - 1;
  std::vector<double> unigram(sentence.size(), 0.0);
  std::vector<std::string> unseen;
  InfoBreakdown out;
  for (std::size_t i = 1; i < last; ++i) {
    auto bits = model.word_information(sentence[i].surface);
    if (!bits) {
      unseen.push_back(sentence[i].surface);
      continue;
    }
    unigram[i] = *bits;
    out.word_bits += *bits;
  }
  if (!unseen.empty()) throw UnseenWordError(std::move(unseen));

  Linkage words(sentence.size());
  for (const auto& l : linkage.links()) {
    if (l.left == 0 || l.right == last) continue;
    auto mi = model.pair_information(sentence[l.left].surface, sentence[l.right].surface);
    if (!mi) {
      throw std::invalid_argument("no attraction for linked pair " + sentence[l.left].surface + " " +
                                  sentence[l.right].surface);
    }
    words.add({l.left, l.right, *mi});
    out.mutual_info_bits += *mi;
  }
  if (!is_acyclic(words)) throw std::invalid_argument("linkage contains a cycle");

  out.structure_bits = structure_bits(sentence.interior_size());

  // Encode word by word: component roots alone, the rest given their governor.
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(sentence.size());
  for (const auto& l : words.links()) {
    adj[l.left].emplace_back(l.right, l.attraction);
    adj[l.right].emplace_back(l.left, l.attraction);
  }
  double total = out.structure_bits;
  std::vector<bool> seen(sentence.size(), false);
  for (std::size_t root = 1; root < last; ++root) {
    if (seen[root]) continue;
    seen[root] = true;
    total += unigram[root];
    std::vector<std::size_t> queue{root};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (auto [dep, mi] : adj[queue[head]]) {
        if (seen[dep]) continue;
        seen[dep] = true;
        queue.push_back(dep);
        total += unigram[dep] - mi;
      }
    }
  }
  out.total_bits = total;
  return out;
}

}  // namespace lexatt
