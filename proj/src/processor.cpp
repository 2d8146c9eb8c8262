#include "lexatt/processor.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

namespace lexatt {

Linkage link_sentence(std::size_t length, const AttractionOracle& attraction, const CandidateObserver& observe) {
  Linkage result(length);
  std::vector<Link> stack;
  std::vector<std::optional<Link>> minlink(length);

  for (std::size_t j = 1; j < length; ++j) {
    stack.clear();
    std::fill(minlink.begin(), minlink.end(), std::nullopt);
    for (std::size_t i = j; i-- > 0;) {
      // Right links of i sit on top of the stack; the last one popped is the
      // one leading towards j.
      std::optional<Link> last;
      while (!stack.empty() && stack.back().left == i) {
        last = stack.back();
        stack.pop_back();
      }
      if (last && minlink[last->right]) {
        const auto& beyond = *minlink[last->right];
        minlink[i] = beyond.attraction < last->attraction ? beyond : *last;
      }

      Attraction mi = attraction(i, j);
      if (observe) observe(result, i, j);

      bool accept = mi && *mi > 0.0 && (!minlink[i] || *mi > minlink[i]->attraction) &&
                    std::all_of(stack.begin(), stack.end(), [&](const Link& l) { return *mi > l.attraction; });
      if (accept) {
        for (const auto& l : stack) result.remove(l.left, l.right);
        stack.clear();
        if (minlink[i]) result.remove(minlink[i]->left, minlink[i]->right);
        Link link{i, j, *mi};
        result.add(link);
        minlink[i] = link;
      }

      // Links are sorted by (left, right); collect those ending at i.
      for (const auto& l : result.links()) {
        if (l.right == i) stack.push_back(l);
      }
    }
  }
  return result;
}

std::vector<Link> crossing_conflicts(const Linkage& linkage, const Link& candidate) {
  std::vector<Link> out;
  auto inside = [&](std::size_t k) { return candidate.left < k && k < candidate.right; };
  auto outside = [&](std::size_t k) { return k < candidate.left || k > candidate.right; };
  for (const auto& l : linkage.links()) {
    if ((inside(l.left) && outside(l.right)) || (outside(l.left) && inside(l.right))) out.push_back(l);
  }
  return out;
}

std::optional<Link> path_min_link(const Linkage& linkage, std::size_t from, std::size_t to) {
  std::size_t n = linkage.length();
  if (from >= n || to >= n || from == to) return std::nullopt;
  std::vector<std::vector<std::size_t>> adj(n);
  auto links = linkage.links();
  for (std::size_t k = 0; k < links.size(); ++k) {
    adj[links[k].left].push_back(k);
    adj[links[k].right].push_back(k);
  }
  constexpr auto kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> via(n, kNone);  // link index used to reach a node
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> queue{from};
  seen[from] = true;
  for (std::size_t head = 0; head < queue.size() && !seen[to]; ++head) {
    auto u = queue[head];
    for (auto k : adj[u]) {
      auto v = links[k].left == u ? links[k].right : links[k].left;
      if (seen[v]) continue;
      seen[v] = true;
      via[v] = k;
      queue.push_back(v);
    }
  }
  if (!seen[to]) return std::nullopt;
  std::optional<Link> weakest;
  for (auto v = to; v != from;) {
    const auto& l = links[via[v]];
    if (!weakest || l.attraction < weakest->attraction ||
        (l.attraction == weakest->attraction && position_less(l, *weakest))) {
      weakest = l;
    }
    v = l.left == v ? l.right : l.left;
  }
  return weakest;
}

bool feedback_attends(const Linkage& current, std::size_t left, std::size_t right) {
  if (!crossing_conflicts(current, {left, right, 0.0}).empty()) return false;
  if (right <= left + 1) return true;

  std::size_t width = right - left + 1;
  std::vector<std::size_t> group(width);
  for (std::size_t k = 0; k < width; ++k) group[k] = k;
  auto find = [&](std::size_t x) {
    while (group[x] != x) x = group[x] = group[group[x]];
    return x;
  };
  std::vector<bool> hidden(width, false);
  for (const auto& l : current.links()) {
    if (l.left < left || l.right > right) continue;
    group[find(l.left - left)] = find(l.right - left);
    for (auto k = l.left + 1; k < l.right; ++k) hidden[k - left] = true;
  }
  auto a = find(0);
  auto b = find(width - 1);
  for (std::size_t k = 1; k + 1 < width; ++k) {
    auto g = find(k);
    if (g != a && g != b && !hidden[k]) return false;
  }
  return true;
}

Linkage optimal_linkage(std::size_t length, const DirectedWeight& weight) {
  Linkage result(length);
  if (length < 2) return result;
  const std::size_t n = length;
  auto at = [n](std::size_t head, std::size_t a, std::size_t b) { return (head * n + a) * n + b; };

  // best[head, a, b]: weight of the best structure over tokens a..b whose
  // top-level tokens all attach to `head` outside the span.
  std::vector<double> best(n * n * n, 0.0);
  std::vector<std::uint16_t> pick_i(n * n * n, 0);
  std::vector<std::uint16_t> pick_j(n * n * n, 0);
  auto score = [&](std::size_t head, std::size_t a, std::size_t b) {
    return a > b ? 0.0 : best[at(head, a, b)];
  };

  for (std::size_t len = 1; len < n; ++len) {
    for (std::size_t a = 1; a + len <= n; ++a) {
      std::size_t b = a + len - 1;
      for (std::size_t head = 0; head < n; ++head) {
        if (head >= a && head <= b) continue;
        double top = -std::numeric_limits<double>::infinity();
        std::size_t bi = a;
        std::size_t bj = a;
        for (std::size_t i = a; i <= b; ++i) {
          double w = weight(head, i);
          if (head < a) {
            // i is the governor's nearest child; a..i-1 and i+1..j hang off i.
            double left = score(i, a, i - 1);
            for (std::size_t j = i; j <= b; ++j) {
              double s = w + left + score(i, i + 1, j) + score(head, j + 1, b);
              if (s > top) {
                top = s;
                bi = i;
                bj = j;
              }
            }
          } else {
            double right = score(i, i + 1, b);
            for (std::size_t j = a; j <= i; ++j) {
              double s = w + right + score(i, j, i - 1) + score(head, a, j - 1);
              if (s > top) {
                top = s;
                bi = i;
                bj = j;
              }
            }
          }
        }
        best[at(head, a, b)] = top;
        pick_i[at(head, a, b)] = static_cast<std::uint16_t>(bi);
        pick_j[at(head, a, b)] = static_cast<std::uint16_t>(bj);
      }
    }
  }

  struct Span {
    std::size_t head, a, b;
  };
  std::vector<Span> todo{{0, 1, n - 1}};
  while (!todo.empty()) {
    auto [head, a, b] = todo.back();
    todo.pop_back();
    if (a > b) continue;
    std::size_t i = pick_i[at(head, a, b)];
    std::size_t j = pick_j[at(head, a, b)];
    result.add({std::min(head, i), std::max(head, i), weight(head, i)});
    if (head < a) {
      todo.push_back({i, a, i - 1});
      todo.push_back({i, i + 1, j});
      todo.push_back({head, j + 1, b});
    } else {
      todo.push_back({i, i + 1, b});
      todo.push_back({i, j, i - 1});
      todo.push_back({head, a, j - 1});
    }
  }
  return result;
}

Linkage optimal_linkage(std::size_t length, const AttractionOracle& attraction) {
  return optimal_linkage(length, DirectedWeight([&](std::size_t governor, std::size_t dependent) {
                           Attraction mi = attraction(std::min(governor, dependent), std::max(governor, dependent));
                           return mi ? *mi : kAbsentAttraction;
                         }));
}

}  // namespace lexatt
