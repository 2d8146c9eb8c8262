#include "lexatt/linkage.hpp"

#include <algorithm>
#include <stdexcept>

namespace lexatt {

void Linkage::add(Link link) {
  if (link.left >= link.right || link.right >= length_) {
    throw std::invalid_argument("link (" + std::to_string(link.left) + "," + std::to_string(link.right) +
                                ") invalid for length " + std::to_string(length_));
  }
  auto it = std::lower_bound(links_.begin(), links_.end(), link, position_less);
  if (it != links_.end() && it->left == link.left && it->right == link.right) {
    throw std::invalid_argument("duplicate link (" + std::to_string(link.left) + "," +
                                std::to_string(link.right) + ")");
  }
  links_.insert(it, link);
}

bool Linkage::remove(std::size_t left, std::size_t right) {
  Link key{left, right, 0.0};
  auto it = std::lower_bound(links_.begin(), links_.end(), key, position_less);
  if (it == links_.end() || it->left != left || it->right != right) return false;
  links_.erase(it);
  return true;
}

std::optional<Link> Linkage::find(std::size_t left, std::size_t right) const {
  Link key{left, right, 0.0};
  auto it = std::lower_bound(links_.begin(), links_.end(), key, position_less);
  if (it == links_.end() || it->left != left || it->right != right) return std::nullopt;
  return *it;
}

bool Linkage::contains(std::size_t left, std::size_t right) const { return find(left, right).has_value(); }

double Linkage::total_attraction() const {
  double sum = 0.0;
  for (const auto& l : links_) sum += l.attraction;
  return sum;
}

bool Linkage::same_links(const Linkage& other) const {
  if (length_ != other.length_ || links_.size() != other.links_.size()) return false;
  for (std::size_t k = 0; k < links_.size(); ++k) {
    if (links_[k].left != other.links_[k].left || links_[k].right != other.links_[k].right) return false;
  }
  return true;
}

nlohmann::json linkage_to_json(std::span<const std::string> tokens, const Linkage& linkage) {
  nlohmann::json links = nlohmann::json::array();
  for (const auto& l : linkage.links()) {
    links.push_back({{"l", l.left}, {"r", l.right}, {"mi", l.attraction}});
  }
  return {{"tokens", std::vector<std::string>(tokens.begin(), tokens.end())}, {"links", links}};
}

TokenLinkage linkage_from_json(const nlohmann::json& doc) {
  try {
    TokenLinkage out;
    out.tokens = doc.at("tokens").get<std::vector<std::string>>();
    out.linkage = Linkage(out.tokens.size());
    for (const auto& l : doc.at("links")) {
      out.linkage.add({l.at("l").get<std::size_t>(), l.at("r").get<std::size_t>(), l.at("mi").get<double>()});
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed linkage JSON: ") + e.what());
  }
}

std::optional<std::string> render_arcs(std::span<const std::string> tokens, const Linkage& linkage,
                                       std::size_t max_depth) {
  std::vector<std::size_t> anchor(tokens.size());
  std::size_t width = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::size_t len = std::max<std::size_t>(tokens[i].size(), 1);
    anchor[i] = width + (len - 1) / 2;
    width += len + 1;
  }

  auto links = linkage.links();
  std::vector<std::size_t> level(links.size(), 1);
  // Links sorted by span length so nested links are levelled first.
  std::vector<std::size_t> order(links.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return links[a].right - links[a].left < links[b].right - links[b].left;
  });
  std::size_t depth = 0;
  for (auto k : order) {
    for (auto m : order) {
      if (m == k) continue;
      bool inside = links[k].left <= links[m].left && links[m].right <= links[k].right &&
                    links[m].right - links[m].left < links[k].right - links[k].left;
      if (inside) level[k] = std::max(level[k], level[m] + 1);
    }
    depth = std::max(depth, level[k]);
  }
  if (depth > max_depth) return std::nullopt;

  std::string out;
  for (std::size_t row = depth; row >= 1; --row) {
    std::string line(width, ' ');
    for (std::size_t k = 0; k < links.size(); ++k) {
      if (level[k] != row) continue;
      for (auto c = anchor[links[k].left]; c <= anchor[links[k].right]; ++c) line[c] = '-';
    }
    for (std::size_t k = 0; k < links.size(); ++k) {
      if (level[k] < row) continue;
      char mark = level[k] == row ? '+' : '|';
      for (auto end : {links[k].left, links[k].right}) {
        if (line[anchor[end]] != '+') line[anchor[end]] = mark;
      }
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line;
    out += '\n';
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  out += '\n';
  return out;
}

}  // namespace lexatt
