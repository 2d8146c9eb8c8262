// Links and linkages over a token sequence, plus the shared JSON
// serialization and an ASCII arc renderer.

#ifndef LEXATT_LINKAGE_HPP
#define LEXATT_LINKAGE_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace lexatt {

struct Link {
  std::size_t left = 0;
  std::size_t right = 0;
  double attraction = 0.0;  // bits

  friend bool operator==(const Link&, const Link&) = default;
};

// Lexicographic order on (left, right); attraction is not compared.
inline bool position_less(const Link& a, const Link& b) {
  return a.left != b.left ? a.left < b.left : a.right < b.right;
}

// A simple set of undirected links over `length` tokens, kept sorted by
// position. Planarity and acyclicity are properties checked elsewhere
// (see structures.hpp), not enforced here.
class Linkage {
 public:
  Linkage() = default;
  explicit Linkage(std::size_t length) : length_(length) {}

  std::size_t length() const { return length_; }
  std::span<const Link> links() const { return links_; }
  std::size_t size() const { return links_.size(); }
  bool empty() const { return links_.empty(); }

  // Throws std::invalid_argument unless left < right < length and the
  // pair is not already linked.
  void add(Link link);
  bool remove(std::size_t left, std::size_t right);
  bool contains(std::size_t left, std::size_t right) const;
  std::optional<Link> find(std::size_t left, std::size_t right) const;

  double total_attraction() const;

  // Same length and same index pairs; attraction values are ignored.
  bool same_links(const Linkage& other) const;

  friend bool operator==(const Linkage&, const Linkage&) = default;

 private:
  std::size_t length_ = 0;
  std::vector<Link> links_;
};

// {"tokens": [...], "links": [{"l": i, "r": j, "mi": bits}]}
nlohmann::json linkage_to_json(std::span<const std::string> tokens, const Linkage& linkage);

struct TokenLinkage {
  std::vector<std::string> tokens;
  Linkage linkage;
};

// Throws std::invalid_argument on a malformed document.
TokenLinkage linkage_from_json(const nlohmann::json& doc);

// Nested arcs drawn above the token line. Returns std::nullopt when the arc
// nesting is deeper than `max_depth`.
std::optional<std::string> render_arcs(std::span<const std::string> tokens, const Linkage& linkage,
                                       std::size_t max_depth = 10);

}  // namespace lexatt

#endif  // LEXATT_LINKAGE_HPP
