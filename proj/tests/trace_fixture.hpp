// Attraction values and the final linkage of a worked linker trace on
// "these people also want more government money for education ."

#ifndef LEXATT_TESTS_TRACE_FIXTURE_HPP
#define LEXATT_TESTS_TRACE_FIXTURE_HPP

#include <array>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "lexatt/processor.hpp"

namespace trace {

inline const std::array<std::string, 12> kTokens{"*",     "these",      "people", "also", "want", "more",
                                                 "government", "money", "for",    "education", ".", "*"};

inline const std::map<std::pair<std::size_t, std::size_t>, double>& attractions() {
  static const std::map<std::pair<std::size_t, std::size_t>, double> values{
      {{0, 1}, 1.18}, {{1, 2}, 3.48}, {{0, 2}, 0.55}, {{2, 3}, -1.64}, {{3, 4}, 1.43}, {{0, 3}, 1.78},
      {{2, 4}, 3.15}, {{2, 5}, 1.26}, {{0, 6}, 0.53}, {{6, 7}, 0.43},  {{5, 7}, 4.01}, {{4, 7}, 2.09},
      {{7, 8}, 2.61}, {{8, 9}, 2.58}, {{7, 9}, 3.92}, {{9, 10}, 1.07}, {{10, 11}, 4.51}};
  return values;
}

inline lexatt::AttractionOracle oracle() {
  return [](std::size_t i, std::size_t j) -> lexatt::Attraction {
    auto it = attractions().find({i, j});
    if (it == attractions().end()) return std::nullopt;
    return it->second;
  };
}

inline std::set<std::pair<std::size_t, std::size_t>> final_links() {
  return {{0, 1}, {1, 2}, {2, 4}, {3, 4}, {5, 7}, {6, 7}, {4, 7}, {7, 8}, {7, 9}, {9, 10}, {10, 11}};
}

}  // namespace trace

#endif  // LEXATT_TESTS_TRACE_FIXTURE_HPP
