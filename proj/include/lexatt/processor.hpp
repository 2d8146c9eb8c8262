// Dependency linkers: the left-to-right greedy approximation with cycle and
// crossing conflict resolution, and the exact span dynamic program.

#ifndef LEXATT_PROCESSOR_HPP
#define LEXATT_PROCESSOR_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "lexatt/linkage.hpp"

namespace lexatt {

// Attraction in bits between the tokens at `left` < `right`, or absent.
// Absent ranks below every real value and is never linked by the
// approximation linker.
using Attraction = std::optional<double>;
using AttractionOracle = std::function<Attraction(std::size_t left, std::size_t right)>;

// Called once per evaluated candidate pair, after the oracle query and
// before any change to `current`.
using CandidateObserver = std::function<void(const Linkage& current, std::size_t left, std::size_t right)>;

// Reads tokens left to right; each new token j is tried against i = j-1
// down to 0. A candidate is accepted when its attraction is positive,
// strictly above the weakest link on the existing i..j path and strictly
// above every link it would cross. Accepting deletes the crossed links and
// the weakest path link.
Linkage link_sentence(std::size_t length, const AttractionOracle& attraction,
                      const CandidateObserver& observe = {});

// Links with exactly one endpoint strictly inside (candidate.left,
// candidate.right) and the other outside [candidate.left, candidate.right].
std::vector<Link> crossing_conflicts(const Linkage& linkage, const Link& candidate);

// The weakest link on the path between `from` and `to`, ties going to the
// leftmost link; absent when the two are not connected.
std::optional<Link> path_min_link(const Linkage& linkage, std::size_t from, std::size_t to);

// Whether the feedback memory records the candidate (left, right) given the
// current links: nothing crosses it, and every token strictly between the
// two is either joined to one of them by links inside the span or lies
// under a link inside the span. With no links this admits adjacent pairs
// only; with X..Y linked inside A X..Y B it admits A-X, A-Y, X-B and Y-B.
bool feedback_attends(const Linkage& current, std::size_t left, std::size_t right);

// Additive link weight for a governor and its dependent.
using DirectedWeight = std::function<double(std::size_t governor, std::size_t dependent)>;

// Stand-in weight for absent pairs in the exact parser, so that a spanning
// structure always exists.
inline constexpr double kAbsentAttraction = -1e6;

// Exact maximum-weight planar spanning tree rooted at token 0, by the
// O(n^5) span recurrence over (span, outside governor). Link attraction
// holds the weight used for that link. Ties go to the smallest split
// (nearest child first, then the shortest subtree). Fewer than two tokens
// yields an empty linkage.
Linkage optimal_linkage(std::size_t length, const DirectedWeight& weight);

// Undirected form: weight(h, d) = attraction(min, max), absent mapped to
// kAbsentAttraction.
Linkage optimal_linkage(std::size_t length, const AttractionOracle& attraction);

}  // namespace lexatt

#endif  // LEXATT_PROCESSOR_HPP
