#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace urllc {

struct WeightedEdge {
  int left = 0;
  int right = 0;
  std::int64_t weight = 1;

  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

// Bipartite graph between channels (left) and devices (right).
struct BipartiteGraph {
  int n_left = 0;
  int n_right = 0;
  std::vector<WeightedEdge> edges;
};

struct Matching {
  // Sorted by left index.
  std::vector<std::pair<int, int>> pairs;

  friend bool operator==(const Matching&, const Matching&) = default;
};

// Maximum-weight matching. Among all optimal matchings returns the one whose
// sorted pair list is lexicographically smallest. Throws ParameterError on
// out-of-range indices, duplicate edges or weights < 1.
Matching max_weight_matching(const BipartiteGraph& g);

std::int64_t matching_weight(const BipartiteGraph& g, const Matching& m);

// Checks that every pair is an edge of g and no vertex is used twice.
bool is_valid_matching(const BipartiteGraph& g, const Matching& m);

}  // namespace urllc
