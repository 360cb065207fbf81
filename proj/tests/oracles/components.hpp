#pragma once

// Reference answers for the co-occurrence and aggregation code, written as
// plainly as possible.

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using Edges = std::vector<std::pair<std::string, std::string>>;  // (entity, value)

struct Component {
  std::set<std::string> entities;
  std::set<std::string> values;
};

/// Breadth-first search over the bipartite entity/value graph from a value.
inline Component component_of_value(const Edges& edges, const std::string& seed) {
  Component c;
  std::deque<std::pair<bool, std::string>> queue{{false, seed}};
  c.values.insert(seed);
  while (!queue.empty()) {
    auto [is_entity, node] = queue.front();
    queue.pop_front();
    for (const auto& [e, v] : edges) {
      if (is_entity && e == node && c.values.insert(v).second) queue.emplace_back(false, v);
      if (!is_entity && v == node && c.entities.insert(e).second) queue.emplace_back(true, e);
    }
  }
  return c;
}

/// Total count per (entity, value) pair.
inline std::map<std::pair<std::string, std::string>, int> multiset_counts(
    const std::vector<std::pair<std::pair<std::string, std::string>, int>>& items) {
  std::map<std::pair<std::string, std::string>, int> out;
  for (const auto& [key, n] : items) out[key] += n;
  return out;
}

inline std::pair<double, double> fold_min_max(const std::vector<double>& xs) {
  double lo = xs.front(), hi = xs.front();
  for (double x : xs) {
    lo = x < lo ? x : lo;
    hi = x > hi ? x : hi;
  }
  return {lo, hi};
}

}  // namespace oracle
