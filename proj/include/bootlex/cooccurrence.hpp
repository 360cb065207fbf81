#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bootlex/relations.hpp"

namespace bootlex {

/// Sparse entity x value count matrix with dense, first-seen indices.
class CoocMatrix {
 public:
  void add(const std::string& entity, const std::string& value, int count);

  const std::vector<std::string>& entities() const { return entities_; }
  const std::vector<std::string>& values() const { return values_; }
  std::optional<std::size_t> entity_index(std::string_view e) const;
  std::optional<std::size_t> value_index(std::string_view v) const;

  int count(std::size_t entity, std::size_t value) const;
  const std::map<std::pair<std::size_t, std::size_t>, int>& cells() const { return cells_; }
  // Sorted neighbour lists.
  const std::vector<std::size_t>& values_of(std::size_t entity) const { return entity_values_[entity]; }
  const std::vector<std::size_t>& entities_of(std::size_t value) const { return value_entities_[value]; }

 private:
  std::vector<std::string> entities_;
  std::vector<std::string> values_;
  std::map<std::string, std::size_t, std::less<>> entity_ids_;
  std::map<std::string, std::size_t, std::less<>> value_ids_;
  std::map<std::pair<std::size_t, std::size_t>, int> cells_;
  std::vector<std::vector<std::size_t>> entity_values_;
  std::vector<std::vector<std::size_t>> value_entities_;
};

CoocMatrix build_matrix(const RelationTable& table);

struct Cluster {
  std::string seed;
  std::set<std::string> entity_set;
  std::set<std::string> value_set;
  std::size_t rounds = 0;
  friend bool operator==(const Cluster&, const Cluster&) = default;
};

/// Alternating expansion from a seed value: entities of the value set, then
/// values of the entity set, until the value set stops growing. Throws UnknownSeed.
Cluster zigzag_closure(const std::string& seed_value, const CoocMatrix& m);

/// Entities whose count with `value` is at least `min_count`. Throws UnknownSeed.
std::set<std::string> group_by_value(const CoocMatrix& m, const std::string& value, int min_count);

/// Values of an entity meeting the threshold, by descending count then name.
/// Throws UnknownEntity.
std::vector<std::pair<std::string, int>> property_inventory(const CoocMatrix& m,
                                                            const std::string& entity,
                                                            int min_count);

/// One cluster per connected component, seeded with its first value.
std::vector<Cluster> all_clusters(const CoocMatrix& m);

}  // namespace bootlex
