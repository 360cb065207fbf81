#include "bootlex/cooccurrence.hpp"

#include <algorithm>

#include "bootlex/error.hpp"

namespace bootlex {

void CoocMatrix::add(const std::string& entity, const std::string& value, int count) {
  auto [eit, enew] = entity_ids_.try_emplace(entity, entities_.size());
  if (enew) {
    entities_.push_back(entity);
    entity_values_.emplace_back();
  }
  auto [vit, vnew] = value_ids_.try_emplace(value, values_.size());
  if (vnew) {
    values_.push_back(value);
    value_entities_.emplace_back();
  }
  std::size_t e = eit->second, v = vit->second;
  auto [cell, fresh] = cells_.try_emplace({e, v}, 0);
  cell->second += count;
  if (fresh) {
    auto& vs = entity_values_[e];
    vs.insert(std::lower_bound(vs.begin(), vs.end(), v), v);
    auto& es = value_entities_[v];
    es.insert(std::lower_bound(es.begin(), es.end(), e), e);
  }
}

std::optional<std::size_t> CoocMatrix::entity_index(std::string_view e) const {
  auto it = entity_ids_.find(e);
  if (it == entity_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> CoocMatrix::value_index(std::string_view v) const {
  auto it = value_ids_.find(v);
  if (it == value_ids_.end()) return std::nullopt;
  return it->second;
}

int CoocMatrix::count(std::size_t entity, std::size_t value) const {
  auto it = cells_.find({entity, value});
  return it == cells_.end() ? 0 : it->second;
}

CoocMatrix build_matrix(const RelationTable& table) {
  CoocMatrix m;
  for (const auto& row : table.rows()) {
    for (const auto& v : row.values) m.add(row.entity, v.value, v.count);
  }
  return m;
}

Cluster zigzag_closure(const std::string& seed_value, const CoocMatrix& m) {
  auto seed = m.value_index(seed_value);
  if (!seed) throw Error(ErrorCode::UnknownSeed, "value '" + seed_value + "' does not occur");
  std::set<std::size_t> values{*seed}, entities;
  Cluster c;
  c.seed = seed_value;
  while (true) {
    ++c.rounds;
    entities.clear();
    for (auto v : values) entities.insert(m.entities_of(v).begin(), m.entities_of(v).end());
    std::set<std::size_t> grown;
    for (auto e : entities) grown.insert(m.values_of(e).begin(), m.values_of(e).end());
    if (grown.size() == values.size()) break;
    values = std::move(grown);
  }
  for (auto e : entities) c.entity_set.insert(m.entities()[e]);
  for (auto v : values) c.value_set.insert(m.values()[v]);
  return c;
}

std::set<std::string> group_by_value(const CoocMatrix& m, const std::string& value, int min_count) {
  auto v = m.value_index(value);
  if (!v) throw Error(ErrorCode::UnknownSeed, "value '" + value + "' does not occur");
  std::set<std::string> out;
  for (auto e : m.entities_of(*v)) {
    if (m.count(e, *v) >= min_count) out.insert(m.entities()[e]);
  }
  return out;
}

std::vector<std::pair<std::string, int>> property_inventory(const CoocMatrix& m, const std::string& entity,
                                                            int min_count) {
  auto e = m.entity_index(entity);
  if (!e) throw Error(ErrorCode::UnknownEntity, "entity '" + entity + "' does not occur");
  std::vector<std::pair<std::string, int>> out;
  for (auto v : m.values_of(*e)) {
    int n = m.count(*e, v);
    if (n >= min_count) out.emplace_back(m.values()[v], n);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

std::vector<Cluster> all_clusters(const CoocMatrix& m) {
  std::vector<Cluster> out;
  std::set<std::string> covered;
  for (const auto& v : m.values()) {
    if (covered.contains(v)) continue;
    Cluster c = zigzag_closure(v, m);
    covered.insert(c.value_set.begin(), c.value_set.end());
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace bootlex
