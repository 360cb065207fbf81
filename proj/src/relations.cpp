#include "bootlex/relations.hpp"

#include <algorithm>

#include "bootlex/error.hpp"
#include "text_util.hpp"

namespace bootlex {

namespace {

bool is_constituent(const ParseNode& n) { return !n.is_leaf() && (n.category == "NP" || n.category == "PP"); }

std::string entity_text(const ParseNode& np) {
  std::vector<const ParseNode*> leaves;
  np.collect_leaves(leaves);
  std::size_t first = 0;
  while (first + 1 < leaves.size() && (leaves[first]->category == "DETD" || leaves[first]->category == "DETI")) {
    ++first;
  }
  std::string out;
  for (std::size_t i = first; i < leaves.size(); ++i) {
    if (!out.empty()) out += ' ';
    out += leaves[i]->surface;
  }
  return out;
}

void flatten(const ParseNode& node, std::vector<Chunk>& out) {
  if (is_constituent(node)) {
    std::string text = node.text();
    out.push_back(Chunk{node.category, text, text, entity_text(node), &node});
    return;
  }
  if (node.is_leaf()) {
    out.push_back(Chunk{node.category, node.surface, node.lemma.value_or(node.surface), node.surface, &node});
    return;
  }
  for (const auto& c : node.children) flatten(c, out);
}

bool literal_matches(const std::string& literal, const std::string& surface) {
  return literal == surface || (is_upper_initial(surface) && literal == decapitalize(surface));
}

bool chunk_matches(const SlotMatcher& m, const Chunk& c) {
  bool leaf = c.category != "NP" && c.category != "PP";
  if (leaf) {
    for (const auto& lit : m.literals) {
      if (literal_matches(lit, c.surface)) return true;
    }
  }
  for (const auto& cat : m.categories) {
    if (cat == c.category) return true;
    // an unclassified word can fill any open-class slot
    if (c.category == "XXX" && (cat == "N" || cat == "ADJ" || cat == "V")) return true;
  }
  return false;
}

using Bindings = std::map<std::string, std::vector<const Chunk*>>;

bool match_from(const PatternRule& rule, std::size_t mi, std::span<const Chunk> chunks, std::size_t ci,
                Bindings& b) {
  if (mi == rule.shape.size()) return ci == chunks.size();
  const auto& m = rule.shape[mi];
  std::size_t max_take = (m.quantifier == '+' || m.quantifier == '*') ? chunks.size() - ci
                         : 1;
  std::size_t min_take = (m.quantifier == '?' || m.quantifier == '*') ? 0 : 1;
  std::size_t available = 0;
  while (available < max_take && ci + available < chunks.size() && chunk_matches(m, chunks[ci + available])) {
    ++available;
  }
  for (std::size_t take = available + 1; take-- > min_take;) {
    auto saved = m.slot.empty() ? std::vector<const Chunk*>{} : b[m.slot];
    if (!m.slot.empty()) {
      for (std::size_t k = 0; k < take; ++k) b[m.slot].push_back(&chunks[ci + k]);
    }
    if (match_from(rule, mi + 1, chunks, ci + take, b)) return true;
    if (!m.slot.empty()) b[m.slot] = saved;
  }
  return false;
}

std::string slot_value(const std::vector<const Chunk*>& chunks) {
  std::string out;
  for (const auto* c : chunks) {
    if (!out.empty()) out += '-';
    out += c->value;
  }
  return out;
}

std::string slot_entity(const std::vector<const Chunk*>& chunks) {
  std::string out;
  for (const auto* c : chunks) {
    if (!out.empty()) out += ' ';
    out += c->entity;
  }
  return out;
}

SlotMatcher parse_matcher(std::string_view text, const std::string& origin, std::size_t line) {
  SlotMatcher m;
  std::string_view body = text;
  auto colon = text.rfind(':');
  if (colon != std::string_view::npos && text.find('"', colon) == std::string_view::npos) {
    m.slot = std::string(text.substr(colon + 1));
    body = text.substr(0, colon);
    if (m.slot.empty()) resource_error(origin, line, "empty slot name in '" + std::string(text) + "'");
  }
  if (!body.empty() && (body.back() == '?' || body.back() == '+' || body.back() == '*') &&
      !(body.size() >= 2 && body[body.size() - 2] == '"')) {
    m.quantifier = body.back();
    body.remove_suffix(1);
  }
  for (auto alt : split(body, '|')) {
    if (alt.empty()) resource_error(origin, line, "empty alternative in '" + std::string(text) + "'");
    if (alt.front() == '"') {
      if (alt.size() < 3 || alt.back() != '"') resource_error(origin, line, "bad literal " + std::string(alt));
      m.literals.emplace_back(alt.substr(1, alt.size() - 2));
    } else {
      m.categories.emplace_back(alt);
    }
  }
  return m;
}

}  // namespace

std::vector<Chunk> chunk_sequence(std::span<const ParseNode> trees) {
  std::vector<Chunk> out;
  for (const auto& t : trees) flatten(t, out);
  return out;
}

PatternSet PatternSet::load(const std::filesystem::path& path) { return parse(read_file(path), path.string()); }

PatternSet PatternSet::parse(std::string_view text, const std::string& origin) {
  PatternSet set;
  auto lines = resource_lines(text);
  if (lines.empty() || split_ws(lines.front().text) != std::vector<std::string_view>{"bootlex-patterns", "1"}) {
    resource_error(origin, lines.empty() ? 1 : lines.front().number, "missing header 'bootlex-patterns 1'");
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto [number, line] = lines[i];
    auto colon = line.find(':');
    auto arrow = line.find("=>");
    if (colon == std::string_view::npos || arrow == std::string_view::npos || colon > arrow) {
      resource_error(origin, number, "expected 'NAME: SHAPE => EMISSIONS'");
    }
    PatternRule rule;
    rule.name = std::string(trim(line.substr(0, colon)));
    for (auto tok : split_ws(trim(line.substr(colon + 1, arrow - colon - 1)))) {
      rule.shape.push_back(parse_matcher(tok, origin, number));
    }
    if (rule.shape.empty() || rule.shape.back().literals != std::vector<std::string>{"."}) {
      resource_error(origin, number, "pattern " + rule.name + " must end with \".\"");
    }
    std::set<std::string> bound;
    for (const auto& m : rule.shape) {
      if (!m.slot.empty()) bound.insert(m.slot);
    }
    for (auto em : split(line.substr(arrow + 2), ';')) {
      em = trim(em);
      auto c = em.find(':');
      if (c == std::string_view::npos) resource_error(origin, number, "bad emission '" + std::string(em) + "'");
      Emission e;
      e.entity_slot = std::string(trim(em.substr(0, c)));
      for (auto v : split(em.substr(c + 1), ',')) e.value_slots.emplace_back(trim(v));
      if (!bound.contains(e.entity_slot)) resource_error(origin, number, "unbound slot " + e.entity_slot);
      for (const auto& v : e.value_slots) {
        if (!bound.contains(v)) resource_error(origin, number, "unbound slot " + v);
      }
      rule.emissions.push_back(std::move(e));
    }
    set.rules.push_back(std::move(rule));
  }
  return set;
}

bool ExceptionList::excludes(std::string_view pattern, std::string_view entity) const {
  auto it = excluded.find(pattern);
  return it != excluded.end() && it->second.contains(entity);
}

ExceptionList ExceptionList::load(const std::filesystem::path& path) { return parse(read_file(path), path.string()); }

ExceptionList ExceptionList::parse(std::string_view text, const std::string& origin) {
  ExceptionList list;
  for (const auto& [number, line] : resource_lines(text)) {
    auto sp = line.find_first_of(" \t");
    if (sp == std::string_view::npos) resource_error(origin, number, "expected '<pattern> <entity>'");
    list.excluded[std::string(line.substr(0, sp))].emplace(trim(line.substr(sp + 1)));
  }
  return list;
}

std::optional<std::pair<std::string, std::vector<Relation>>> match_chunks(std::span<const Chunk> chunks,
                                                                          const PatternSet& patterns,
                                                                          const ExceptionList& exceptions) {
  for (const auto& rule : patterns.rules) {
    Bindings b;
    if (!match_from(rule, 0, chunks, 0, b)) continue;
    std::vector<Relation> out;
    bool excluded = false;
    for (const auto& em : rule.emissions) {
      Relation r;
      r.entity = slot_entity(b[em.entity_slot]);
      r.pattern = rule.name;
      if (exceptions.excludes(rule.name, r.entity)) excluded = true;
      for (const auto& v : em.value_slots) r.values.push_back(RelationValue{slot_value(b[v]), 1});
      out.push_back(std::move(r));
    }
    if (excluded) continue;
    return std::make_pair(rule.name, std::move(out));
  }
  return std::nullopt;
}

MatchOutcome match_patterns(const ParseResult& parse, const PatternSet& patterns,
                            const ExceptionList& exceptions, const EvidenceRef& where) {
  std::vector<std::vector<Chunk>> readings;
  if (parse.kind == ParseKind::Full) {
    for (const auto& t : parse.trees) readings.push_back(chunk_sequence(std::span<const ParseNode>(&t, 1)));
  } else {
    readings.push_back(chunk_sequence(parse.trees));
  }

  auto rank_of = [&](const std::string& name) {
    for (std::size_t i = 0; i < patterns.rules.size(); ++i) {
      if (patterns.rules[i].name == name) return i;
    }
    return patterns.rules.size();
  };
  MatchOutcome outcome;
  std::size_t best = patterns.rules.size();
  for (const auto& chunks : readings) {
    auto m = match_chunks(chunks, patterns, exceptions);
    if (!m) continue;
    std::size_t rank = rank_of(m->first);
    if (rank > best) continue;
    if (rank < best) {
      best = rank;
      outcome.relations.clear();
      outcome.pattern = m->first;
    }
    for (auto& r : m->second) {
      r.evidence = {where};
      if (std::find(outcome.relations.begin(), outcome.relations.end(), r) == outcome.relations.end()) {
        outcome.relations.push_back(std::move(r));
      }
    }
  }
  return outcome;
}

const RelationTable::Row* RelationTable::find(std::string_view entity) const {
  auto it = index_.find(entity);
  return it == index_.end() ? nullptr : &rows_[it->second];
}

int RelationTable::total_count() const {
  int total = 0;
  for (const auto& row : rows_) {
    for (const auto& v : row.values) total += v.count;
  }
  return total;
}

void RelationTable::add(const Relation& r) {
  auto [it, inserted] = index_.try_emplace(r.entity, rows_.size());
  if (inserted) rows_.push_back(Row{r.entity, {}, {}, {}});
  Row& row = rows_[it->second];
  auto merge = [](std::vector<EvidenceRef>& into, const std::vector<EvidenceRef>& from) {
    for (const auto& e : from) {
      if (std::find(into.begin(), into.end(), e) == into.end()) into.push_back(e);
    }
  };
  for (const auto& v : r.values) {
    auto pos = std::find_if(row.values.begin(), row.values.end(),
                            [&](const RelationValue& x) { return x.value == v.value; });
    if (pos == row.values.end()) {
      row.values.push_back(RelationValue{v.value, 0});
      row.value_evidence.emplace_back();
      pos = row.values.end() - 1;
    }
    pos->count += v.count;
    merge(row.value_evidence[static_cast<std::size_t>(pos - row.values.begin())], r.evidence);
  }
  merge(row.evidence, r.evidence);
}

RelationTable aggregate(std::span<const Relation> relations) {
  RelationTable table;
  for (const auto& r : relations) table.add(r);
  return table;
}

CoverageReport coverage_report(std::span<const SegmentOutcome> outcomes) {
  CoverageReport c;
  c.segments = outcomes.size();
  if (outcomes.empty()) return c;
  c.empty = false;
  std::size_t full = 0, partial = 0, partial_matched = 0, unmatched = 0;
  for (const auto& o : outcomes) {
    if (o.parse == ParseKind::Full) ++full;
    else if (o.matched) ++partial_matched;
    else ++partial;
    if (!o.matched) ++unmatched;
  }
  auto n = static_cast<double>(outcomes.size());
  c.full = static_cast<double>(full) / n;
  c.partial = static_cast<double>(partial) / n;
  c.partial_matched = static_cast<double>(partial_matched) / n;
  c.unmatched = static_cast<double>(unmatched) / n;
  return c;
}

}  // namespace bootlex
