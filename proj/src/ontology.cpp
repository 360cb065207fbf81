#include "bootlex/ontology.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <tuple>

#include "bootlex/error.hpp"
#include "text_util.hpp"
#include "utf8.hpp"

namespace bootlex {

namespace {

constexpr std::array<const char*, 3> kStatusNames{"SUGGESTED", "ACCEPTED", "REJECTED"};
constexpr std::array<const char*, 4> kFactNames{"IS_A", "PART_OF", "HAS_PROPERTY_DIM", "VALUE_RANGE"};

}  // namespace

std::string_view to_string(Status s) { return kStatusNames[static_cast<std::size_t>(s)]; }

std::optional<Status> parse_status(std::string_view s) {
  for (std::size_t i = 0; i < kStatusNames.size(); ++i) {
    if (s == kStatusNames[i]) return static_cast<Status>(i);
  }
  return std::nullopt;
}

std::string_view to_string(ConceptKind k) {
  return k == ConceptKind::EntityConcept ? "ENTITY_CONCEPT" : "PROPERTY_VALUE_PHRASE";
}

std::string_view to_string(FactKind k) { return kFactNames[static_cast<std::size_t>(k)]; }

std::optional<FactKind> parse_fact_kind(std::string_view s) {
  for (std::size_t i = 0; i < kFactNames.size(); ++i) {
    if (s == kFactNames[i]) return static_cast<FactKind>(i);
  }
  return std::nullopt;
}

namespace {

bool is_det(const ParseNode* n) { return n->category == "DETD" || n->category == "DETI"; }

std::vector<const ParseNode*> content_leaves(const ParseNode& np) {
  std::vector<const ParseNode*> leaves;
  np.collect_leaves(leaves);
  std::size_t first = 0;
  while (first + 1 < leaves.size() && is_det(leaves[first])) ++first;
  return {leaves.begin() + static_cast<std::ptrdiff_t>(first), leaves.end()};
}

std::string join_surfaces(const std::vector<const ParseNode*>& leaves) {
  std::string out;
  for (const auto* l : leaves) {
    if (!out.empty()) out += ' ';
    out += l->surface;
  }
  return out;
}

// Trees whose constituents count as the segment's analysis: the preferred
// reading of a complete parse, or all fragments of a partial one.
std::span<const ParseNode> analysis_of(const ParseResult& p) {
  if (p.trees.empty()) return {};
  if (p.kind == ParseKind::Full) return {p.trees.data(), 1};
  return p.trees;
}

void visit_nodes(const ParseNode& n, const std::function<void(const ParseNode&)>& fn) {
  fn(n);
  for (const auto& c : n.children) visit_nodes(c, fn);
}

void add_evidence(std::vector<EvidenceRef>& into, const EvidenceRef& e) {
  if (std::find(into.begin(), into.end(), e) == into.end()) into.push_back(e);
}

}  // namespace

std::vector<ConceptCandidate> detect_concepts(std::span<const Relation> relations,
                                              std::span<const ParsedSegment> forests) {
  std::set<std::tuple<std::string, std::size_t, std::string>> entity_positions;
  for (const auto& r : relations) {
    for (const auto& e : r.evidence) entity_positions.emplace(e.doc, e.segment, r.entity);
  }
  std::vector<ConceptCandidate> out;
  std::map<std::string, std::size_t> index;
  for (const auto& seg : forests) {
    if (!seg.parse) continue;
    for (const auto& tree : analysis_of(*seg.parse)) {
      visit_nodes(tree, [&](const ParseNode& n) {
        if (n.category != "NP" || n.is_leaf()) return;
        auto leaves = content_leaves(n);
        if (leaves.size() < 2 || leaves.back()->category != "N") return;
        for (std::size_t i = 0; i + 1 < leaves.size(); ++i) {
          if (leaves[i]->category != "ADJ") return;
        }
        std::string surface = join_surfaces(leaves);
        bool in_entity = entity_positions.contains({seg.where.doc, seg.where.segment, surface});
        std::string name = utf8::lower_first(surface);
        auto [it, fresh] = index.try_emplace(name, out.size());
        if (fresh) out.push_back(ConceptCandidate{name, surface, ConceptKind::PropertyValuePhrase, {}, 0});
        auto& c = out[it->second];
        if (in_entity && c.kind != ConceptKind::EntityConcept) {
          c.kind = ConceptKind::EntityConcept;
          c.score = 0;
        }
        if (in_entity || c.kind == ConceptKind::PropertyValuePhrase) ++c.score;
        add_evidence(c.evidence, seg.where);
      });
    }
  }
  return out;
}

DimensionLexicon DimensionLexicon::load(const std::filesystem::path& path) {
  return parse(read_file(path), path.string());
}

DimensionLexicon DimensionLexicon::parse(std::string_view text, const std::string& origin) {
  DimensionLexicon d;
  for (const auto& [number, line] : resource_lines(text)) {
    auto f = split_ws(line);
    if (f.size() < 2) resource_error(origin, number, "expected '<dimension> <value>...'");
    for (std::size_t i = 1; i < f.size(); ++i) {
      auto [it, fresh] = d.dimension_of.emplace(std::string(f[i]), std::string(f[0]));
      if (!fresh && it->second != f[0]) {
        resource_error(origin, number, "value '" + std::string(f[i]) + "' already in dimension " + it->second);
      }
    }
  }
  return d;
}

Classification classify_concept(const std::string& entity, std::span<const std::pair<std::string, int>> inventory,
                                const DimensionLexicon& dims, std::size_t min_values) {
  Classification c;
  for (const auto& [value, count] : inventory) {
    auto it = dims.dimension_of.find(value);
    if (it == dims.dimension_of.end()) c.unknown_values.push_back(value);
    else if (it->second == dims.generic_dimension) c.generic_values.push_back(value);
    else c.values_by_dimension[it->second].push_back(value);
  }
  for (const auto& [dim, values] : c.values_by_dimension) {
    if (values.size() < min_values) continue;
    OntologyFact f;
    f.kind = FactKind::HasPropertyDim;
    f.subject = entity;
    f.object = dim;
    f.note = "values:";
    for (const auto& v : values) f.note += ' ' + v;
    if (!c.generic_values.empty()) {
      f.note += "; generic:";
      for (const auto& v : c.generic_values) f.note += ' ' + v;
    }
    c.dimensions.push_back(std::move(f));
  }
  return c;
}

namespace {

std::string strip_genitive(const std::string& word, const std::set<std::string, std::less<>>& known,
                           const PartOfConfig& config) {
  if (known.contains(word)) return word;
  for (const auto& ending : config.genitive_endings) {
    if (word.size() > ending.size() + 1 && word.ends_with(ending)) {
      std::string base = word.substr(0, word.size() - ending.size());
      if (known.contains(base)) return base;
    }
  }
  if (word.size() > 2 && word.ends_with('s')) return word.substr(0, word.size() - 1);
  return word;
}

void merge_fact(std::vector<OntologyFact>& facts, OntologyFact f, const EvidenceRef& where) {
  for (auto& g : facts) {
    if (g.kind == f.kind && g.subject == f.subject && g.object == f.object) {
      add_evidence(g.evidence, where);
      return;
    }
  }
  f.evidence = {where};
  facts.push_back(std::move(f));
}

}  // namespace

std::vector<OntologyFact> infer_partof(std::span<const ParsedSegment> forests,
                                       const std::set<std::string, std::less<>>& known_entities,
                                       const PartOfConfig& config) {
  std::vector<OntologyFact> facts;
  for (const auto& seg : forests) {
    if (!seg.parse) continue;
    for (const auto& tree : analysis_of(*seg.parse)) {
      visit_nodes(tree, [&](const ParseNode& n) {
        if (n.category != "NP" || n.children.size() != 2 || n.children[0].category != "NP") return;
        if (n.children[0].type != "FULL") return;
        const auto& whole = n.children[1];
        OntologyFact f;
        f.kind = FactKind::PartOf;
        f.subject = join_surfaces(content_leaves(n.children[0]));
        if (whole.category == "NP") {
          auto leaves = content_leaves(whole);
          std::string head = strip_genitive(leaves.back()->surface, known_entities, config);
          leaves.pop_back();
          f.object = join_surfaces(leaves);
          f.object += (f.object.empty() ? "" : " ") + head;
          f.note = "genitive";
        } else if (whole.category == "PP" && whole.children.size() == 2) {
          std::vector<const ParseNode*> prep;
          whole.children[0].collect_leaves(prep);
          std::string p = decapitalize(prep.front()->surface);
          if (!config.locative_prepositions.contains(p)) return;
          f.object = join_surfaces(content_leaves(whole.children[1]));
          f.note = "localisation: " + p;
        } else {
          return;
        }
        merge_fact(facts, std::move(f), seg.where);
      });
    }
  }
  return facts;
}

UpperOntology UpperOntology::load(const std::filesystem::path& path) {
  UpperOntology u;
  u.categories.clear();
  std::string text = read_file(path);
  for (const auto& line : resource_lines(text)) {
    for (auto w : split_ws(line.text)) u.categories.emplace(w);
  }
  return u;
}

std::vector<OntologyFact> suggest_isa(std::span<const Measurement> measurements, const UpperOntology& upper) {
  std::vector<OntologyFact> facts;
  if (!upper.categories.contains("Organ")) return facts;
  for (const auto& m : measurements) {
    if (m.resolved_by != Resolution::CompoundSplit || m.property != "Gewicht") continue;
    OntologyFact f;
    f.kind = FactKind::IsA;
    f.subject = m.entity;
    f.object = "Organ";
    f.note = "weight compound";
    merge_fact(facts, std::move(f), m.evidence);
  }
  return facts;
}

std::vector<OntologyFact> range_facts(std::span<const Measurement> measurements) {
  std::vector<OntologyFact> facts;
  std::set<std::tuple<std::string, std::string, std::string>> done;
  for (const auto& m : measurements) {
    if (!done.emplace(m.entity, m.property, m.unit).second) continue;
    ValueRange r = property_range(measurements, m.entity, m.property, m.unit);
    OntologyFact f;
    f.kind = FactKind::ValueRange;
    f.subject = m.entity;
    f.object = m.property;
    f.payload = RangePayload{r.min, r.max, m.unit, r.n};
    if (r.n == 1) f.note = "low evidence (n=1)";
    for (const auto& x : measurements) {
      if (x.entity == m.entity && x.property == m.property && x.unit == m.unit) add_evidence(f.evidence, x.evidence);
    }
    facts.push_back(std::move(f));
  }
  return facts;
}

}  // namespace bootlex
