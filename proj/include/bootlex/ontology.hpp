#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "bootlex/chart.hpp"
#include "bootlex/measurement.hpp"
#include "bootlex/relations.hpp"

namespace bootlex {

enum class Status { Suggested, Accepted, Rejected };
std::string_view to_string(Status s);
std::optional<Status> parse_status(std::string_view s);

enum class ConceptKind { EntityConcept, PropertyValuePhrase };
std::string_view to_string(ConceptKind k);

struct ConceptCandidate {
  std::string name;      // adjective lower-cased: "harte Hirnhaut"
  std::string surface;   // as it occurs: "Harte Hirnhaut"
  ConceptKind kind = ConceptKind::PropertyValuePhrase;
  std::vector<EvidenceRef> evidence;
  int score = 0;  // entity-position occurrences, or all occurrences for value phrases
};

enum class FactKind { IsA, PartOf, HasPropertyDim, ValueRange };
std::string_view to_string(FactKind k);
std::optional<FactKind> parse_fact_kind(std::string_view s);

struct RangePayload {
  double min = 0.0;
  double max = 0.0;
  std::string unit;
  std::size_t n = 0;
  friend bool operator==(const RangePayload&, const RangePayload&) = default;
};

struct OntologyFact {
  FactKind kind = FactKind::IsA;
  std::string subject;
  std::string object;
  std::optional<RangePayload> payload;  // present iff kind == ValueRange
  Status status = Status::Suggested;
  std::string note;
  std::vector<EvidenceRef> evidence;
};

/// Parse of one segment together with where it came from.
struct ParsedSegment {
  EvidenceRef where;
  const ParseResult* parse = nullptr;
};

/// Adjective + noun phrases: named concepts when they fill the entity slot of
/// a matched pattern, property-value phrases otherwise.
std::vector<ConceptCandidate> detect_concepts(std::span<const Relation> relations,
                                              std::span<const ParsedSegment> forests);

/// value -> dimension ("color", "visual", "generic"). Resource format:
///   <dimension> <value> <value> ...
struct DimensionLexicon {
  std::map<std::string, std::string, std::less<>> dimension_of;
  std::string generic_dimension = "generic";

  static DimensionLexicon load(const std::filesystem::path& path);
  static DimensionLexicon parse(std::string_view text, const std::string& origin = "<string>");
};

struct Classification {
  std::vector<OntologyFact> dimensions;      // HAS_PROPERTY_DIM suggestions
  std::vector<std::string> generic_values;   // e.g. "intakt"
  std::vector<std::string> unknown_values;   // DIMENSION_UNKNOWN review items
  std::map<std::string, std::vector<std::string>> values_by_dimension;
};

Classification classify_concept(const std::string& entity,
                                std::span<const std::pair<std::string, int>> inventory,
                                const DimensionLexicon& dims, std::size_t min_values = 1);

struct PartOfConfig {
  std::set<std::string, std::less<>> locative_prepositions{"ueber", "unter", "an", "hinter", "neben", "vor"};
  std::vector<std::string> genitive_endings{"ens", "es", "s"};
};

/// PART_OF(X, Y) from "X des/der Y" and "X ueber/an der Y". Duplicates are
/// merged; evidence accumulates.
std::vector<OntologyFact> infer_partof(std::span<const ParsedSegment> forests,
                                       const std::set<std::string, std::less<>>& known_entities,
                                       const PartOfConfig& config = {});

/// Seed categories the is-a suggestions may point at.
struct UpperOntology {
  std::set<std::string, std::less<>> categories{"Organ", "Koerperregion", "Befund"};
  static UpperOntology load(const std::filesystem::path& path);
};

/// IS_A(X, Organ) for every compound-split weight measurement of X.
std::vector<OntologyFact> suggest_isa(std::span<const Measurement> measurements,
                                      const UpperOntology& upper);

/// One VALUE_RANGE per (entity, property, unit).
std::vector<OntologyFact> range_facts(std::span<const Measurement> measurements);

}  // namespace bootlex
