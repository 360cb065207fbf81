#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "bootlex/chart.hpp"

namespace bootlex {

struct EvidenceRef {
  std::string doc;
  std::size_t segment = 0;
  friend bool operator==(const EvidenceRef&, const EvidenceRef&) = default;
  friend auto operator<=>(const EvidenceRef&, const EvidenceRef&) = default;
};

struct RelationValue {
  std::string value;
  int count = 1;
  friend bool operator==(const RelationValue&, const RelationValue&) = default;
};

/// Entity / attribute-value record (RATT-V).
struct Relation {
  std::string entity;
  std::vector<RelationValue> values;
  std::vector<EvidenceRef> evidence;
  std::string pattern;
  friend bool operator==(const Relation&, const Relation&) = default;
};

/// Constituent as seen by the pattern matcher: NP and PP stay whole, every
/// other node is flattened to its leaves.
struct Chunk {
  std::string category;       // NP, PP, ADJ, NEG, PUNCT, ... or XXX for an open leaf
  std::string surface;        // leaf surface or constituent text
  std::string value;          // lemma-based text used in value slots
  std::string entity;         // NP text without leading determiners
  const ParseNode* node = nullptr;
};

std::vector<Chunk> chunk_sequence(std::span<const ParseNode> trees);

/// Matcher over chunks: alternatives of categories and/or quoted literals,
/// an optional quantifier, and an optional slot name.
struct SlotMatcher {
  std::vector<std::string> categories;
  std::vector<std::string> literals;
  char quantifier = 0;  // 0, '?', '+', '*'
  std::string slot;
};

struct Emission {
  std::string entity_slot;
  std::vector<std::string> value_slots;
};

struct PatternRule {
  std::string name;
  std::vector<SlotMatcher> shape;
  std::vector<Emission> emissions;
};

/// Ordered pattern list; the first rule whose match is not excluded wins.
///   bootlex-patterns 1
///   P6: NP:e1 "und" NP:e2 ADJ|V:v "." => e1:v ; e2:v
struct PatternSet {
  std::vector<PatternRule> rules;

  static PatternSet load(const std::filesystem::path& path);
  static PatternSet parse(std::string_view text, const std::string& origin = "<string>");
};

/// Pattern family name -> excluded entity surfaces (exact match).
struct ExceptionList {
  std::map<std::string, std::set<std::string, std::less<>>, std::less<>> excluded;

  bool excludes(std::string_view pattern, std::string_view entity) const;
  static ExceptionList load(const std::filesystem::path& path);
  static ExceptionList parse(std::string_view text, const std::string& origin = "<string>");
};

struct MatchOutcome {
  std::vector<Relation> relations;
  std::optional<std::string> pattern;  // nullopt: no pattern matched
  bool matched() const { return pattern.has_value(); }
};

/// Binds one chunk sequence to the first applicable pattern.
std::optional<std::pair<std::string, std::vector<Relation>>> match_chunks(
    std::span<const Chunk> chunks, const PatternSet& patterns, const ExceptionList& exceptions);

/// Runs every reading of the parse through the patterns and deduplicates the
/// resulting relations. Every relation carries `where` as evidence.
MatchOutcome match_patterns(const ParseResult& parse, const PatternSet& patterns,
                            const ExceptionList& exceptions, const EvidenceRef& where);

/// Corpus-level aggregation: one row per entity, counts summed per value,
/// rows and values in order of first appearance.
class RelationTable {
 public:
  struct Row {
    std::string entity;
    std::vector<RelationValue> values;
    std::vector<std::vector<EvidenceRef>> value_evidence;  // parallel to values
    std::vector<EvidenceRef> evidence;
  };

  const std::vector<Row>& rows() const { return rows_; }
  const Row* find(std::string_view entity) const;
  int total_count() const;
  bool empty() const { return rows_.empty(); }

  void add(const Relation& r);

 private:
  std::vector<Row> rows_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

RelationTable aggregate(std::span<const Relation> relations);

struct SegmentOutcome {
  ParseKind parse = ParseKind::Partial;
  bool matched = false;
};

/// Fractions over all segments. `full`, `partial` (PARTIAL and unmatched) and
/// `partial_matched` are disjoint and sum to 1; `unmatched` counts every
/// segment no pattern matched, whatever its parse.
struct CoverageReport {
  std::size_t segments = 0;
  double full = 0.0;
  double partial = 0.0;
  double partial_matched = 0.0;
  double unmatched = 0.0;
  bool empty = true;
  friend bool operator==(const CoverageReport&, const CoverageReport&) = default;
};

CoverageReport coverage_report(std::span<const SegmentOutcome> outcomes);

}  // namespace bootlex
