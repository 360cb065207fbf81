#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bootlex/features.hpp"
#include "bootlex/grammar.hpp"
#include "bootlex/pos.hpp"

namespace bootlex {

struct Assumption {
  std::size_t token = 0;
  PosClass cls = PosClass::N;
  friend bool operator==(const Assumption&, const Assumption&) = default;
};

struct ParseNode {
  std::string category;
  std::optional<std::string> rule;  // inner nodes only
  std::string type;                 // TYPE attribute, from the rule
  FeatureBundle features;
  Span span;                        // token index range [begin, end)
  std::vector<ParseNode> children;

  // Leaf data.
  std::optional<std::size_t> reading;      // index into the token's readings
  std::optional<PosClass> assumed;         // class hypothesised for an XXX token
  std::optional<ReadingSource> src;
  std::string surface;
  std::optional<std::string> lemma;

  bool is_leaf() const { return children.empty(); }
  std::vector<Assumption> assumptions() const;
  std::string text() const;  // leaf surfaces joined by single spaces
  void collect_leaves(std::vector<const ParseNode*>& out) const;

  friend bool operator==(const ParseNode&, const ParseNode&) = default;
};

/// Canonical one-line rendering, used for set comparisons and ordering.
std::string bracketed(const ParseNode& node);

enum class ParseKind { Full, Partial };
std::string_view to_string(ParseKind k);

struct ParseResult {
  ParseKind kind = ParseKind::Partial;
  std::vector<ParseNode> trees;
  bool truncated = false;  // edge budget exhausted
  friend bool operator==(const ParseResult&, const ParseResult&) = default;
};

struct ParseOptions {
  std::size_t max_edges = 200000;
};

/// Bottom-up chart parse. Returns every complete analysis with the minimal
/// number of XXX class assumptions, or the greedy partial cover when none exists.
ParseResult parse(std::span<const TaggedToken> tagged, const Grammar& grammar,
                  const ParseOptions& options = {});

/// Edge summary used by the partial-cover selection.
struct CoverEdge {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t assumptions = 0;
  std::size_t rule_index = kLexicalRank;  // leaves rank after every rule

  static constexpr std::size_t kLexicalRank = static_cast<std::size_t>(-1);
};

/// Greedy left-to-right choice of maximal edges: longest first, then fewer
/// assumptions, then lower rule index, then lower edge index. Requires a
/// width-1 edge at every position; returns indices into `edges`.
std::vector<std::size_t> select_partial_cover(std::span<const CoverEdge> edges, std::size_t length);

struct FeatureAssignment {
  std::size_t token = 0;
  Feature feature = Feature::Cas;
  std::uint8_t mask = 0;
  friend bool operator==(const FeatureAssignment&, const FeatureAssignment&) = default;
};

/// Feature values learned from agreement: for every leaf whose reading left a
/// component open but whose solved features narrow it.
std::vector<FeatureAssignment> derive_features(const ParseNode& tree,
                                               std::span<const TaggedToken> tagged);

}  // namespace bootlex
