#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bootlex/features.hpp"

namespace bootlex {

/// One right-hand-side position. Matches a constituent whose category is one
/// of `categories`, or a leaf whose surface is one of `literals`. When `rules`
/// is non-empty the constituent must have been built by one of those rules.
struct Symbol {
  std::vector<std::string> categories;
  std::vector<std::string> literals;
  std::vector<std::string> rules;

  std::string to_string() const;
  friend bool operator==(const Symbol&, const Symbol&) = default;
};

/// `agree cas,num(LHS,0,1)`: the listed children must intersect on each
/// feature; with `to_lhs` the intersection becomes the parent's value.
struct Agreement {
  std::vector<Feature> features;
  bool to_lhs = false;
  std::vector<std::size_t> children;
  friend bool operator==(const Agreement&, const Agreement&) = default;
};

/// `require cas(1)=GEN`: child 1 is restricted to the given value set.
struct Requirement {
  std::size_t child = 0;
  Feature feature = Feature::Cas;
  std::uint8_t mask = 0;
  friend bool operator==(const Requirement&, const Requirement&) = default;
};

struct GrammarRule {
  std::string name;
  std::string lhs;
  std::vector<Symbol> rhs;
  std::size_t head = 0;
  std::vector<Agreement> agreements;
  std::vector<Requirement> requirements;
  std::string type;   // TYPE attribute of the built node ("FULL", "COMPLEX"), may be empty
  std::string group;
  std::size_t index = 0;  // position in the grammar file

  bool is_unary() const { return rhs.size() == 1; }
};

class Grammar {
 public:
  const std::vector<GrammarRule>& rules() const { return rules_; }
  const std::map<std::string, std::vector<std::string>>& groups() const { return groups_; }
  const std::set<std::string>& start_categories() const { return starts_; }

  const GrammarRule* find(std::string_view name) const;
  bool is_enabled(const GrammarRule& rule) const { return !disabled_.contains(rule.group); }
  void enable_group(const std::string& group);
  void disable_group(const std::string& group);
  std::size_t enabled_rule_count() const;

  /// Leaf categories plus every LHS, i.e. all categories a chart edge can carry.
  bool is_phrasal(std::string_view category) const;

 private:
  friend Grammar load_grammar(std::string_view text, const std::string& origin);
  std::vector<GrammarRule> rules_;
  std::map<std::string, std::vector<std::string>> groups_;
  std::set<std::string> starts_;
  std::set<std::string> disabled_;
  std::set<std::string, std::less<>> phrasal_;
};

/// Line-oriented grammar DSL:
///   bootlex-grammar 1
///   %start SEG NP PP
///   [core]
///   NP2: NP -> DETD|DETI N ; type=FULL ; head=1 ; agree cas,num,gen(LHS,0,1)
/// Throws GrammarSyntaxError (with line number) or DuplicateRuleName.
Grammar load_grammar(std::string_view text, const std::string& origin = "<string>");
Grammar load_grammar_file(const std::filesystem::path& path);

}  // namespace bootlex
