#include "bootlex/grammar.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "bootlex/error.hpp"
#include "text_util.hpp"

namespace bootlex {

std::string Symbol::to_string() const {
  std::string out;
  for (const auto& c : categories) {
    if (!out.empty()) out += '|';
    out += c;
  }
  for (const auto& l : literals) {
    if (!out.empty()) out += '|';
    out += '"' + l + '"';
  }
  if (!rules.empty()) {
    out += '@';
    for (std::size_t i = 0; i < rules.size(); ++i) {
      if (i) out += '|';
      out += rules[i];
    }
  }
  return out;
}

const GrammarRule* Grammar::find(std::string_view name) const {
  for (const auto& r : rules_) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

void Grammar::enable_group(const std::string& group) { disabled_.erase(group); }

void Grammar::disable_group(const std::string& group) {
  if (!groups_.contains(group)) {
    throw Error(ErrorCode::GrammarSyntaxError, "unknown rule group '" + group + "'");
  }
  disabled_.insert(group);
}

std::size_t Grammar::enabled_rule_count() const {
  return static_cast<std::size_t>(
      std::count_if(rules_.begin(), rules_.end(), [this](const GrammarRule& r) { return is_enabled(r); }));
}

bool Grammar::is_phrasal(std::string_view category) const { return phrasal_.contains(category); }

namespace {

[[noreturn]] void syntax_error(const std::string& origin, std::size_t line, const std::string& msg) {
  throw Error(ErrorCode::GrammarSyntaxError, origin + ":" + std::to_string(line) + ": " + msg);
}

Symbol parse_symbol(std::string_view text, const std::string& origin, std::size_t line) {
  Symbol sym;
  std::string_view alts = text, rules;
  // '@' outside quotes separates the rule restriction
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '"') quoted = !quoted;
    if (text[i] == '@' && !quoted) {
      alts = text.substr(0, i);
      rules = text.substr(i + 1);
      break;
    }
  }
  for (auto alt : split(alts, '|')) {
    if (alt.empty()) syntax_error(origin, line, "empty alternative in '" + std::string(text) + "'");
    if (alt.front() == '"') {
      if (alt.size() < 3 || alt.back() != '"') syntax_error(origin, line, "unterminated literal " + std::string(alt));
      sym.literals.emplace_back(alt.substr(1, alt.size() - 2));
    } else {
      sym.categories.emplace_back(alt);
    }
  }
  if (!rules.empty()) {
    for (auto r : split(rules, '|')) sym.rules.emplace_back(r);
  }
  return sym;
}

std::vector<Feature> parse_feature_list(std::string_view text, const std::string& origin, std::size_t line) {
  std::vector<Feature> out;
  for (auto f : split(text, ',')) {
    if (f == "cas") out.push_back(Feature::Cas);
    else if (f == "num") out.push_back(Feature::Num);
    else if (f == "gen") out.push_back(Feature::Gen);
    else syntax_error(origin, line, "unknown feature '" + std::string(f) + "'");
  }
  return out;
}

std::size_t parse_index(std::string_view s, const std::string& origin, std::size_t line) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    syntax_error(origin, line, "expected child index, got '" + std::string(s) + "'");
  }
  return static_cast<std::size_t>(std::stoul(std::string(s)));
}

// agree cas,num(LHS,0,1)
Agreement parse_agreement(std::string_view text, const std::string& origin, std::size_t line) {
  auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') syntax_error(origin, line, "malformed agree clause");
  Agreement a;
  a.features = parse_feature_list(trim(text.substr(0, open)), origin, line);
  for (auto arg : split(text.substr(open + 1, text.size() - open - 2), ',')) {
    arg = trim(arg);
    if (arg == "LHS") a.to_lhs = true;
    else a.children.push_back(parse_index(arg, origin, line));
  }
  if (a.children.empty()) syntax_error(origin, line, "agree clause lists no children");
  return a;
}

// require cas(1)=GEN
Requirement parse_requirement(std::string_view text, const std::string& origin, std::size_t line) {
  auto open = text.find('('), close = text.find(')'), eq = text.find('=');
  if (open == std::string_view::npos || close == std::string_view::npos || eq == std::string_view::npos ||
      !(open < close && close < eq)) {
    syntax_error(origin, line, "malformed require clause");
  }
  Requirement r;
  auto feats = parse_feature_list(trim(text.substr(0, open)), origin, line);
  if (feats.size() != 1) syntax_error(origin, line, "require takes one feature");
  r.feature = feats[0];
  r.child = parse_index(trim(text.substr(open + 1, close - open - 1)), origin, line);
  auto mask = parse_component(r.feature, trim(text.substr(eq + 1)));
  if (!mask) syntax_error(origin, line, "bad value in require clause");
  r.mask = *mask;
  return r;
}

// RHS tokens are separated by spaces; quoted literals contain no spaces.
GrammarRule parse_rule(std::string_view text, const std::string& group, const std::string& origin,
                       std::size_t line) {
  GrammarRule rule;
  rule.group = group;
  auto clauses = split(text, ';');
  std::string_view head = clauses[0];
  auto colon = head.find(':');
  auto arrow = head.find("->");
  if (colon == std::string_view::npos || arrow == std::string_view::npos || colon > arrow) {
    syntax_error(origin, line, "expected 'NAME: LHS -> RHS...'");
  }
  rule.name = std::string(trim(head.substr(0, colon)));
  rule.lhs = std::string(trim(head.substr(colon + 1, arrow - colon - 1)));
  if (rule.name.empty() || rule.lhs.empty()) syntax_error(origin, line, "empty rule name or LHS");
  for (auto sym : split_ws(trim(head.substr(arrow + 2)))) rule.rhs.push_back(parse_symbol(sym, origin, line));
  if (rule.rhs.empty()) syntax_error(origin, line, "rule " + rule.name + " has an empty right-hand side");

  for (std::size_t i = 1; i < clauses.size(); ++i) {
    auto clause = trim(clauses[i]);
    if (clause.empty()) continue;
    if (clause.starts_with("head=")) {
      rule.head = parse_index(clause.substr(5), origin, line);
    } else if (clause.starts_with("type=")) {
      rule.type = std::string(clause.substr(5));
    } else if (clause.starts_with("agree ")) {
      rule.agreements.push_back(parse_agreement(trim(clause.substr(6)), origin, line));
    } else if (clause.starts_with("require ")) {
      rule.requirements.push_back(parse_requirement(trim(clause.substr(8)), origin, line));
    } else {
      syntax_error(origin, line, "unknown clause '" + std::string(clause) + "'");
    }
  }
  if (rule.head >= rule.rhs.size()) syntax_error(origin, line, "head index out of range in " + rule.name);
  for (const auto& a : rule.agreements) {
    for (auto c : a.children) {
      if (c >= rule.rhs.size()) syntax_error(origin, line, "agree references undeclared child in " + rule.name);
    }
  }
  for (const auto& r : rule.requirements) {
    if (r.child >= rule.rhs.size()) syntax_error(origin, line, "require references undeclared child in " + rule.name);
  }
  return rule;
}

}  // namespace

Grammar load_grammar(std::string_view text, const std::string& origin) {
  Grammar g;
  auto lines = resource_lines(text);
  if (lines.empty() || split_ws(lines.front().text) != std::vector<std::string_view>{"bootlex-grammar", "1"}) {
    syntax_error(origin, lines.empty() ? 1 : lines.front().number, "missing header 'bootlex-grammar 1'");
  }
  std::string group = "core";
  std::map<std::string, std::size_t> line_of;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (line.text.starts_with("%start")) {
      for (auto c : split_ws(line.text.substr(6))) g.starts_.emplace(c);
      continue;
    }
    if (line.text.front() == '[') {
      if (line.text.back() != ']') syntax_error(origin, line.number, "malformed group header");
      group = std::string(trim(line.text.substr(1, line.text.size() - 2)));
      g.groups_[group];
      continue;
    }
    GrammarRule rule = parse_rule(line.text, group, origin, line.number);
    if (line_of.contains(rule.name)) {
      throw Error(ErrorCode::DuplicateRuleName, origin + ":" + std::to_string(line.number) + ": rule '" +
                                                    rule.name + "' already defined on line " +
                                                    std::to_string(line_of[rule.name]));
    }
    line_of[rule.name] = line.number;
    rule.index = g.rules_.size();
    g.groups_[group].push_back(rule.name);
    g.phrasal_.insert(rule.lhs);
    g.rules_.push_back(std::move(rule));
  }
  if (g.starts_.empty()) g.starts_ = {"SEG"};

  for (const auto& r : g.rules_) {
    for (const auto& s : r.rhs) {
      for (const auto& name : s.rules) {
        if (!g.find(name)) syntax_error(origin, line_of[r.name], "unknown rule '" + name + "' in " + r.name);
      }
    }
  }

  // Unary cycles would make the chart infinite.
  std::map<std::string, std::vector<std::string>> unary;
  for (const auto& r : g.rules_) {
    if (r.is_unary()) {
      for (const auto& c : r.rhs[0].categories) unary[r.lhs].push_back(c);
    }
  }
  std::map<std::string, int> state;
  std::function<void(const std::string&)> visit = [&](const std::string& cat) {
    state[cat] = 1;
    for (const auto& next : unary[cat]) {
      if (state[next] == 1) syntax_error(origin, 1, "unary rule cycle through " + next);
      if (state[next] == 0) visit(next);
    }
    state[cat] = 2;
  };
  for (const auto& [cat, _] : unary) {
    if (state[cat] == 0) visit(cat);
  }
  return g;
}

Grammar load_grammar_file(const std::filesystem::path& path) {
  return load_grammar(read_file(path), path.string());
}

}  // namespace bootlex
