#include "bootlex/chart.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace bootlex {

std::vector<Assumption> ParseNode::assumptions() const {
  std::vector<const ParseNode*> leaves;
  collect_leaves(leaves);
  std::vector<Assumption> out;
  for (const auto* l : leaves) {
    if (l->assumed) out.push_back(Assumption{l->span.begin, *l->assumed});
  }
  return out;
}

std::string ParseNode::text() const {
  std::vector<const ParseNode*> leaves;
  collect_leaves(leaves);
  std::string out;
  for (const auto* l : leaves) {
    if (!out.empty()) out += ' ';
    out += l->surface;
  }
  return out;
}

void ParseNode::collect_leaves(std::vector<const ParseNode*>& out) const {
  if (is_leaf()) {
    out.push_back(this);
    return;
  }
  for (const auto& c : children) c.collect_leaves(out);
}

namespace {

std::string compact_features(const FeatureBundle& f) {
  return format_component(Feature::Cas, f.cas) + "/" + format_component(Feature::Num, f.num) + "/" +
         format_component(Feature::Gen, f.gen);
}

}  // namespace

std::string bracketed(const ParseNode& node) {
  std::string out = "(" + node.category;
  if (node.is_leaf()) {
    if (node.assumed) out += '?';
    out += ' ' + node.surface + ' ' + compact_features(node.features) + ')';
    return out;
  }
  out += ':' + node.rule.value_or("") + ' ' + compact_features(node.features);
  for (const auto& c : node.children) out += ' ' + bracketed(c);
  return out + ')';
}

std::string_view to_string(ParseKind k) { return k == ParseKind::Full ? "FULL" : "PARTIAL"; }

std::vector<std::size_t> select_partial_cover(std::span<const CoverEdge> edges, std::size_t length) {
  std::vector<std::vector<std::size_t>> by_start(length);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].begin < length && edges[i].end <= length && edges[i].end > edges[i].begin) {
      by_start[edges[i].begin].push_back(i);
    }
  }
  auto better = [&](std::size_t a, std::size_t b) {
    const auto &x = edges[a], &y = edges[b];
    if (x.end != y.end) return x.end > y.end;
    if (x.assumptions != y.assumptions) return x.assumptions < y.assumptions;
    if (x.rule_index != y.rule_index) return x.rule_index < y.rule_index;
    return a < b;
  };
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos < length) {
    const auto& cands = by_start[pos];
    if (cands.empty()) return out;
    std::size_t best = *std::min_element(cands.begin(), cands.end(), better);
    out.push_back(best);
    pos = edges[best].end;
  }
  return out;
}

namespace {

constexpr std::size_t kNoRule = static_cast<std::size_t>(-1);

struct Edge {
  std::string category;
  std::size_t rule = kNoRule;
  std::size_t begin = 0, end = 0;
  FeatureBundle features;
  std::vector<std::size_t> children;
  std::size_t assumptions = 0;
  // leaves
  std::size_t token = 0;
  std::optional<std::size_t> reading;
  std::optional<PosClass> assumed;
};

bool literal_matches(const std::string& literal, const std::string& surface) {
  return literal == surface || (is_upper_initial(surface) && literal == decapitalize(surface));
}

// Requirements, then agreements until nothing changes. Returns false on an
// empty component.
bool constrain(const GrammarRule& rule, std::vector<FeatureBundle>& w) {
  for (const auto& req : rule.requirements) {
    auto m = static_cast<std::uint8_t>(w[req.child].get(req.feature) & req.mask);
    if (!m) return false;
    w[req.child].set(req.feature, m);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& ag : rule.agreements) {
      for (auto f : ag.features) {
        std::uint8_t inter = full_mask(f);
        for (auto c : ag.children) inter &= w[c].get(f);
        if (!inter) return false;
        for (auto c : ag.children) {
          if (w[c].get(f) != inter) {
            w[c].set(f, inter);
            changed = true;
          }
        }
      }
    }
  }
  return true;
}

FeatureBundle lhs_features(const GrammarRule& rule, const std::vector<FeatureBundle>& w) {
  FeatureBundle out = w[rule.head];
  for (const auto& ag : rule.agreements) {
    if (!ag.to_lhs) continue;
    for (auto f : ag.features) out.set(f, w[ag.children.front()].get(f));
  }
  return out;
}

bool lhs_tied(const GrammarRule& rule, Feature f) {
  for (const auto& ag : rule.agreements) {
    if (ag.to_lhs && std::find(ag.features.begin(), ag.features.end(), f) != ag.features.end()) return true;
  }
  return false;
}

// Narrows the children of a node whose own features were narrowed to `parent`.
bool narrow_children(const GrammarRule& rule, const FeatureBundle& parent, std::vector<FeatureBundle>& w) {
  if (!constrain(rule, w)) return false;
  for (auto f : kAllFeatures) {
    auto apply = [&](std::size_t c) {
      w[c].set(f, static_cast<std::uint8_t>(w[c].get(f) & parent.get(f)));
    };
    if (lhs_tied(rule, f)) {
      for (const auto& ag : rule.agreements) {
        if (!ag.to_lhs || std::find(ag.features.begin(), ag.features.end(), f) == ag.features.end()) continue;
        for (auto c : ag.children) apply(c);
      }
    } else {
      apply(rule.head);
    }
  }
  for (const auto& b : w) {
    if (!b.cas || !b.num || !b.gen) return false;
  }
  return constrain(rule, w);
}

class Chart {
 public:
  Chart(std::span<const TaggedToken> tagged, const Grammar& grammar, const ParseOptions& options)
      : tagged_(tagged), grammar_(grammar), options_(options), n_(tagged.size()),
        spans_(n_ * (n_ + 1)) {
    for (const auto& r : grammar.rules()) {
      if (!grammar.is_enabled(r)) continue;
      (r.is_unary() ? unary_ : nary_).push_back(&r);
    }
  }

  void build() {
    // leaves are exempt from the edge budget so a cover always exists
    for (std::size_t i = 0; i < n_; ++i) add_leaves(i);
    for (std::size_t len = 1; len <= n_ && !truncated_; ++len) {
      for (std::size_t b = 0; b + len <= n_ && !truncated_; ++b) {
        std::size_t e = b + len;
        for (const auto* rule : nary_) {
          if (rule->rhs.size() > len) continue;
          std::vector<std::size_t> picked;
          combine(*rule, 0, b, e, picked);
          if (truncated_) return;
        }
        close_unary(b, e);
      }
    }
  }

  ParseResult result() const {
    ParseResult res;
    res.truncated = truncated_;
    if (n_ == 0) return res;

    std::vector<std::size_t> full;
    for (auto id : at(0, n_)) {
      if (grammar_.start_categories().contains(edges_[id].category)) full.push_back(id);
    }
    if (!full.empty()) {
      std::size_t best = edges_[full.front()].assumptions;
      for (auto id : full) best = std::min(best, edges_[id].assumptions);
      std::vector<std::pair<std::vector<std::size_t>, ParseNode>> trees;
      std::set<std::string> seen;
      for (auto id : full) {
        if (edges_[id].assumptions != best) continue;
        auto node = extract(id, edges_[id].features);
        if (!node || !seen.insert(bracketed(*node)).second) continue;
        std::vector<std::size_t> order;
        rule_sequence(id, order);
        trees.emplace_back(std::move(order), std::move(*node));
      }
      if (!trees.empty()) {
        std::stable_sort(trees.begin(), trees.end(), [](const auto& a, const auto& b) {
          if (a.first != b.first) return a.first < b.first;
          return bracketed(a.second) < bracketed(b.second);
        });
        res.kind = ParseKind::Full;
        for (auto& t : trees) res.trees.push_back(std::move(t.second));
        return res;
      }
    }

    std::vector<CoverEdge> cover;
    cover.reserve(edges_.size());
    for (const auto& e : edges_) {
      cover.push_back(CoverEdge{e.begin, e.end, e.assumptions,
                                e.rule == kNoRule ? CoverEdge::kLexicalRank : grammar_.rules()[e.rule].index});
    }
    res.kind = ParseKind::Partial;
    for (auto id : select_partial_cover(cover, n_)) {
      if (auto node = extract(id, edges_[id].features)) res.trees.push_back(std::move(*node));
    }
    return res;
  }

 private:
  const std::vector<std::size_t>& at(std::size_t b, std::size_t e) const { return spans_[b * (n_ + 1) + e]; }
  std::vector<std::size_t>& at(std::size_t b, std::size_t e) { return spans_[b * (n_ + 1) + e]; }

  bool push(Edge edge, bool budgeted = true) {
    if (budgeted && edges_.size() >= options_.max_edges) {
      truncated_ = true;
      return false;
    }
    at(edge.begin, edge.end).push_back(edges_.size());
    edges_.push_back(std::move(edge));
    return true;
  }

  void add_leaves(std::size_t i) {
    const auto& tok = tagged_[i];
    for (std::size_t r = 0; r < tok.readings.size(); ++r) {
      const auto& reading = tok.readings[r];
      Edge leaf;
      leaf.begin = i;
      leaf.end = i + 1;
      leaf.token = i;
      leaf.reading = r;
      leaf.features = reading.features;
      if (reading.cls == PosClass::XXX) {
        for (auto cls : kOpenClasses) {
          Edge hyp = leaf;
          hyp.category = std::string(to_string(cls));
          hyp.features = FeatureBundle::full();
          hyp.assumed = cls;
          hyp.assumptions = 1;
          push(std::move(hyp), false);
        }
      }
      leaf.category = std::string(to_string(reading.cls));
      push(std::move(leaf), false);
    }
  }

  bool matches(const Symbol& sym, const Edge& e) const {
    if (e.rule == kNoRule && !e.assumed && e.category != "XXX") {
      const auto& surface = tagged_[e.token].token.surface;
      for (const auto& lit : sym.literals) {
        if (literal_matches(lit, surface)) return true;
      }
    }
    if (std::find(sym.categories.begin(), sym.categories.end(), e.category) == sym.categories.end()) return false;
    if (sym.rules.empty()) return true;
    if (e.rule == kNoRule) return false;
    const auto& name = grammar_.rules()[e.rule].name;
    return std::find(sym.rules.begin(), sym.rules.end(), name) != sym.rules.end();
  }

  void combine(const GrammarRule& rule, std::size_t j, std::size_t s, std::size_t e,
               std::vector<std::size_t>& picked) {
    std::size_t k = rule.rhs.size();
    std::size_t remaining = k - j - 1;
    std::size_t t_min = s + 1, t_max = e - remaining;
    if (j + 1 == k) t_min = e;
    for (std::size_t t = t_min; t <= t_max && !truncated_; ++t) {
      for (auto id : at(s, t)) {
        if (!matches(rule.rhs[j], edges_[id])) continue;
        picked.push_back(id);
        if (j + 1 == k) apply(rule, picked, edges_[picked.front()].begin, e);
        else combine(rule, j + 1, t, e, picked);
        picked.pop_back();
        if (truncated_) return;
      }
    }
  }

  void apply(const GrammarRule& rule, const std::vector<std::size_t>& kids, std::size_t b, std::size_t e) {
    std::vector<FeatureBundle> w;
    std::size_t assumptions = 0;
    for (auto id : kids) {
      w.push_back(edges_[id].features);
      assumptions += edges_[id].assumptions;
    }
    if (!constrain(rule, w)) return;
    Edge edge;
    edge.category = rule.lhs;
    edge.rule = rule.index;
    edge.begin = b;
    edge.end = e;
    edge.features = lhs_features(rule, w);
    edge.children = kids;
    edge.assumptions = assumptions;
    push(std::move(edge));
  }

  void close_unary(std::size_t b, std::size_t e) {
    for (std::size_t i = 0; i < at(b, e).size() && !truncated_; ++i) {
      std::size_t id = at(b, e)[i];
      for (const auto* rule : unary_) {
        if (!matches(rule->rhs[0], edges_[id])) continue;
        apply(*rule, {id}, b, e);
        if (truncated_) return;
      }
    }
  }

  void rule_sequence(std::size_t id, std::vector<std::size_t>& out) const {
    const auto& e = edges_[id];
    if (e.rule == kNoRule) return;
    out.push_back(grammar_.rules()[e.rule].index);
    for (auto c : e.children) rule_sequence(c, out);
  }

  std::optional<ParseNode> extract(std::size_t id, const FeatureBundle& features) const {
    const auto& e = edges_[id];
    ParseNode node;
    node.category = e.category;
    node.features = features;
    node.span = Span{e.begin, e.end};
    if (e.rule == kNoRule) {
      const auto& tok = tagged_[e.token];
      node.surface = tok.token.surface;
      node.reading = e.reading;
      node.assumed = e.assumed;
      const auto& reading = tok.readings[*e.reading];
      node.src = reading.src;
      node.lemma = reading.lemma;
      return node;
    }
    const auto& rule = grammar_.rules()[e.rule];
    node.rule = rule.name;
    node.type = rule.type;
    std::vector<FeatureBundle> w;
    for (auto c : e.children) w.push_back(edges_[c].features);
    if (!narrow_children(rule, features, w)) return std::nullopt;
    for (std::size_t i = 0; i < e.children.size(); ++i) {
      auto child = extract(e.children[i], w[i]);
      if (!child) return std::nullopt;
      node.children.push_back(std::move(*child));
    }
    return node;
  }

  std::span<const TaggedToken> tagged_;
  const Grammar& grammar_;
  const ParseOptions& options_;
  std::size_t n_;
  std::vector<const GrammarRule*> unary_, nary_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> spans_;
  bool truncated_ = false;
};

}  // namespace

ParseResult parse(std::span<const TaggedToken> tagged, const Grammar& grammar, const ParseOptions& options) {
  Chart chart(tagged, grammar, options);
  chart.build();
  return chart.result();
}

std::vector<FeatureAssignment> derive_features(const ParseNode& tree, std::span<const TaggedToken> tagged) {
  std::vector<const ParseNode*> leaves;
  tree.collect_leaves(leaves);
  std::vector<FeatureAssignment> out;
  for (const auto* leaf : leaves) {
    if (!leaf->reading || leaf->span.begin >= tagged.size()) continue;
    const auto& readings = tagged[leaf->span.begin].readings;
    if (*leaf->reading >= readings.size()) continue;
    FeatureBundle lexical = leaf->assumed ? FeatureBundle::full() : readings[*leaf->reading].features;
    for (auto f : kAllFeatures) {
      if (lexical.is_full(f) && !leaf->features.is_full(f)) {
        out.push_back(FeatureAssignment{leaf->span.begin, f, leaf->features.get(f)});
      }
    }
  }
  return out;
}

}  // namespace bootlex
