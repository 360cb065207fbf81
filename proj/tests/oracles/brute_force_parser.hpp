#pragma once

// Exhaustive top-down derivation enumerator. It shares no code with the chart
// parser: every derivation of a start symbol over the whole segment is
// generated explicitly, features are computed per derivation, and the
// complete-parse set is read off the enumeration.

#include <algorithm>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "bootlex/features.hpp"
#include "bootlex/grammar.hpp"
#include "bootlex/pos.hpp"

namespace oracle {

using bootlex::Feature;
using bootlex::FeatureBundle;
using bootlex::GrammarRule;
using bootlex::Symbol;

struct Deriv {
  std::string category;
  const GrammarRule* rule = nullptr;
  std::vector<std::shared_ptr<const Deriv>> kids;
  FeatureBundle up;  // bottom-up features
  int assumed = 0;
  // leaf
  std::string surface;
  bool hypothesis = false;
  bool open_leaf = false;  // bare XXX
};
using DerivPtr = std::shared_ptr<const Deriv>;

inline std::uint8_t get(const FeatureBundle& b, Feature f) {
  switch (f) {
    case Feature::Cas: return b.cas;
    case Feature::Num: return b.num;
    default: return b.gen;
  }
}
inline void put(FeatureBundle& b, Feature f, std::uint8_t v) {
  switch (f) {
    case Feature::Cas: b.cas = v; break;
    case Feature::Num: b.num = v; break;
    default: b.gen = v; break;
  }
}
inline std::uint8_t all_of(Feature f) { return f == Feature::Cas ? 15 : f == Feature::Num ? 3 : 7; }

// Requirements once, then agreements repeated until stable.
inline bool solve(const GrammarRule& r, std::vector<FeatureBundle>& w) {
  for (const auto& q : r.requirements) {
    std::uint8_t v = get(w[q.child], q.feature) & q.mask;
    if (v == 0) return false;
    put(w[q.child], q.feature, v);
  }
  for (;;) {
    bool moved = false;
    for (const auto& a : r.agreements) {
      for (auto f : a.features) {
        std::uint8_t v = all_of(f);
        for (auto c : a.children) v &= get(w[c], f);
        if (v == 0) return false;
        for (auto c : a.children) {
          if (get(w[c], f) != v) moved = true;
          put(w[c], f, v);
        }
      }
    }
    if (!moved) return true;
  }
}

inline bool tied(const GrammarRule& r, Feature f) {
  for (const auto& a : r.agreements) {
    if (a.to_lhs && std::count(a.features.begin(), a.features.end(), f)) return true;
  }
  return false;
}

inline FeatureBundle parent_of(const GrammarRule& r, const std::vector<FeatureBundle>& w) {
  FeatureBundle p = w[r.head];
  for (auto f : bootlex::kAllFeatures) {
    for (const auto& a : r.agreements) {
      if (a.to_lhs && std::count(a.features.begin(), a.features.end(), f)) put(p, f, get(w[a.children[0]], f));
    }
  }
  return p;
}

inline bool upper_initial(const std::string& s) { return !s.empty() && s[0] >= 'A' && s[0] <= 'Z'; }

class Enumerator {
 public:
  Enumerator(const std::vector<bootlex::TaggedToken>& toks, const bootlex::Grammar& g) : toks_(toks), g_(g) {}

  /// Bracketed renderings of every complete parse with the fewest assumptions.
  std::set<std::string> full_parses() {
    std::vector<DerivPtr> all;
    for (const auto& start : g_.start_categories()) {
      Symbol s;
      s.categories = {start};
      for (auto& d : generate(s, 0, toks_.size())) all.push_back(d);
    }
    int best = 1 << 30;
    for (const auto& d : all) best = std::min(best, d->assumed);
    std::set<std::string> out;
    for (const auto& d : all) {
      if (d->assumed == best) out.insert(render(*d, d->up));
    }
    return out;
  }

 private:
  bool symbol_takes(const Symbol& s, const Deriv& d) const {
    if (!d.rule && !d.hypothesis && !d.open_leaf) {
      for (const auto& lit : s.literals) {
        if (lit == d.surface) return true;
        if (upper_initial(d.surface)) {
          std::string low = d.surface;
          low[0] = static_cast<char>(low[0] - 'A' + 'a');
          if (lit == low) return true;
        }
      }
    }
    if (std::find(s.categories.begin(), s.categories.end(), d.category) == s.categories.end()) return false;
    if (s.rules.empty()) return true;
    return d.rule && std::find(s.rules.begin(), s.rules.end(), d.rule->name) != s.rules.end();
  }

  std::vector<DerivPtr> leaves(std::size_t i) const {
    std::vector<DerivPtr> out;
    for (const auto& r : toks_[i].readings) {
      if (r.cls == bootlex::PosClass::XXX) {
        for (const char* c : {"N", "ADJ", "V"}) {
          auto d = std::make_shared<Deriv>();
          d->category = c;
          d->surface = toks_[i].token.surface;
          d->hypothesis = true;
          d->assumed = 1;
          out.push_back(d);
        }
      }
      auto d = std::make_shared<Deriv>();
      d->category = std::string(bootlex::to_string(r.cls));
      d->surface = toks_[i].token.surface;
      d->up = r.features;
      d->open_leaf = r.cls == bootlex::PosClass::XXX;
      out.push_back(d);
    }
    return out;
  }

  // All derivations over [i, j) that `s` accepts.
  std::vector<DerivPtr> generate(const Symbol& s, std::size_t i, std::size_t j) {
    std::vector<DerivPtr> out;
    if (j == i + 1) {
      for (auto& d : leaves(i)) {
        if (symbol_takes(s, *d)) out.push_back(d);
      }
    }
    for (const auto& rule : g_.rules()) {
      if (!g_.is_enabled(rule)) continue;
      if (std::find(s.categories.begin(), s.categories.end(), rule.lhs) == s.categories.end()) continue;
      if (!s.rules.empty() && std::find(s.rules.begin(), s.rules.end(), rule.name) == s.rules.end()) continue;
      if (rule.rhs.size() > j - i) continue;
      std::vector<DerivPtr> picked;
      expand(rule, 0, i, j, picked, out);
    }
    return out;
  }

  void expand(const GrammarRule& rule, std::size_t k, std::size_t from, std::size_t to, std::vector<DerivPtr>& picked,
              std::vector<DerivPtr>& out) {
    if (k == rule.rhs.size()) {
      if (from != to) return;
      std::vector<FeatureBundle> w;
      int assumed = 0;
      for (const auto& p : picked) {
        w.push_back(p->up);
        assumed += p->assumed;
      }
      if (!solve(rule, w)) return;
      auto d = std::make_shared<Deriv>();
      d->category = rule.lhs;
      d->rule = &rule;
      d->kids = picked;
      d->up = parent_of(rule, w);
      d->assumed = assumed;
      out.push_back(d);
      return;
    }
    std::size_t left = rule.rhs.size() - k - 1;
    for (std::size_t mid = from + 1; mid + left <= to; ++mid) {
      for (auto& d : generate(rule.rhs[k], from, mid)) {
        picked.push_back(d);
        expand(rule, k + 1, mid, to, picked, out);
        picked.pop_back();
      }
    }
  }

  static std::string compact(const FeatureBundle& b) {
    return bootlex::format_component(Feature::Cas, b.cas) + "/" + bootlex::format_component(Feature::Num, b.num) +
           "/" + bootlex::format_component(Feature::Gen, b.gen);
  }

  // Renders a derivation whose own features were fixed to `mine` from above.
  std::string render(const Deriv& d, const FeatureBundle& mine) const {
    if (!d.rule) {
      return "(" + d.category + (d.hypothesis ? "?" : "") + " " + d.surface + " " + compact(mine) + ")";
    }
    const auto& r = *d.rule;
    std::vector<FeatureBundle> w;
    for (const auto& k : d.kids) w.push_back(k->up);
    solve(r, w);
    for (auto f : bootlex::kAllFeatures) {
      if (tied(r, f)) {
        for (const auto& a : r.agreements) {
          if (!a.to_lhs || !std::count(a.features.begin(), a.features.end(), f)) continue;
          for (auto c : a.children) put(w[c], f, get(w[c], f) & get(mine, f));
        }
      } else {
        put(w[r.head], f, get(w[r.head], f) & get(mine, f));
      }
    }
    solve(r, w);
    std::string s = "(" + d.category + ":" + r.name + " " + compact(mine);
    for (std::size_t c = 0; c < d.kids.size(); ++c) s += " " + render(*d.kids[c], w[c]);
    return s + ")";
  }

  const std::vector<bootlex::TaggedToken>& toks_;
  const bootlex::Grammar& g_;
};

}  // namespace oracle
