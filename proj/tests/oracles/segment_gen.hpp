#pragma once

// Random segments for comparing the chart parser with exhaustive enumeration.

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "bootlex/chart.hpp"
#include "support.hpp"

namespace oracle::segments {

using namespace bootlex;


inline LexiconEntry entry(const std::string& s, PosClass c, FeatureBundle f = {}) {
  return LexiconEntry{s, c, f, std::nullopt, LexiconOrigin::Manual};
}

inline const LexiconView& lexicon() {
  static const LexiconView lex({
      entry("Leber", PosClass::N, {cas::ALL, num::SG, gen::FEM}),
      entry("Niere", PosClass::N, {cas::ALL, num::SG, gen::FEM}),
      entry("Herzens", PosClass::N, {cas::GEN, num::SG, gen::NTR}),
      entry("Inhalt", PosClass::N, {cas::ALL, num::SG, gen::MAS}),
      entry("Augen", PosClass::N, {cas::ALL, num::PL, gen::NTR}),
      entry("glatt", PosClass::ADJ),
      entry("frei", PosClass::ADJ),
      entry("akute", PosClass::ADJ, {cas::ALL, num::ALL, gen::FEM}),
      entry("geoeffnet", PosClass::V),
      entry("geoeffnet", PosClass::ADJ),
      entry("g", PosClass::N),
  });
  return lex;
}

// Surfaces grouped by the leaf category they can fill.
inline const std::map<std::string, std::vector<std::string>>& vocabulary() {
  static const std::map<std::string, std::vector<std::string>> v{
      {"N", {"Leber", "Niere", "Herzens", "Inhalt", "Augen", "Gekroesewurzel", "Blutanhaftungen", "g"}},
      {"ADJ", {"glatt", "frei", "akute", "geoeffnet"}},
      {"V", {"geoeffnet", "ist", "sind"}},
      {"DETD", {"der", "die", "das", "des", "dem", "den"}},
      {"DETI", {"kein", "keine", "keinem"}},
      {"PRP", {"in", "an", "ohne", "auf", "bis"}},
      {"PRON", {"es", "sie"}},
      {"ADV", {"sehr"}},
      {"NEG", {"nicht"}},
      {"CONJ", {"und"}},
      {"NUMBERTOK", {"12", "135"}},
      {"PUNCT", {".", ","}},
      {"XXX", {"grmbl", "ungehoeriger"}},
  };
  return v;
}

inline std::string pick(const std::vector<std::string>& v, std::mt19937& rng) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

// Random top-down expansion of the grammar into surface words.
inline bool expand(const Grammar& g, const Symbol& sym, int depth, std::mt19937& rng, std::vector<std::string>& out) {
  if (out.size() > 6) return false;
  std::vector<std::string> options;
  for (const auto& l : sym.literals) options.push_back("\"" + l);
  for (const auto& c : sym.categories) options.push_back(c);
  std::string choice = pick(options, rng);
  if (choice[0] == '"') {
    out.push_back(choice.substr(1));
    return true;
  }
  std::vector<const GrammarRule*> rules;
  for (const auto& r : g.rules()) {
    if (r.lhs != choice || !g.is_enabled(r)) continue;
    if (!sym.rules.empty() && std::find(sym.rules.begin(), sym.rules.end(), r.name) == sym.rules.end()) continue;
    rules.push_back(&r);
  }
  if (rules.empty()) {
    auto it = vocabulary().find(choice);
    if (it == vocabulary().end()) return false;
    // open-class slots are sometimes filled by unknown words
    if ((choice == "N" || choice == "ADJ" || choice == "V") && rng() % 5 == 0) {
      out.push_back(pick(vocabulary().at("XXX"), rng));
    } else {
      out.push_back(pick(it->second, rng));
    }
    return true;
  }
  if (depth > 5) return false;
  const auto* r = rules[std::uniform_int_distribution<std::size_t>(0, rules.size() - 1)(rng)];
  for (const auto& s : r->rhs) {
    if (!expand(g, s, depth + 1, rng, out)) return false;
  }
  return true;
}

inline std::vector<std::string> random_words(std::mt19937& rng) {
  std::vector<std::string> all;
  for (const auto& [_, words] : vocabulary()) all.insert(all.end(), words.begin(), words.end());
  std::size_t n = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(pick(all, rng));
  if (rng() % 2) out.back() = ".";
  return out;
}

inline std::vector<TaggedToken> tag_words(const std::vector<std::string>& words) {
  std::string text;
  for (const auto& w : words) text += (text.empty() ? "" : " ") + w;
  Segment seg;
  seg.tokens = tokenize(text);
  return tag_segment(seg, lexicon(), Tagger{support::closed(), support::heuristics()});
}

}  // namespace oracle::segments
