#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bootlex/chart.hpp"
#include "bootlex/doc_model.hpp"
#include "bootlex/grammar.hpp"
#include "bootlex/pipeline.hpp"
#include "bootlex/pos.hpp"

namespace support {

inline std::filesystem::path resource(const std::string& name) {
  return std::filesystem::path(BOOTLEX_RESOURCE_DIR) / name;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const bootlex::ClosedClassLexicon& closed() {
  static const auto lex = bootlex::ClosedClassLexicon::load(resource("closed_class.txt"));
  return lex;
}

inline const bootlex::HeuristicConfig& heuristics() {
  static const auto h = bootlex::HeuristicConfig::load(resource("heuristics.txt"));
  return h;
}

/// The bundled grammar with the %start line replaced.
inline bootlex::Grammar grammar(const std::string& starts = "SEG") {
  std::string text = slurp(resource("grammar.txt"));
  auto at = text.find("%start");
  auto eol = text.find('\n', at);
  text.replace(at, eol - at, "%start " + starts);
  return bootlex::load_grammar(text, "grammar.txt");
}

inline bootlex::LexiconEntry noun(const std::string& surface, std::uint8_t num, std::uint8_t gen) {
  return bootlex::LexiconEntry{surface, bootlex::PosClass::N, bootlex::FeatureBundle{bootlex::cas::ALL, num, gen},
                               std::nullopt, bootlex::LexiconOrigin::Manual};
}

/// Tags a single segment of text.
inline std::vector<bootlex::TaggedToken> tag(const std::string& text, const bootlex::LexiconView& lex = {}) {
  auto doc = bootlex::segment_document({"t.txt", text});
  return bootlex::tag_segment(doc.segments.at(0), lex, bootlex::Tagger{closed(), heuristics()});
}

inline const bootlex::Resources& resources() {
  static const auto r = bootlex::Resources::load(bootlex::PipelineConfig::defaults(BOOTLEX_RESOURCE_DIR));
  return r;
}

inline std::filesystem::path data(const std::string& name) { return std::filesystem::path(BOOTLEX_DATA_DIR) / name; }

/// Tag, parse and match one segment with the bundled resources.
inline bootlex::MatchOutcome extract(const std::string& text, const bootlex::LexiconView& lex = {}) {
  const auto& r = resources();
  auto toks = tag(text, lex);
  auto parsed = bootlex::parse(toks, r.grammar);
  return bootlex::match_patterns(parsed, r.patterns, r.exceptions, {"t.txt", 1});
}

}  // namespace support
