#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bootlex/doc_model.hpp"
#include "bootlex/features.hpp"

namespace bootlex {

enum class PosClass { N, ADJ, V, DETD, DETI, PRP, PRON, ADV, NEG, CONJ, NUMBERTOK, PUNCT, XXX };

std::string_view to_string(PosClass c);
std::optional<PosClass> parse_pos_class(std::string_view s);

/// Open classes are the only hypotheses the parser makes for XXX tokens.
inline constexpr PosClass kOpenClasses[] = {PosClass::N, PosClass::ADJ, PosClass::V};

enum class ReadingSource { Lexicon, Closed, Ung, Uc1, Adje, Uca, Num, None };

std::string_view to_string(ReadingSource s);
std::optional<ReadingSource> parse_reading_source(std::string_view s);
bool is_heuristic(ReadingSource s);

struct PosReading {
  PosClass cls = PosClass::XXX;
  FeatureBundle features;
  ReadingSource src = ReadingSource::None;
  std::optional<std::string> lemma;

  // Heuristic readings are provisional until a reviewer confirms them.
  bool provisional() const { return is_heuristic(src); }
  friend bool operator==(const PosReading&, const PosReading&) = default;
};

struct TaggedToken {
  Token token;
  std::vector<PosReading> readings;

  bool is_unknown() const { return readings.size() == 1 && readings.front().cls == PosClass::XXX; }
  friend bool operator==(const TaggedToken&, const TaggedToken&) = default;
};

enum class LexiconOrigin { Heuristic, ParserAs, FeatureDerivation, Manual };

std::string_view to_string(LexiconOrigin o);
std::optional<LexiconOrigin> parse_lexicon_origin(std::string_view s);

struct LexiconEntry {
  std::string surface;
  PosClass cls = PosClass::N;
  FeatureBundle features;
  std::optional<std::string> lemma;
  LexiconOrigin origin = LexiconOrigin::Manual;

  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
  friend auto operator<=>(const LexiconEntry&, const LexiconEntry&) = default;
};

/// Immutable snapshot of accepted lexicon entries, keyed by surface.
class LexiconView {
 public:
  LexiconView() : entries_(std::make_shared<const Map>()) {}
  explicit LexiconView(std::vector<LexiconEntry> entries);

  std::span<const LexiconEntry> lookup(std::string_view surface) const;
  std::size_t size() const { return count_; }
  std::vector<LexiconEntry> entries() const;

 private:
  using Map = std::map<std::string, std::vector<LexiconEntry>, std::less<>>;
  std::shared_ptr<const Map> entries_;
  std::size_t count_ = 0;
};

/// Built-in closed-class table. Resource format, one paradigm cell per line:
///   surface CLASS [cas=..] [num=..] [gen=..]
class ClosedClassLexicon {
 public:
  static ClosedClassLexicon load(const std::filesystem::path& path);
  static ClosedClassLexicon parse(std::string_view text, const std::string& origin = "<string>");

  std::vector<PosReading> lookup(std::string_view surface) const;
  std::size_t size() const { return cells_.size(); }

 private:
  std::multimap<std::string, PosReading, std::less<>> cells_;
};

enum class CaseCondition { Any, Upper, Lower, Number };
enum class PositionCondition { Any, Initial, NonInitial };
enum class NextCondition { Any, UpperOrConj };

struct SuffixRule {
  std::string suffix;
  std::optional<std::uint8_t> num;  // number implied by the ending
};

/// One string-shape heuristic. Non-additive rules are tried in order and the
/// first match wins; additive rules contribute whenever they match.
struct HeuristicRule {
  std::string name;
  ReadingSource src = ReadingSource::None;
  bool enabled = true;
  bool additive = false;
  PosClass cls = PosClass::N;
  CaseCondition case_cond = CaseCondition::Any;
  PositionCondition position = PositionCondition::Any;
  NextCondition next = NextCondition::Any;
  bool adjacent_noun = false;
  bool lemma_lower = false;
  std::vector<SuffixRule> suffixes;
  FeatureBundle features;
};

struct HeuristicConfig {
  std::vector<HeuristicRule> rules;

  static HeuristicConfig defaults();
  static HeuristicConfig load(const std::filesystem::path& path);
  static HeuristicConfig parse(std::string_view text, const std::string& origin = "<string>");
  HeuristicRule* find(std::string_view name);
};

std::vector<PosReading> lookup_closed_class(const ClosedClassLexicon& closed,
                                            std::string_view surface);

/// Readings from the heuristic rules for tokens[index]; empty when no rule fires.
std::vector<PosReading> apply_heuristics(std::span<const Token> tokens, std::size_t index,
                                         const HeuristicConfig& config);

struct Tagger {
  const ClosedClassLexicon& closed;
  const HeuristicConfig& heuristics;
};

/// Candidate readings per token; disambiguation is left to the parser.
std::vector<TaggedToken> tag_segment(const Segment& segment, const LexiconView& lexicon,
                                     const Tagger& tagger);

/// TELEGRAPHIC unless some token carries a finite-verb reading.
SegmentKind classify_segment(std::span<const TaggedToken> tagged);

/// Capitalises a segment-initial word back to lower case for lookup.
std::string decapitalize(std::string_view word);
std::string capitalize(std::string_view word);
bool is_upper_initial(std::string_view word);

}  // namespace bootlex
