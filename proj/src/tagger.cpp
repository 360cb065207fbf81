#include <algorithm>
#include <array>

#include "bootlex/error.hpp"
#include "bootlex/pos.hpp"
#include "text_util.hpp"
#include "utf8.hpp"

namespace bootlex {

namespace {

constexpr std::array kPosNames{"N",   "ADJ", "V",   "DETD", "DETI",      "PRP",  "PRON",
                               "ADV", "NEG", "CONJ", "NUMBERTOK", "PUNCT", "XXX"};
constexpr std::array kSourceNames{"LEXICON", "CLOSED", "UNG", "UC1", "ADJE", "UCA", "NUM", "NONE"};
constexpr std::array kOriginNames{"HEURISTIC", "PARSER_AS", "FEATURE_DERIVATION", "MANUAL"};

template <typename Enum, std::size_t N>
std::optional<Enum> lookup_name(const std::array<const char*, N>& names, std::string_view s) {
  for (std::size_t i = 0; i < N; ++i) {
    if (s == names[i]) return static_cast<Enum>(i);
  }
  return std::nullopt;
}

void push_unique(std::vector<PosReading>& out, PosReading r) {
  bool seen = std::any_of(out.begin(), out.end(), [&](const PosReading& o) {
    return o.cls == r.cls && o.features == r.features;
  });
  if (!seen) out.push_back(std::move(r));
}

FeatureBundle parse_feature_fields(const std::vector<std::string_view>& fields, std::size_t from,
                                   const std::string& origin, std::size_t line) {
  FeatureBundle b;
  for (std::size_t i = from; i < fields.size(); ++i) {
    auto eq = fields[i].find('=');
    if (eq == std::string_view::npos) resource_error(origin, line, "expected key=value: " + std::string(fields[i]));
    auto key = fields[i].substr(0, eq);
    auto value = fields[i].substr(eq + 1);
    Feature f;
    if (key == "cas") f = Feature::Cas;
    else if (key == "num") f = Feature::Num;
    else if (key == "gen") f = Feature::Gen;
    else continue;
    auto mask = parse_component(f, value);
    if (!mask) resource_error(origin, line, "bad feature value: " + std::string(fields[i]));
    b.set(f, *mask);
  }
  return b;
}

bool is_word(const Token& t) {
  return t.shape == TokenShape::WordUpperInit || t.shape == TokenShape::WordLower;
}

}  // namespace

std::string_view to_string(PosClass c) { return kPosNames[static_cast<std::size_t>(c)]; }
std::optional<PosClass> parse_pos_class(std::string_view s) { return lookup_name<PosClass>(kPosNames, s); }

std::string_view to_string(ReadingSource s) { return kSourceNames[static_cast<std::size_t>(s)]; }
std::optional<ReadingSource> parse_reading_source(std::string_view s) {
  return lookup_name<ReadingSource>(kSourceNames, s);
}

bool is_heuristic(ReadingSource s) {
  return s == ReadingSource::Ung || s == ReadingSource::Uc1 || s == ReadingSource::Adje ||
         s == ReadingSource::Uca || s == ReadingSource::Num;
}

std::string_view to_string(LexiconOrigin o) { return kOriginNames[static_cast<std::size_t>(o)]; }
std::optional<LexiconOrigin> parse_lexicon_origin(std::string_view s) {
  return lookup_name<LexiconOrigin>(kOriginNames, s);
}

std::string decapitalize(std::string_view word) { return utf8::lower_first(word); }
std::string capitalize(std::string_view word) { return utf8::upper_first(word); }
bool is_upper_initial(std::string_view word) { return utf8::starts_upper(word); }

// LexiconView

LexiconView::LexiconView(std::vector<LexiconEntry> entries) {
  auto map = std::make_shared<Map>();
  std::sort(entries.begin(), entries.end());
  entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
  count_ = entries.size();
  for (auto& e : entries) (*map)[e.surface].push_back(std::move(e));
  entries_ = std::move(map);
}

std::span<const LexiconEntry> LexiconView::lookup(std::string_view surface) const {
  auto it = entries_->find(surface);
  if (it == entries_->end()) return {};
  return it->second;
}

std::vector<LexiconEntry> LexiconView::entries() const {
  std::vector<LexiconEntry> out;
  for (const auto& [_, v] : *entries_) out.insert(out.end(), v.begin(), v.end());
  return out;
}

// Closed-class table

ClosedClassLexicon ClosedClassLexicon::load(const std::filesystem::path& path) {
  return parse(read_file(path), path.string());
}

ClosedClassLexicon ClosedClassLexicon::parse(std::string_view text, const std::string& origin) {
  ClosedClassLexicon lex;
  for (const auto& line : resource_lines(text)) {
    if (line.text.starts_with("bootlex-")) continue;
    auto fields = split_ws(line.text);
    if (fields.size() < 2) resource_error(origin, line.number, "expected: surface CLASS [features]");
    auto cls = parse_pos_class(fields[1]);
    if (!cls || *cls == PosClass::XXX) resource_error(origin, line.number, "unknown class " + std::string(fields[1]));
    PosReading r;
    r.cls = *cls;
    r.src = ReadingSource::Closed;
    r.features = parse_feature_fields(fields, 2, origin, line.number);
    lex.cells_.emplace(std::string(fields[0]), std::move(r));
  }
  return lex;
}

std::vector<PosReading> ClosedClassLexicon::lookup(std::string_view surface) const {
  std::vector<PosReading> out;
  auto [b, e] = cells_.equal_range(surface);
  for (auto it = b; it != e; ++it) push_unique(out, it->second);
  return out;
}

std::vector<PosReading> lookup_closed_class(const ClosedClassLexicon& closed, std::string_view surface) {
  return closed.lookup(surface);
}

// Heuristics

HeuristicConfig HeuristicConfig::parse(std::string_view text, const std::string& origin) {
  HeuristicConfig cfg;
  for (const auto& line : resource_lines(text)) {
    if (line.text.starts_with("bootlex-")) continue;
    auto fields = split_ws(line.text);
    HeuristicRule rule;
    rule.name = std::string(fields[0]);
    auto src = parse_reading_source(fields[0]);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      auto eq = fields[i].find('=');
      if (eq == std::string_view::npos) resource_error(origin, line.number, "expected key=value");
      std::string_view key = fields[i].substr(0, eq), value = fields[i].substr(eq + 1);
      auto flag = [&](std::string_view v) {
        if (v == "on") return true;
        if (v == "off") return false;
        resource_error(origin, line.number, "expected on/off for " + std::string(key));
      };
      if (key == "src") {
        src = parse_reading_source(value);
        if (!src) resource_error(origin, line.number, "unknown src " + std::string(value));
      } else if (key == "class") {
        auto c = parse_pos_class(value);
        if (!c) resource_error(origin, line.number, "unknown class " + std::string(value));
        rule.cls = *c;
      } else if (key == "case") {
        if (value == "any") rule.case_cond = CaseCondition::Any;
        else if (value == "upper") rule.case_cond = CaseCondition::Upper;
        else if (value == "lower") rule.case_cond = CaseCondition::Lower;
        else if (value == "number") rule.case_cond = CaseCondition::Number;
        else resource_error(origin, line.number, "bad case condition");
      } else if (key == "position") {
        if (value == "any") rule.position = PositionCondition::Any;
        else if (value == "initial") rule.position = PositionCondition::Initial;
        else if (value == "noninitial") rule.position = PositionCondition::NonInitial;
        else resource_error(origin, line.number, "bad position condition");
      } else if (key == "next") {
        if (value == "any") rule.next = NextCondition::Any;
        else if (value == "upper-or-conj") rule.next = NextCondition::UpperOrConj;
        else resource_error(origin, line.number, "bad next condition");
      } else if (key == "adjacent") {
        if (value != "noun") resource_error(origin, line.number, "adjacent supports only 'noun'");
        rule.adjacent_noun = true;
      } else if (key == "lemma") {
        if (value != "lower") resource_error(origin, line.number, "lemma supports only 'lower'");
        rule.lemma_lower = true;
      } else if (key == "suffix") {
        for (auto part : split(value, ',')) {
          SuffixRule s;
          auto colon = part.find(':');
          s.suffix = std::string(part.substr(0, colon));
          if (colon != std::string_view::npos) {
            auto m = parse_component(Feature::Num, part.substr(colon + 1));
            if (!m) resource_error(origin, line.number, "bad number on suffix " + std::string(part));
            s.num = *m;
          }
          rule.suffixes.push_back(std::move(s));
        }
      } else if (key == "enabled") {
        rule.enabled = flag(value);
      } else if (key == "additive") {
        rule.additive = flag(value);
      } else if (key == "cas" || key == "num" || key == "gen") {
        Feature f = key == "cas" ? Feature::Cas : key == "num" ? Feature::Num : Feature::Gen;
        auto m = parse_component(f, value);
        if (!m) resource_error(origin, line.number, "bad feature value");
        rule.features.set(f, *m);
      } else {
        resource_error(origin, line.number, "unknown key " + std::string(key));
      }
    }
    if (!src || *src == ReadingSource::Lexicon || *src == ReadingSource::Closed) {
      resource_error(origin, line.number, "heuristic needs a heuristic src tag");
    }
    rule.src = *src;
    cfg.rules.push_back(std::move(rule));
  }
  return cfg;
}

HeuristicConfig HeuristicConfig::load(const std::filesystem::path& path) {
  return parse(read_file(path), path.string());
}

HeuristicConfig HeuristicConfig::defaults() {
  return parse(R"(
UNG  class=N case=any suffix=ungen:PL,ung:SG gen=FEM
UC1  class=N case=upper
NUM  class=NUMBERTOK case=number
ADJE class=ADJ case=lower suffix=e,er,es,em,en adjacent=noun enabled=off
UCA  class=ADJ case=upper position=initial next=upper-or-conj suffix=e,er,es,em,en lemma=lower additive=on
)",
               "<defaults>");
}

HeuristicRule* HeuristicConfig::find(std::string_view name) {
  for (auto& r : rules) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

namespace {

bool rule_applies(const HeuristicRule& rule, std::span<const Token> tokens, std::size_t index,
                  std::optional<std::uint8_t>& num_out) {
  const Token& tok = tokens[index];
  switch (rule.case_cond) {
    case CaseCondition::Any:
      if (!is_word(tok)) return false;
      break;
    case CaseCondition::Upper:
      if (tok.shape != TokenShape::WordUpperInit) return false;
      break;
    case CaseCondition::Lower:
      if (tok.shape != TokenShape::WordLower) return false;
      break;
    case CaseCondition::Number:
      if (tok.shape != TokenShape::Number) return false;
      break;
  }
  if (rule.position == PositionCondition::Initial && index != 0) return false;
  if (rule.position == PositionCondition::NonInitial && index == 0) return false;
  if (rule.next == NextCondition::UpperOrConj) {
    if (index + 1 >= tokens.size()) return false;
    const Token& next = tokens[index + 1];
    if (next.shape != TokenShape::WordUpperInit && next.surface != "und" && next.surface != "oder") return false;
  }
  if (rule.adjacent_noun) {
    bool prev = index > 0 && tokens[index - 1].shape == TokenShape::WordUpperInit;
    bool next = index + 1 < tokens.size() && tokens[index + 1].shape == TokenShape::WordUpperInit;
    if (!prev && !next) return false;
  }
  num_out.reset();
  if (rule.suffixes.empty()) return true;
  for (const auto& s : rule.suffixes) {
    if (tok.surface.size() > s.suffix.size() && ends_with_ci(tok.surface, s.suffix)) {
      num_out = s.num;
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<PosReading> apply_heuristics(std::span<const Token> tokens, std::size_t index,
                                         const HeuristicConfig& config) {
  std::vector<PosReading> out;
  bool exclusive_matched = false;
  for (const auto& rule : config.rules) {
    if (!rule.enabled) continue;
    if (!rule.additive && exclusive_matched) continue;
    std::optional<std::uint8_t> num;
    if (!rule_applies(rule, tokens, index, num)) continue;
    PosReading r;
    r.cls = rule.cls;
    r.src = rule.src;
    r.features = rule.features;
    if (num) r.features.num = *num;
    if (rule.lemma_lower) r.lemma = decapitalize(tokens[index].surface);
    push_unique(out, std::move(r));
    if (!rule.additive) exclusive_matched = true;
  }
  return out;
}

std::vector<TaggedToken> tag_segment(const Segment& segment, const LexiconView& lexicon,
                                     const Tagger& tagger) {
  std::span<const Token> tokens(segment.tokens);
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& tok = tokens[i];
    std::vector<std::string> keys{tok.surface};
    // Sentence-initial capitals carry no word-class information.
    if (i == 0 && tok.shape == TokenShape::WordUpperInit) keys.push_back(decapitalize(tok.surface));

    std::vector<PosReading> readings;
    for (const auto& key : keys) {
      for (const auto& e : lexicon.lookup(key)) {
        push_unique(readings, PosReading{e.cls, e.features, ReadingSource::Lexicon, e.lemma});
      }
    }
    for (const auto& key : keys) {
      for (auto& r : tagger.closed.lookup(key)) push_unique(readings, std::move(r));
    }
    if (readings.empty() && tok.shape == TokenShape::Punct) {
      readings.push_back(PosReading{PosClass::PUNCT, FeatureBundle{}, ReadingSource::Closed, std::nullopt});
    }
    if (readings.empty()) readings = apply_heuristics(tokens, i, tagger.heuristics);
    if (readings.empty()) readings.push_back(PosReading{PosClass::XXX, FeatureBundle{}, ReadingSource::None, std::nullopt});
    out.push_back(TaggedToken{tok, std::move(readings)});
  }
  return out;
}

SegmentKind classify_segment(std::span<const TaggedToken> tagged) {
  for (const auto& t : tagged) {
    for (const auto& r : t.readings) {
      if (r.cls == PosClass::V && !r.provisional()) return SegmentKind::Sentence;
    }
  }
  return SegmentKind::Telegraphic;
}

}  // namespace bootlex
