#include "bootlex/doc_model.hpp"

#include <algorithm>

#include "bootlex/error.hpp"
#include "text_util.hpp"
#include "utf8.hpp"

namespace bootlex {

std::string_view to_string(TokenShape s) {
  switch (s) {
    case TokenShape::WordUpperInit: return "WORD_UPPER_INIT";
    case TokenShape::WordLower: return "WORD_LOWER";
    case TokenShape::Number: return "NUMBER";
    case TokenShape::Punct: return "PUNCT";
    case TokenShape::Mixed: break;
  }
  return "MIXED";
}

std::optional<TokenShape> parse_token_shape(std::string_view s) {
  for (auto shape : {TokenShape::WordUpperInit, TokenShape::WordLower, TokenShape::Number,
                     TokenShape::Punct, TokenShape::Mixed}) {
    if (to_string(shape) == s) return shape;
  }
  return std::nullopt;
}

std::string_view to_string(SegmentKind k) {
  return k == SegmentKind::Sentence ? "SENTENCE" : "TELEGRAPHIC";
}

TokenShape classify_shape(std::string_view surface) {
  if (surface.empty()) return TokenShape::Mixed;
  bool letters = true, digits = true;
  for (std::size_t i = 0; i < surface.size(); ++i) {
    auto c = static_cast<unsigned char>(surface[i]);
    bool is_digit = c >= '0' && c <= '9';
    bool is_comma_in_number = c == ',' && i > 0 && i + 1 < surface.size();
    bool inner_hyphen = c == '-' && i > 0 && i + 1 < surface.size();
    letters = letters && (utf8::is_letter_byte(c) || inner_hyphen);
    digits = digits && (is_digit || is_comma_in_number);
  }
  if (digits && surface.front() != ',') return TokenShape::Number;
  if (letters) {
    if (utf8::starts_upper(surface)) return TokenShape::WordUpperInit;
    if (utf8::starts_lower(surface)) return TokenShape::WordLower;
    return TokenShape::Mixed;
  }
  if (surface.size() == 1 && !utf8::is_letter_byte(static_cast<unsigned char>(surface[0]))) {
    return TokenShape::Punct;
  }
  return TokenShape::Mixed;
}

Span Segment::span() const {
  Span s{tokens.front().span.begin, tokens.back().span.end};
  if (label_span) s.begin = std::min(s.begin, label_span->begin);
  return s;
}

std::string Document::segment_text(const Segment& seg) const {
  Span s = seg.span();
  return source.text.substr(s.begin, s.end - s.begin);
}

SegmentationConfig SegmentationConfig::load(const std::filesystem::path& path) {
  SegmentationConfig cfg;
  cfg.abbreviations.clear();
  std::string text = read_file(path);
  for (const auto& line : resource_lines(text)) {
    for (auto word : split_ws(line.text)) cfg.abbreviations.emplace(word);
  }
  return cfg;
}

std::vector<Token> tokenize(std::string_view text, std::size_t base) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto is_digit = [&](std::size_t k) { return k < text.size() && text[k] >= '0' && text[k] <= '9'; };
  while (i < text.size()) {
    auto c = static_cast<unsigned char>(text[i]);
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (is_digit(i)) {
      while (is_digit(i)) ++i;
      if (i + 1 < text.size() && text[i] == ',' && is_digit(i + 1)) {
        ++i;
        while (is_digit(i)) ++i;
      }
    } else if (utf8::is_letter_byte(c)) {
      auto letter = [&](std::size_t k) {
        return k < text.size() && utf8::is_letter_byte(static_cast<unsigned char>(text[k]));
      };
      // hyphenated compounds stay one word
      while (letter(i) || (i < text.size() && text[i] == '-' && letter(i + 1))) ++i;
    } else {
      i += utf8::sequence_length(c);
      if (i > text.size()) i = text.size();
    }
    std::string surface(text.substr(start, i - start));
    TokenShape shape = classify_shape(surface);
    out.push_back(Token{std::move(surface), Span{base + start, base + i}, shape});
  }
  return out;
}

namespace {

bool is_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// "<digits>." with the full stop glued to the digits and followed by whitespace.
bool is_enumeration_label(const std::vector<Token>& toks, std::size_t i, std::string_view text) {
  if (i + 1 >= toks.size()) return false;
  if (!is_digits(toks[i].surface) || toks[i + 1].surface != ".") return false;
  if (toks[i + 1].span.begin != toks[i].span.end) return false;
  std::size_t after = toks[i + 1].span.end;
  return after < text.size() && (text[after] == ' ' || text[after] == '\t' ||
                                 text[after] == '\n' || text[after] == '\r');
}

}  // namespace

Document segment_document(const RawCorpusFile& raw, const SegmentationConfig& config) {
  const std::string& text = raw.text;
  std::vector<Token> toks = tokenize(text);

  std::vector<std::vector<Token>> groups;
  std::vector<Token> current;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    current.push_back(toks[i]);
    if (toks[i].surface != "." || i + 1 >= toks.size()) continue;
    const Token& next = toks[i + 1];
    if (next.span.begin == toks[i].span.end) continue;  // no whitespace after the full stop
    bool next_upper = utf8::starts_upper(next.surface);
    bool next_digit = next.shape == TokenShape::Number;
    if (!next_upper && !next_digit) continue;
    // Full stop closing an enumeration label at segment start.
    if (current.size() == 2 && is_digits(current[0].surface)) continue;
    if (i > 0 && config.abbreviations.contains(toks[i - 1].surface) &&
        toks[i - 1].span.end == toks[i].span.begin) {
      if (!next_upper && !is_enumeration_label(toks, i + 1, text)) continue;
    }
    groups.push_back(std::move(current));
    current.clear();
  }
  if (!current.empty()) groups.push_back(std::move(current));

  Document doc;
  doc.source = raw;
  for (auto& g : groups) {
    Segment seg;
    seg.id = doc.segments.size() + 1;
    if (g.size() > 2 && is_enumeration_label(g, 0, text)) {
      seg.label = g[0].surface + ".";
      seg.label_span = Span{g[0].span.begin, g[1].span.end};
      g.erase(g.begin(), g.begin() + 2);
    }
    seg.tokens = std::move(g);
    doc.segments.push_back(std::move(seg));
  }
  if (doc.segments.empty()) throw Error(ErrorCode::EmptyCorpus, "no segments in " + raw.path);
  return doc;
}

std::vector<RawCorpusFile> load_corpus_dir(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error(ErrorCode::EmptyCorpus, "not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<RawCorpusFile> out;
  for (const auto& f : files) {
    std::string text = read_file(f);
    if (trim(text).empty()) continue;
    out.push_back(RawCorpusFile{f.filename().string(), std::move(text)});
  }
  return out;
}

}  // namespace bootlex
