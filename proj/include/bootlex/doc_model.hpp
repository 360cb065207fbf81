#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace bootlex {

struct RawCorpusFile {
  std::string path;  // file identifier, also used as the document id
  std::string text;
  friend bool operator==(const RawCorpusFile&, const RawCorpusFile&) = default;
};

enum class TokenShape { WordUpperInit, WordLower, Number, Punct, Mixed };

std::string_view to_string(TokenShape s);
std::optional<TokenShape> parse_token_shape(std::string_view s);

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  friend bool operator==(const Span&, const Span&) = default;
};

// Offsets are byte offsets into the UTF-8 source.
struct Token {
  std::string surface;
  Span span;
  TokenShape shape = TokenShape::Mixed;
  friend bool operator==(const Token&, const Token&) = default;
};

TokenShape classify_shape(std::string_view surface);

enum class SegmentKind { Sentence, Telegraphic };

std::string_view to_string(SegmentKind k);

struct Segment {
  std::size_t id = 0;                 // 1-based ordinal within the document
  std::optional<std::string> label;   // enumeration prefix such as "24."
  std::optional<Span> label_span;
  std::vector<Token> tokens;
  SegmentKind kind = SegmentKind::Telegraphic;

  Span span() const;
  friend bool operator==(const Segment&, const Segment&) = default;
};

struct Document {
  RawCorpusFile source;
  std::vector<Segment> segments;

  const std::string& id() const { return source.path; }
  std::string segment_text(const Segment& seg) const;
  friend bool operator==(const Document&, const Document&) = default;
};

/// Full stops after these tokens do not end a segment unless the next word is
/// capitalised or an enumeration label follows.
struct SegmentationConfig {
  std::set<std::string> abbreviations{"g", "cm", "mm", "ml"};

  static SegmentationConfig load(const std::filesystem::path& path);
};

/// Tokenizes a piece of text; offsets are relative to `base`.
std::vector<Token> tokenize(std::string_view text, std::size_t base = 0);

Document segment_document(const RawCorpusFile& raw,
                          const SegmentationConfig& config = {});

/// Reads every `.txt` file of a directory, sorted by file name. Files that are
/// empty after trimming are skipped.
std::vector<RawCorpusFile> load_corpus_dir(const std::filesystem::path& dir);

}  // namespace bootlex
