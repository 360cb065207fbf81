#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bootlex/ontology.hpp"
#include "bootlex/pos.hpp"
#include "bootlex/relations.hpp"

namespace bootlex {

using SuggestionId = std::uint64_t;
using RunId = std::uint64_t;

enum class SuggestionKind { Lexicon, Ontology, ValueGroup };
std::string_view to_string(SuggestionKind k);
std::optional<SuggestionKind> parse_suggestion_kind(std::string_view s);

/// A set of values a reviewer (or the classifier) groups together, e.g. a
/// value with no known dimension, or "geoeffnet"/"geschlossen" as opposites.
struct ValueGroup {
  std::string relation;  // "DIMENSION_UNKNOWN", "antonym", "scale", ...
  std::string subject;   // entity the values were seen with, may be empty
  std::vector<std::string> values;
  friend bool operator==(const ValueGroup&, const ValueGroup&) = default;
};

using Payload = std::variant<LexiconEntry, OntologyFact, ValueGroup>;

SuggestionKind kind_of(const Payload& p);
/// Structural identity used for deduplication; evidence and status excluded.
std::string payload_key(const Payload& p);

struct SuggestionItem {
  Payload payload;
  std::vector<EvidenceRef> evidence;
};

struct Suggestion {
  SuggestionId id = 0;
  Payload payload;
  RunId created_run = 0;
  Status status = Status::Suggested;
  std::string decided_by;
  std::string decided_at;
  std::vector<EvidenceRef> evidence;

  SuggestionKind kind() const { return kind_of(payload); }
};

enum class Verdict { Accept, Reject };

struct RunRecord {
  RunId id = 0;
  std::string corpus_hash;
  std::string config_hash;
  bool open = true;
  CoverageReport coverage;
  std::size_t suggestions_produced = 0;
  std::uint64_t opened_seq = 0;
};

struct SuggestionFilter {
  std::optional<SuggestionKind> kind;
  std::optional<Status> status;
  std::string entity;  // substring of surface/subject/object
};

/// Lexicon, ontology facts, suggestions and run metadata behind an
/// append-only log. Writes are serialised by an internal mutex; an empty path
/// keeps everything in memory.
///
/// File format: a header line "bootlex-store 1" followed by one JSON record
/// per line (run_open, suggest, evidence, decide, run_close).
class KnowledgeStore {
 public:
  explicit KnowledgeStore(std::filesystem::path path = {});
  KnowledgeStore(const KnowledgeStore&) = delete;
  KnowledgeStore& operator=(const KnowledgeStore&) = delete;

  RunRecord open_run(const std::string& corpus_hash, const std::string& config_hash);
  RunRecord close_run(RunId run, const CoverageReport& coverage);

  /// Stores new suggestions; identical payloads (any status) only gain
  /// evidence. Returns the ids of newly created suggestions. Throws RunClosed.
  std::vector<SuggestionId> record_suggestions(RunId run, const std::vector<SuggestionItem>& items);

  /// Throws UnknownId or AlreadyDecided.
  Suggestion decide(SuggestionId id, Verdict verdict, const std::string& who);

  /// Accepted lexicon entries as of the start of `run` (latest when nullopt).
  /// Throws UnknownRun.
  LexiconView lexicon_view(std::optional<RunId> as_of = std::nullopt) const;

  std::optional<Suggestion> get(SuggestionId id) const;
  std::vector<Suggestion> suggestions(const SuggestionFilter& filter = {}) const;
  std::vector<OntologyFact> accepted_ontology() const;
  std::vector<OntologyFact> suggested_ontology() const;
  std::vector<RunRecord> runs() const;
  std::optional<RunRecord> run(RunId id) const;

  /// Rewrites the log as one record per suggestion and run.
  void compact();

  std::string export_xml() const;
  void import_xml(const std::string& xml);

  const std::filesystem::path& path() const { return path_; }

 private:
  void append(const std::string& line);
  void replay(std::istream& in);
  void apply_record(const std::string& line, std::size_t lineno);
  std::vector<Suggestion> suggestions_locked(const SuggestionFilter& filter) const;

  std::filesystem::path path_;
  mutable std::mutex mutex_;
  std::uint64_t seq_ = 0;
  SuggestionId next_id_ = 1;
  std::map<SuggestionId, Suggestion> suggestions_;
  std::map<std::string, SuggestionId> by_key_;
  std::map<RunId, RunRecord> runs_;
  std::map<SuggestionId, std::uint64_t> decided_seq_;
};

std::string now_iso8601();

}  // namespace bootlex
