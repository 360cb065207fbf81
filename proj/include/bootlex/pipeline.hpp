#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bootlex/cooccurrence.hpp"
#include "bootlex/kernels.hpp"
#include "bootlex/ontology.hpp"
#include "bootlex/store.hpp"

namespace bootlex {

/// `key = value` configuration; relative paths resolve against the config
/// file's directory.
struct PipelineConfig {
  std::filesystem::path corpus;
  std::filesystem::path grammar;
  std::filesystem::path closed_class;
  std::filesystem::path heuristics;
  std::filesystem::path patterns;
  std::filesystem::path exceptions;
  std::filesystem::path measures;
  std::filesystem::path dimensions;
  std::filesystem::path abbreviations;
  std::filesystem::path upper_ontology;
  int inventory_min_count = 1;
  std::size_t cluster_report_cap = 50;
  std::vector<std::string> disabled_groups;

  /// Throws ConfigError "<file>:<line>: ..." for unknown keys, bad values or
  /// referenced files that do not exist.
  static PipelineConfig load(const std::filesystem::path& path);
  static PipelineConfig parse(std::string_view text, const std::filesystem::path& base,
                              const std::string& origin = "<string>");
  /// Default resource set found in `resource_dir`.
  static PipelineConfig defaults(const std::filesystem::path& resource_dir);
};

struct Resources {
  SegmentationConfig segmentation;
  ClosedClassLexicon closed;
  HeuristicConfig heuristics;
  Grammar grammar;
  PatternSet patterns;
  ExceptionList exceptions;
  MeasureConfig measures;
  DimensionLexicon dimensions;
  UpperOntology upper;
  int inventory_min_count = 1;
  std::size_t cluster_report_cap = 50;
  std::vector<std::filesystem::path> files;
  std::vector<std::string> disabled_groups;

  /// Throws with the failing file in the message.
  static Resources load(const PipelineConfig& config);
  std::string fingerprint() const;
};

struct Diagnostic {
  EvidenceRef where;
  std::string message;
};

struct CorpusResult {
  std::vector<DocumentAnalysis> documents;
  std::vector<Relation> relations;
  RelationTable table;
  std::vector<Measurement> measurements;
  std::vector<Diagnostic> diagnostics;
  CoocMatrix matrix;
  std::vector<Cluster> clusters;
  std::vector<ConceptCandidate> concepts;
  std::vector<OntologyFact> facts;
  std::vector<ValueGroup> value_groups;
  std::vector<SuggestionItem> suggestions;
  CoverageReport coverage;
  std::size_t xxx_tokens = 0;
  std::size_t full_parses = 0;
};

struct RunOptions {
  bool parallel = true;
  Stage stop_after = Stage::Suggest;
};

/// segment -> tag -> parse -> extract -> cluster -> suggest over a corpus.
CorpusResult run_corpus(const std::vector<RawCorpusFile>& corpus, const Resources& resources,
                        const LexiconView& lexicon, const RunOptions& options = {});

struct RunOutcome {
  RunRecord record;
  CorpusResult result;
  std::vector<SuggestionId> new_suggestions;
};

/// One bootstrapping iteration against a store: open a run, analyse the
/// corpus with the lexicon accepted so far, record suggestions, close the run.
RunOutcome bootstrap_run(const std::vector<RawCorpusFile>& corpus, const Resources& resources,
                         KnowledgeStore& store, const RunOptions& options = {});

/// Lexicon suggestions confirmed by complete parses: heuristic readings,
/// parser class assumptions and agreement-derived features.
std::vector<SuggestionItem> lexicon_suggestions(const std::vector<DocumentAnalysis>& docs);

/// Hash of the corpus text, for run records.
std::string corpus_fingerprint(const std::vector<RawCorpusFile>& corpus);

/// Writes xml/<doc>.xml, relations.xml, relations.tsv, measurements.tsv,
/// clusters.xml, inventories.xml, concepts.xml, ontology.xml, coverage.txt.
void write_artifacts(const CorpusResult& result, const KnowledgeStore& store,
                     const std::filesystem::path& out_dir, int inventory_min_count,
                     std::size_t cluster_cap);

/// Every computed layer of one analysed document.
std::string document_xml(const DocumentAnalysis& d);
std::string ontology_xml(const std::vector<OntologyFact>& facts);
std::string clusters_xml(const std::vector<Cluster>& clusters, const CoocMatrix& matrix);
std::string coverage_text(const CoverageReport& c);

}  // namespace bootlex
