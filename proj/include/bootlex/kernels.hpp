#pragma once

#include <vector>

#include "bootlex/chart.hpp"
#include "bootlex/doc_model.hpp"
#include "bootlex/grammar.hpp"
#include "bootlex/measurement.hpp"
#include "bootlex/pos.hpp"
#include "bootlex/relations.hpp"

namespace bootlex {

enum class Stage { Segment, Tag, Parse, Extract, Cluster, Suggest };
std::string_view to_string(Stage s);
std::optional<Stage> parse_stage(std::string_view s);

/// Everything the per-document kernels read. Immutable during a run.
struct AnalysisContext {
  const SegmentationConfig& segmentation;
  const Tagger& tagger;
  const LexiconView& lexicon;
  const Grammar& grammar;
  const PatternSet& patterns;
  const ExceptionList& exceptions;
  Stage stop_after = Stage::Suggest;
};

struct SegmentAnalysis {
  std::vector<TaggedToken> tagged;
  std::optional<ParseResult> parse;
  std::optional<MatchOutcome> match;
};

struct DocumentAnalysis {
  Document doc;
  std::vector<SegmentAnalysis> segments;
};

/// segment -> tag -> parse -> match for one document.
DocumentAnalysis analyze_document(const RawCorpusFile& raw, const AnalysisContext& ctx);

/// Reference implementation: documents one after another.
std::vector<DocumentAnalysis> analyze_corpus_serial(const std::vector<RawCorpusFile>& corpus,
                                                    const AnalysisContext& ctx);

/// OpenMP over documents; results are placed by index so the output equals
/// the serial one exactly.
std::vector<DocumentAnalysis> analyze_corpus_parallel(const std::vector<RawCorpusFile>& corpus,
                                                      const AnalysisContext& ctx);

}  // namespace bootlex
