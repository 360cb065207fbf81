#include "bootlex/kernels.hpp"

#include <array>
#include <exception>

namespace bootlex {

namespace {

constexpr std::array<const char*, 6> kStageNames{"segment", "tag", "parse", "extract", "cluster", "suggest"};

}  // namespace

std::string_view to_string(Stage s) { return kStageNames[static_cast<std::size_t>(s)]; }

std::optional<Stage> parse_stage(std::string_view s) {
  for (std::size_t i = 0; i < kStageNames.size(); ++i) {
    if (s == kStageNames[i]) return static_cast<Stage>(i);
  }
  return std::nullopt;
}

DocumentAnalysis analyze_document(const RawCorpusFile& raw, const AnalysisContext& ctx) {
  DocumentAnalysis out;
  out.doc = segment_document(raw, ctx.segmentation);
  out.segments.resize(out.doc.segments.size());
  if (ctx.stop_after < Stage::Tag) return out;
  for (std::size_t i = 0; i < out.doc.segments.size(); ++i) {
    auto& seg = out.doc.segments[i];
    auto& sa = out.segments[i];
    sa.tagged = tag_segment(seg, ctx.lexicon, ctx.tagger);
    seg.kind = classify_segment(sa.tagged);
    if (ctx.stop_after < Stage::Parse) continue;
    sa.parse = parse(sa.tagged, ctx.grammar);
    if (ctx.stop_after < Stage::Extract) continue;
    sa.match = match_patterns(*sa.parse, ctx.patterns, ctx.exceptions, EvidenceRef{out.doc.id(), seg.id});
  }
  return out;
}

std::vector<DocumentAnalysis> analyze_corpus_serial(const std::vector<RawCorpusFile>& corpus,
                                                    const AnalysisContext& ctx) {
  std::vector<DocumentAnalysis> out;
  out.reserve(corpus.size());
  for (const auto& raw : corpus) out.push_back(analyze_document(raw, ctx));
  return out;
}

std::vector<DocumentAnalysis> analyze_corpus_parallel(const std::vector<RawCorpusFile>& corpus,
                                                      const AnalysisContext& ctx) {
  std::vector<DocumentAnalysis> out(corpus.size());
  std::vector<std::exception_ptr> errors(corpus.size());
  const auto n = static_cast<long>(corpus.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    auto k = static_cast<std::size_t>(i);
    try {
      out[k] = analyze_document(corpus[k], ctx);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace bootlex
