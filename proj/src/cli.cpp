#include "bootlex/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bootlex/error.hpp"
#include "bootlex/pipeline.hpp"
#include "bootlex/service.hpp"
#include "bootlex/xml_io.hpp"

namespace bootlex::cli {

namespace {

namespace fs = std::filesystem;

struct Common {
  std::string config;
  std::string corpus;
  std::string store;
};

PipelineConfig load_config(const Common& c) {
  PipelineConfig cfg = c.config.empty() ? PipelineConfig::defaults(BOOTLEX_RESOURCE_DIR)
                                        : PipelineConfig::load(c.config);
  if (!c.corpus.empty()) cfg.corpus = c.corpus;
  return cfg;
}

std::vector<RawCorpusFile> load_corpus(const PipelineConfig& cfg) {
  if (cfg.corpus.empty()) throw Error(ErrorCode::ConfigError, "no corpus given (--corpus or 'corpus =' in the config)");
  auto corpus = load_corpus_dir(cfg.corpus);
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "no .txt documents in " + cfg.corpus.string());
  return corpus;
}

std::string stage_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::GrammarSyntaxError:
    case ErrorCode::DuplicateRuleName:
    case ErrorCode::ResourceSyntaxError:
      return "config";
    case ErrorCode::EmptyCorpus:
      return "segment";
    case ErrorCode::StoreCorrupt:
    case ErrorCode::RunClosed:
    case ErrorCode::UnknownRun:
      return "store";
    case ErrorCode::XmlError:
    case ErrorCode::LayerMissing:
      return "write";
    default:
      return "run";
  }
}

void print_coverage(std::ostream& out, const CoverageReport& c) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "coverage: segments=%zu full=%.4f partial=%.4f partial_matched=%.4f unmatched=%.4f",
                c.segments, c.full, c.partial, c.partial_matched, c.unmatched);
  out << buf << '\n';
}

int cmd_run(const Common& common, const std::string& out_dir, std::string store_path, const std::string& stop_after,
            bool serial, int verbosity, std::ostream& out) {
  RunOptions options;
  options.parallel = !serial;
  if (!stop_after.empty()) {
    auto s = parse_stage(stop_after);
    if (!s) throw Error(ErrorCode::ConfigError, "unknown stage '" + stop_after + "'");
    options.stop_after = *s;
  }
  auto cfg = load_config(common);
  auto resources = Resources::load(cfg);
  auto corpus = load_corpus(cfg);
  fs::create_directories(out_dir);
  if (store_path.empty()) store_path = (fs::path(out_dir) / "knowledge.store").string();
  KnowledgeStore store(store_path);

  auto outcome = bootstrap_run(corpus, resources, store, options);
  write_artifacts(outcome.result, store, out_dir, resources.inventory_min_count, resources.cluster_report_cap);

  const auto& r = outcome.result;
  out << "run " << outcome.record.id << ": " << r.documents.size() << " documents, " << r.coverage.segments
      << " segments\n";
  print_coverage(out, r.coverage);
  out << "relations: " << r.relations.size() << " (" << r.table.rows().size() << " entities)\n";
  out << "measurements: " << r.measurements.size() << ", diagnostics: " << r.diagnostics.size() << '\n';
  out << "xxx tokens: " << r.xxx_tokens << ", full parses: " << r.full_parses << '\n';
  out << "suggestions: " << r.suggestions.size() << " (" << outcome.new_suggestions.size() << " new)\n";
  if (verbosity > 0) {
    for (const auto& d : r.diagnostics) out << "  " << d.where.doc << ':' << d.where.segment << ": " << d.message << '\n';
  }
  if (verbosity > 1) {
    for (const auto& d : r.documents) {
      for (std::size_t i = 0; i < d.segments.size(); ++i) {
        const auto& sa = d.segments[i];
        out << "  " << d.doc.id() << ':' << d.doc.segments[i].id << ' '
            << (sa.parse ? to_string(sa.parse->kind) : "-") << ' '
            << (sa.match && sa.match->pattern ? *sa.match->pattern : "-") << '\t'
            << d.doc.segment_text(d.doc.segments[i]) << '\n';
      }
    }
  }
  out << "artifacts: " << out_dir << '\n';
  return 0;
}

int cmd_serve(const Common& common, const std::string& host, int port, const std::string& out_dir, std::ostream& out) {
  auto cfg = load_config(common);
  auto resources = Resources::load(cfg);
  auto corpus = load_corpus(cfg);
  KnowledgeStore store(common.store);
  std::optional<fs::path> artifacts;
  if (!out_dir.empty()) artifacts = out_dir;
  Service service(std::move(corpus), std::move(resources), store, artifacts);
  auto first = service.rerun();
  out << "run " << first->record.id << " complete\n";
  int bound = service.bind(host, port);
  if (bound < 0) throw Error(ErrorCode::ConfigError, "cannot bind " + host + ":" + std::to_string(port));
  out << "listening on http://" << host << ':' << bound << '\n' << std::flush;
  service.listen_after_bind();
  return 0;
}

std::string describe(const Payload& p) {
  if (const auto* e = std::get_if<LexiconEntry>(&p)) {
    return e->surface + ' ' + std::string(to_string(e->cls)) + ' ' + format_bundle(e->features) + ' ' +
           std::string(to_string(e->origin));
  }
  if (const auto* f = std::get_if<OntologyFact>(&p)) {
    std::string s = std::string(to_string(f->kind)) + '(' + f->subject + ", " + f->object + ')';
    if (!f->note.empty()) s += " ; " + f->note;
    return s;
  }
  const auto& g = std::get<ValueGroup>(p);
  std::string s = g.relation + '(' + g.subject + "):";
  for (const auto& v : g.values) s += ' ' + v;
  return s;
}

SuggestionFilter make_filter(const std::string& kind, const std::string& status, const std::string& entity) {
  SuggestionFilter f;
  if (!kind.empty()) {
    f.kind = parse_suggestion_kind(kind);
    if (!f.kind) throw Error(ErrorCode::ConfigError, "unknown kind '" + kind + "'");
  }
  if (!status.empty()) {
    f.status = parse_status(status);
    if (!f.status) throw Error(ErrorCode::ConfigError, "unknown status '" + status + "'");
  }
  f.entity = entity;
  return f;
}

int cmd_parse(const Common& common, const std::string& text, std::ostream& out) {
  auto resources = Resources::load(load_config(common));
  LexiconView lexicon;
  std::optional<KnowledgeStore> store;
  if (!common.store.empty()) lexicon = store.emplace(common.store).lexicon_view();
  Tagger tagger{resources.closed, resources.heuristics};
  auto doc = segment_document(RawCorpusFile{"input", text}, resources.segmentation);
  for (const auto& seg : doc.segments) {
    auto tagged = tag_segment(seg, lexicon, tagger);
    auto result = parse(tagged, resources.grammar);
    out << "# " << doc.segment_text(seg) << '\n';
    out << "# " << to_string(result.kind) << (result.truncated ? " (truncated)" : "") << ", "
        << result.trees.size() << " tree(s)\n";
    for (const auto& t : result.trees) out << render_tree(t);
    auto match = match_patterns(result, resources.patterns, resources.exceptions, EvidenceRef{doc.id(), seg.id});
    for (const auto& r : match.relations) out << ratt_v(r.entity, r.values);
  }
  return 0;
}

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lexicon and ontology bootstrapping for German autopsy protocols", "bootlex"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub, bool store_required) {
    sub->add_option("-c,--config", common.config, "Pipeline config file (key = value)");
    sub->add_option("--corpus", common.corpus, "Corpus directory of .txt documents");
    auto* s = sub->add_option("-s,--store", common.store, "Knowledge store file");
    if (store_required) s->required();
  };

  std::string out_dir, stop_after, host = "127.0.0.1", kind, status, entity, verdict, who = "cli";
  bool serial = false;
  int verbosity = 0, port = 8080;
  SuggestionId id = 0;

  auto* run = app.add_subcommand("run", "Run the whole pipeline and write artifacts");
  add_common(run, false);
  run->add_option("-o,--out", out_dir, "Output directory")->required();
  run->add_option("--stop-after", stop_after, "Last stage: segment, tag, parse, extract, cluster, suggest");
  run->add_flag("--serial", serial, "Analyse documents without OpenMP");
  run->add_flag("-v,--verbose", verbosity, "More output (repeatable)");

  auto* serve = app.add_subcommand("serve", "Run the pipeline once, then serve the review API");
  add_common(serve, true);
  serve->add_option("--host", host, "Address to bind");
  serve->add_option("-p,--port", port, "Port (0 picks a free one)");
  serve->add_option("-o,--out", out_dir, "Rewrite artifacts here after each run");

  auto* sugg = app.add_subcommand("suggestions", "Inspect and decide stored suggestions");
  sugg->require_subcommand(1);
  auto* list = sugg->add_subcommand("list", "List suggestions");
  add_common(list, true);
  list->add_option("--kind", kind, "LEXICON, ONTOLOGY or VALUE_GROUP");
  list->add_option("--status", status, "SUGGESTED, ACCEPTED or REJECTED");
  list->add_option("--entity", entity, "Substring of surface, subject, object or value");
  auto* decide = sugg->add_subcommand("decide", "Accept or reject one suggestion");
  add_common(decide, true);
  decide->add_option("id", id, "Suggestion id")->required();
  decide->add_option("verdict", verdict, "accept or reject")->required()->check(CLI::IsMember({"accept", "reject"}));
  decide->add_option("--who", who, "Reviewer name");
  auto* accept_all = sugg->add_subcommand("accept-all", "Accept every open suggestion of a kind");
  add_common(accept_all, true);
  accept_all->add_option("--kind", kind, "Kind to accept")->required();
  accept_all->add_option("--who", who, "Reviewer name");

  std::string text;
  auto* parse_cmd = app.add_subcommand("parse", "Tag and parse text given on the command line");
  add_common(parse_cmd, false);
  parse_cmd->add_option("text", text, "Text to analyse")->required();

  std::string xml_path;
  auto* exp = app.add_subcommand("export", "Write the store as XML");
  add_common(exp, true);
  exp->add_option("xml", xml_path, "Output file")->required();
  auto* imp = app.add_subcommand("import", "Replace the store contents from XML");
  add_common(imp, true);
  imp->add_option("xml", xml_path, "Input file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*run) return cmd_run(common, out_dir, common.store, stop_after, serial, verbosity, out);
    if (*serve) return cmd_serve(common, host, port, out_dir, out);
    if (*parse_cmd) return cmd_parse(common, text, out);
    if (*exp) {
      KnowledgeStore store(common.store);
      std::ofstream(xml_path, std::ios::binary) << store.export_xml();
      return 0;
    }
    if (*imp) {
      std::ifstream in(xml_path, std::ios::binary);
      if (!in) throw Error(ErrorCode::ConfigError, "cannot read " + xml_path);
      std::ostringstream ss;
      ss << in.rdbuf();
      KnowledgeStore store(common.store);
      store.import_xml(ss.str());
      return 0;
    }
    KnowledgeStore store(common.store);
    if (*list) {
      for (const auto& s : store.suggestions(make_filter(kind, status, entity))) {
        out << s.id << '\t' << to_string(s.kind()) << '\t' << to_string(s.status) << '\t' << describe(s.payload)
            << '\t' << s.evidence.size() << " evidence\n";
      }
    } else if (*decide) {
      auto s = store.decide(id, verdict == "accept" ? Verdict::Accept : Verdict::Reject, who);
      out << s.id << '\t' << to_string(s.status) << '\t' << describe(s.payload) << '\n';
    } else if (*accept_all) {
      auto filter = make_filter(kind, "SUGGESTED", "");
      std::size_t n = 0;
      for (const auto& s : store.suggestions(filter)) {
        store.decide(s.id, Verdict::Accept, who);
        ++n;
      }
      out << "accepted " << n << '\n';
    }
    return 0;
  } catch (const Error& e) {
    err << "bootlex: " << stage_of(e.code()) << ": " << e.what() << '\n';
    return e.code() == ErrorCode::ConfigError ? 2 : 1;
  } catch (const std::exception& e) {
    err << "bootlex: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace bootlex::cli
