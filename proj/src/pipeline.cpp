#include "bootlex/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "bootlex/error.hpp"
#include "bootlex/xml_io.hpp"
#include "text_util.hpp"

namespace bootlex {

namespace fs = std::filesystem;

PipelineConfig PipelineConfig::defaults(const fs::path& dir) {
  PipelineConfig c;
  c.grammar = dir / "grammar.txt";
  c.closed_class = dir / "closed_class.txt";
  c.heuristics = dir / "heuristics.txt";
  c.patterns = dir / "patterns.txt";
  c.exceptions = dir / "exceptions.txt";
  c.measures = dir / "measures.txt";
  c.dimensions = dir / "dimensions.txt";
  c.abbreviations = dir / "abbreviations.txt";
  c.upper_ontology = dir / "upper_ontology.txt";
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigError, path.string() + ": cannot read config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.parent_path(), path.string());
}

PipelineConfig PipelineConfig::parse(std::string_view text, const fs::path& base, const std::string& origin) {
  PipelineConfig c = defaults(BOOTLEX_RESOURCE_DIR);
  auto fail = [&](std::size_t line, const std::string& msg) {
    throw Error(ErrorCode::ConfigError, origin + ":" + std::to_string(line) + ": " + msg);
  };
  std::map<std::string, fs::path*> paths{
      {"corpus", &c.corpus},         {"grammar", &c.grammar},       {"closed_class", &c.closed_class},
      {"heuristics", &c.heuristics}, {"patterns", &c.patterns},     {"exceptions", &c.exceptions},
      {"measures", &c.measures},     {"dimensions", &c.dimensions}, {"abbreviations", &c.abbreviations},
      {"upper_ontology", &c.upper_ontology}};
  for (const auto& [number, line] : resource_lines(text)) {
    auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(number, "expected 'key = value'");
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (auto it = paths.find(key); it != paths.end()) {
      fs::path p(value);
      if (p.is_relative()) p = base / p;
      if (!fs::exists(p)) fail(number, key + ": no such file or directory: " + p.string());
      *it->second = p.lexically_normal();
    } else if (key == "inventory_min_count" || key == "cluster_report_cap") {
      long v = 0;
      try {
        std::size_t used = 0;
        v = std::stol(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
      } catch (const std::exception&) {
        fail(number, key + ": expected an integer, got '" + value + "'");
      }
      if (v < 1) fail(number, key + ": must be at least 1");
      if (key == "inventory_min_count") c.inventory_min_count = static_cast<int>(v);
      else c.cluster_report_cap = static_cast<std::size_t>(v);
    } else if (key == "disable_groups") {
      for (auto g : split_ws(value)) c.disabled_groups.emplace_back(g);
    } else {
      fail(number, "unknown key '" + key + "'");
    }
  }
  return c;
}

Resources Resources::load(const PipelineConfig& config) {
  Resources r;
  r.segmentation = SegmentationConfig::load(config.abbreviations);
  r.closed = ClosedClassLexicon::load(config.closed_class);
  r.heuristics = HeuristicConfig::load(config.heuristics);
  r.grammar = load_grammar_file(config.grammar);
  for (const auto& g : config.disabled_groups) r.grammar.disable_group(g);
  r.patterns = PatternSet::load(config.patterns);
  r.exceptions = ExceptionList::load(config.exceptions);
  r.measures = MeasureConfig::load(config.measures);
  r.dimensions = DimensionLexicon::load(config.dimensions);
  r.upper = UpperOntology::load(config.upper_ontology);
  r.inventory_min_count = config.inventory_min_count;
  r.cluster_report_cap = config.cluster_report_cap;
  r.files = {config.abbreviations, config.closed_class, config.heuristics, config.grammar, config.patterns,
             config.exceptions, config.measures, config.dimensions, config.upper_ontology};
  r.disabled_groups = config.disabled_groups;
  return r;
}

std::string Resources::fingerprint() const {
  std::string all;
  for (const auto& f : files) all += read_file(f) + '\x1f';
  for (const auto& g : disabled_groups) all += g + '\x1e';
  all += std::to_string(inventory_min_count) + '/' + std::to_string(cluster_report_cap);
  return fnv1a_hex(all);
}

std::string corpus_fingerprint(const std::vector<RawCorpusFile>& corpus) {
  std::string all;
  for (const auto& f : corpus) all += f.path + '\x1f' + f.text + '\x1e';
  return fnv1a_hex(all);
}

namespace {

bool learnable(PosClass c) { return c == PosClass::N || c == PosClass::ADJ || c == PosClass::V; }

}  // namespace

std::vector<SuggestionItem> lexicon_suggestions(const std::vector<DocumentAnalysis>& docs) {
  struct Acc {
    LexiconEntry entry;
    bool assumed = false, derived = false;
    std::uint8_t num = 0, gen = 0;
    std::vector<EvidenceRef> evidence;
  };
  std::vector<Acc> accs;
  std::map<std::pair<std::string, PosClass>, std::size_t> index;

  for (const auto& d : docs) {
    for (std::size_t s = 0; s < d.segments.size(); ++s) {
      const auto& sa = d.segments[s];
      if (!sa.parse || sa.parse->kind != ParseKind::Full) continue;
      EvidenceRef where{d.doc.id(), d.doc.segments[s].id};
      for (const auto& tree : sa.parse->trees) {
        std::vector<const ParseNode*> leaves;
        tree.collect_leaves(leaves);
        for (const auto* leaf : leaves) {
          bool assumed = leaf->assumed.has_value();
          bool heuristic = leaf->src && is_heuristic(*leaf->src);
          if (!assumed && !heuristic) continue;
          PosClass cls = assumed ? *leaf->assumed : *parse_pos_class(leaf->category);
          if (!learnable(cls)) continue;
          const auto& reading = sa.tagged[leaf->span.begin].readings[*leaf->reading];
          std::string surface = leaf->lemma.value_or(leaf->surface);
          auto [it, fresh] = index.try_emplace({surface, cls}, accs.size());
          if (fresh) {
            Acc a;
            a.entry.surface = surface;
            a.entry.cls = cls;
            a.entry.lemma = surface;
            accs.push_back(std::move(a));
          }
          auto& acc = accs[it->second];
          acc.assumed = acc.assumed || assumed;
          // Only nouns keep number and gender; adjective and verb readings
          // stay unrestricted so that accepting them cannot block a parse.
          if (cls == PosClass::N) {
            acc.num |= leaf->features.num;
            acc.gen |= leaf->features.gen;
            acc.derived = acc.derived ||
                          (reading.features.is_full(Feature::Num) && !leaf->features.is_full(Feature::Num)) ||
                          (reading.features.is_full(Feature::Gen) && !leaf->features.is_full(Feature::Gen));
          } else {
            acc.num = num::ALL;
            acc.gen = gen::ALL;
          }
          if (std::find(acc.evidence.begin(), acc.evidence.end(), where) == acc.evidence.end()) {
            acc.evidence.push_back(where);
          }
        }
      }
    }
  }
  // A reading is offered only if every complete segment containing the
  // surface has a tree that uses it at all occurrences; accepting it then
  // leaves each of those segments with a complete parse.
  std::map<std::string, std::vector<std::set<PosClass>>> viable;
  for (const auto& d : docs) {
    for (const auto& sa : d.segments) {
      if (!sa.parse || sa.parse->kind != ParseKind::Full) continue;
      std::map<std::string, std::set<PosClass>> seg;
      for (const auto& tree : sa.parse->trees) {
        std::vector<const ParseNode*> leaves;
        tree.collect_leaves(leaves);
        std::map<std::string, std::set<PosClass>> used;
        for (const auto* leaf : leaves) {
          auto cls = leaf->assumed ? leaf->assumed : parse_pos_class(leaf->category);
          if (cls) used[leaf->lemma.value_or(leaf->surface)].insert(*cls);
        }
        for (const auto& [surface, classes] : used) {
          auto& v = seg[surface];
          if (classes.size() == 1) v.insert(*classes.begin());
        }
      }
      for (auto& [surface, classes] : seg) viable[surface].push_back(std::move(classes));
    }
  }
  auto consistent = [&](const LexiconEntry& e) {
    auto it = viable.find(e.surface);
    if (it == viable.end()) return true;
    return std::all_of(it->second.begin(), it->second.end(),
                       [&](const std::set<PosClass>& classes) { return classes.count(e.cls) > 0; });
  };

  std::vector<SuggestionItem> out;
  for (auto& a : accs) {
    if (!consistent(a.entry)) continue;
    a.entry.features = FeatureBundle{cas::ALL, a.num, a.gen};
    a.entry.origin = a.assumed  ? LexiconOrigin::ParserAs
                     : a.derived ? LexiconOrigin::FeatureDerivation
                                 : LexiconOrigin::Heuristic;
    out.push_back(SuggestionItem{a.entry, a.evidence});
  }
  return out;
}

CorpusResult run_corpus(const std::vector<RawCorpusFile>& corpus, const Resources& res, const LexiconView& lexicon,
                        const RunOptions& options) {
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "corpus contains no documents");
  Tagger tagger{res.closed, res.heuristics};
  AnalysisContext ctx{res.segmentation, tagger, lexicon, res.grammar, res.patterns, res.exceptions,
                      options.stop_after};
  CorpusResult out;
  out.documents = options.parallel ? analyze_corpus_parallel(corpus, ctx) : analyze_corpus_serial(corpus, ctx);

  std::vector<SegmentOutcome> outcomes;
  std::vector<ParsedSegment> forests;
  for (const auto& d : out.documents) {
    for (std::size_t s = 0; s < d.segments.size(); ++s) {
      const auto& sa = d.segments[s];
      for (const auto& t : sa.tagged) out.xxx_tokens += t.is_unknown() ? 1 : 0;
      if (!sa.parse) continue;
      if (sa.parse->kind == ParseKind::Full) ++out.full_parses;
      forests.push_back(ParsedSegment{EvidenceRef{d.doc.id(), d.doc.segments[s].id}, &*sa.parse});
      bool matched = sa.match && sa.match->matched();
      outcomes.push_back(SegmentOutcome{sa.parse->kind, matched});
      if (sa.match) out.relations.insert(out.relations.end(), sa.match->relations.begin(), sa.match->relations.end());
    }
  }
  out.coverage = coverage_report(outcomes);
  if (options.stop_after < Stage::Extract) return out;

  std::set<std::string, std::less<>> known;
  for (const auto& r : out.relations) known.insert(r.entity);

  // Measurements need the focus register, so each document runs in order.
  for (const auto& d : out.documents) {
    FocusRegister focus;
    for (std::size_t s = 0; s < d.segments.size(); ++s) {
      const auto& seg = d.doc.segments[s];
      try {
        if (auto m = extract_measurement(seg, focus, res.measures, known, d.doc.id())) {
          out.measurements.push_back(std::move(*m));
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::FocusUnresolved) throw;
        out.diagnostics.push_back(Diagnostic{EvidenceRef{d.doc.id(), seg.id}, e.what()});
      }
      const auto& match = d.segments[s].match;
      if (match && match->matched() && !match->relations.empty()) {
        focus.update(match->relations.front().entity, seg.id);
      }
    }
  }

  out.table = aggregate(out.relations);
  out.matrix = build_matrix(out.table);
  if (options.stop_after < Stage::Cluster) return out;
  out.clusters = all_clusters(out.matrix);
  if (options.stop_after < Stage::Suggest) return out;

  out.concepts = detect_concepts(out.relations, forests);
  std::map<std::string, std::string, std::less<>> concept_name;
  for (const auto& c : out.concepts) {
    if (c.kind == ConceptKind::EntityConcept) concept_name[c.surface] = c.name;
  }
  for (const auto& row : out.table.rows()) {
    auto inventory = property_inventory(out.matrix, row.entity, res.inventory_min_count);
    if (inventory.empty()) continue;
    auto it = concept_name.find(row.entity);
    std::string subject = it == concept_name.end() ? row.entity : it->second;
    auto cls = classify_concept(subject, inventory, res.dimensions);
    for (auto& f : cls.dimensions) {
      f.evidence = row.evidence;
      out.facts.push_back(std::move(f));
    }
    if (!cls.unknown_values.empty()) {
      out.value_groups.push_back(ValueGroup{"DIMENSION_UNKNOWN", subject, cls.unknown_values});
      std::vector<EvidenceRef> ev;
      for (const auto& v : cls.unknown_values) {
        for (std::size_t k = 0; k < row.values.size(); ++k) {
          if (row.values[k].value != v) continue;
          for (const auto& e : row.value_evidence[k]) {
            if (std::find(ev.begin(), ev.end(), e) == ev.end()) ev.push_back(e);
          }
        }
      }
      out.suggestions.push_back(SuggestionItem{out.value_groups.back(), ev});
    }
  }
  for (auto& f : infer_partof(forests, known)) out.facts.push_back(std::move(f));
  for (auto& f : suggest_isa(out.measurements, res.upper)) out.facts.push_back(std::move(f));
  for (auto& f : range_facts(out.measurements)) out.facts.push_back(std::move(f));

  auto lex = lexicon_suggestions(out.documents);
  lex.insert(lex.end(), std::make_move_iterator(out.suggestions.begin()),
             std::make_move_iterator(out.suggestions.end()));
  out.suggestions = std::move(lex);
  for (const auto& f : out.facts) out.suggestions.push_back(SuggestionItem{f, f.evidence});
  return out;
}

RunOutcome bootstrap_run(const std::vector<RawCorpusFile>& corpus, const Resources& resources,
                         KnowledgeStore& store, const RunOptions& options) {
  RunOutcome out;
  auto run = store.open_run(corpus_fingerprint(corpus), resources.fingerprint());
  out.result = run_corpus(corpus, resources, store.lexicon_view(run.id), options);
  if (options.stop_after >= Stage::Suggest) {
    out.new_suggestions = store.record_suggestions(run.id, out.result.suggestions);
  }
  out.record = store.close_run(run.id, out.result.coverage);
  return out;
}

namespace {

std::string num_text(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string evidence_text(const std::vector<EvidenceRef>& ev) {
  std::string out;
  for (const auto& e : ev) {
    if (!out.empty()) out += ';';
    out += e.doc + ':' + std::to_string(e.segment);
  }
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + path.string());
}

}  // namespace

std::string ontology_xml(const std::vector<OntologyFact>& facts) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<ONTOLOGY VERSION=\"1\">\n";
  for (const auto& f : facts) {
    os << "  <FACT KIND=\"" << to_string(f.kind) << "\" SUBJECT=\"" << xml_escape(f.subject) << "\" OBJECT=\""
       << xml_escape(f.object) << "\" STATUS=\"" << to_string(f.status) << "\"";
    if (f.payload) {
      os << " MIN=\"" << num_text(f.payload->min) << "\" MAX=\"" << num_text(f.payload->max) << "\" UNIT=\""
         << xml_escape(f.payload->unit) << "\" N=\"" << f.payload->n << "\"";
    }
    if (!f.note.empty()) os << " NOTE=\"" << xml_escape(f.note) << "\"";
    os << ">\n";
    for (const auto& e : f.evidence) {
      os << "    <EVIDENCE DOC=\"" << xml_escape(e.doc) << "\" SEG=\"" << e.segment << "\"/>\n";
    }
    os << "  </FACT>\n";
  }
  os << "</ONTOLOGY>\n";
  return os.str();
}

std::string clusters_xml(const std::vector<Cluster>& clusters, const CoocMatrix& m) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<CLUSTERS ENTITIES=\"" << m.entities().size()
     << "\" VALUES=\"" << m.values().size() << "\">\n";
  for (const auto& c : clusters) {
    os << "  <CLUSTER SEED=\"" << xml_escape(c.seed) << "\" ROUNDS=\"" << c.rounds << "\" ENTITIES=\""
       << c.entity_set.size() << "\" VALUES=\"" << c.value_set.size() << "\">\n";
    for (const auto& e : c.entity_set) os << "    <ENTITY>" << xml_escape(e) << "</ENTITY>\n";
    for (const auto& v : c.value_set) os << "    <VALUE>" << xml_escape(v) << "</VALUE>\n";
    os << "  </CLUSTER>\n";
  }
  os << "</CLUSTERS>\n";
  return os.str();
}

std::string coverage_text(const CoverageReport& c) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "segments\t%zu\nfull\t%.4f\npartial\t%.4f\npartial_matched\t%.4f\nunmatched\t%.4f\nempty\t%s\n",
                c.segments, c.full, c.partial, c.partial_matched, c.unmatched, c.empty ? "yes" : "no");
  return buf;
}

std::string document_xml(const DocumentAnalysis& d) {
  AnnotatedDocument ad{d.doc, {}};
  std::set<Layer> layers;
  bool tagged = false, parsed = false, matched = false;
  for (const auto& sa : d.segments) {
    SegmentLayers l;
    if (!sa.tagged.empty()) l.pos = sa.tagged;
    if (sa.parse) l.parse = *sa.parse;
    if (sa.match) l.relations = sa.match->relations;
    tagged = tagged || l.pos;
    parsed = parsed || l.parse;
    matched = matched || l.relations;
    ad.layers.push_back(std::move(l));
  }
  if (tagged) layers.insert(Layer::Pos);
  if (parsed) layers.insert(Layer::Parse);
  if (matched) layers.insert(Layer::Relation);
  return export_xml(ad, layers);
}

void write_artifacts(const CorpusResult& result, const KnowledgeStore& store, const fs::path& out_dir,
                     int inventory_min_count, std::size_t cluster_cap) {
  fs::create_directories(out_dir / "xml");
  for (const auto& d : result.documents) {
    write_file(out_dir / "xml" / (d.doc.id() + ".xml"), document_xml(d));
  }

  write_file(out_dir / "relations.xml", relations_xml(result.table));
  std::string tsv = "entity\tvalue\tcount\tevidence\n";
  for (const auto& row : result.table.rows()) {
    for (std::size_t k = 0; k < row.values.size(); ++k) {
      tsv += row.entity + '\t' + row.values[k].value + '\t' + std::to_string(row.values[k].count) + '\t' +
             evidence_text(row.value_evidence[k]) + '\n';
    }
  }
  write_file(out_dir / "relations.tsv", tsv);

  std::string mtsv = "entity\tproperty\tvalue\tunit\tresolved_by\tevidence\n";
  for (const auto& m : result.measurements) {
    mtsv += m.entity + '\t' + m.property + '\t' + num_text(m.value) + '\t' + m.unit + '\t' +
            std::string(to_string(m.resolved_by)) + '\t' + m.evidence.doc + ':' + std::to_string(m.evidence.segment) +
            '\n';
  }
  for (const auto& d : result.diagnostics) {
    mtsv += "# " + d.where.doc + ':' + std::to_string(d.where.segment) + ' ' + d.message + '\n';
  }
  write_file(out_dir / "measurements.tsv", mtsv);

  std::vector<Cluster> shown(result.clusters.begin(),
                             result.clusters.begin() +
                                 static_cast<std::ptrdiff_t>(std::min(cluster_cap, result.clusters.size())));
  write_file(out_dir / "clusters.xml", clusters_xml(shown, result.matrix));

  std::ostringstream inv;
  inv << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<INVENTORIES MIN_COUNT=\"" << inventory_min_count << "\">\n";
  for (const auto& e : result.matrix.entities()) {
    auto items = property_inventory(result.matrix, e, inventory_min_count);
    if (items.empty()) continue;
    inv << "  <INVENTORY ENTITY=\"" << xml_escape(e) << "\">\n";
    for (const auto& [v, n] : items) inv << "    <VALUE CNT=\"" << n << "\">" << xml_escape(v) << "</VALUE>\n";
    inv << "  </INVENTORY>\n";
  }
  inv << "</INVENTORIES>\n";
  write_file(out_dir / "inventories.xml", inv.str());

  std::ostringstream cx;
  cx << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<CONCEPTS>\n";
  for (const auto& c : result.concepts) {
    cx << "  <CONCEPT NAME=\"" << xml_escape(c.name) << "\" SURFACE=\"" << xml_escape(c.surface) << "\" KIND=\""
       << to_string(c.kind) << "\" SCORE=\"" << c.score << "\">\n";
    for (const auto& e : c.evidence) {
      cx << "    <EVIDENCE DOC=\"" << xml_escape(e.doc) << "\" SEG=\"" << e.segment << "\"/>\n";
    }
    cx << "  </CONCEPT>\n";
  }
  cx << "</CONCEPTS>\n";
  write_file(out_dir / "concepts.xml", cx.str());

  // Status of each fact as the store knows it.
  std::map<std::string, Status> status;
  for (const auto& s : store.suggestions({SuggestionKind::Ontology, std::nullopt, {}})) {
    status[payload_key(s.payload)] = s.status;
  }
  auto facts = result.facts;
  for (auto& f : facts) {
    if (auto it = status.find(payload_key(f)); it != status.end()) f.status = it->second;
  }
  write_file(out_dir / "ontology.xml", ontology_xml(facts));
  write_file(out_dir / "coverage.txt", coverage_text(result.coverage));
}

}  // namespace bootlex
