#include "bootlex/store.hpp"

#include <algorithm>
#include <ctime>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <json.hpp>

#include "bootlex/error.hpp"
#include "json_codec.hpp"
#include "bootlex/xml_io.hpp"

namespace bootlex {

using json = nlohmann::json;

namespace {

constexpr std::string_view kHeader = "bootlex-store 1";

std::string fmt_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::string_view to_string(SuggestionKind k) {
  switch (k) {
    case SuggestionKind::Lexicon: return "LEXICON";
    case SuggestionKind::Ontology: return "ONTOLOGY";
    case SuggestionKind::ValueGroup: break;
  }
  return "VALUE_GROUP";
}

std::optional<SuggestionKind> parse_suggestion_kind(std::string_view s) {
  for (auto k : {SuggestionKind::Lexicon, SuggestionKind::Ontology, SuggestionKind::ValueGroup}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

SuggestionKind kind_of(const Payload& p) { return static_cast<SuggestionKind>(p.index()); }

std::string payload_key(const Payload& p) {
  std::string key(to_string(kind_of(p)));
  if (const auto* e = std::get_if<LexiconEntry>(&p)) {
    key += '|' + e->surface + '|' + std::string(to_string(e->cls)) + '|' + format_bundle(e->features) + '|' +
           e->lemma.value_or("");
  } else if (const auto* f = std::get_if<OntologyFact>(&p)) {
    key += '|' + std::string(to_string(f->kind)) + '|' + f->subject + '|' + f->object;
    if (f->payload) {
      key += '|' + fmt_number(f->payload->min) + '|' + fmt_number(f->payload->max) + '|' + f->payload->unit + '|' +
             std::to_string(f->payload->n);
    }
  } else {
    const auto& g = std::get<ValueGroup>(p);
    auto values = g.values;
    std::sort(values.begin(), values.end());
    key += '|' + g.relation + '|' + g.subject;
    for (const auto& v : values) key += '|' + v;
  }
  return key;
}

std::string now_iso8601() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json evidence_json(const std::vector<EvidenceRef>& ev) {
  json a = json::array();
  for (const auto& e : ev) a.push_back({{"doc", e.doc}, {"seg", e.segment}});
  return a;
}

namespace {

std::vector<EvidenceRef> evidence_from(const json& a) {
  std::vector<EvidenceRef> out;
  for (const auto& e : a) out.push_back(EvidenceRef{e.at("doc").get<std::string>(), e.at("seg").get<std::size_t>()});
  return out;
}

}  // namespace

json payload_json(const Payload& p) {
  json j;
  j["kind"] = std::string(to_string(kind_of(p)));
  if (const auto* e = std::get_if<LexiconEntry>(&p)) {
    j["surface"] = e->surface;
    j["cls"] = std::string(to_string(e->cls));
    j["cas"] = format_component(Feature::Cas, e->features.cas);
    j["num"] = format_component(Feature::Num, e->features.num);
    j["gen"] = format_component(Feature::Gen, e->features.gen);
    if (e->lemma) j["lemma"] = *e->lemma;
    j["origin"] = std::string(to_string(e->origin));
  } else if (const auto* f = std::get_if<OntologyFact>(&p)) {
    j["fact"] = std::string(to_string(f->kind));
    j["subject"] = f->subject;
    j["object"] = f->object;
    j["note"] = f->note;
    if (f->payload) {
      j["min"] = f->payload->min;
      j["max"] = f->payload->max;
      j["unit"] = f->payload->unit;
      j["n"] = f->payload->n;
    }
  } else {
    const auto& g = std::get<ValueGroup>(p);
    j["relation"] = g.relation;
    j["subject"] = g.subject;
    j["values"] = g.values;
  }
  return j;
}

namespace {

std::uint8_t component_from(Feature f, const json& j, const char* key) {
  auto m = parse_component(f, j.at(key).get<std::string>());
  if (!m) throw Error(ErrorCode::StoreCorrupt, std::string("bad feature value for ") + key);
  return *m;
}

Payload payload_from(const json& j) {
  auto kind = parse_suggestion_kind(j.at("kind").get<std::string>());
  if (!kind) throw Error(ErrorCode::StoreCorrupt, "unknown suggestion kind");
  if (*kind == SuggestionKind::Lexicon) {
    LexiconEntry e;
    e.surface = j.at("surface").get<std::string>();
    auto cls = parse_pos_class(j.at("cls").get<std::string>());
    auto origin = parse_lexicon_origin(j.at("origin").get<std::string>());
    if (!cls || !origin) throw Error(ErrorCode::StoreCorrupt, "bad lexicon entry");
    e.cls = *cls;
    e.origin = *origin;
    e.features.cas = component_from(Feature::Cas, j, "cas");
    e.features.num = component_from(Feature::Num, j, "num");
    e.features.gen = component_from(Feature::Gen, j, "gen");
    if (j.contains("lemma")) e.lemma = j["lemma"].get<std::string>();
    return e;
  }
  if (*kind == SuggestionKind::Ontology) {
    OntologyFact f;
    auto fk = parse_fact_kind(j.at("fact").get<std::string>());
    if (!fk) throw Error(ErrorCode::StoreCorrupt, "bad fact kind");
    f.kind = *fk;
    f.subject = j.at("subject").get<std::string>();
    f.object = j.at("object").get<std::string>();
    f.note = j.value("note", "");
    if (j.contains("min")) {
      f.payload = RangePayload{j["min"].get<double>(), j["max"].get<double>(), j["unit"].get<std::string>(),
                               j["n"].get<std::size_t>()};
    }
    return f;
  }
  ValueGroup g;
  g.relation = j.at("relation").get<std::string>();
  g.subject = j.at("subject").get<std::string>();
  g.values = j.at("values").get<std::vector<std::string>>();
  return g;
}

}  // namespace

json coverage_json(const CoverageReport& c) {
  return {{"segments", c.segments}, {"full", c.full}, {"partial", c.partial},
          {"partial_matched", c.partial_matched}, {"unmatched", c.unmatched}, {"empty", c.empty}};
}

namespace {

CoverageReport coverage_from(const json& j) {
  CoverageReport c;
  c.segments = j.at("segments").get<std::size_t>();
  c.full = j.at("full").get<double>();
  c.partial = j.at("partial").get<double>();
  c.partial_matched = j.at("partial_matched").get<double>();
  c.unmatched = j.at("unmatched").get<double>();
  c.empty = j.at("empty").get<bool>();
  return c;
}

bool mentions(const Payload& p, const std::string& needle) {
  auto has = [&](const std::string& s) { return s.find(needle) != std::string::npos; };
  if (const auto* e = std::get_if<LexiconEntry>(&p)) return has(e->surface);
  if (const auto* f = std::get_if<OntologyFact>(&p)) return has(f->subject) || has(f->object);
  const auto& g = std::get<ValueGroup>(p);
  return has(g.subject) || std::any_of(g.values.begin(), g.values.end(), has);
}

}  // namespace

KnowledgeStore::KnowledgeStore(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.empty()) return;
  if (std::filesystem::exists(path_)) {
    std::ifstream in(path_, std::ios::binary);
    if (!in) throw Error(ErrorCode::StoreCorrupt, "cannot read " + path_.string());
    replay(in);
    return;
  }
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  std::ofstream out(path_, std::ios::binary);
  if (!out) throw Error(ErrorCode::StoreCorrupt, "cannot create " + path_.string());
  out << kHeader << '\n';
}

void KnowledgeStore::append(const std::string& line) {
  if (path_.empty()) return;
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  out << line << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::StoreCorrupt, "write failed: " + path_.string());
}

void KnowledgeStore::replay(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader) {
    throw Error(ErrorCode::StoreCorrupt, path_.string() + ": missing header '" + std::string(kHeader) + "'");
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    apply_record(line, lineno);
  }
}

void KnowledgeStore::apply_record(const std::string& line, std::size_t lineno) {
  try {
    json r = json::parse(line);
    std::string t = r.at("t").get<std::string>();
    std::uint64_t seq = r.at("seq").get<std::uint64_t>();
    seq_ = std::max(seq_, seq);
    if (t == "run_open" || t == "run") {
      RunRecord run;
      run.id = r.at("run").get<RunId>();
      run.corpus_hash = r.at("corpus").get<std::string>();
      run.config_hash = r.at("config").get<std::string>();
      run.opened_seq = r.value("opened", seq);
      run.open = r.value("open", true);
      if (r.contains("coverage")) run.coverage = coverage_from(r["coverage"]);
      run.suggestions_produced = r.value("produced", std::size_t{0});
      runs_[run.id] = run;
    } else if (t == "run_close") {
      auto& run = runs_.at(r.at("run").get<RunId>());
      run.open = false;
      run.coverage = coverage_from(r.at("coverage"));
      run.suggestions_produced = r.at("produced").get<std::size_t>();
    } else if (t == "suggest" || t == "suggestion") {
      Suggestion s;
      s.id = r.at("id").get<SuggestionId>();
      s.payload = payload_from(r.at("payload"));
      s.created_run = r.at("run").get<RunId>();
      s.evidence = evidence_from(r.at("evidence"));
      if (r.contains("status")) {
        auto st = parse_status(r["status"].get<std::string>());
        if (!st) throw Error(ErrorCode::StoreCorrupt, "bad status");
        s.status = *st;
        s.decided_by = r.value("who", "");
        s.decided_at = r.value("at", "");
        if (r.contains("decided")) decided_seq_[s.id] = r["decided"].get<std::uint64_t>();
      }
      by_key_[payload_key(s.payload)] = s.id;
      next_id_ = std::max(next_id_, s.id + 1);
      suggestions_[s.id] = std::move(s);
    } else if (t == "evidence") {
      auto& s = suggestions_.at(r.at("id").get<SuggestionId>());
      for (auto& e : evidence_from(r.at("evidence"))) {
        if (std::find(s.evidence.begin(), s.evidence.end(), e) == s.evidence.end()) s.evidence.push_back(e);
      }
    } else if (t == "decide") {
      auto& s = suggestions_.at(r.at("id").get<SuggestionId>());
      s.status = r.at("verdict").get<std::string>() == "ACCEPT" ? Status::Accepted : Status::Rejected;
      s.decided_by = r.at("who").get<std::string>();
      s.decided_at = r.at("at").get<std::string>();
      decided_seq_[s.id] = seq;
    } else if (t != "seq") {
      throw Error(ErrorCode::StoreCorrupt, "unknown record type '" + t + "'");
    }
  } catch (const Error& e) {
    throw Error(ErrorCode::StoreCorrupt, path_.string() + ":" + std::to_string(lineno) + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorCode::StoreCorrupt, path_.string() + ":" + std::to_string(lineno) + ": " + e.what());
  }
}

RunRecord KnowledgeStore::open_run(const std::string& corpus_hash, const std::string& config_hash) {
  std::lock_guard lock(mutex_);
  RunRecord run;
  run.id = runs_.empty() ? 1 : runs_.rbegin()->first + 1;
  run.corpus_hash = corpus_hash;
  run.config_hash = config_hash;
  run.opened_seq = ++seq_;
  append(json{{"t", "run_open"}, {"seq", seq_}, {"run", run.id}, {"corpus", corpus_hash}, {"config", config_hash}}
             .dump());
  runs_[run.id] = run;
  return run;
}

RunRecord KnowledgeStore::close_run(RunId id, const CoverageReport& coverage) {
  std::lock_guard lock(mutex_);
  auto it = runs_.find(id);
  if (it == runs_.end()) throw Error(ErrorCode::UnknownRun, "run " + std::to_string(id));
  if (!it->second.open) throw Error(ErrorCode::RunClosed, "run " + std::to_string(id));
  std::size_t produced = 0;
  for (const auto& [sid, s] : suggestions_) {
    if (s.created_run == id) ++produced;
  }
  ++seq_;
  append(json{{"t", "run_close"}, {"seq", seq_}, {"run", id}, {"coverage", coverage_json(coverage)},
              {"produced", produced}}
             .dump());
  it->second.open = false;
  it->second.coverage = coverage;
  it->second.suggestions_produced = produced;
  return it->second;
}

std::vector<SuggestionId> KnowledgeStore::record_suggestions(RunId run, const std::vector<SuggestionItem>& items) {
  std::lock_guard lock(mutex_);
  auto rit = runs_.find(run);
  if (rit == runs_.end()) throw Error(ErrorCode::UnknownRun, "run " + std::to_string(run));
  if (!rit->second.open) throw Error(ErrorCode::RunClosed, "run " + std::to_string(run));
  std::vector<SuggestionId> created;
  for (const auto& item : items) {
    std::string key = payload_key(item.payload);
    auto it = by_key_.find(key);
    if (it != by_key_.end()) {
      auto& s = suggestions_.at(it->second);
      std::vector<EvidenceRef> fresh;
      for (const auto& e : item.evidence) {
        if (std::find(s.evidence.begin(), s.evidence.end(), e) == s.evidence.end() &&
            std::find(fresh.begin(), fresh.end(), e) == fresh.end()) {
          fresh.push_back(e);
        }
      }
      if (fresh.empty()) continue;
      ++seq_;
      append(json{{"t", "evidence"}, {"seq", seq_}, {"id", s.id}, {"evidence", evidence_json(fresh)}}.dump());
      s.evidence.insert(s.evidence.end(), fresh.begin(), fresh.end());
      continue;
    }
    Suggestion s;
    s.id = next_id_++;
    s.payload = item.payload;
    s.created_run = run;
    for (const auto& e : item.evidence) {
      if (std::find(s.evidence.begin(), s.evidence.end(), e) == s.evidence.end()) s.evidence.push_back(e);
    }
    ++seq_;
    append(json{{"t", "suggest"}, {"seq", seq_}, {"id", s.id}, {"run", run}, {"payload", payload_json(s.payload)},
                {"evidence", evidence_json(s.evidence)}}
               .dump());
    by_key_[key] = s.id;
    created.push_back(s.id);
    suggestions_[s.id] = std::move(s);
  }
  return created;
}

Suggestion KnowledgeStore::decide(SuggestionId id, Verdict verdict, const std::string& who) {
  std::lock_guard lock(mutex_);
  auto it = suggestions_.find(id);
  if (it == suggestions_.end()) throw Error(ErrorCode::UnknownId, "suggestion " + std::to_string(id));
  auto& s = it->second;
  if (s.status != Status::Suggested) {
    throw Error(ErrorCode::AlreadyDecided,
                "suggestion " + std::to_string(id) + " is already " + std::string(to_string(s.status)));
  }
  std::string at = now_iso8601();
  ++seq_;
  append(json{{"t", "decide"}, {"seq", seq_}, {"id", id}, {"verdict", verdict == Verdict::Accept ? "ACCEPT" : "REJECT"},
              {"who", who}, {"at", at}}
             .dump());
  s.status = verdict == Verdict::Accept ? Status::Accepted : Status::Rejected;
  s.decided_by = who;
  s.decided_at = at;
  decided_seq_[id] = seq_;
  return s;
}

LexiconView KnowledgeStore::lexicon_view(std::optional<RunId> as_of) const {
  std::lock_guard lock(mutex_);
  std::uint64_t limit = std::numeric_limits<std::uint64_t>::max();
  if (as_of) {
    auto it = runs_.find(*as_of);
    if (it == runs_.end()) throw Error(ErrorCode::UnknownRun, "run " + std::to_string(*as_of));
    limit = it->second.opened_seq;
  }
  // One entry per (surface, class); feature sets of repeated acceptances merge.
  std::map<std::pair<std::string, PosClass>, LexiconEntry> merged;
  for (const auto& [id, s] : suggestions_) {
    if (s.status != Status::Accepted) continue;
    const auto* e = std::get_if<LexiconEntry>(&s.payload);
    if (!e) continue;
    auto d = decided_seq_.find(id);
    if (d == decided_seq_.end() || d->second >= limit) continue;
    auto [it, fresh] = merged.try_emplace({e->surface, e->cls}, *e);
    if (!fresh) {
      it->second.features.cas |= e->features.cas;
      it->second.features.num |= e->features.num;
      it->second.features.gen |= e->features.gen;
    }
  }
  std::vector<LexiconEntry> entries;
  for (auto& [k, e] : merged) entries.push_back(std::move(e));
  return LexiconView(std::move(entries));
}

std::optional<Suggestion> KnowledgeStore::get(SuggestionId id) const {
  std::lock_guard lock(mutex_);
  auto it = suggestions_.find(id);
  if (it == suggestions_.end()) return std::nullopt;
  return it->second;
}

std::vector<Suggestion> KnowledgeStore::suggestions_locked(const SuggestionFilter& filter) const {
  std::vector<Suggestion> out;
  for (const auto& [id, s] : suggestions_) {
    if (filter.kind && s.kind() != *filter.kind) continue;
    if (filter.status && s.status != *filter.status) continue;
    if (!filter.entity.empty() && !mentions(s.payload, filter.entity)) continue;
    out.push_back(s);
  }
  return out;
}

std::vector<Suggestion> KnowledgeStore::suggestions(const SuggestionFilter& filter) const {
  std::lock_guard lock(mutex_);
  return suggestions_locked(filter);
}

namespace {

std::vector<OntologyFact> facts_with(const std::vector<Suggestion>& list) {
  std::vector<OntologyFact> out;
  for (const auto& s : list) {
    OntologyFact f = std::get<OntologyFact>(s.payload);
    f.status = s.status;
    f.evidence = s.evidence;
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

std::vector<OntologyFact> KnowledgeStore::accepted_ontology() const {
  std::lock_guard lock(mutex_);
  return facts_with(suggestions_locked({SuggestionKind::Ontology, Status::Accepted, {}}));
}

std::vector<OntologyFact> KnowledgeStore::suggested_ontology() const {
  std::lock_guard lock(mutex_);
  return facts_with(suggestions_locked({SuggestionKind::Ontology, Status::Suggested, {}}));
}

std::vector<RunRecord> KnowledgeStore::runs() const {
  std::lock_guard lock(mutex_);
  std::vector<RunRecord> out;
  for (const auto& [id, r] : runs_) out.push_back(r);
  return out;
}

std::optional<RunRecord> KnowledgeStore::run(RunId id) const {
  std::lock_guard lock(mutex_);
  auto it = runs_.find(id);
  if (it == runs_.end()) return std::nullopt;
  return it->second;
}

void KnowledgeStore::compact() {
  std::lock_guard lock(mutex_);
  if (path_.empty()) return;
  auto tmp = path_;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << kHeader << '\n';
    out << json{{"t", "seq"}, {"seq", seq_}}.dump() << '\n';
    for (const auto& [id, r] : runs_) {
      json j{{"t", "run"},     {"seq", r.opened_seq},   {"run", id},     {"corpus", r.corpus_hash},
             {"config", r.config_hash}, {"opened", r.opened_seq}, {"open", r.open},
             {"coverage", coverage_json(r.coverage)}, {"produced", r.suggestions_produced}};
      out << j.dump() << '\n';
    }
    for (const auto& [id, s] : suggestions_) {
      json j{{"t", "suggestion"}, {"seq", 0}, {"id", id}, {"run", s.created_run}, {"payload", payload_json(s.payload)},
             {"evidence", evidence_json(s.evidence)}, {"status", std::string(to_string(s.status))}};
      if (s.status != Status::Suggested) {
        j["who"] = s.decided_by;
        j["at"] = s.decided_at;
        j["decided"] = decided_seq_.at(id);
      }
      out << j.dump() << '\n';
    }
    if (!out) throw Error(ErrorCode::StoreCorrupt, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path_);
}

std::string KnowledgeStore::export_xml() const {
  std::lock_guard lock(mutex_);
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<STORE VERSION=\"1\" SEQ=\"" << seq_ << "\">\n";
  for (const auto& [id, r] : runs_) {
    os << "  <RUN ID=\"" << id << "\" CORPUS=\"" << xml_escape(r.corpus_hash) << "\" CONFIG=\""
       << xml_escape(r.config_hash) << "\" OPENED=\"" << r.opened_seq << "\" OPEN=\"" << (r.open ? 1 : 0)
       << "\" PRODUCED=\"" << r.suggestions_produced << "\" SEGMENTS=\"" << r.coverage.segments << "\" FULL=\""
       << r.coverage.full << "\" PARTIAL=\"" << r.coverage.partial << "\" PARTIAL_MATCHED=\""
       << r.coverage.partial_matched << "\" UNMATCHED=\"" << r.coverage.unmatched << "\" EMPTY=\""
       << (r.coverage.empty ? 1 : 0) << "\"/>\n";
  }
  for (const auto& [id, s] : suggestions_) {
    os << "  <SUGGESTION ID=\"" << id << "\" RUN=\"" << s.created_run << "\" STATUS=\"" << to_string(s.status)
       << "\"";
    if (s.status != Status::Suggested) {
      os << " BY=\"" << xml_escape(s.decided_by) << "\" AT=\"" << xml_escape(s.decided_at) << "\" DECIDED=\""
         << decided_seq_.at(id) << "\"";
    }
    os << ">\n    ";
    if (const auto* e = std::get_if<LexiconEntry>(&s.payload)) {
      os << "<LEXICON SURFACE=\"" << xml_escape(e->surface) << "\" CLS=\"" << to_string(e->cls) << "\" CAS=\""
         << format_component(Feature::Cas, e->features.cas) << "\" NUM=\""
         << format_component(Feature::Num, e->features.num) << "\" GEN=\""
         << format_component(Feature::Gen, e->features.gen) << "\" ORIGIN=\"" << to_string(e->origin) << "\"";
      if (e->lemma) os << " LEMMA=\"" << xml_escape(*e->lemma) << "\"";
      os << "/>\n";
    } else if (const auto* f = std::get_if<OntologyFact>(&s.payload)) {
      os << "<FACT KIND=\"" << to_string(f->kind) << "\" SUBJECT=\"" << xml_escape(f->subject) << "\" OBJECT=\""
         << xml_escape(f->object) << "\" NOTE=\"" << xml_escape(f->note) << "\"";
      if (f->payload) {
        os << " MIN=\"" << fmt_number(f->payload->min) << "\" MAX=\"" << fmt_number(f->payload->max)
           << "\" UNIT=\"" << xml_escape(f->payload->unit) << "\" N=\"" << f->payload->n << "\"";
      }
      os << "/>\n";
    } else {
      const auto& g = std::get<ValueGroup>(s.payload);
      os << "<VALUEGROUP RELATION=\"" << xml_escape(g.relation) << "\" SUBJECT=\"" << xml_escape(g.subject)
         << "\">";
      for (const auto& v : g.values) os << "<V>" << xml_escape(v) << "</V>";
      os << "</VALUEGROUP>\n";
    }
    for (const auto& e : s.evidence) {
      os << "    <EVIDENCE DOC=\"" << xml_escape(e.doc) << "\" SEG=\"" << e.segment << "\"/>\n";
    }
    os << "  </SUGGESTION>\n";
  }
  os << "</STORE>\n";
  return os.str();
}

void KnowledgeStore::import_xml(const std::string& xml) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in(xml);
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorCode::XmlError, e.what());
  }
  std::map<RunId, RunRecord> runs;
  std::map<SuggestionId, Suggestion> suggestions;
  std::map<SuggestionId, std::uint64_t> decided;
  std::uint64_t seq = 0;
  try {
    const auto& root = tree.get_child("STORE");
    seq = root.get<std::uint64_t>("<xmlattr>.SEQ");
    for (const auto& [name, node] : root) {
      if (name == "RUN") {
        RunRecord r;
        r.id = node.get<RunId>("<xmlattr>.ID");
        r.corpus_hash = node.get<std::string>("<xmlattr>.CORPUS");
        r.config_hash = node.get<std::string>("<xmlattr>.CONFIG");
        r.opened_seq = node.get<std::uint64_t>("<xmlattr>.OPENED");
        r.open = node.get<int>("<xmlattr>.OPEN") != 0;
        r.suggestions_produced = node.get<std::size_t>("<xmlattr>.PRODUCED");
        r.coverage.segments = node.get<std::size_t>("<xmlattr>.SEGMENTS");
        r.coverage.full = node.get<double>("<xmlattr>.FULL");
        r.coverage.partial = node.get<double>("<xmlattr>.PARTIAL");
        r.coverage.partial_matched = node.get<double>("<xmlattr>.PARTIAL_MATCHED");
        r.coverage.unmatched = node.get<double>("<xmlattr>.UNMATCHED");
        r.coverage.empty = node.get<int>("<xmlattr>.EMPTY") != 0;
        runs[r.id] = r;
      } else if (name == "SUGGESTION") {
        Suggestion s;
        s.id = node.get<SuggestionId>("<xmlattr>.ID");
        s.created_run = node.get<RunId>("<xmlattr>.RUN");
        auto st = parse_status(node.get<std::string>("<xmlattr>.STATUS"));
        if (!st) throw Error(ErrorCode::XmlError, "bad STATUS");
        s.status = *st;
        if (s.status != Status::Suggested) {
          s.decided_by = node.get<std::string>("<xmlattr>.BY");
          s.decided_at = node.get<std::string>("<xmlattr>.AT");
          decided[s.id] = node.get<std::uint64_t>("<xmlattr>.DECIDED");
        }
        for (const auto& [child, c] : node) {
          if (child == "LEXICON") {
            LexiconEntry e;
            e.surface = c.get<std::string>("<xmlattr>.SURFACE");
            auto cls = parse_pos_class(c.get<std::string>("<xmlattr>.CLS"));
            auto origin = parse_lexicon_origin(c.get<std::string>("<xmlattr>.ORIGIN"));
            auto cas = parse_component(Feature::Cas, c.get<std::string>("<xmlattr>.CAS"));
            auto num = parse_component(Feature::Num, c.get<std::string>("<xmlattr>.NUM"));
            auto gen = parse_component(Feature::Gen, c.get<std::string>("<xmlattr>.GEN"));
            if (!cls || !origin || !cas || !num || !gen) throw Error(ErrorCode::XmlError, "bad LEXICON");
            e.cls = *cls;
            e.origin = *origin;
            e.features = FeatureBundle{*cas, *num, *gen};
            if (auto lemma = c.get_optional<std::string>("<xmlattr>.LEMMA")) e.lemma = *lemma;
            s.payload = e;
          } else if (child == "FACT") {
            OntologyFact f;
            auto kind = parse_fact_kind(c.get<std::string>("<xmlattr>.KIND"));
            if (!kind) throw Error(ErrorCode::XmlError, "bad FACT KIND");
            f.kind = *kind;
            f.subject = c.get<std::string>("<xmlattr>.SUBJECT");
            f.object = c.get<std::string>("<xmlattr>.OBJECT");
            f.note = c.get<std::string>("<xmlattr>.NOTE", "");
            if (auto mn = c.get_optional<double>("<xmlattr>.MIN")) {
              f.payload = RangePayload{*mn, c.get<double>("<xmlattr>.MAX"), c.get<std::string>("<xmlattr>.UNIT"),
                                       c.get<std::size_t>("<xmlattr>.N")};
            }
            s.payload = f;
          } else if (child == "VALUEGROUP") {
            ValueGroup g;
            g.relation = c.get<std::string>("<xmlattr>.RELATION");
            g.subject = c.get<std::string>("<xmlattr>.SUBJECT");
            for (const auto& [vn, v] : c) {
              if (vn == "V") g.values.push_back(v.data());
            }
            s.payload = g;
          } else if (child == "EVIDENCE") {
            s.evidence.push_back(
                EvidenceRef{c.get<std::string>("<xmlattr>.DOC"), c.get<std::size_t>("<xmlattr>.SEG")});
          }
        }
        suggestions[s.id] = std::move(s);
      }
    }
  } catch (const pt::ptree_error& e) {
    throw Error(ErrorCode::XmlError, e.what());
  }

  {
    std::lock_guard lock(mutex_);
    runs_ = std::move(runs);
    suggestions_ = std::move(suggestions);
    decided_seq_ = std::move(decided);
    seq_ = seq;
    by_key_.clear();
    next_id_ = 1;
    for (const auto& [id, s] : suggestions_) {
      by_key_[payload_key(s.payload)] = id;
      next_id_ = std::max(next_id_, id + 1);
    }
  }
  compact();
}

}  // namespace bootlex
