#include "bootlex/service.hpp"

#include <atomic>
#include <charconv>
#include <map>
#include <shared_mutex>

#include <httplib.h>
#include <json.hpp>

#include "bootlex/error.hpp"
#include "bootlex/xml_io.hpp"
#include "json_codec.hpp"

namespace bootlex {

using json = nlohmann::json;

namespace {

struct Snapshot {
  RunRecord record;
  CorpusResult result;
  std::map<std::string, std::size_t, std::less<>> doc_index;
};

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message) {
  send_json(res, {{"error", std::string(code)}, {"message", message}}, status);
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownId:
    case ErrorCode::UnknownRun:
    case ErrorCode::UnknownSeed:
    case ErrorCode::UnknownEntity:
      return 404;
    case ErrorCode::AlreadyDecided:
      return 409;
    default:
      return 500;
  }
}

std::optional<std::uint64_t> to_uint(std::string_view s) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

json run_json(const RunRecord& r) {
  return {{"id", r.id},
          {"corpus_hash", r.corpus_hash},
          {"config_hash", r.config_hash},
          {"open", r.open},
          {"coverage", coverage_json(r.coverage)},
          {"suggestions_produced", r.suggestions_produced}};
}

}  // namespace

struct Service::Impl {
  std::vector<RawCorpusFile> corpus;
  Resources resources;
  KnowledgeStore& store;
  std::optional<std::filesystem::path> artifact_dir;
  Service* owner = nullptr;

  mutable std::shared_mutex mutex;
  std::shared_ptr<const Snapshot> snapshot;
  std::atomic<bool> running{false};
  httplib::Server server;

  Impl(std::vector<RawCorpusFile> c, Resources r, KnowledgeStore& s, std::optional<std::filesystem::path> dir)
      : corpus(std::move(c)), resources(std::move(r)), store(s), artifact_dir(std::move(dir)) {}

  std::shared_ptr<const Snapshot> current() const {
    std::shared_lock lock(mutex);
    return snapshot;
  }

  json evidence(const Snapshot& snap, const EvidenceRef& e) const {
    json j{{"doc", e.doc}, {"seg", e.segment}, {"text", nullptr}};
    auto it = snap.doc_index.find(e.doc);
    if (it == snap.doc_index.end()) return j;
    const auto& doc = snap.result.documents[it->second].doc;
    if (e.segment == 0 || e.segment > doc.segments.size()) return j;
    const auto& seg = doc.segments[e.segment - 1];
    j["text"] = doc.segment_text(seg);
    j["begin"] = seg.span().begin;
    j["end"] = seg.span().end;
    return j;
  }

  json evidence_list(const Snapshot& snap, const std::vector<EvidenceRef>& ev) const {
    json a = json::array();
    for (const auto& e : ev) a.push_back(evidence(snap, e));
    return a;
  }

  json suggestion(const Snapshot& snap, const Suggestion& s) const {
    return {{"id", s.id},
            {"kind", std::string(to_string(s.kind()))},
            {"status", std::string(to_string(s.status))},
            {"created_run", s.created_run},
            {"decided_by", s.decided_by},
            {"decided_at", s.decided_at},
            {"payload", payload_json(s.payload)},
            {"evidence", evidence_list(snap, s.evidence)}};
  }

  void routes();
};

Service::Service(std::vector<RawCorpusFile> corpus, Resources resources, KnowledgeStore& store,
                 std::optional<std::filesystem::path> artifact_dir)
    : impl_(std::make_unique<Impl>(std::move(corpus), std::move(resources), store, std::move(artifact_dir))) {
  impl_->owner = this;
  impl_->routes();
}

Service::~Service() { stop(); }

std::optional<RunOutcome> Service::rerun() {
  bool expected = false;
  if (!impl_->running.compare_exchange_strong(expected, true)) return std::nullopt;
  struct Release {
    std::atomic<bool>& flag;
    ~Release() { flag = false; }
  } release{impl_->running};

  auto outcome = bootstrap_run(impl_->corpus, impl_->resources, impl_->store);
  if (impl_->artifact_dir) {
    write_artifacts(outcome.result, impl_->store, *impl_->artifact_dir, impl_->resources.inventory_min_count,
                    impl_->resources.cluster_report_cap);
  }
  auto snap = std::make_shared<Snapshot>();
  snap->record = outcome.record;
  snap->result = outcome.result;
  for (std::size_t i = 0; i < snap->result.documents.size(); ++i) {
    snap->doc_index.emplace(snap->result.documents[i].doc.id(), i);
  }
  std::unique_lock lock(impl_->mutex);
  impl_->snapshot = std::move(snap);
  return outcome;
}

bool Service::running() const { return impl_->running; }

int Service::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

void Service::listen_after_bind() { impl_->server.listen_after_bind(); }

void Service::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void Service::Impl::routes() {
  server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const Error& e) {
      send_error(res, status_for(e.code()), to_string(e.code()), e.what());
    } catch (const json::exception& e) {
      send_error(res, 400, "BadRequest", e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "Internal", e.what());
    }
  });

  auto no_run = [](httplib::Response& res) { send_error(res, 503, "NoRun", "no completed run yet"); };

  server.Get("/api/suggestions", [this, no_run](const httplib::Request& req, httplib::Response& res) {
    auto snap = current();
    if (!snap) return no_run(res);
    SuggestionFilter filter;
    if (req.has_param("kind")) {
      filter.kind = parse_suggestion_kind(req.get_param_value("kind"));
      if (!filter.kind) return send_error(res, 400, "BadRequest", "unknown kind");
    }
    if (req.has_param("status")) {
      filter.status = parse_status(req.get_param_value("status"));
      if (!filter.status) return send_error(res, 400, "BadRequest", "unknown status");
    }
    filter.entity = req.get_param_value("entity");
    json list = json::array();
    for (const auto& s : store.suggestions(filter)) list.push_back(suggestion(*snap, s));
    send_json(res, {{"suggestions", list}});
  });

  server.Get(R"(/api/suggestions/([^/]+))", [this, no_run](const httplib::Request& req, httplib::Response& res) {
    auto snap = current();
    if (!snap) return no_run(res);
    auto id = to_uint(req.matches[1].str());
    if (!id) return send_error(res, 400, "BadRequest", "suggestion id must be a number");
    auto s = store.get(*id);
    if (!s) return send_error(res, 404, "UnknownId", "no suggestion " + req.matches[1].str());
    send_json(res, suggestion(*snap, *s));
  });

  server.Post(R"(/api/suggestions/([^/]+)/decision)",
              [this, no_run](const httplib::Request& req, httplib::Response& res) {
                auto snap = current();
                if (!snap) return no_run(res);
                auto id = to_uint(req.matches[1].str());
                if (!id) return send_error(res, 400, "BadRequest", "suggestion id must be a number");
                json body = json::parse(req.body, nullptr, false);
                if (body.is_discarded() || !body.is_object() || !body.contains("verdict") ||
                    !body["verdict"].is_string()) {
                  return send_error(res, 400, "BadRequest", "expected {\"verdict\": \"accept\"|\"reject\"}");
                }
                std::string v = body["verdict"];
                if (v != "accept" && v != "reject") return send_error(res, 400, "BadRequest", "bad verdict " + v);
                std::string who = body.value("who", std::string("anonymous"));
                auto s = store.decide(*id, v == "accept" ? Verdict::Accept : Verdict::Reject, who);
                send_json(res, suggestion(*snap, s));
              });

  server.Get("/api/relations", [this, no_run](const httplib::Request&, httplib::Response& res) {
    auto snap = current();
    if (!snap) return no_run(res);
    json rows = json::array();
    for (const auto& row : snap->result.table.rows()) {
      json values = json::array();
      for (std::size_t k = 0; k < row.values.size(); ++k) {
        values.push_back({{"value", row.values[k].value},
                          {"count", row.values[k].count},
                          {"evidence", evidence_list(*snap, row.value_evidence[k])}});
      }
      rows.push_back({{"entity", row.entity}, {"values", values}});
    }
    send_json(res, {{"run", snap->record.id}, {"rows", rows}});
  });

  server.Get("/api/clusters", [this, no_run](const httplib::Request& req, httplib::Response& res) {
    auto snap = current();
    if (!snap) return no_run(res);
    auto cluster = [](const Cluster& c) {
      return json{{"seed", c.seed}, {"entities", c.entity_set}, {"values", c.value_set}, {"rounds", c.rounds}};
    };
    if (req.has_param("seed")) {
      auto c = zigzag_closure(req.get_param_value("seed"), snap->result.matrix);
      return send_json(res, cluster(c));
    }
    json list = json::array();
    const auto& all = snap->result.clusters;
    for (std::size_t i = 0; i < all.size() && i < resources.cluster_report_cap; ++i) list.push_back(cluster(all[i]));
    send_json(res, {{"clusters", list}, {"total", all.size()}});
  });

  server.Get("/api/inventory", [this, no_run](const httplib::Request& req, httplib::Response& res) {
    auto snap = current();
    if (!snap) return no_run(res);
    if (!req.has_param("entity")) return send_error(res, 400, "BadRequest", "entity parameter required");
    std::string entity = req.get_param_value("entity");
    int min_count = resources.inventory_min_count;
    if (req.has_param("min_count")) {
      auto m = to_uint(req.get_param_value("min_count"));
      if (!m) return send_error(res, 400, "BadRequest", "min_count must be a number");
      min_count = static_cast<int>(*m);
    }
    auto inventory = property_inventory(snap->result.matrix, entity, min_count);
    auto cls = classify_concept(entity, inventory, resources.dimensions);
    json values = json::array();
    for (const auto& [v, n] : inventory) values.push_back({{"value", v}, {"count", n}});
    send_json(res, {{"entity", entity},
                    {"values", values},
                    {"dimensions", cls.values_by_dimension},
                    {"generic", cls.generic_values},
                    {"unknown", cls.unknown_values}});
  });

  server.Get("/api/ontology", [this, no_run](const httplib::Request& req, httplib::Response& res) {
    auto snap = current();
    if (!snap) return no_run(res);
    SuggestionFilter filter;
    filter.kind = SuggestionKind::Ontology;
    if (req.has_param("status")) {
      filter.status = parse_status(req.get_param_value("status"));
      if (!filter.status) return send_error(res, 400, "BadRequest", "unknown status");
    }
    json list = json::array();
    for (const auto& s : store.suggestions(filter)) list.push_back(suggestion(*snap, s));
    send_json(res, {{"facts", list}});
  });

  server.Get("/api/coverage", [this, no_run](const httplib::Request&, httplib::Response& res) {
    auto snap = current();
    if (!snap) return no_run(res);
    send_json(res, {{"run", snap->record.id},
                    {"coverage", coverage_json(snap->result.coverage)},
                    {"xxx_tokens", snap->result.xxx_tokens},
                    {"full_parses", snap->result.full_parses},
                    {"relations", snap->result.relations.size()}});
  });

  server.Get("/api/runs", [this](const httplib::Request&, httplib::Response& res) {
    json list = json::array();
    for (const auto& r : store.runs()) list.push_back(run_json(r));
    send_json(res, {{"runs", list}});
  });

  server.Post("/api/runs", [this](const httplib::Request&, httplib::Response& res) {
    auto outcome = owner->rerun();
    if (!outcome) return send_error(res, 503, "Busy", "a run is already in progress");
    json j = run_json(outcome->record);
    j["new_suggestions"] = outcome->new_suggestions.size();
    j["xxx_tokens"] = outcome->result.xxx_tokens;
    j["full_parses"] = outcome->result.full_parses;
    send_json(res, j);
  });

  server.Get("/api/evidence", [this, no_run](const httplib::Request& req, httplib::Response& res) {
    auto snap = current();
    if (!snap) return no_run(res);
    auto seg = to_uint(req.get_param_value("seg"));
    if (!req.has_param("doc") || !seg) return send_error(res, 400, "BadRequest", "doc and seg parameters required");
    std::string doc_id = req.get_param_value("doc");
    auto it = snap->doc_index.find(doc_id);
    if (it == snap->doc_index.end()) return send_error(res, 404, "UnknownId", "no document " + doc_id);
    const auto& doc = snap->result.documents[it->second].doc;
    if (*seg == 0 || *seg > doc.segments.size()) {
      return send_error(res, 404, "UnknownId", "no segment " + std::to_string(*seg) + " in " + doc_id);
    }
    json j = evidence(*snap, EvidenceRef{doc_id, *seg});
    j["before"] = *seg > 1 ? json(doc.segment_text(doc.segments[*seg - 2])) : json(nullptr);
    j["after"] = *seg < doc.segments.size() ? json(doc.segment_text(doc.segments[*seg])) : json(nullptr);
    send_json(res, j);
  });

  server.Get("/api/export/store.xml", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(store.export_xml(), "application/xml");
  });

  server.Get("/api/export/relations.xml", [this, no_run](const httplib::Request&, httplib::Response& res) {
    auto snap = current();
    if (!snap) return no_run(res);
    res.set_content(relations_xml(snap->result.table), "application/xml");
  });

  server.Get("/api/export/ontology.xml", [this, no_run](const httplib::Request&, httplib::Response& res) {
    auto snap = current();
    if (!snap) return no_run(res);
    res.set_content(ontology_xml(snap->result.facts), "application/xml");
  });

  server.Get("/api/export/document.xml", [this, no_run](const httplib::Request& req, httplib::Response& res) {
    auto snap = current();
    if (!snap) return no_run(res);
    std::string doc_id = req.get_param_value("doc");
    auto it = snap->doc_index.find(doc_id);
    if (it == snap->doc_index.end()) return send_error(res, 404, "UnknownId", "no document " + doc_id);
    res.set_content(document_xml(snap->result.documents[it->second]), "application/xml");
  });
}

}  // namespace bootlex
