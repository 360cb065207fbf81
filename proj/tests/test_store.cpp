#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "bootlex/error.hpp"
#include "bootlex/store.hpp"
#include "support.hpp"

using namespace bootlex;
namespace fs = std::filesystem;

namespace {

struct TempFile {
  fs::path path;
  explicit TempFile(const std::string& name) : path(fs::temp_directory_path() / name) { fs::remove(path); }
  ~TempFile() { fs::remove(path); }
};

LexiconEntry lex(const std::string& s, PosClass c, LexiconOrigin o = LexiconOrigin::ParserAs) {
  return LexiconEntry{s, c, FeatureBundle{}, std::nullopt, o};
}

SuggestionItem item(Payload p, std::string doc = "a.txt", std::size_t seg = 1) {
  return SuggestionItem{std::move(p), {{std::move(doc), seg}}};
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::NoData;
}

}  // namespace

TEST_CASE("deduplication merges evidence") {
  KnowledgeStore store;
  auto run = store.open_run("c", "g");
  auto ids = store.record_suggestions(run.id, {item(lex("ungehoeriger", PosClass::ADJ), "a.txt", 1),
                                               item(lex("ungehoeriger", PosClass::ADJ), "b.txt", 3)});
  REQUIRE(ids.size() == 1);
  auto s = store.get(ids[0]);
  REQUIRE(s);
  CHECK(s->evidence.size() == 2);
  CHECK(s->created_run == run.id);
  CHECK(s->kind() == SuggestionKind::Lexicon);
  // same payload in a later call adds evidence only
  CHECK(store.record_suggestions(run.id, {item(lex("ungehoeriger", PosClass::ADJ), "c.txt", 2)}).empty());
  CHECK(store.get(ids[0])->evidence.size() == 3);
}

TEST_CASE("rejected payloads are not suggested again") {
  KnowledgeStore store;
  auto r1 = store.open_run("c", "g");
  auto ids = store.record_suggestions(r1.id, {item(lex("grmbl", PosClass::N))});
  store.decide(ids[0], Verdict::Reject, "tester");
  store.close_run(r1.id, {});
  auto r2 = store.open_run("c", "g");
  CHECK(store.record_suggestions(r2.id, {item(lex("grmbl", PosClass::N))}).empty());
  CHECK(store.suggestions().size() == 1);
  CHECK(store.get(ids[0])->status == Status::Rejected);
}

TEST_CASE("dedup count equals distinct payloads") {
  std::mt19937 rng(1);
  KnowledgeStore store;
  auto run = store.open_run("c", "g");
  std::set<std::string> distinct;
  std::vector<SuggestionItem> items;
  for (int i = 0; i < 1000; ++i) {
    Payload p;
    switch (rng() % 3) {
      case 0: p = lex("w" + std::to_string(rng() % 40), static_cast<PosClass>(rng() % 3)); break;
      case 1: p = OntologyFact{FactKind::PartOf, "X" + std::to_string(rng() % 20), "Y" + std::to_string(rng() % 5)}; break;
      default: p = ValueGroup{"DIMENSION_UNKNOWN", "", {"v" + std::to_string(rng() % 30)}}; break;
    }
    distinct.insert(payload_key(p));
    items.push_back(item(p, "d", static_cast<std::size_t>(i)));
  }
  auto ids = store.record_suggestions(run.id, items);
  CHECK(ids.size() == distinct.size());
  CHECK(store.suggestions().size() == distinct.size());
}

TEST_CASE("decision lifecycle") {
  KnowledgeStore store;
  auto run = store.open_run("c", "g");
  auto ids = store.record_suggestions(run.id, {item(lex("ungehoeriger", PosClass::ADJ))});
  auto decided = store.decide(ids[0], Verdict::Accept, "expert");
  CHECK(decided.status == Status::Accepted);
  CHECK(decided.decided_by == "expert");
  CHECK_FALSE(decided.decided_at.empty());
  CHECK(code_of([&] { store.decide(ids[0], Verdict::Reject, "expert"); }) == ErrorCode::AlreadyDecided);
  CHECK(code_of([&] { store.decide(999, Verdict::Accept, "expert"); }) == ErrorCode::UnknownId);
  store.close_run(run.id, {});
  CHECK(code_of([&] { store.record_suggestions(run.id, {item(lex("x", PosClass::N))}); }) == ErrorCode::RunClosed);
}

TEST_CASE("accepted lexicon entries reach the tagger") {
  KnowledgeStore store;
  auto run = store.open_run("c", "g");
  auto ids = store.record_suggestions(run.id, {item(lex("ungehoeriger", PosClass::ADJ))});
  auto before = store.lexicon_view();
  store.decide(ids[0], Verdict::Accept, "expert");
  auto after = store.lexicon_view();
  CHECK(before.size() == 0);
  REQUIRE(after.size() == 1);
  auto toks = support::tag("kein ungehoeriger Inhalt", after);
  CHECK(toks[1].readings.size() == 1);
  CHECK(toks[1].readings[0].cls == PosClass::ADJ);
  CHECK(toks[1].readings[0].src == ReadingSource::Lexicon);
}

TEST_CASE("ontology suggestions join the accepted ontology") {
  KnowledgeStore store;
  auto run = store.open_run("c", "g");
  auto ids = store.record_suggestions(run.id, {item(OntologyFact{FactKind::IsA, "Leber", "Organ"}),
                                               item(OntologyFact{FactKind::IsA, "Flachschnitt", "Organ"})});
  store.decide(ids[0], Verdict::Accept, "expert");
  store.decide(ids[1], Verdict::Reject, "expert");
  auto onto = store.accepted_ontology();
  REQUIRE(onto.size() == 1);
  CHECK(onto[0].subject == "Leber");
  CHECK(onto[0].status == Status::Accepted);
  CHECK(store.suggested_ontology().empty());
}

TEST_CASE("lexicon view as of a run") {
  KnowledgeStore store;
  CHECK(store.lexicon_view().size() == 0);
  auto r1 = store.open_run("c", "g");
  auto ids = store.record_suggestions(r1.id, {item(lex("a", PosClass::N)), item(lex("b", PosClass::ADJ))});
  store.decide(ids[0], Verdict::Accept, "x");
  store.close_run(r1.id, {});
  auto r2 = store.open_run("c", "g");
  store.decide(ids[1], Verdict::Accept, "x");
  CHECK(store.lexicon_view(r1.id).size() == 0);
  CHECK(store.lexicon_view(r2.id).size() == 1);
  CHECK(store.lexicon_view().size() == 2);
  CHECK(code_of([&] { store.lexicon_view(77); }) == ErrorCode::UnknownRun);
}

TEST_CASE("view equals a replay of the decision log") {
  std::mt19937 rng(17);
  for (int round = 0; round < 30; ++round) {
    KnowledgeStore store;
    std::map<SuggestionId, LexiconEntry> payloads;
    std::set<LexiconEntry> accepted;
    std::vector<std::pair<RunId, std::set<LexiconEntry>>> at_open;
    for (int r = 0; r < 4; ++r) {
      auto run = store.open_run("c", "g");
      at_open.emplace_back(run.id, accepted);
      std::vector<SuggestionItem> items;
      std::vector<LexiconEntry> entries;
      for (int i = 0; i < 10; ++i) {
        entries.push_back(lex("w" + std::to_string(rng() % 25), static_cast<PosClass>(rng() % 3)));
        items.push_back(item(entries.back()));
      }
      for (auto id : store.record_suggestions(run.id, items)) {
        payloads[id] = std::get<LexiconEntry>(store.get(id)->payload);
      }
      for (auto& [id, e] : payloads) {
        if (store.get(id)->status != Status::Suggested || rng() % 3) continue;
        bool yes = rng() % 2;
        store.decide(id, yes ? Verdict::Accept : Verdict::Reject, "x");
        if (yes) accepted.insert(e);
      }
      store.close_run(run.id, {});
    }
    auto view_set = [](const LexiconView& v) {
      auto es = v.entries();
      return std::set<LexiconEntry>(es.begin(), es.end());
    };
    CHECK(view_set(store.lexicon_view()) == accepted);
    for (const auto& [id, expected] : at_open) CHECK(view_set(store.lexicon_view(id)) == expected);
  }
}

TEST_CASE("persistence, replay and compaction") {
  TempFile f("bootlex_store_test.store");
  SuggestionId kept = 0;
  {
    KnowledgeStore store(f.path);
    auto run = store.open_run("c", "g");
    auto ids = store.record_suggestions(run.id, {item(lex("a", PosClass::N)), item(lex("b", PosClass::ADJ)),
                                                 item(OntologyFact{FactKind::PartOf, "Haut", "Ruecken"})});
    store.record_suggestions(run.id, {item(lex("a", PosClass::N), "z.txt", 9)});
    store.decide(ids[0], Verdict::Accept, "x");
    store.decide(ids[2], Verdict::Reject, "y");
    CoverageReport cov;
    cov.segments = 4;
    cov.full = 0.75;
    cov.empty = false;
    store.close_run(run.id, cov);
    kept = ids[0];
  }
  std::string first_line;
  {
    std::ifstream in(f.path);
    std::getline(in, first_line);
  }
  CHECK(first_line == "bootlex-store 1");

  auto snapshot = [](const KnowledgeStore& s) {
    std::vector<std::string> out;
    for (const auto& x : s.suggestions()) {
      out.push_back(payload_key(x.payload) + "|" + std::string(to_string(x.status)) + "|" + x.decided_by + "|" +
                    std::to_string(x.evidence.size()));
    }
    for (const auto& r : s.runs()) out.push_back(std::to_string(r.id) + (r.open ? "open" : "closed") +
                                                 std::to_string(r.coverage.full));
    return out;
  };
  KnowledgeStore reopened(f.path);
  auto before = snapshot(reopened);
  CHECK(reopened.get(kept)->status == Status::Accepted);
  CHECK(reopened.get(kept)->evidence.size() == 2);
  CHECK(reopened.lexicon_view().size() == 1);
  REQUIRE(reopened.runs().size() == 1);
  CHECK(reopened.runs()[0].coverage.full == 0.75);

  auto size_before = fs::file_size(f.path);
  reopened.compact();
  CHECK(fs::file_size(f.path) <= size_before);
  CHECK(snapshot(reopened) == before);
  KnowledgeStore again(f.path);
  CHECK(snapshot(again) == before);
  CHECK(again.lexicon_view(1).size() == 0);
}

TEST_CASE("corrupt store files are rejected") {
  TempFile f("bootlex_store_corrupt.store");
  std::ofstream(f.path) << "bootlex-store 1\n{not json\n";
  CHECK(code_of([&] { KnowledgeStore s(f.path); }) == ErrorCode::StoreCorrupt);
  std::ofstream(f.path) << "something else\n";
  CHECK(code_of([&] { KnowledgeStore s(f.path); }) == ErrorCode::StoreCorrupt);
}

TEST_CASE("XML export and import round-trip") {
  KnowledgeStore store;
  auto run = store.open_run("c", "g");
  auto ids = store.record_suggestions(
      run.id, {item(lex("a<b", PosClass::N)), item(OntologyFact{FactKind::IsA, "Leber", "Organ"}),
               item(ValueGroup{"antonym", "Mund", {"geoeffnet", "geschlossen"}}),
               item(OntologyFact{FactKind::ValueRange, "Niere", "Gewicht", RangePayload{135, 270, "g", 3}})});
  store.decide(ids[1], Verdict::Accept, "x & y");
  store.close_run(run.id, {});
  auto xml = store.export_xml();
  KnowledgeStore copy;
  copy.import_xml(xml);
  CHECK(copy.export_xml() == xml);
  CHECK(copy.accepted_ontology().size() == 1);
  CHECK(copy.suggestions().size() == 4);
  CHECK_THROWS_AS(copy.import_xml("<nope"), Error);
}

TEST_CASE("filters") {
  KnowledgeStore store;
  auto run = store.open_run("c", "g");
  auto ids = store.record_suggestions(run.id, {item(lex("Leber", PosClass::N)), item(OntologyFact{FactKind::IsA, "Leber", "Organ"}),
                                               item(lex("Milz", PosClass::N))});
  store.decide(ids[2], Verdict::Accept, "x");
  CHECK(store.suggestions({SuggestionKind::Lexicon, std::nullopt, ""}).size() == 2);
  CHECK(store.suggestions({std::nullopt, Status::Accepted, ""}).size() == 1);
  CHECK(store.suggestions({std::nullopt, std::nullopt, "Leber"}).size() == 2);
}
