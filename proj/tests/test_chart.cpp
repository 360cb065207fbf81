#include <doctest.h>

#include <algorithm>
#include <random>

#include "bootlex/chart.hpp"
#include "bootlex/xml_io.hpp"
#include "support.hpp"

using namespace bootlex;

namespace {

std::string golden(const std::string& name) {
  return support::slurp(std::filesystem::path(BOOTLEX_GOLDEN_DIR) / name);
}

LexiconView example_lexicon() {
  return LexiconView({support::noun("Inhalt", num::SG, gen::MAS), support::noun("Flachschnitt", num::SG, gen::MAS),
                      support::noun("Gewebe", num::SG, gen::NTR)});
}

std::vector<std::string> renderings(const ParseResult& r) {
  std::vector<std::string> out;
  for (const auto& t : r.trees) out.push_back(render_tree(t));
  return out;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

void no_empty_features(const ParseNode& n) {
  CHECK(n.features.cas != 0);
  CHECK(n.features.num != 0);
  CHECK(n.features.gen != 0);
  for (const auto& c : n.children) no_empty_features(c);
}

}  // namespace

TEST_CASE("noun recognised by heuristics inside a complex NP") {
  auto g = support::grammar("NP");
  auto toks = support::tag("Blutanhaftungen an der Gekroesewurzel", example_lexicon());
  auto r = parse(toks, g);
  REQUIRE(r.kind == ParseKind::Full);
  REQUIRE(r.trees.size() == 1);
  CHECK(render_tree(r.trees[0]) == golden("np_heuristic_nouns.xml"));
}

TEST_CASE("unknown token hypothesised as adjective") {
  auto g = support::grammar("NP");
  auto toks = support::tag("kein ungehoeriger Inhalt in der Mundhoehle", example_lexicon());
  REQUIRE(toks[1].is_unknown());
  auto r = parse(toks, g);
  REQUIRE(r.kind == ParseKind::Full);
  auto all = renderings(r);
  CHECK(contains(all, golden("np_assumed_adjective.xml")));
  for (const auto& t : r.trees) {
    auto as = t.assumptions();
    REQUIRE(as.size() == 1);
    CHECK(as[0] == Assumption{1, PosClass::ADJ});
  }

  SUBCASE("features of the unknown noun follow from the determiner") {
    const auto& tree = *std::find_if(r.trees.begin(), r.trees.end(),
                                     [](const ParseNode& t) { return render_tree(t) == golden("np_assumed_adjective.xml"); });
    auto assigned = derive_features(tree, toks);
    std::map<Feature, std::uint8_t> mund;
    for (const auto& a : assigned) {
      if (a.token == 5) mund[a.feature] = a.mask;
    }
    CHECK(mund[Feature::Gen] == gen::FEM);
    CHECK(mund[Feature::Num] == num::SG);
    CHECK(mund[Feature::Cas] == cas::DAT);
    // the determiner itself was fully specified
    CHECK(std::none_of(assigned.begin(), assigned.end(), [](const FeatureAssignment& a) { return a.token == 4; }));
  }
}

TEST_CASE("accusative reading of a two-way preposition") {
  auto g = support::grammar("PP");
  auto toks = support::tag("auf Flachschnitt in das Gewebe", example_lexicon());
  auto r = parse(toks, g);
  REQUIRE(r.kind == ParseKind::Full);
  CHECK(contains(renderings(r), golden("pp_accusative.xml")));

  // inside a whole segment the same subtree is found
  auto seg = parse(support::tag("Einblutungen auf Flachschnitt in das Gewebe.", example_lexicon()), support::grammar());
  REQUIRE(seg.kind == ParseKind::Full);
  std::function<bool(const ParseNode&)> has = [&](const ParseNode& n) {
    if (render_tree(n) == golden("pp_accusative.xml")) return true;
    return std::any_of(n.children.begin(), n.children.end(), has);
  };
  CHECK(std::any_of(seg.trees.begin(), seg.trees.end(), has));
}

TEST_CASE("single noun is a FULL NP1") {
  auto r = parse(support::tag("Leber"), support::grammar("NP"));
  REQUIRE(r.kind == ParseKind::Full);
  REQUIRE(r.trees.size() == 1);
  CHECK(r.trees[0].rule == std::optional<std::string>("NP1"));
}

TEST_CASE("partial cover without segment rules") {
  auto g = support::grammar();
  g.disable_group("telegraphic");
  auto toks = support::tag("Mund geoeffnet.");
  auto r = parse(toks, g);
  REQUIRE(r.kind == ParseKind::Partial);
  // the longest piece from the left is the lone noun, then "geoeffnet ." as a bare NP segment
  REQUIRE(r.trees.size() == 2);
  CHECK(r.trees[0].category == "NP");
  CHECK(r.trees[0].span == Span{0, 1});
  CHECK(r.trees[1].span == Span{1, 3});
  CHECK(r.trees[1].rule == std::optional<std::string>("S1"));

  // with the telegraphic rules the unknown word is taken as a value
  auto full = parse(toks, support::grammar());
  REQUIRE(full.kind == ParseKind::Full);
  for (const auto& t : full.trees) CHECK(t.assumptions().size() == 1);
}

TEST_CASE("randomised partial cover selection") {
  std::mt19937 rng(99);
  for (int round = 0; round < 2000; ++round) {
    std::size_t n = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
    std::vector<CoverEdge> edges;
    for (std::size_t i = 0; i < n; ++i) edges.push_back(CoverEdge{i, i + 1, 0, CoverEdge::kLexicalRank});
    int extra = std::uniform_int_distribution<int>(0, 30)(rng);
    for (int k = 0; k < extra; ++k) {
      std::size_t b = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
      std::size_t e = std::uniform_int_distribution<std::size_t>(b + 1, n)(rng);
      edges.push_back(CoverEdge{b, e, std::uniform_int_distribution<std::size_t>(0, 2)(rng),
                                std::uniform_int_distribution<std::size_t>(0, 40)(rng)});
    }
    std::shuffle(edges.begin(), edges.end(), rng);
    auto picked = select_partial_cover(edges, n);
    std::size_t pos = 0;
    for (auto id : picked) {
      const auto& e = edges[id];
      REQUIRE(e.begin == pos);
      // no longer edge starts here; among equally long ones this is the cheapest
      for (const auto& o : edges) {
        if (o.begin != pos) continue;
        CHECK(o.end <= e.end);
        if (o.end == e.end) {
          CHECK(std::tie(e.assumptions, e.rule_index) <= std::tie(o.assumptions, o.rule_index));
        }
      }
      pos = e.end;
    }
    CHECK(pos == n);
  }
}

TEST_CASE("derived features keep ambiguity") {
  auto g = support::grammar("NP");
  auto toks = support::tag("die Kapsel");
  auto r = parse(toks, g);
  REQUIRE(r.kind == ParseKind::Full);
  // oracle: the paradigm cells of the determiner
  std::uint8_t expect_num = 0, expect_cas = 0;
  for (const auto& cell : lookup_closed_class(support::closed(), "die")) {
    expect_num |= cell.features.num;
    expect_cas |= cell.features.cas;
  }
  std::uint8_t got_num = 0;
  for (const auto& t : r.trees) {
    for (const auto& a : derive_features(t, toks)) {
      CHECK(a.token == 1);
      if (a.feature == Feature::Cas) CHECK(a.mask == expect_cas);
      if (a.feature == Feature::Num) got_num |= a.mask;
    }
  }
  CHECK(got_num == expect_num);
  CHECK(expect_cas == (cas::NOM | cas::AKK));
}

TEST_CASE("fully specified leaves produce no assignments") {
  LexiconView lex({support::noun("Kapsel", num::SG, gen::FEM)});
  auto toks = support::tag("Kapsel", lex);
  toks[0].readings[0].features.cas = cas::NOM;
  auto r = parse(toks, support::grammar("NP"));
  REQUIRE(r.kind == ParseKind::Full);
  CHECK(derive_features(r.trees[0], toks).empty());
}

TEST_CASE("edge budget truncates") {
  auto toks = support::tag("Akute und chronische Erweiterung des Herzens.");
  ParseOptions tight;
  tight.max_edges = 5;
  auto r = parse(toks, support::grammar(), tight);
  CHECK(r.truncated);
  CHECK(r.kind == ParseKind::Partial);
  std::size_t pos = 0;
  for (const auto& t : r.trees) {
    CHECK(t.span.begin == pos);
    pos = t.span.end;
  }
  CHECK(pos == toks.size());
  CHECK_FALSE(parse(toks, support::grammar()).truncated);
}

TEST_CASE("no tree carries an empty feature set") {
  for (const char* text : {"Leber und Niere ohne Besonderheiten.", "Brustkorb nicht sehr breit.",
                           "Akute und chronische Erweiterung des Herzens.", "Harte Hirnhaut grauweiss."}) {
    auto r = parse(support::tag(text), support::grammar());
    CHECK(r.kind == ParseKind::Full);
    for (const auto& t : r.trees) no_empty_features(t);
  }
}
