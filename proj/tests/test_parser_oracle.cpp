#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "bootlex/chart.hpp"
#include "oracles/brute_force_parser.hpp"
#include "oracles/segment_gen.hpp"
#include "support.hpp"

using namespace bootlex;
using namespace oracle::segments;

TEST_CASE("chart parser agrees with exhaustive enumeration") {
  auto g = support::grammar();
  std::mt19937 rng(424242);
  int compared = 0, generated = 0, with_full = 0, with_assumption = 0, ambiguous = 0;
  while (compared < 600) {
    std::vector<std::string> words;
    if (compared % 2 == 0) {
      Symbol start;
      start.categories = {"SEG"};
      if (!expand(g, start, 0, rng, words) || words.empty() || words.size() > 6) continue;
      ++generated;
    } else {
      words = random_words(rng);
    }
    auto toks = tag_words(words);
    if (toks.size() > 6) continue;
    ++compared;

    auto result = parse(toks, g);
    auto expected = oracle::Enumerator(toks, g).full_parses();
    std::set<std::string> got;
    if (result.kind == ParseKind::Full) {
      for (const auto& t : result.trees) got.insert(bracketed(t));
      CHECK(got.size() == result.trees.size());
      ++with_full;
      if (!result.trees.front().assumptions().empty()) ++with_assumption;
      if (result.trees.size() > 1) ++ambiguous;
    } else {
      std::size_t pos = 0;
      for (const auto& t : result.trees) {
        CHECK(t.span.begin == pos);
        pos = t.span.end;
      }
      CHECK(pos == toks.size());
    }
    INFO("segment: " << [&] {
      std::string s;
      for (const auto& w : words) s += w + " ";
      return s;
    }());
    CHECK(got == expected);
  }
  MESSAGE("compared " << compared << " segments, " << generated << " generated, " << with_full
                      << " with complete parses, " << with_assumption << " needing assumptions, " << ambiguous
                      << " ambiguous");
  CHECK(with_full >= 200);
  CHECK(with_assumption >= 20);
  CHECK(ambiguous >= 10);
}

TEST_CASE("complete parses use the fewest assumptions") {
  auto g = support::grammar();
  // "grmbl" could be N, ADJ or V; the known noun reading of "Leber" needs none
  auto toks = tag_words({"Leber", "grmbl", "."});
  auto r = parse(toks, g);
  REQUIRE(r.kind == ParseKind::Full);
  for (const auto& t : r.trees) CHECK(t.assumptions().size() == 1);
  toks = tag_words({"Leber", "glatt", "."});
  r = parse(toks, g);
  REQUIRE(r.kind == ParseKind::Full);
  for (const auto& t : r.trees) CHECK(t.assumptions().empty());
}
