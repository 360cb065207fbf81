#include <doctest.h>

#include "bootlex/chart.hpp"
#include "bootlex/error.hpp"
#include "support.hpp"

using namespace bootlex;

namespace {

ErrorCode code_of(const std::string& text) {
  try {
    load_grammar(text, "g.txt");
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("grammar was accepted: " << text);
  return ErrorCode::NoData;
}

std::string message_of(const std::string& text) {
  try {
    load_grammar(text, "g.txt");
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("bundled grammar shape") {
  auto g = load_grammar_file(support::resource("grammar.txt"));
  CHECK(g.rules().size() >= 30);
  CHECK(g.rules().size() <= 50);
  CHECK(g.groups().size() == 3);
  CHECK(g.groups().contains("core"));
  CHECK(g.groups().contains("telegraphic"));
  CHECK(g.groups().contains("coordination"));
  for (const char* name : {"NP1", "NP2", "NP3", "NPC3", "PP1"}) CHECK(g.find(name) != nullptr);
  CHECK(g.start_categories() == std::set<std::string>{"SEG"});

  const auto* np2 = g.find("NP2");
  CHECK(np2->lhs == "NP");
  CHECK(np2->head == 1);
  CHECK(np2->type == "FULL");
  REQUIRE(np2->agreements.size() == 1);
  CHECK(np2->agreements[0].to_lhs);
  CHECK(np2->agreements[0].children == std::vector<std::size_t>{0, 1});
  CHECK(np2->rhs[0].categories == std::vector<std::string>{"DETD", "DETI"});
}

TEST_CASE("symbols, literals and rule restrictions") {
  auto g = load_grammar("bootlex-grammar 1\n%start S X\nA: X -> N\nB: S -> X@A \"und\"|\"oder\" N ; head=2\n");
  const auto* b = g.find("B");
  REQUIRE(b);
  CHECK(b->rhs[0].rules == std::vector<std::string>{"A"});
  CHECK(b->rhs[1].literals == std::vector<std::string>{"und", "oder"});
  CHECK(b->rhs[0].to_string() == "X@A");
  CHECK(b->rhs[1].to_string() == "\"und\"|\"oder\"");
  CHECK(g.start_categories() == std::set<std::string>{"S", "X"});
}

TEST_CASE("syntax errors carry the line number") {
  CHECK(code_of("NP1: NP -> N\n") == ErrorCode::GrammarSyntaxError);
  CHECK(code_of("bootlex-grammar 1\nNP1 NP -> N\n") == ErrorCode::GrammarSyntaxError);
  CHECK(message_of("bootlex-grammar 1\n# c\n\nNP1: NP -> N ; head=3\n").find("g.txt:4") != std::string::npos);
  CHECK(code_of("bootlex-grammar 1\nA: NP -> N ; agree cas(LHS,0,4)\n") == ErrorCode::GrammarSyntaxError);
  CHECK(code_of("bootlex-grammar 1\nA: NP -> N ; agree foo(0)\n") == ErrorCode::GrammarSyntaxError);
  CHECK(code_of("bootlex-grammar 1\nA: NP -> N ; require cas(0)=XYZ\n") == ErrorCode::GrammarSyntaxError);
  CHECK(code_of("bootlex-grammar 1\nA: NP -> N ; bogus\n") == ErrorCode::GrammarSyntaxError);
  CHECK(code_of("bootlex-grammar 1\nA: NP -> \n") == ErrorCode::GrammarSyntaxError);
  CHECK(code_of("bootlex-grammar 1\nA: NP -> N@Z\n") == ErrorCode::GrammarSyntaxError);
  CHECK(code_of("bootlex-grammar 1\nA: X -> Y\nB: Y -> X\n") == ErrorCode::GrammarSyntaxError);
}

TEST_CASE("duplicate rule names") {
  std::string text = "bootlex-grammar 1\nNP1: NP -> N\n[other]\nNP1: NP -> ADJ N ; head=1\n";
  CHECK(code_of(text) == ErrorCode::DuplicateRuleName);
  CHECK(message_of(text).find("NP1") != std::string::npos);
}

TEST_CASE("rule groups can be disabled") {
  auto g = support::grammar();
  auto total = g.enabled_rule_count();
  g.disable_group("coordination");
  CHECK(g.enabled_rule_count() == total - g.groups().at("coordination").size());
  CHECK_THROWS_AS(g.disable_group("nonexistent"), Error);

  // coordinated values need the coordination group
  auto toks = support::tag("Beckengeruest festgefuegt und unversehrt.");
  auto full = support::grammar();
  CHECK(parse(toks, full).kind == ParseKind::Full);
  CHECK(parse(toks, g).kind == ParseKind::Partial);
  g.enable_group("coordination");
  CHECK(parse(toks, g) == parse(toks, full));
}
