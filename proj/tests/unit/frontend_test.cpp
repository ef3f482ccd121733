#include <doctest.h>

#include <fstream>

#include "helpers.hpp"
#include "parared/frontend.hpp"
#include "parared/oracle.hpp"

using namespace parared;

namespace {

const char* kTwoTemplates = R"(program two
global x: int
global g: bool
pre x == 0 && !g

template a
local v: int
init a0
loc a0
loc a1
edge go: a0 -> a1 : atomic { assume !g; g := true; v := 1 }

template b
local v: int
init b0
loc b0
loc b1 assert x >= 0
edge up: b0 -> b1 : x := x + 1
)";

}  // namespace

TEST_CASE("print/parse round-trip over the corpus") {
  for (const auto& f : std::filesystem::directory_iterator(PARARED_CORPUS_DIR)) {
    if (f.path().extension() != ".pprog") continue;
    CAPTURE(f.path().string());
    auto sp = parse_program_file(f.path());
    auto again = parse_program(print_program(sp), sp.name);
    CHECK(again == sp);
  }
}

TEST_CASE("desugar is the identity on one template and idempotent") {
  auto sp = parse_program_file(corpus_file("inc-dec-eq0"));
  CHECK(desugar_multi_template(sp) == sp);
  auto two = desugar_multi_template(parse_program(kTwoTemplates));
  CHECK(desugar_multi_template(two) == two);
}

TEST_CASE("desugar two templates: one role choice per template") {
  auto sp = desugar_multi_template(parse_program(kTwoTemplates));
  REQUIRE(sp.templates.size() == 1);
  const auto& t = sp.templates[0];
  CHECK(t.locations.size() == 1 + 2 + 2);
  CHECK(t.edges.size() == 2 + 1 + 1);
  // role plus the renamed clashing locals
  CHECK(t.locals.size() == 3);
  CHECK(t.asserts.size() == 1);
  auto p = to_program(sp);
  CHECK(enabled_edges(p, p.init).size() == 2);
}

TEST_CASE("desugar three templates") {
  std::string text = kTwoTemplates;
  text += "\ntemplate c\ninit c0\nloc c0\nloc c1\nloc c2\nedge s1: c0 -> c1 : skip\nedge s2: c1 -> c2 : skip\n";
  auto p = to_program(desugar_multi_template(parse_program(text)));
  CHECK(p.locations.size() == 1 + 2 + 2 + 3);
  CHECK(p.edges.size() == 3 + 1 + 1 + 2);
  CHECK(enabled_edges(p, p.init).size() == 3);
}

TEST_CASE("desugar preserves bounded safety") {
  ExplorationConfig cfg;
  cfg.n = 2;
  cfg.depth = 6;
  CHECK(bounded_safety(prog(kTwoTemplates), cfg).ok);
  // two b threads push x to 2
  std::string bad = kTwoTemplates;
  bad.replace(bad.find("x >= 0"), 6, "x <= 1");
  auto res = bounded_safety(prog(bad), cfg);
  CHECK_FALSE(res.ok);
  // role choices plus two increments
  CHECK(res.counterexample.size() == 4);
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_program("program p\ntemplate T\nloc l0\nedge e: l0 -> l0 : skip\n"), std::exception);
  try {
    parse_program("program p\nglobal x: int\ntemplate T\ninit l0\nloc l0\nedge e: l0 -> l0 : x := \n");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 6);
  }
  CHECK_THROWS(parse_program("program p\ntemplate T\ninit l0\nloc l0\nedge e: l0 -> l9 : skip\n"));
}

TEST_CASE("parse_formula resolves thread suffixes and locations") {
  auto p = corpus("inc-dec-eq0");
  Expr f = parse_formula(p, "pc[i] == l1 && x >= 1");
  CHECK(free_var_names(f).count("x") == 1);
}
