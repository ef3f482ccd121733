#include <doctest.h>

#include <algorithm>
#include <functional>

#include "helpers.hpp"
#include "parared/oracle.hpp"

using namespace parared;

namespace {

// Independent count of P± traces: n threads toggling between l0 and l1,
// x kept inside [lo, hi].
std::size_t count_pm_traces(std::size_t n, std::size_t depth, int lo = -4, int hi = 4) {
  std::function<std::size_t(std::vector<int>&, int, std::size_t)> go = [&](std::vector<int>& pc, int x,
                                                                            std::size_t d) -> std::size_t {
    std::size_t total = 1;
    if (d == 0) return total;
    for (std::size_t t = 0; t < n; ++t) {
      const int nx = pc[t] == 0 ? x + 1 : x - 1;
      if (nx < lo || nx > hi) continue;
      pc[t] ^= 1;
      total += go(pc, nx, d - 1);
      pc[t] ^= 1;
    }
    return total;
  };
  std::vector<int> pc(n, 0);
  return go(pc, 0, depth);
}

ExplorationConfig cfg(std::size_t n, std::size_t depth) {
  ExplorationConfig c;
  c.n = n;
  c.depth = depth;
  return c;
}

}  // namespace

TEST_CASE("trace counts match an independent enumeration") {
  auto p = corpus("inc-dec-eq0");
  CHECK(enumerate_traces(p, cfg(1, 0)).size() == 1);
  CHECK(enumerate_traces(p, cfg(1, 0)).begin()->first.empty());
  CHECK(enumerate_traces(p, cfg(1, 2)).size() == 3);
  for (std::size_t n = 1; n <= 3; ++n) {
    for (std::size_t d = 0; d <= 6; ++d) {
      CAPTURE(n);
      CAPTURE(d);
      CHECK(enumerate_traces(p, cfg(n, d)).size() == count_pm_traces(n, d));
    }
  }
}

TEST_CASE("P^{K±} with K = 1 admits one thread in the critical section") {
  auto p = prog(inc_dec_k(1));
  auto ts = enumerate_traces(p, cfg(2, 4));
  for (const auto& [t, confs] : ts) {
    for (const auto& c : confs) CHECK(std::count(c.locs.begin(), c.locs.end(), Loc{1}) <= 1);
  }
  // eps, inc (x2), inc dec (x2), inc dec inc (x4), inc dec inc dec (x4)
  CHECK(ts.size() == 1 + 2 + 2 + 4 + 4);
}

TEST_CASE("equivalence classes") {
  SmtChecker smt;
  auto p = corpus("inc-dec-eq0");
  auto rel = build_comm_relation(p, false, smt);
  Trace ab{{0, 0}, {0, 1}};
  auto cls = equivalence_class(p, ab, rel, ClassMode::Exact);
  CHECK(cls == std::set<Trace>{ab, {{0, 1}, {0, 0}}});
  // same-thread steps never swap
  Trace own{{0, 0}, {1, 0}};
  CHECK(equivalence_class(p, own, rel, ClassMode::Exact).size() == 1);
  // nothing commutes: singleton classes
  CHECK(equivalence_class(p, ab, trivial_relation(p), ClassMode::Exact).size() == 1);
  // inc_0 inc_1 dec_0: three interleavings keep thread 0's order
  Trace t3{{0, 0}, {0, 1}, {1, 0}};
  CHECK(equivalence_class(p, t3, rel, ClassMode::Exact).size() == 3);
}

TEST_CASE("exact closure is symmetric") {
  SmtChecker smt;
  auto p = corpus("inc-dec-eq0");
  auto rel = build_comm_relation(p, false, smt);
  for (const auto& [t, _] : enumerate_traces(p, cfg(2, 4))) {
    auto cls = equivalence_class(p, t, rel, ClassMode::Exact);
    CHECK(cls.count(t) == 1);
    for (const auto& u : cls) CHECK(equivalence_class(p, u, rel, ClassMode::Exact) == cls);
  }
}

TEST_CASE("equivalent feasible traces reach the same state") {
  SmtChecker smt;
  for (const std::string& text : {inc_dec_k(1), inc_dec_k(2)}) {
    auto p = prog(text);
    auto rel = build_comm_relation(p, false, smt);
    auto c = cfg(3, 5);
    auto init = initial_configurations(p, c);
    for (const auto& [t, ends] : enumerate_traces(p, c)) {
      for (const auto& u : equivalence_class(p, t, rel, ClassMode::Exact)) {
        auto other = replay(p, init, u, c.domain);
        if (!other.empty()) CHECK(other == ends);
      }
    }
  }
}

TEST_CASE("lex_min follows the thread ids") {
  auto p = corpus("inc-dec-eq0");
  auto r = sequential_order(p);
  std::set<Trace> cls{{{0, 0}, {0, 1}}, {{0, 1}, {0, 0}}};
  CHECK(lex_min(p, cls, r, {1, 2}) == Trace{{0, 0}, {0, 1}});
  CHECK(lex_min(p, cls, r, {2, 1}) == Trace{{0, 1}, {0, 0}});
  CHECK(lex_less(p, r, {1, 2}, {}, {{0, 0}}));
  CHECK_THROWS_AS(lex_min(p, {}, r, {1, 2}), OracleError);
}

TEST_CASE("id assignments") {
  ExplorationConfig c;
  c.n = 3;
  CHECK(id_assignments(c).size() == 6);
  c.n = 4;
  CHECK(id_assignments(c).size() == 1);
  c.n = 2;
  c.ids = IdPolicy::Identity;
  CHECK(id_assignments(c) == std::vector<std::vector<std::int64_t>>{{1, 2}});
}

TEST_CASE("initial configurations") {
  auto p = corpus("inc-dec-eq0");
  auto init = initial_configurations(p, cfg(2, 1));
  REQUIRE(init.size() == 1);
  CHECK(std::get<std::int64_t>(init[0].globals[0]) == 0);
  auto bad = prog("program p\nglobal x: int\npre x == 99\ntemplate T\ninit l0\nloc l0\nedge e: l0 -> l0 : skip\n");
  CHECK_THROWS_AS(initial_configurations(bad, cfg(1, 1)), OracleError);
}

TEST_CASE("reduction checks on P±") {
  SmtChecker smt;
  auto p = corpus("inc-dec-eq0");
  auto rel = build_comm_relation(p, false, smt);
  auto rep = check_reduction(p, sequential_order(p), rel, cfg(2, 6));
  CHECK(rep.ok());
  CHECK(rep.mode == ClassMode::Exact);
  CHECK(rep.minimality_checked);
  CHECK(rep.not_lex_min == 0);
  // nothing commutes: every trace is its own class and survives
  auto triv = check_reduction(p, sequential_order(p), trivial_relation(p), cfg(2, 4));
  CHECK(triv.ok());
  CHECK(triv.classes == triv.original_traces);
}

TEST_CASE("claiming commutativity that does not hold breaks the reduction") {
  // inc and dec of P^{1±} do not commute; pretending they do leaves some
  // classes without a feasible representative
  auto p = prog(inc_dec_k(1));
  auto rep = check_reduction(p, sequential_order(p), total_relation(p), cfg(2, 6));
  CHECK_FALSE(rep.ok());
}

TEST_CASE("bounded safety") {
  CHECK(bounded_safety(corpus("inc-dec-eq0"), cfg(2, 8)).ok);
  // assert at the initial location fails before any step
  auto at_init = prog("program p\nglobal x: int\npre x == 0\ntemplate T\ninit l0\nloc l0 assert false\nedge e: l0 -> l0 : skip\n");
  auto r = bounded_safety(at_init, cfg(1, 3));
  CHECK_FALSE(r.ok);
  CHECK(r.counterexample.empty());
  // duplicated decrement
  auto dup = prog("program p\nglobal x: int\npre x == 0\ntemplate T\ninit l0\nloc l0\nloc l1 assert x != 0\n"
                  "edge inc: l0 -> l1 : x := x + 1\nedge dec: l1 -> l0 : x := x - 1\nedge dec2: l0 -> l0 : x := x - 1\n");
  r = bounded_safety(dup, cfg(2, 8));
  CHECK_FALSE(r.ok);
  CHECK(r.counterexample.size() == 2);
}

TEST_CASE("covering closure is reflexive and transitive") {
  SmtChecker smt;
  auto p = prog(inc_dec_k(2));
  auto rel = build_comm_relation(p, true, smt);
  auto c = cfg(2, 5);
  auto init = initial_configurations(p, c);
  for (const auto& [t, _] : enumerate_traces(p, c)) {
    auto cls = equivalence_class(p, t, rel, ClassMode::Covering, init, c.domain);
    CHECK(cls.count(t) == 1);
    for (const auto& u : cls) {
      auto sub = equivalence_class(p, u, rel, ClassMode::Covering, init, c.domain);
      CHECK(std::includes(cls.begin(), cls.end(), sub.begin(), sub.end()));
    }
  }
}

TEST_CASE("semi-commutativity: reduction and soundness without minimality") {
  SmtChecker smt;
  auto p = corpus("mutex-3");
  auto rel = build_comm_relation(p, true, smt);
  auto rep = check_reduction(p, sequential_order(p), rel, cfg(3, 7));
  CHECK(rep.mode == ClassMode::Covering);
  CHECK(rep.ok('a'));
  CHECK(rep.ok('b'));
  CHECK_FALSE(rep.minimality_checked);
}

TEST_CASE("a represented reduction that is safe implies the program is safe") {
  SmtChecker smt;
  for (const char* name : {"inc-dec-eq0", "lock", "ticket"}) {
    auto p = corpus(name);
    auto rel = build_comm_relation(p, false, smt);
    auto c = cfg(2, 6);
    auto rep = check_reduction(p, sequential_order(p), rel, c);
    REQUIRE(rep.ok('b'));
    auto ip = sleep_instrument(p, sequential_order(p), rel);
    CAPTURE(name);
    CHECK(bounded_safety(ip.program, c).ok == bounded_safety(p, c).ok);
  }
}
