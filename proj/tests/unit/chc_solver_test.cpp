#include <doctest.h>

#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "parared/chc.hpp"
#include "parared/solver.hpp"

using namespace parared;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CHCSystem explicit_pm(std::size_t k = 2) {
  SmtChecker smt;
  auto p = corpus("inc-dec-eq0");
  return encode_explicit(p, k, sequential_order(p), build_comm_relation(p, false, smt));
}

}  // namespace

TEST_CASE("sigma inserts the interfering thread and drops r") {
  CHECK(sigma(1, 1, 2) == std::vector<std::size_t>{0, 2});
  CHECK(sigma(2, 1, 2) == std::vector<std::size_t>{0, 2});
  CHECK(sigma(3, 1, 2) == std::vector<std::size_t>{2, 0});
  CHECK(sigma(1, 2, 2) == std::vector<std::size_t>{0, 1});
  CHECK(sigma(3, 2, 2) == std::vector<std::size_t>{1, 0});
  CHECK(sigma(2, 2, 3) == std::vector<std::size_t>{1, 0, 3});
  CHECK_THROWS(sigma(4, 1, 2));
  CHECK_THROWS(sigma(1, 3, 2));
  // every result is a permutation of {0..k} minus r
  for (std::size_t k = 1; k <= 4; ++k) {
    for (std::size_t i = 1; i <= k + 1; ++i) {
      for (std::size_t r = 1; r <= k; ++r) {
        auto s = sigma(i, r, k);
        CHECK(s.size() == k);
        CHECK(s[i - 1 - (r < i ? 1 : 0)] == 0);
        CHECK(std::find(s.begin(), s.end(), r) == s.end());
      }
    }
  }
}

TEST_CASE("signature layout") {
  auto p = corpus("inc-dec-eq0");
  auto names = [](const InvSignature& s) {
    std::vector<std::string> out;
    for (const auto& d : s.params) out.push_back(d.name);
    return out;
  };
  CHECK(names(make_signature(p, Encoding::Plain, 2)) == std::vector<std::string>{"x", "pc.1", "pc.2"});
  CHECK(names(make_signature(p, Encoding::Explicit, 2)) ==
        std::vector<std::string>{"x", "pc.1", "sleep.1", "pc.2", "sleep.2"});
  CHECK(names(make_signature(p, Encoding::Symbolic, 1)) == std::vector<std::string>{"x", "id.1", "pc.1", "sleep.1"});
  CHECK(slot_name("v", 0) == "v.s");
}

TEST_CASE("clause order and counts") {
  auto sys = explicit_pm();
  std::vector<std::string> kinds;
  for (const auto& c : sys.clauses) {
    if (kinds.empty() || kinds.back() != c.kind) kinds.push_back(c.kind);
  }
  CHECK(kinds == std::vector<std::string>{"initial", "inductivity", "non-interference", "safety"});
  // plain: 1 initial, k*|E| inductivity, |E| non-interference, k*|asserts| safety
  auto plain = encode_plain(corpus("inc-dec-eq0"), 2);
  CHECK(plain.clauses.size() == 1 + 4 + 2 + 2);
  // explicit adds one non-interference clause per insertion position
  CHECK(sys.clauses.size() == 1 + 4 + 2 * 3 + 2);
}

TEST_CASE("golden SMT-LIB for explicit k=2") {
  const auto golden = std::filesystem::path(PARARED_TEST_DATA) / "inc-dec-eq0.explicit.2.smt2";
  CHECK(emit_smtlib(explicit_pm()) == slurp(golden));
}

TEST_CASE("z3 accepts every emitted system") {
  SmtChecker smt;
  for (const char* name : {"inc-dec-eq0", "notify-listeners", "numbered-array"}) {
    auto p = corpus(name);
    auto rel = build_comm_relation(p, false, smt);
    for (auto enc : {Encoding::Plain, Encoding::Symbolic, Encoding::Explicit}) {
      auto v = run_solver(emit_smtlib(encode(p, enc, 1, sequential_order(p), rel)), solver_spec("z3"), 5);
      CAPTURE(name);
      CHECK(v.kind != VerdictKind::Error);
    }
  }
}

TEST_CASE("model parsing") {
  auto sig = make_signature(corpus("inc-dec-eq0"), Encoding::Plain, 2);
  Expr b = parse_model("(\n  (define-fun Inv ((a Int) (b Int) (c Int)) Bool\n    true)\n)", sig);
  CHECK(b.is_true());
  b = parse_model("((define-fun Inv ((x!0 Int) (x!1 Int) (x!2 Int)) Bool (let ((a!1 (>= x!0 0))) (and a!1 (<= x!1 x!2)))))", sig);
  CHECK(free_var_names(b) == std::set<std::string>{"x", "pc.1", "pc.2"});
  CHECK_THROWS(parse_model("((define-fun Other ((a Int)) Bool true))", sig));
  CHECK_THROWS(parse_model("((define-fun Inv ((a Int) (b Int) (c Int)) Bool (< a zz)))", sig));
  CHECK_THROWS(parse_model("(((", sig));
}

TEST_CASE("solver failures become verdicts") {
  SolverSpec bad{"broken", {"/bin/sh", "-c", "echo garbage"}};
  CHECK(run_solver("(check-sat)", bad, 5).kind == VerdictKind::Error);
  SolverSpec slow{"slow", {"/bin/sh", "-c", "sleep 30"}};
  auto v = run_solver("", slow, 0.5);
  CHECK(v.kind == VerdictKind::Timeout);
  CHECK(v.seconds < 10);
  CHECK_FALSE(solver_available(solver_spec("/no/such/solver")));
}

TEST_CASE("validation rejects wrong invariants at the right clause") {
  SmtChecker smt;
  auto sys = encode_plain(corpus("inc-dec-eq0"), 2);
  auto r = validate_invariant(fls(), sys, smt);
  CHECK(r.status == ValidationResult::Invalid);
  REQUIRE(r.clause.has_value());
  CHECK(sys.clauses[*r.clause].kind == "initial");
  r = validate_invariant(tru(), sys, smt);
  CHECK(r.status == ValidationResult::Invalid);
  REQUIRE(r.clause.has_value());
  CHECK(sys.clauses[*r.clause].kind == "safety");
}

TEST_CASE("end to end on inc-dec") {
  SmtChecker smt;
  auto sys = explicit_pm();
  auto v = run_solver(emit_smtlib(sys), solver_spec("z3"), 60);
  REQUIRE(v.kind == VerdictKind::Sat);
  auto inv = reconstruct_ashcroft(parse_model(v.model, sys.sig), sys.sig);
  CHECK(inv.id_ordered);
  CHECK(validate_invariant(inv, sys, smt).ok());
  CHECK(inv.str().find("id[t1] < id[t2] ==>") != std::string::npos);

  auto plain = encode_plain(corpus("inc-dec-eq0"), 2);
  CHECK(run_solver(emit_smtlib(plain), solver_spec("z3"), 60).kind == VerdictKind::Unsat);
}

TEST_CASE("translated solutions stay in the right vocabulary") {
  Expr body = le(var("pc.1", Sort::Int), var("pc.2", Sort::Int));
  Expr sym = translate_solution(body, 2, Direction::ExplicitToSymbolic);
  CHECK(free_var_names(sym).count("id.1") == 1);
  Expr back = translate_solution(sym, 2, Direction::SymbolicToExplicit);
  CHECK(free_var_names(back).count("id.1") == 0);
}
