// Acceptance suite: one PASS/FAIL line per criterion T1..T8.

#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <set>
#include <random>
#include <sstream>

#include <json.hpp>

#include "parared/frontend.hpp"
#include "parared/oracle.hpp"
#include "parared/pipeline.hpp"

using namespace parared;
using nlohmann::json;

namespace {

const std::filesystem::path kCorpus = PARARED_CORPUS_DIR;

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Program corpus(const std::string& name) { return load_program(kCorpus / (name + ".pprog")); }

json manifest() {
  std::ifstream in(kCorpus / "manifest.json");
  return json::parse(in);
}

const json& manifest_entry(const json& m, const std::string& name) {
  for (const auto& b : m.at("benchmarks")) {
    if (b.at("name") == name) return b;
  }
  throw Failure("no manifest entry for " + name);
}

Program inc_dec_k(int K) {
  return to_program(parse_program("program inc-dec-k\nglobal x: int\npre x == 0\ntemplate T\ninit l0\nloc l0\n"
                                  "loc l1 assert x != 0\nedge inc: l0 -> l1 : atomic { assume x < " +
                                  std::to_string(K) + "; x := x + 1 }\nedge dec: l1 -> l0 : x := x - 1\n"));
}

CheckOptions options_for(const json& m, const std::string& name, Encoding enc, std::size_t k, double timeout) {
  const auto& b = manifest_entry(m, name);
  CheckOptions o;
  o.encoding = enc;
  o.k = k;
  o.order = b.value("order", "sequential");
  o.contextual = b.value("contextual", false);
  o.timeout = timeout;
  return o;
}

// reference statuses at the desk subset
std::string t1() {
  const json m = manifest();
  struct Case {
    std::string name;
    std::size_t k;
    Encoding enc;
    std::string want;
  };
  const std::vector<Case> cases{
      {"inc-dec-eq0", 2, Encoding::Plain, "unsat"},     {"inc-dec-eq0", 2, Encoding::Explicit, "sat"},
      {"inc-dec-geq0", 2, Encoding::Plain, "unsat"},    {"inc-dec-geq0", 2, Encoding::Explicit, "sat"},
      {"mutex-3", 2, Encoding::Plain, "unsat"},         {"mutex-3", 2, Encoding::Explicit, "sat"},
      {"mutex-unbounded", 2, Encoding::Plain, "unsat"}, {"mutex-unbounded", 2, Encoding::Explicit, "sat"},
      {"lock", 1, Encoding::Plain, "sat"},
  };
  std::ostringstream info;
  std::vector<std::string> bad;
  for (const auto& c : cases) {
    auto rec = run_check(corpus(c.name), options_for(m, c.name, c.enc, c.k, 600));
    info << " " << c.name << "/" << to_string(c.enc) << "=" << rec.status();
    if (rec.status() != c.want) bad.push_back(c.name + " " + to_string(c.enc) + ": got " + rec.status() + ", want " + c.want);
  }
  if (!bad.empty()) {
    std::string msg;
    for (const auto& b : bad) msg += b + "; ";
    throw Failure(msg);
  }
  return info.str();
}

// width-2 invariant for the instrumented P±, written out by hand
std::string t2() {
  const auto t0 = std::chrono::steady_clock::now();
  SmtChecker smt;
  auto p = corpus("inc-dec-eq0");
  auto sys = encode_symbolic(p, 2, sequential_order(p), build_comm_relation(p, false, smt));
  const std::string fig = R"((define-fun Inv ((x Int) (id_i Int) (pc_i Int) (s_i Bool) (id_j Int) (pc_j Int) (s_j Bool)) Bool
    (and (>= x 0)
         (=> (= pc_i 1) (>= x 1))
         (=> (= pc_j 1) (>= x 1))
         (=> (and (= pc_i 1) (= pc_j 1)) (or (>= x 2) (and s_i s_j)))
         (=> (and (< id_i id_j) (= pc_j 1)) s_i)
         (=> (and (> id_i id_j) (= pc_i 1)) s_j))))";
  auto res = validate_invariant(parse_model(fig, sys.sig), sys, smt);
  require(res.ok(), "validation: " + res.message);
  const double s = since(t0);
  require(s < 10, "took " + std::to_string(s) + "s");
  return " " + std::to_string(sys.clauses.size()) + " clauses valid";
}

std::string t3() {
  SmtChecker smt;
  std::ostringstream info;
  for (auto [name, p] : {std::pair{std::string("P±"), corpus("inc-dec-eq0")}, std::pair{std::string("P^{1±}"), inc_dec_k(1)}}) {
    const auto rel = build_comm_relation(p, false, smt);
    for (std::size_t n : {2, 3}) {
      const auto t0 = std::chrono::steady_clock::now();
      ExplorationConfig cfg;
      cfg.n = n;
      cfg.depth = 8;
      cfg.ids = IdPolicy::AllPermutations;
      auto rep = check_reduction(p, sequential_order(p), rel, cfg);
      const double s = since(t0);
      const std::string tag = name + " n=" + std::to_string(n);
      require(rep.mode == ClassMode::Exact, tag + ": not exact");
      require(rep.minimality_checked, tag + ": minimality not checked");
      for (char c : {'a', 'b', 'c'}) require(rep.ok(c), tag + ": check (" + c + ") failed");
      require(s < 60, tag + ": took " + std::to_string(s) + "s");
      info << " " << tag << ": " << rep.classes << " classes";
    }
  }
  return info.str();
}

// plain solutions stay valid for the instrumented program
std::string t4() {
  const json m = manifest();
  SmtChecker smt;
  std::ostringstream info;
  std::size_t lifted = 0;
  for (const auto& b : m.at("benchmarks")) {
    const std::string name = b.at("name");
    for (const auto& [ks, st] : b.at("expected").items()) {
      if (st.at("plain") != "sat") continue;
      const std::size_t k = std::stoul(ks);
      auto p = corpus(name);
      auto plain = encode_plain(p, k);
      auto v = run_solver(emit_smtlib(plain), solver_spec("z3"), 120);
      if (v.kind != VerdictKind::Sat) {
        info << " " << name << "@" << k << ":plain-" << to_string(v.kind);
        continue;
      }
      Expr body = parse_model(v.model, plain.sig);
      auto o = options_for(m, name, Encoding::Symbolic, k, 0);
      auto sym = encode_symbolic(p, k, make_order(p, o.order), build_comm_relation(p, o.contextual, smt));
      const auto t0 = std::chrono::steady_clock::now();
      auto res = validate_invariant(body, sym, smt);
      require(res.ok(), name + " k=" + ks + ": " + res.message);
      require(since(t0) < 60, name + ": validation took over 60s");
      ++lifted;
      info << " " << name << "@" << k << ":ok";
    }
  }
  require(lifted > 0, "no plain solution found");
  return info.str();
}

std::string t5() {
  SmtChecker smt;
  auto p = corpus("inc-dec-eq0");
  auto rel = build_comm_relation(p, false, smt);
  auto sym = encode_symbolic(p, 2, sequential_order(p), rel);
  auto exp = encode_explicit(p, 2, sequential_order(p), rel);
  auto vs = run_solver(emit_smtlib(sym), solver_spec("z3"), 300);
  require(vs.kind == VerdictKind::Sat, "symbolic: " + to_string(vs.kind));
  auto ve = run_solver(emit_smtlib(exp), solver_spec("z3"), 300);
  require(ve.kind == VerdictKind::Sat, "explicit: " + to_string(ve.kind));
  Expr s2e = translate_solution(parse_model(vs.model, sym.sig), 2, Direction::SymbolicToExplicit);
  auto r1 = validate_invariant(s2e, exp, smt);
  require(r1.ok(), "symbolic -> explicit: " + r1.message);
  Expr e2s = translate_solution(parse_model(ve.model, exp.sig), 2, Direction::ExplicitToSymbolic);
  auto r2 = validate_invariant(e2s, sym, smt);
  require(r2.ok(), "explicit -> symbolic: " + r2.message);
  return " both directions valid";
}

std::string t6() {
  SmtChecker smt;
  auto p = corpus("notify-listeners");
  auto st = [&](const std::string& l) { return p.edges.at(p.edge_by_label(l)).st; };
  const auto inc = st("notifier_advance");
  const auto wait = st("listener_wait");
  // assume@i current++@j is covered by current++@j assume@i
  require(semi_commute(p, wait, inc, tru(), smt), "assume before increment not covered");
  require(!semi_commute(p, inc, wait, tru(), smt), "increment before assume wrongly covered");
  const auto send = st("notifier_send");
  const auto recv = st("listener_recv");
  Expr c = abduce_comm_condition(p, send, recv, smt);
  require(!c.is_false(), "no condition abduced");
  Expr idx = var("idx", Sort::Int, ThreadRef::Other);
  Expr current = var("current", Sort::Int);
  require(smt.valid(implies(c, ne(idx, current))) == Validity::Valid, "condition does not entail idx != current");
  require(semi_commute(p, send, recv, c, smt), "abduced condition not sufficient");
  return " condition: " + to_dsl(c);
}

std::string t7() {
  std::mt19937 rng(20240607);
  std::ostringstream info;
  for (const char* name : {"notify-listeners", "bluetooth", "ticket"}) {
    auto p = corpus(name);
    for (const char* order : {"sequential", "lockstep"}) {
      auto r = make_order(p, order);
      for (int s = 0; s < 1000; ++s) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
        std::vector<Loc> locs(n);
        for (auto& l : locs) l = std::uniform_int_distribution<Loc>(0, p.locations.size() - 1)(rng);
        std::vector<std::int64_t> ids(n);
        std::iota(ids.begin(), ids.end(), 1);
        std::shuffle(ids.begin(), ids.end(), rng);
        const std::string tag = std::string(name) + "/" + order + " sample " + std::to_string(s);

        auto sorted = order_threads(r, locs, ids);
        std::vector<std::size_t> perm = sorted;
        std::sort(perm.begin(), perm.end());
        for (std::size_t t = 0; t < n; ++t) require(perm[t] == t, tag + ": not a permutation");
        for (std::size_t a = 0; a < n; ++a) {
          for (std::size_t b = a + 1; b < n; ++b) {
            require(prefers(r, locs[sorted[a]], locs[sorted[b]], ids[sorted[a]], ids[sorted[b]]), tag + ": order not sorted");
            require(!prefers(r, locs[sorted[b]], locs[sorted[a]], ids[sorted[b]], ids[sorted[a]]), tag + ": not antisymmetric");
          }
        }
        for (std::size_t a = 0; a < n; ++a) {
          for (std::size_t b = 0; b < n; ++b) {
            if (a == b) continue;
            const bool want = std::find(sorted.begin(), sorted.end(), a) < std::find(sorted.begin(), sorted.end(), b);
            Expr f = pref_test_formula(r, p.loc_expr(locs[a]), p.loc_expr(locs[b]), int_lit(ids[a]), int_lit(ids[b]));
            require(f.op() == Op::BoolLit && f.bool_value() == want, tag + ": pref_test_formula disagrees");
            Expr g = pref_cond_explicit(r, p.loc_expr(locs[a]), p.loc_expr(locs[b]), ids[a] < ids[b]);
            require(g.op() == Op::BoolLit && g.bool_value() == want, tag + ": pref_cond_explicit disagrees");
          }
        }
      }
      info << " " << name << "/" << order;
    }
  }
  return info.str();
}

std::string t8() {
  const json m = manifest();
  std::ostringstream info;
  for (const auto& e : load_corpus(kCorpus)) {
    const auto& b = manifest_entry(m, e.name);
    ExplorationConfig cfg;
    cfg.n = 2;
    cfg.depth = 8;
    if (b.contains("oracle_domain")) {
      const auto& d = b.at("oracle_domain");
      cfg.domain.lo = d.value("lo", cfg.domain.lo);
      cfg.domain.hi = d.value("hi", cfg.domain.hi);
      cfg.domain.index_hi = d.value("index_hi", cfg.domain.index_hi);
    }
    auto res = bounded_safety(load_program(e.file), cfg);
    require(res.ok, e.name + ": counterexample " + to_string(load_program(e.file), res.counterexample));
  }
  info << " corpus ok;";
  const std::vector<std::pair<std::string, std::string>> mutants{
      {"assert at l0",
       "program m1\nglobal x: int\npre x == 0\ntemplate T\ninit l0\nloc l0 assert x != 0\nloc l1 assert x != 0\n"
       "edge inc: l0 -> l1 : x := x + 1\nedge dec: l1 -> l0 : x := x - 1\n"},
      {"duplicated decrement",
       "program m2\nglobal x: int\npre x == 0\ntemplate T\ninit l0\nloc l0\nloc l1 assert x != 0\n"
       "edge inc: l0 -> l1 : x := x + 1\nedge dec: l1 -> l0 : x := x - 1\nedge dec2: l1 -> l0 : x := x - 1\n"
       "edge dec3: l0 -> l0 : x := x - 1\n"},
      {"ticket without the wait",
       "program m3\nglobal s: int\nglobal t: int\npre s == 0 && t == 0\ntemplate T\nlocal m: int\ninit l0\nloc l0\n"
       "loc l1\nloc l2 assert m == s\nedge take: l0 -> l1 : atomic { m := t; t := t + 1 }\n"
       "edge enter: l1 -> l2 : skip\nedge leave: l2 -> l0 : s := s + 1\n"},
  };
  for (const auto& [what, text] : mutants) {
    ExplorationConfig cfg;
    cfg.n = 2;
    cfg.depth = 8;
    auto p = to_program(parse_program(text));
    auto res = bounded_safety(p, cfg);
    require(!res.ok, "mutant '" + what + "' not caught");
    info << " " << what << ": " << to_string(p, res.counterexample) << ";";
  }
  return info.str();
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<std::string()>>> tests{
      {"T1", t1}, {"T2", t2}, {"T3", t3}, {"T4", t4}, {"T5", t5}, {"T6", t6}, {"T7", t7}, {"T8", t8},
  };
  std::set<std::string> only(argv + 1, argv + argc);
  int failed = 0;
  for (const auto& [name, run] : tests) {
    if (!only.empty() && !only.count(name)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const std::string info = run();
      std::cout << name << " PASS (" << std::fixed << std::setprecision(1) << since(t0) << "s)" << info << std::endl;
    } catch (const std::exception& e) {
      ++failed;
      std::cout << name << " FAIL (" << std::fixed << std::setprecision(1) << since(t0) << "s) " << e.what() << std::endl;
    }
  }
  return failed == 0 ? 0 : 1;
}
