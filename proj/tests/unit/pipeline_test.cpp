#include <doctest.h>

#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "parared/pipeline.hpp"

using namespace parared;

TEST_CASE("run records round-trip through JSON") {
  RunRecord r;
  r.program = "p";
  r.encoding = "explicit";
  r.k = 3;
  r.order = "lockstep";
  r.solver = "z3";
  r.verdict = "sat";
  r.validation = "valid";
  r.wall_time = 1.5;
  r.invariant = "forall t1 :: x >= 0";
  auto back = RunRecord::from_json(r.to_json());
  CHECK(back.to_json() == r.to_json());
}

TEST_CASE("exit codes depend on the validated verdict only") {
  RunRecord r;
  r.verdict = "sat";
  r.validation = "valid";
  CHECK(r.exit_code() == kExitVerified);
  r.validation = "invalid";
  CHECK(r.exit_code() == kExitError);
  r.validation = "inconclusive";
  CHECK(r.exit_code() == kExitUnknown);
  r.verdict = "unsat";
  CHECK(r.exit_code() == kExitNoInvariant);
  r.verdict = "timeout";
  CHECK(r.exit_code() == kExitUnknown);
  r.verdict = "error";
  CHECK(r.exit_code() == kExitError);
}

TEST_CASE("run_check reports the failing stage") {
  CheckOptions o;
  auto r = run_check(std::filesystem::path("/no/such/file.pprog"), o);
  CHECK(r.stage == "parse");
  CHECK(r.exit_code() == kExitError);
  o.k = 0;
  r = run_check(corpus("inc-dec-eq0"), o);
  CHECK(r.stage == "encode");
  o.k = 2;
  o.solvers = {"/no/such/solver"};
  r = run_check(corpus("inc-dec-eq0"), o);
  CHECK(r.exit_code() == kExitError);
}

TEST_CASE("check on inc-dec") {
  CheckOptions o;
  o.timeout = 60;
  CHECK(run_check(corpus("inc-dec-eq0"), o).exit_code() == kExitVerified);
  o.encoding = Encoding::Plain;
  CHECK(run_check(corpus("inc-dec-eq0"), o).exit_code() == kExitNoInvariant);
}

TEST_CASE("corpus manifest") {
  auto entries = load_corpus(PARARED_CORPUS_DIR);
  CHECK(entries.size() == 19);
  for (const auto& e : entries) CHECK(std::filesystem::exists(e.file));
}

TEST_CASE("empty corpus gives an empty table") {
  auto dir = std::filesystem::temp_directory_path() / "parared-empty-corpus";
  std::filesystem::create_directories(dir);
  BenchOptions o;
  std::ostringstream log;
  auto recs = run_bench(dir, o, log);
  CHECK(recs.empty());
  auto table = bench_table(recs);
  CHECK(std::count(table.begin(), table.end(), '\n') == 1);
}

TEST_CASE("bench resumes from recorded runs") {
  auto dir = std::filesystem::temp_directory_path() / "parared-bench-resume";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir / "c");
  std::filesystem::copy_file(corpus_file("lock"), dir / "c" / "lock.pprog");
  BenchOptions o;
  o.records = dir / "runs.jsonl";
  o.base.timeout = 30;
  std::ostringstream log;
  auto first = run_bench(dir / "c", o, log);
  CHECK(first.size() == 3);
  auto second = run_bench(dir / "c", o, log);
  CHECK(second.size() == 3);
  CHECK(log.str().find("[skip]") != std::string::npos);
  std::ifstream in(o.records);
  CHECK(std::count(std::istreambuf_iterator<char>(in), {}, '\n') == 3);
}

TEST_CASE("width 1: explicit sat implies plain sat on the corpus") {
  for (const auto& e : load_corpus(PARARED_CORPUS_DIR)) {
    CheckOptions o;
    o.k = 1;
    o.timeout = 10;
    o.order = e.order;
    o.contextual = e.contextual;
    auto ex = run_check(e.file, o);
    if (ex.status() != "sat") continue;
    o.encoding = Encoding::Plain;
    o.timeout = 60;
    CAPTURE(e.name);
    CHECK(run_check(e.file, o).status() == "sat");
  }
}
