// parared: command line front end.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "parared/frontend.hpp"
#include "parared/instrument.hpp"
#include "parared/oracle.hpp"
#include "parared/pipeline.hpp"

using namespace parared;
using nlohmann::json;

namespace {

struct Common {
  std::string file;
  std::string order = "sequential";
  bool contextual = false;
  std::string comm;
  double query_timeout = 20;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("file", c.file, "program (.pprog)")->required();
  app->add_option("--order", c.order, "sequential | lockstep | custom:<path>");
  app->add_flag("--contextual", c.contextual, "semi-commutativity with abduced conditions");
  app->add_option("--comm", c.comm, "commutativity override file");
  app->add_option("--smt-timeout", c.query_timeout, "per-query timeout of validity checks (s)");
}

CheckOptions check_options(const Common& c) {
  CheckOptions o;
  o.order = c.order;
  o.contextual = c.contextual;
  if (!c.comm.empty()) o.comm_file = c.comm;
  o.smt.query_timeout = c.query_timeout;
  return o;
}

std::vector<std::string> solver_list(const std::vector<std::string>& given, bool portfolio) {
  std::vector<std::string> out = given.empty() ? std::vector<std::string>{"z3"} : given;
  if (portfolio) {
    for (const std::string name : {"z3", "eldarica", "golem"}) {
      if (std::find(out.begin(), out.end(), name) == out.end() && solver_available(solver_spec(name))) out.push_back(name);
    }
  }
  return out;
}

void write_json(const std::string& path, const std::string& text) {
  if (path.empty()) return;
  std::ofstream out(path);
  out << text << "\n";
  if (!out) throw std::runtime_error("cannot write " + path);
}

Domain parse_domain(const std::string& s) {
  Domain d;
  auto colon = s.find(':');
  if (colon == std::string::npos) throw CLI::ValidationError("--domain", "expected lo:hi");
  d.lo = std::stoll(s.substr(0, colon));
  d.hi = std::stoll(s.substr(colon + 1));
  if (d.lo > d.hi) throw CLI::ValidationError("--domain", "empty interval");
  return d;
}

json trace_json(const Program& p, const Trace& t) { return to_string(p, t); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"parared: verification of parameterized programs through sleep-set reductions"};
  app.require_subcommand(1);

  // check
  Common ck;
  std::string encoding = "explicit";
  std::size_t width = 2;
  std::vector<std::string> solvers;
  bool portfolio = false;
  double timeout = 300;
  std::string emit_dir, json_path;
  auto* check = app.add_subcommand("check", "search for a width-k Ashcroft invariant");
  add_common(check, ck);
  check->add_option("--encoding", encoding, "plain | symbolic | explicit");
  check->add_option("--width,-k", width, "invariant width");
  check->add_option("--solver", solvers, "z3, eldarica, golem, or a command line");
  check->add_flag("--portfolio", portfolio, "race every available solver");
  check->add_option("--timeout", timeout, "solver timeout (s)");
  check->add_option("--emit-smt2", emit_dir, "write the CHC system to this directory");
  check->add_option("--json", json_path, "write the run record");

  // instrument
  Common in;
  auto* instrument = app.add_subcommand("instrument", "print the sleep-instrumented template");
  add_common(instrument, in);

  // encode
  Common en;
  std::string enc_encoding = "explicit", out_path;
  std::size_t enc_width = 2;
  auto* encode_cmd = app.add_subcommand("encode", "print the CHC system in SMT-LIB");
  add_common(encode_cmd, en);
  encode_cmd->add_option("--encoding", enc_encoding, "plain | symbolic | explicit");
  encode_cmd->add_option("--width,-k", enc_width, "invariant width");
  encode_cmd->add_option("-o,--output", out_path, "output file (default: stdout)");

  // explore
  Common ex;
  std::size_t threads = 2, depth = 6;
  std::string ids = "all", domain = "-4:4", ex_json;
  std::int64_t index_hi = 2;
  bool safety_only = false;
  auto* explore = app.add_subcommand("explore", "explicit-state check of the reduction on a small instance");
  add_common(explore, ex);
  explore->add_option("--threads,-n", threads, "number of threads");
  explore->add_option("--depth", depth, "maximal trace length");
  explore->add_option("--ids", ids, "all | fixed");
  explore->add_option("--domain", domain, "integer interval lo:hi");
  explore->add_option("--index-max", index_hi, "largest array index");
  explore->add_flag("--safety-only", safety_only, "only run the bounded safety check");
  explore->add_option("--json", ex_json, "write the report");

  // bench
  std::string corpus = "corpus", records = "bench-results.jsonl", bench_order;
  std::vector<std::string> encodings{"plain", "symbolic", "explicit"}, only, bench_solvers;
  std::vector<std::size_t> widths;
  bool force = false, bench_portfolio = false, bench_contextual = false;
  double bench_timeout = 300, bench_query_timeout = 20;
  std::size_t jobs = 1;
  auto* bench = app.add_subcommand("bench", "run the benchmark matrix");
  bench->add_option("corpus", corpus, "corpus directory");
  bench->add_option("--encodings", encodings, "encodings to run")->delimiter(',');
  bench->add_option("--width,-k", widths, "widths (default: from the manifest)")->delimiter(',');
  bench->add_option("--order", bench_order, "override every benchmark's order");
  bench->add_option("--only", only, "benchmark names")->delimiter(',');
  bench->add_option("--solver", bench_solvers, "z3, eldarica, golem, or a command line");
  bench->add_flag("--portfolio", bench_portfolio, "race every available solver");
  bench->add_flag("--contextual", bench_contextual, "semi-commutativity with abduced conditions");
  bench->add_option("--timeout", bench_timeout, "solver timeout per run (s)");
  bench->add_option("--smt-timeout", bench_query_timeout, "per-query timeout of validity checks (s)");
  bench->add_option("--json", records, "JSONL record file (appended)");
  bench->add_flag("--force", force, "rerun runs already recorded");
  bench->add_option("--jobs,-j", jobs, "parallel runs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitError;
  }

  try {
    if (*check) {
      CheckOptions o = check_options(ck);
      o.encoding = parse_encoding(encoding);
      o.k = width;
      o.solvers = solver_list(solvers, portfolio);
      o.timeout = timeout;
      if (!emit_dir.empty()) o.emit_dir = emit_dir;
      RunRecord rec = run_check(std::filesystem::path(ck.file), o);
      std::cout << rec.program << ": " << rec.status() << " (" << rec.encoding << ", k=" << rec.k << ", "
                << rec.solver << ", " << rec.wall_time << "s)\n";
      if (!rec.invariant.empty()) std::cout << "invariant: " << rec.invariant << "\n";
      if (!rec.message.empty()) std::cerr << rec.stage << ": " << rec.message << "\n";
      write_json(json_path, rec.to_json());
      return rec.exit_code();
    }

    if (*instrument) {
      Program p = load_program(in.file);
      SmtChecker smt({{}, in.query_timeout});
      auto rel = comm_for(p, check_options(in), smt);
      auto ip = sleep_instrument(p, make_order(p, in.order), rel);
      std::cout << print_program(ip.program);
      return 0;
    }

    if (*encode_cmd) {
      Program p = load_program(en.file);
      const Encoding e = parse_encoding(enc_encoding);
      SmtChecker smt({{}, en.query_timeout});
      CommRelation rel;
      LocRelation r(p.locations);
      if (e != Encoding::Plain) {
        rel = comm_for(p, check_options(en), smt);
        r = make_order(p, en.order);
      }
      const std::string text = emit_smtlib(encode(p, e, enc_width, r, rel));
      if (out_path.empty()) std::cout << text;
      else {
        std::ofstream out(out_path);
        out << text;
        if (!out) throw std::runtime_error("cannot write " + out_path);
      }
      return 0;
    }

    if (*explore) {
      Program p = load_program(ex.file);
      ExplorationConfig cfg;
      cfg.n = threads;
      cfg.depth = depth;
      cfg.domain = parse_domain(domain);
      cfg.domain.index_hi = index_hi;
      if (ids != "all" && ids != "fixed") throw std::invalid_argument("--ids must be all or fixed");
      cfg.ids = ids == "all" ? IdPolicy::AllPermutations : IdPolicy::Identity;
      json report;
      int status = 0;
      if (!safety_only) {
        SmtChecker smt({{}, ex.query_timeout});
        auto rel = comm_for(p, check_options(ex), smt);
        auto rep = check_reduction(p, make_order(p, ex.order), rel, cfg);
        std::cout << "traces: " << rep.original_traces << " original, " << rep.instrumented_traces
                  << " instrumented over " << rep.id_assignments << " id assignment(s)\n";
        std::cout << "mode: " << (rep.mode == ClassMode::Exact ? "exact" : "covering");
        if (rep.mode == ClassMode::Exact) std::cout << ", classes: " << rep.classes;
        std::cout << "\n";
        for (char c : {'a', 'b', 'c'}) {
          const bool skipped = c == 'c' && !rep.minimality_checked;
          std::cout << "check (" << c << "): " << (skipped ? "skipped" : rep.ok(c) ? "ok" : "FAILED") << "\n";
        }
        json viol = json::array();
        for (const auto& v : rep.violations) {
          std::cout << "  (" << v.check << ") " << to_string(p, v.witness) << ": " << v.message << "\n";
          viol.push_back({{"check", std::string(1, v.check)}, {"ids", v.ids}, {"witness", trace_json(p, v.witness)},
                          {"message", v.message}});
        }
        json reps = json::array();
        for (const auto& t : rep.representatives) reps.push_back(trace_json(p, t));
        report["classes"] = rep.classes;
        report["mode"] = rep.mode == ClassMode::Exact ? "exact" : "covering";
        report["original_traces"] = rep.original_traces;
        report["instrumented_traces"] = rep.instrumented_traces;
        report["representatives"] = reps;
        report["violations"] = viol;
        if (!rep.ok()) status = 2;
      }
      auto safe = bounded_safety(p, cfg);
      std::cout << "bounded safety: "
                << (safe.ok ? "ok" : "violated by thread " + std::to_string(safe.thread + 1) + " after " +
                                         to_string(p, safe.counterexample))
                << " (" << safe.explored << " configurations)\n";
      report["safety"] = safe.ok ? json("ok") : json({{"counterexample", trace_json(p, safe.counterexample)},
                                                      {"thread", safe.thread + 1}});
      write_json(ex_json, report.dump(2));
      if (!safe.ok) status = 3;
      return status;
    }

    if (*bench) {
      BenchOptions o;
      o.base.solvers = solver_list(bench_solvers, bench_portfolio);
      o.base.timeout = bench_timeout;
      o.base.contextual = bench_contextual;
      o.base.smt.query_timeout = bench_query_timeout;
      o.encodings.clear();
      for (const auto& e : encodings) o.encodings.push_back(parse_encoding(e));
      if (!widths.empty()) o.widths = widths;
      if (!bench_order.empty()) o.order = bench_order;
      o.only = only;
      o.records = records;
      o.force = force;
      o.jobs = jobs;
      auto recs = run_bench(corpus, o, std::cerr);
      std::cout << bench_table(recs);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
