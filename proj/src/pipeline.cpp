#include "parared/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "parared/frontend.hpp"

namespace parared {

using nlohmann::json;

namespace {

struct StageError : std::runtime_error {
  std::string stage;
  StageError(std::string s, const std::string& msg) : std::runtime_error(msg), stage(std::move(s)) {}
};

template <class F>
auto in_stage(const std::string& stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string RunRecord::to_json() const {
  json j{{"program", program},     {"encoding", encoding}, {"k", k},
         {"order", order},         {"solver", solver},     {"verdict", verdict},
         {"validation", validation}, {"wall_time", wall_time}, {"solver_time", solver_time},
         {"clauses", clauses},     {"invariant", invariant}, {"stage", stage},
         {"message", message}};
  return j.dump();
}

RunRecord RunRecord::from_json(const std::string& line) {
  auto j = json::parse(line);
  RunRecord r;
  r.program = j.value("program", "");
  r.encoding = j.value("encoding", "");
  r.k = j.value("k", std::size_t{0});
  r.order = j.value("order", "");
  r.solver = j.value("solver", "");
  r.verdict = j.value("verdict", "error");
  r.validation = j.value("validation", "");
  r.wall_time = j.value("wall_time", 0.0);
  r.solver_time = j.value("solver_time", 0.0);
  r.clauses = j.value("clauses", std::size_t{0});
  r.invariant = j.value("invariant", "");
  r.stage = j.value("stage", "");
  r.message = j.value("message", "");
  return r;
}

int RunRecord::exit_code() const {
  if (verdict == "sat") {
    if (validation == "valid") return kExitVerified;
    if (validation == "invalid") return kExitError;
    return kExitUnknown;
  }
  if (verdict == "unsat") return kExitNoInvariant;
  if (verdict == "unknown" || verdict == "timeout") return kExitUnknown;
  return kExitError;
}

std::string RunRecord::status() const {
  if (verdict == "sat") {
    if (validation == "valid") return "sat";
    if (validation == "invalid") return "invalid";
    return "sat?";
  }
  if (verdict == "timeout") return "TO";
  return verdict;
}

CommRelation comm_for(const Program& p, const CheckOptions& o, const SmtChecker& smt) {
  CommRelation rel = build_comm_relation(p, o.contextual, smt);
  if (o.comm_file) apply_overrides(rel, p, read_file(*o.comm_file));
  return rel;
}

RunRecord run_check(const Program& p, const CheckOptions& o) {
  const auto t0 = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.program = p.name;
  rec.encoding = to_string(o.encoding);
  rec.k = o.k;
  rec.order = o.order;
  rec.solver = join(o.solvers, "+");
  try {
    if (o.k == 0) throw StageError("encode", "width must be at least 1");
    SmtChecker smt(o.smt);
    CommRelation rel;
    LocRelation order(p.locations);
    if (o.encoding != Encoding::Plain) {
      rel = in_stage("commutativity", [&] { return comm_for(p, o, smt); });
      order = in_stage("order", [&] { return make_order(p, o.order); });
    }
    const CHCSystem sys = in_stage("encode", [&] { return encode(p, o.encoding, o.k, order, rel); });
    rec.clauses = sys.clauses.size();
    const std::string smt2 = emit_smtlib(sys);
    if (o.emit_dir) {
      in_stage("emit", [&] {
        std::filesystem::create_directories(*o.emit_dir);
        std::ofstream out(*o.emit_dir / smt_file_name(p.name, o.encoding, o.k));
        out << smt2;
        if (!out) throw std::runtime_error("cannot write to " + o.emit_dir->string());
      });
    }
    const SolverVerdict v = in_stage("solve", [&] {
      if (o.solvers.empty()) throw std::runtime_error("no solver configured");
      std::vector<SolverSpec> specs;
      for (const auto& s : o.solvers) specs.push_back(solver_spec(s));
      return specs.size() > 1 ? run_portfolio(smt2, specs, o.timeout) : run_solver(smt2, specs.front(), o.timeout);
    });
    rec.solver = v.solver;
    rec.solver_time = v.seconds;
    rec.verdict = to_string(v.kind);
    if (v.kind == VerdictKind::Error) {
      rec.stage = "solve";
      rec.message = v.message;
    }
    if (v.kind == VerdictKind::Sat) {
      try {
        Expr body = parse_model(v.model, sys.sig);
        if (auto qf = smt.eliminate_quantifiers(body)) body = *qf;
        auto inv = reconstruct_ashcroft(body, sys.sig);
        rec.invariant = inv.str();
        auto res = validate_invariant(inv, sys, smt);
        rec.validation = res.status == ValidationResult::Valid     ? "valid"
                         : res.status == ValidationResult::Invalid ? "invalid"
                                                                   : "inconclusive";
        if (!res.ok()) {
          rec.stage = "validate";
          rec.message = res.message;
        }
      } catch (const std::exception& e) {
        rec.validation = "inconclusive";
        rec.stage = "validate";
        rec.message = std::string("model: ") + e.what();
      }
    }
  } catch (const StageError& e) {
    rec.verdict = "error";
    rec.stage = e.stage;
    rec.message = e.what();
  }
  rec.wall_time = since(t0);
  return rec;
}

RunRecord run_check(const std::filesystem::path& file, const CheckOptions& o) {
  try {
    return run_check(load_program(file), o);
  } catch (const std::exception& e) {
    RunRecord rec;
    rec.program = file.stem().string();
    rec.encoding = to_string(o.encoding);
    rec.k = o.k;
    rec.order = o.order;
    rec.solver = join(o.solvers, "+");
    rec.stage = "parse";
    rec.message = e.what();
    return rec;
  }
}

std::vector<BenchEntry> load_corpus(const std::filesystem::path& dir) {
  std::vector<BenchEntry> out;
  if (!std::filesystem::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
  const auto manifest = dir / "manifest.json";
  if (std::filesystem::exists(manifest)) {
    auto j = json::parse(read_file(manifest));
    for (const auto& b : j.at("benchmarks")) {
      BenchEntry e;
      e.name = b.at("name").get<std::string>();
      e.file = dir / b.value("file", e.name + ".pprog");
      if (b.contains("k")) e.widths = b.at("k").get<std::vector<std::size_t>>();
      e.order = b.value("order", "sequential");
      e.reconstructed = b.value("reconstructed", false);
      e.contextual = b.value("contextual", false);
      out.push_back(std::move(e));
    }
    return out;
  }
  for (const auto& f : std::filesystem::directory_iterator(dir)) {
    if (f.path().extension() == ".pprog") out.push_back({f.path().stem().string(), f.path(), {2}, "sequential", false, false});
  }
  std::sort(out.begin(), out.end(), [](const BenchEntry& a, const BenchEntry& b) { return a.name < b.name; });
  return out;
}

std::vector<RunRecord> run_bench(const std::filesystem::path& corpus, const BenchOptions& o, std::ostream& log) {
  using Key = std::tuple<std::string, std::string, std::size_t, std::string>;
  auto key_of = [](const RunRecord& r) { return Key{r.program, r.encoding, r.k, r.order}; };

  std::map<Key, RunRecord> done;
  if (!o.records.empty() && !o.force && std::filesystem::exists(o.records)) {
    std::ifstream in(o.records);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      try {
        auto r = RunRecord::from_json(line);
        done[key_of(r)] = r;
      } catch (const std::exception&) {
        log << "skipping unreadable record line\n";
      }
    }
  }

  struct Job {
    BenchEntry entry;
    CheckOptions opts;
  };
  std::vector<Job> jobs;
  std::vector<RunRecord> results;
  for (const auto& e : load_corpus(corpus)) {
    if (!o.only.empty() && std::find(o.only.begin(), o.only.end(), e.name) == o.only.end()) continue;
    for (auto k : o.widths.value_or(e.widths)) {
      for (auto enc : o.encodings) {
        CheckOptions c = o.base;
        c.encoding = enc;
        c.k = k;
        c.order = o.order.value_or(e.order);
        c.contextual = c.contextual || e.contextual;
        Key key{e.name, to_string(enc), k, c.order};
        if (auto it = done.find(key); it != done.end()) {
          results.push_back(it->second);
          log << "[skip] " << e.name << " " << to_string(enc) << " k=" << k << " (recorded)\n";
          continue;
        }
        jobs.push_back({e, c});
      }
    }
  }

  std::mutex mu;
  std::ofstream sink;
  if (!o.records.empty()) {
    if (o.records.has_parent_path()) std::filesystem::create_directories(o.records.parent_path());
    sink.open(o.records, std::ios::app);
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      auto rec = run_check(jobs[i].entry.file, jobs[i].opts);
      rec.program = jobs[i].entry.name;
      std::lock_guard<std::mutex> lock(mu);
      if (sink.is_open()) sink << rec.to_json() << "\n" << std::flush;
      log << "[" << rec.status() << "] " << rec.program << " " << rec.encoding << " k=" << rec.k << " "
          << std::fixed << std::setprecision(1) << rec.wall_time << "s"
          << (rec.message.empty() ? "" : " (" + rec.stage + ": " + rec.message.substr(0, 120) + ")") << "\n";
      results.push_back(std::move(rec));
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::max<std::size_t>(1, o.jobs); ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return results;
}

std::string bench_table(const std::vector<RunRecord>& records) {
  const std::vector<std::string> encs{"plain", "symbolic", "explicit"};
  std::map<std::pair<std::string, std::size_t>, std::map<std::string, const RunRecord*>> rows;
  for (const auto& r : records) rows[{r.program, r.k}][r.encoding] = &r;
  std::size_t w = 7;
  for (const auto& [key, m] : rows) w = std::max(w, key.first.size());
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(w)) << "program" << "  k ";
  for (const auto& e : encs) os << " | " << std::setw(8) << e << std::right << std::setw(8) << "time" << std::left;
  os << "\n";
  for (const auto& [key, m] : rows) {
    os << std::left << std::setw(static_cast<int>(w)) << key.first << std::right << std::setw(3) << key.second << " ";
    for (const auto& e : encs) {
      auto it = m.find(e);
      if (it == m.end()) {
        os << " | " << std::left << std::setw(8) << "" << std::right << std::setw(8) << "";
        continue;
      }
      const RunRecord& r = *it->second;
      std::ostringstream t;
      if (r.verdict == "sat" || r.verdict == "unsat") t << std::fixed << std::setprecision(1) << r.wall_time;
      else t << "--";
      os << " | " << std::left << std::setw(8) << r.status() << std::right << std::setw(8) << t.str();
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace parared
