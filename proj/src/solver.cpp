#include "parared/solver.hpp"

#include <cstdlib>
#include <mutex>
#include <regex>
#include <sstream>
#include <thread>

#include "parared/process.hpp"
#include "parared/sexpr.hpp"

namespace parared {

std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Sat: return "sat";
    case VerdictKind::Unsat: return "unsat";
    case VerdictKind::Unknown: return "unknown";
    case VerdictKind::Timeout: return "timeout";
    case VerdictKind::Error: return "error";
  }
  return "?";
}

namespace {

std::string env_or(const char* var, const char* fallback) {
  if (const char* v = std::getenv(var); v && *v) return v;
  return fallback;
}

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

}  // namespace

SolverSpec solver_spec(const std::string& name) {
  if (name == "z3") return {"z3", {default_z3(), "-smt2", "-T:{timeout}", "{file}"}, true};
  if (name == "eldarica") return {"eldarica", {env_or("PARARED_ELDARICA", "eld"), "-ssol", "-t:{timeout}", "{file}"}, false};
  if (name == "golem") return {"golem", {env_or("PARARED_GOLEM", "golem"), "--print-witness", "{file}"}, false};
  auto words = split_words(name);
  if (words.empty()) throw std::invalid_argument("empty solver command");
  return {words.front(), words, false};
}

bool solver_available(const SolverSpec& s) { return !s.argv.empty() && find_executable(s.argv.front()).has_value(); }

SolverVerdict run_solver(const std::string& smt2, const SolverSpec& solver, double timeout_s,
                         const std::atomic<bool>* cancel) {
  SolverVerdict v;
  v.solver = solver.name;
  std::string text = smt2;
  if (solver.append_get_model) text += "(get-model)\n";
  TempFile file(".smt2", text);

  std::vector<std::string> argv;
  bool has_file = false;
  const std::string secs = std::to_string(static_cast<long>(timeout_s < 1 ? 1 : timeout_s));
  for (auto a : solver.argv) {
    for (auto [key, val] : {std::pair<std::string, std::string>{"{file}", file.path().string()}, {"{timeout}", secs}}) {
      if (auto pos = a.find(key); pos != std::string::npos) {
        a.replace(pos, key.size(), val);
        if (key == "{file}") has_file = true;
      }
    }
    argv.push_back(a);
  }
  if (!has_file) argv.push_back(file.path().string());

  ProcessResult res;
  try {
    // grace period so that solvers honouring their own limit can report it
    res = run_process(argv, std::chrono::duration<double>(timeout_s + 2.0), cancel);
  } catch (const ProcessError& e) {
    v.kind = VerdictKind::Error;
    v.message = e.what();
    return v;
  }
  v.seconds = res.seconds;
  if (res.timed_out) {
    v.kind = VerdictKind::Timeout;
    return v;
  }
  if (res.cancelled) {
    v.kind = VerdictKind::Unknown;
    v.message = "cancelled";
    return v;
  }
  std::istringstream in(res.output);
  std::string line;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    line = line.substr(b, line.find_last_not_of(" \t\r") - b + 1);
    auto is = [&](const std::string& re) { return std::regex_match(line, std::regex(re)); };
    if (is(solver.sat_re)) {
      v.kind = VerdictKind::Sat;
      std::stringstream rest;
      rest << in.rdbuf();
      v.model = rest.str();
      return v;
    }
    if (is(solver.unsat_re)) {
      v.kind = VerdictKind::Unsat;
      return v;
    }
    if (is(solver.unknown_re)) {
      v.kind = VerdictKind::Unknown;
      return v;
    }
    if (is(solver.timeout_re)) {
      v.kind = VerdictKind::Timeout;
      return v;
    }
    break;
  }
  v.kind = VerdictKind::Error;
  v.message = "no verdict (exit " + std::to_string(res.exit_code) + "): " + res.output.substr(0, 400);
  return v;
}

SolverVerdict run_portfolio(const std::string& smt2, const std::vector<SolverSpec>& solvers, double timeout_s) {
  if (solvers.empty()) throw std::invalid_argument("portfolio without solvers");
  if (solvers.size() == 1) return run_solver(smt2, solvers.front(), timeout_s);
  std::atomic<bool> stop{false};
  std::mutex mu;
  std::optional<SolverVerdict> winner;
  std::vector<SolverVerdict> all(solvers.size());
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < solvers.size(); ++i) {
    pool.emplace_back([&, i] {
      auto v = run_solver(smt2, solvers[i], timeout_s, &stop);
      std::lock_guard<std::mutex> lock(mu);
      all[i] = v;
      if (!winner && (v.kind == VerdictKind::Sat || v.kind == VerdictKind::Unsat)) {
        winner = v;
        stop = true;
      }
    });
  }
  for (auto& t : pool) t.join();
  if (winner) return *winner;
  // no definitive answer: prefer timeout/unknown over errors
  for (const auto& v : all) {
    if (v.kind == VerdictKind::Timeout || v.kind == VerdictKind::Unknown) return v;
  }
  return all.front();
}

Expr parse_model(const std::string& model, const InvSignature& sig) {
  auto funs = parse_model_defs(model);
  auto it = funs.find(kInv);
  if (it == funs.end()) throw SExprError("model has no definition of " + std::string(kInv));
  const FunDef& f = it->second;
  if (f.formals.size() != sig.params.size()) {
    throw SExprError("Inv defined with " + std::to_string(f.formals.size()) + " parameters, expected " +
                     std::to_string(sig.params.size()));
  }
  std::map<std::string, Expr> rename;
  for (std::size_t i = 0; i < f.formals.size(); ++i) {
    if (f.formals[i].sort != sig.params[i].sort) {
      throw SExprError("parameter " + std::to_string(i) + " of Inv has sort " + to_string(f.formals[i].sort));
    }
    rename.emplace(f.formals[i].name, var(sig.params[i]));
  }
  Expr body = substitute(f.body, rename);
  std::set<std::string> allowed;
  for (const auto& p : sig.params) allowed.insert(p.name);
  for (const auto& n : free_var_names(body)) {
    if (!allowed.count(n)) throw SExprError("model refers to undeclared symbol '" + n + "'");
  }
  return body;
}

AshcroftInvariant reconstruct_ashcroft(const Expr& body, const InvSignature& sig) {
  if (!body.valid()) throw std::invalid_argument("empty invariant body");
  std::set<std::string> allowed;
  for (const auto& p : sig.params) allowed.insert(p.name);
  for (const auto& n : free_var_names(body)) {
    if (!allowed.count(n)) throw std::invalid_argument("invariant mentions '" + n + "', not an Inv parameter");
  }
  return {sig.k, sig.encoding == Encoding::Explicit, body, sig};
}

std::string AshcroftInvariant::str() const {
  // x.r -> x[t_r]
  Expr shown = substitute(body, [&](const Expr& v) -> std::optional<Expr> {
    auto dot = v.name().rfind('.');
    if (dot == std::string::npos) return std::nullopt;
    return var(v.name().substr(0, dot) + "[t" + v.name().substr(dot + 1) + "]", v.sort());
  });
  std::string threads;
  for (std::size_t r = 1; r <= k; ++r) threads += (r > 1 ? ", t" : "t") + std::to_string(r);
  std::string guard;
  if (k > 1) {
    std::vector<std::string> parts;
    for (std::size_t a = 1; a <= k; ++a) {
      if (id_ordered) {
        if (a < k) parts.push_back("id[t" + std::to_string(a) + "] < id[t" + std::to_string(a + 1) + "]");
      } else {
        for (std::size_t b = a + 1; b <= k; ++b) parts.push_back("t" + std::to_string(a) + " != t" + std::to_string(b));
      }
    }
    for (std::size_t i = 0; i < parts.size(); ++i) guard += (i ? " && " : "") + parts[i];
    guard += " ==> ";
  }
  return "forall " + threads + " :: " + guard + "(" + to_dsl(shown) + ")";
}

ValidationResult validate_invariant(const Expr& body, const CHCSystem& system, const SmtChecker& smt) {
  std::vector<Expr> obligations;
  for (std::size_t i = 0; i < system.clauses.size(); ++i) obligations.push_back(clause_obligation(system, i, body));
  auto v = smt.valid_batch(obligations);
  ValidationResult res;
  res.status = ValidationResult::Valid;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& cl = system.clauses[i];
    const std::string what = cl.kind + (cl.note.empty() ? "" : " (" + cl.note + ")");
    if (v[i] == Validity::Invalid) return {ValidationResult::Invalid, i, "clause " + std::to_string(i) + " " + what + " fails"};
    if (v[i] == Validity::Unknown && res.status == ValidationResult::Valid) {
      res = {ValidationResult::Inconclusive, i, "clause " + std::to_string(i) + " " + what + " inconclusive"};
    }
  }
  return res;
}

ValidationResult validate_invariant(const AshcroftInvariant& inv, const CHCSystem& system, const SmtChecker& smt) {
  if (inv.sig.params != system.sig.params) {
    return {ValidationResult::Invalid, std::nullopt, "invariant signature does not match the system"};
  }
  return validate_invariant(inv.body, system, smt);
}

}  // namespace parared
