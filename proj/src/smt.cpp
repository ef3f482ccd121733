#include "parared/smt.hpp"

#include <cstdlib>
#include <map>
#include <sstream>

#include "parared/process.hpp"
#include "parared/sexpr.hpp"

namespace parared {

std::string to_string(Validity v) {
  switch (v) {
    case Validity::Valid: return "valid";
    case Validity::Invalid: return "invalid";
    case Validity::Unknown: return "unknown";
  }
  return "?";
}

std::string default_z3() {
  if (const char* env = std::getenv("PARARED_Z3"); env && *env) return env;
  return "z3";
}

SmtChecker::SmtChecker(SmtOptions opts) : opts_(std::move(opts)) {
  if (opts_.z3.empty()) opts_.z3 = default_z3();
}

std::string declare_free_vars(const std::vector<Expr>& fs) {
  std::map<std::string, Sort> decls;
  for (const auto& f : fs) {
    collect(f, [](const Expr& x) {
      if (x.op() == Op::App) throw TypeError("uninterpreted application '" + x.name() + "' in SMT query");
    });
    for (const auto& [key, sort] : free_vars(f)) {
      auto name = smt_var_name(key.first, key.second);
      auto [it, fresh] = decls.emplace(name, sort);
      if (!fresh && it->second != sort) throw TypeError("variable '" + name + "' used at two sorts");
    }
  }
  std::ostringstream os;
  for (const auto& [name, sort] : decls) {
    os << "(declare-const " << smt_symbol(name) << ' ' << smt_sort(sort) << ")\n";
  }
  return os.str();
}

std::string SmtChecker::script(const std::vector<Expr>& fs) const {
  std::ostringstream os;
  os << "(set-option :print-success false)\n";
  os << "(set-option :timeout " << static_cast<long>(opts_.query_timeout * 1000) << ")\n";
  for (std::size_t i = 0; i < fs.size(); ++i) {
    os << "(push 1)\n" << declare_free_vars({fs[i]});
    os << "(assert (not " << to_smtlib(fs[i]) << "))\n";
    os << "(echo \"@q" << i << "\")\n(check-sat)\n(pop 1)\n";
  }
  return os.str();
}

namespace {

bool has_quantifier(const Expr& f) {
  bool found = false;
  collect(f, [&](const Expr& e) { found = found || e.op() == Op::Exists || e.op() == Op::Forall; });
  return found;
}

}  // namespace

std::optional<Expr> SmtChecker::eliminate_quantifiers(const Expr& f) const {
  if (!has_quantifier(f)) return f;
  std::ostringstream os;
  os << declare_free_vars({f}) << "(assert " << to_smtlib(f) << ")\n(apply (then qe simplify))\n";
  TempFile file(".smt2", os.str());
  auto res = run_process({opts_.z3, "-smt2", file.path().string()}, std::chrono::duration<double>(opts_.query_timeout));
  if (res.timed_out || res.exit_code != 0) return std::nullopt;
  std::map<std::string, Expr> vars;
  for (const auto& [key, sort] : free_vars(f)) vars.emplace(smt_var_name(key.first, key.second), var(key.first, sort, key.second));
  try {
    for (const auto& top : parse_sexprs(res.output)) {
      if (!top.is_list || top.items.empty() || !top.items[0].is_atom("goals")) continue;
      if (top.items.size() != 2) return std::nullopt;  // split into several goals
      const auto& goal = top.items[1];
      std::vector<Expr> parts;
      for (std::size_t i = 1; i < goal.items.size(); ++i) {
        const auto& it = goal.items[i];
        if (!it.is_list && !it.atom.empty() && it.atom[0] == ':') break;
        parts.push_back(term_to_expr(it, vars));
      }
      Expr out = mk_and(std::move(parts));
      if (has_quantifier(out)) return std::nullopt;
      return out;
    }
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

Validity SmtChecker::valid(const Expr& f) const { return valid_batch({f}).front(); }

std::vector<Validity> SmtChecker::valid_batch(const std::vector<Expr>& fs) const {
  std::vector<Validity> out(fs.size(), Validity::Unknown);
  if (fs.empty()) return out;
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (fs[i].is_true()) {
      out[i] = Validity::Valid;
    } else if (fs[i].is_false()) {
      out[i] = Validity::Invalid;
    } else {
      pending.push_back(i);
    }
  }
  if (pending.empty()) return out;
  std::vector<Expr> qs;
  for (auto i : pending) qs.push_back(fs[i]);

  TempFile file(".smt2", script(qs));
  const double budget = opts_.query_timeout * static_cast<double>(qs.size()) + 10.0;
  auto res = run_process({opts_.z3, "-smt2", file.path().string()}, std::chrono::duration<double>(budget));

  std::istringstream in(res.output);
  std::string line;
  long current = -1;
  while (std::getline(in, line)) {
    if (line.rfind("@q", 0) == 0) {
      current = std::stol(line.substr(2));
      continue;
    }
    if (current < 0 || static_cast<std::size_t>(current) >= qs.size()) continue;
    auto& slot = out[pending[static_cast<std::size_t>(current)]];
    if (line == "unsat") slot = Validity::Valid;
    else if (line == "sat") slot = Validity::Invalid;
  }
  return out;
}

}  // namespace parared
